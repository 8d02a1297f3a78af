#include "rainbow_net/experiments.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "rainbow_net/errors.hpp"
#include "rainbow_net/pet_codec.hpp"
#include "rainbow_net/progressive_source.hpp"

namespace rnf {

std::vector<Fig1Row> fig1_sweep(std::span<const double> rates) {
    std::vector<Fig1Row> rows;
    for (double c : rates) {
        const OzarowOptimum opt = optimize_fig1_ozarow(c);
        rows.push_back({c, opt.separate, opt.average, opt.side, opt.joint, opt.average < opt.separate});
    }
    std::sort(rows.begin(), rows.end(), [](const Fig1Row& a, const Fig1Row& b) { return a.rate < b.rate; });
    return rows;
}

SearchResult best_effort_search(const std::shared_ptr<const Network>& net, const SearchConfig& cfg) {
    if (cfg.mode == SearchMode::greedy) return greedy_search(net, cfg);
    try {
        return exact_search(net, cfg);
    } catch (const InstanceTooLarge&) {
        return greedy_search(net, cfg);
    }
}

namespace {

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

double optimum(const DiscreteRnf& flow, const WeightVector& p, int k, const Rational& r) {
    return optimize_pet_profile(rainbow_flow_vector(flow), p, k, r, DistortionModel::gaussian()).objective;
}

DiscreteRnf with_colors(const DiscreteRnf& flow, int k) {
    return DiscreteRnf(flow.net_ptr(), flow.paths(), k, flow.rate());
}

}  // namespace

std::vector<PropertyResult> run_lemma_suite(const std::shared_ptr<const Network>& net, const std::string& label,
                                            const LemmaOptions& options) {
    std::vector<PropertyResult> out;
    const WeightVector p = WeightVector::uniform(net->sinks().size());
    const int k = options.color_count;
    const Rational r = options.rate;

    SearchConfig cfg;
    cfg.color_count = k;
    cfg.rate = r;
    cfg.max_path_len = options.max_path_len;
    const SearchResult base = best_effort_search(net, cfg);
    const double base_opt = optimum(base.flow, p, k, r);

    out.push_back({"admissible-search-result", label, is_admissible(base.flow), "trf=" + base.total_flow.to_string()});

    for (int extra : {1, 2}) {
        const double more = optimum(with_colors(base.flow, k + extra), p, k + extra, r);
        out.push_back({"more-descriptions K=" + std::to_string(k) + "->" + std::to_string(k + extra), label,
                       more <= base_opt + options.slack, "opt_K=" + fmt(base_opt) + " opt_K'=" + fmt(more)});
    }

    for (int factor : {2, 3}) {
        const DiscreteRnf refined = refine(base.flow, factor);
        const bool same_q = rainbow_flow_vector(refined) == rainbow_flow_vector(base.flow);
        const bool same_adm = is_admissible(refined) == is_admissible(base.flow);
        const double split = optimum(refined, p, k * factor, r / Rational(factor));
        out.push_back({"rate-splitting i=" + std::to_string(factor), label,
                       same_q && same_adm && split <= base_opt + options.slack,
                       "opt=" + fmt(base_opt) + " opt_split=" + fmt(split) + (same_q ? "" : " q-changed") +
                           (same_adm ? "" : " admissibility-changed")});
    }

    // Small-packet trend: halve r and double K; the refined previous flow is
    // always a candidate, plus a fresh greedy routing at the finer grain.
    std::vector<double> values{base_opt};
    DiscreteRnf current = base.flow;
    bool monotone = true;
    double slope = 0.0;
    for (int step = 1; step <= options.trend_steps; ++step) {
        const Rational rn = r / Rational(std::int64_t{1} << step);
        const int kn = k << step;
        DiscreteRnf refined = refine(current, 2);
        double best = optimum(refined, p, kn, rn);
        DiscreteRnf best_flow = refined;

        SearchConfig fine = cfg;
        fine.color_count = kn;
        fine.rate = rn;
        fine.mode = SearchMode::greedy;
        const SearchResult fresh = greedy_search(net, fine);
        const double fresh_opt = optimum(fresh.flow, p, kn, rn);
        if (fresh_opt < best) {
            best = fresh_opt;
            best_flow = fresh.flow;
        }
        monotone = monotone && best <= values.back() + options.slack;
        slope = std::max(slope, (values.back() - best) / rn.to_double());
        values.push_back(best);
        current = best_flow;
    }
    std::ostringstream detail;
    detail << "values=";
    for (std::size_t i = 0; i < values.size(); ++i) detail << (i ? ";" : "") << fmt(values[i]);
    detail << " fitted_c=" << fmt(slope);
    out.push_back({"small-packet-trend", label, monotone, detail.str()});
    return out;
}

PipelineResult run_pipeline(const std::shared_ptr<const Network>& net, const WeightVector& weights,
                            const PipelineOptions& options) {
    SearchConfig cfg;
    cfg.color_count = options.color_count;
    cfg.rate = options.rate;
    cfg.max_path_len = options.max_path_len;
    cfg.mode = options.mode;
    SearchResult routing = best_effort_search(net, cfg);

    const RainbowFlowVector q = rainbow_flow_vector(routing.flow);
    const PetOptimum fitted =
        optimize_pet_profile(q, weights, options.color_count, options.rate, DistortionModel::gaussian());
    PetProfile profile = PetProfile::quantize(std::span<const double>(fitted.y), options.rate, options.block_length);

    const DistortionModel model = DistortionModel::gaussian();
    const DistortionVector analytic = eval_drnf_distortion(q, profile, model);

    const double max_rate = (Rational(options.color_count) * options.rate).to_double();
    const ProgressiveSource source =
        progressive_gaussian_source(options.seed, static_cast<std::size_t>(options.block_length), max_rate);
    const std::vector<Description> descriptions = pet_encode(source.bitstream, profile);
    const GaussianBitplaneCoder coder;

    PipelineResult result{std::move(routing), profile, weighted_distortion(analytic, weights), {}};
    const Network& n = *net;
    for (std::size_t t = 0; t < n.sinks().size(); ++t) {
        const NodeId sink = n.sinks()[t];
        std::vector<Description> subset;
        for (Color c : node_spectrum(result.routing.flow, sink)) subset.push_back(descriptions[static_cast<std::size_t>(c - 1)]);
        const RecoveredPrefix prefix = pet_decode(subset);
        if (!std::equal(prefix.bytes.begin(), prefix.bytes.end(), source.bitstream.begin()))
            throw std::logic_error("decoded prefix differs from the source stream");
        const auto rec = coder.decode(prefix.bytes, prefix.bits, source.samples.size(), source.planes);
        result.rows.push_back({n.node_name(sink), q.q[t], static_cast<int>(subset.size()), analytic.d[t],
                               mse(source.samples, rec)});
    }
    return result;
}

}  // namespace rnf
