#include "rainbow_net/rainbow_flow.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "json_util.hpp"
#include "rainbow_net/errors.hpp"

namespace rnf {

DiscreteRnf::DiscreteRnf(std::shared_ptr<const Network> net, std::vector<ColoredPath> paths, int color_count,
                         Rational rate)
    : net_(std::move(net)), paths_(std::move(paths)), color_count_(color_count), rate_(rate) {
    if (!net_) throw ValidationError("flow without a network");
    if (color_count_ < 1) throw ValidationError("color count K must be at least 1");
    if (rate_ <= Rational(0)) throw ValidationError("description rate must be positive");
    for (std::size_t i = 0; i < paths_.size(); ++i) {
        const ColoredPath& cp = paths_[i];
        if (cp.color < 1 || cp.color > color_count_)
            throw ValidationError("path " + std::to_string(i) + ": color " + std::to_string(cp.color) + " outside 1.." +
                                  std::to_string(color_count_));
        validate_path(*net_, cp.path);
    }
}

ContinuousRnf::ContinuousRnf(std::shared_ptr<const Network> net, std::vector<SpectralPath> paths)
    : net_(std::move(net)), paths_(std::move(paths)) {
    if (!net_) throw ValidationError("flow without a network");
    for (std::size_t i = 0; i < paths_.size(); ++i) {
        const SpectralPath& sp = paths_[i];
        if (!sp.spectrum.empty() && sp.spectrum.intervals().front().lo < Rational(0))
            throw ValidationError("path " + std::to_string(i) + ": spectrum extends below zero");
        validate_path(*net_, sp.path);
    }
}

namespace {

bool path_has_edge(const FlowPath& p, EdgeId e) {
    return std::find(p.edges.begin(), p.edges.end(), e) != p.edges.end();
}

bool path_has_node(const Network& net, const FlowPath& p, NodeId v) {
    return std::any_of(p.edges.begin(), p.edges.end(),
                       [&](EdgeId e) { return net.edge(e).tail == v || net.edge(e).head == v; });
}

void check_edge(const Network& net, EdgeId e) {
    if (e >= net.edge_count()) throw ValidationError("unknown edge index " + std::to_string(e));
}

void check_node(const Network& net, NodeId v) {
    if (v >= net.node_count()) throw ValidationError("unknown node index " + std::to_string(v));
}

void merge(ColorSet& acc, const ColoredPath& p) { acc.insert(p.color); }
void merge(IntervalSet& acc, const SpectralPath& p) { acc |= p.spectrum; }

template <class Spectrum, class Flow, class Pred>
Spectrum collect(const Flow& rnf, Pred contains) {
    Spectrum acc{};
    for (const auto& p : rnf.paths())
        if (contains(p.path)) merge(acc, p);
    return acc;
}

template <class Flow>
AdmissibilityReport admissibility(const Flow& rnf, CapacityRule rule) {
    AdmissibilityReport report;
    const Network& net = rnf.net();
    for (EdgeId e = 0; e < net.edge_count(); ++e) {
        const Rational load = spectrum_measure(rnf, edge_spectrum(rnf, e));
        const Rational cap = net.edge(e).capacity;
        const bool ok = rule == CapacityRule::strict ? load < cap : load <= cap;
        // An unused edge cannot violate anything; strict "<" would otherwise
        // reject every zero-capacity edge.
        const bool fine = ok || load.is_zero();
        report.edges.push_back({e, load, cap, fine});
        report.admissible = report.admissible && fine;
    }
    return report;
}

template <class Flow>
RainbowFlowVector flow_vector(const Flow& rnf) {
    RainbowFlowVector v;
    for (NodeId t : rnf.net().sinks()) v.q.push_back(spectrum_measure(rnf, node_spectrum(rnf, t)));
    return v;
}

Rational sum(const RainbowFlowVector& v) {
    Rational total;
    for (const Rational& q : v.q) total += q;
    return total;
}

}  // namespace

ColorSet edge_spectrum(const DiscreteRnf& rnf, EdgeId e) {
    check_edge(rnf.net(), e);
    return collect<ColorSet>(rnf, [&](const FlowPath& p) { return path_has_edge(p, e); });
}

IntervalSet edge_spectrum(const ContinuousRnf& rnf, EdgeId e) {
    check_edge(rnf.net(), e);
    return collect<IntervalSet>(rnf, [&](const FlowPath& p) { return path_has_edge(p, e); });
}

ColorSet node_spectrum(const DiscreteRnf& rnf, NodeId v) {
    check_node(rnf.net(), v);
    return collect<ColorSet>(rnf, [&](const FlowPath& p) { return path_has_node(rnf.net(), p, v); });
}

IntervalSet node_spectrum(const ContinuousRnf& rnf, NodeId v) {
    check_node(rnf.net(), v);
    return collect<IntervalSet>(rnf, [&](const FlowPath& p) { return path_has_node(rnf.net(), p, v); });
}

Rational spectrum_measure(const DiscreteRnf& rnf, const ColorSet& colors) {
    return rnf.rate() * Rational(static_cast<std::int64_t>(colors.size()));
}

AdmissibilityReport check_admissible(const DiscreteRnf& rnf, CapacityRule rule) { return admissibility(rnf, rule); }
AdmissibilityReport check_admissible(const ContinuousRnf& rnf, CapacityRule rule) { return admissibility(rnf, rule); }

RainbowFlowVector rainbow_flow_vector(const DiscreteRnf& rnf) { return flow_vector(rnf); }
RainbowFlowVector rainbow_flow_vector(const ContinuousRnf& rnf) { return flow_vector(rnf); }

Rational total_rainbow_flow(const DiscreteRnf& rnf) { return sum(rainbow_flow_vector(rnf)); }
Rational total_rainbow_flow(const ContinuousRnf& rnf) { return sum(rainbow_flow_vector(rnf)); }

std::vector<int> descriptions_per_sink(const DiscreteRnf& rnf) {
    std::vector<int> out;
    for (NodeId t : rnf.net().sinks()) out.push_back(static_cast<int>(node_spectrum(rnf, t).size()));
    return out;
}

DiscreteRnf refine(const DiscreteRnf& rnf, int factor) {
    if (factor < 1) throw std::invalid_argument("refinement factor must be at least 1");
    std::vector<ColoredPath> paths;
    paths.reserve(rnf.paths().size() * static_cast<std::size_t>(factor));
    for (const ColoredPath& cp : rnf.paths())
        for (int j = 1; j <= factor; ++j) paths.push_back({cp.path, (cp.color - 1) * factor + j});
    return DiscreteRnf(rnf.net_ptr(), std::move(paths), rnf.color_count() * factor, rnf.rate() / Rational(factor));
}

AnyRnf load_flow(std::shared_ptr<const Network> net, std::string_view text) {
    using detail::json;
    if (!net) throw ValidationError("flow without a network");
    const json doc = detail::parse_document(text, "flow");
    const json& jpaths = detail::array_field(doc, "paths", "flow");

    auto read_edges = [&](const json& jp, const std::string& ctx) {
        FlowPath path;
        const json& je = detail::array_field(jp, "edges", ctx);
        for (std::size_t k = 0; k < je.size(); ++k)
            path.edges.push_back(net->edge_index(detail::as_name(je[k], ctx + ".edges[" + std::to_string(k) + "]")));
        return path;
    };

    bool continuous = false;
    if (auto kind = doc.find("kind"); kind != doc.end() && kind->is_string())
        continuous = kind->get<std::string>() == "continuous";
    else if (!jpaths.empty() && jpaths[0].is_object())
        continuous = jpaths[0].contains("intervals");

    if (continuous) {
        std::vector<SpectralPath> paths;
        for (std::size_t i = 0; i < jpaths.size(); ++i) {
            const std::string ctx = "paths[" + std::to_string(i) + "]";
            FlowPath path = read_edges(jpaths[i], ctx);
            std::vector<Interval> pieces;
            const json& ji = detail::array_field(jpaths[i], "intervals", ctx);
            for (std::size_t k = 0; k < ji.size(); ++k) {
                const std::string ictx = ctx + ".intervals[" + std::to_string(k) + "]";
                if (!ji[k].is_array() || ji[k].size() != 2) throw ParseError(ictx + ": expected [lo, hi]");
                pieces.push_back({detail::as_rational(ji[k][0], ictx), detail::as_rational(ji[k][1], ictx)});
            }
            try {
                paths.push_back({std::move(path), IntervalSet(std::move(pieces))});
            } catch (const std::invalid_argument& e) {
                throw ValidationError(ctx + ": " + e.what());
            }
        }
        return ContinuousRnf(std::move(net), std::move(paths));
    }

    const Rational rate = detail::as_rational(detail::field(doc, "rate", "flow"), "flow.rate");
    const auto k = detail::as_int(detail::field(doc, "K", "flow"), "flow.K");
    std::vector<ColoredPath> paths;
    for (std::size_t i = 0; i < jpaths.size(); ++i) {
        const std::string ctx = "paths[" + std::to_string(i) + "]";
        FlowPath path = read_edges(jpaths[i], ctx);
        const auto color = detail::as_int(detail::field(jpaths[i], "color", ctx), ctx + ".color");
        paths.push_back({std::move(path), static_cast<Color>(color)});
    }
    return DiscreteRnf(std::move(net), std::move(paths), static_cast<int>(k), rate);
}

AnyRnf load_flow_file(std::shared_ptr<const Network> net, const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open flow file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return load_flow(std::move(net), buf.str());
}

namespace {

detail::json edge_ids(const Network& net, const FlowPath& path) {
    detail::json ids = detail::json::array();
    for (EdgeId e : path.edges) ids.push_back(net.edge(e).id);
    return ids;
}

}  // namespace

std::string dump_flow(const DiscreteRnf& rnf) {
    detail::json doc;
    doc["kind"] = "discrete";
    doc["rate"] = rnf.rate().to_string();
    doc["K"] = rnf.color_count();
    doc["paths"] = detail::json::array();
    for (const ColoredPath& cp : rnf.paths())
        doc["paths"].push_back({{"edges", edge_ids(rnf.net(), cp.path)}, {"color", cp.color}});
    return doc.dump(2);
}

std::string dump_flow(const ContinuousRnf& rnf) {
    detail::json doc;
    doc["kind"] = "continuous";
    doc["paths"] = detail::json::array();
    for (const SpectralPath& sp : rnf.paths()) {
        detail::json intervals = detail::json::array();
        for (const Interval& iv : sp.spectrum.intervals())
            intervals.push_back({iv.lo.to_string(), iv.hi.to_string()});
        doc["paths"].push_back({{"edges", edge_ids(rnf.net(), sp.path)}, {"intervals", intervals}});
    }
    return doc.dump(2);
}

}  // namespace rnf
