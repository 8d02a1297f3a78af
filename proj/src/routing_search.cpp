#include "rainbow_net/routing_search.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

#include "rainbow_net/errors.hpp"

namespace rnf {

void SearchConfig::validate(const Network& net) const {
    if (color_count < 1) throw std::invalid_argument("K must be at least 1");
    if (rate <= Rational(0)) throw std::invalid_argument("rate must be positive");
    if (max_path_len < 1) throw std::invalid_argument("max path length must be at least 1");
    if (objective == SearchObjective::weighted_distortion) {
        if (weights.p.size() != net.sinks().size()) throw std::invalid_argument("one weight per sink required");
        weights.validate();
        if (profile.size() != static_cast<std::size_t>(color_count))
            throw std::invalid_argument("weighted objective needs a profile of length K");
        double sum = 0.0;
        for (double v : profile) {
            if (!(v >= 0.0)) throw std::invalid_argument("profile entries must be nonnegative");
            sum += v;
        }
        if (std::abs(sum - 1.0) > 1e-9) throw std::invalid_argument("profile must sum to 1");
    }
}

namespace {

/// Fixed-width edge bitset.
struct EdgeMask {
    std::vector<std::uint64_t> words;

    explicit EdgeMask(std::size_t edges = 0) : words((edges + 63) / 64, 0) {}
    void set(EdgeId e) { words[e / 64] |= std::uint64_t{1} << (e % 64); }
    bool test(EdgeId e) const { return (words[e / 64] >> (e % 64)) & 1u; }
    EdgeMask operator|(const EdgeMask& o) const {
        EdgeMask m = *this;
        for (std::size_t i = 0; i < words.size(); ++i) m.words[i] |= o.words[i];
        return m;
    }
    bool subset_of(const EdgeMask& o) const {
        for (std::size_t i = 0; i < words.size(); ++i)
            if (words[i] & ~o.words[i]) return false;
        return true;
    }
    friend auto operator<=>(const EdgeMask&, const EdgeMask&) = default;
};

/// Objective keyed so that larger is always better. Total rainbow flow is
/// r times the summed per-sink color counts, so the integer sum orders it
/// exactly; the weighted objective uses -p.d.
class Scorer {
public:
    explicit Scorer(const SearchConfig& cfg) : cfg_(cfg) {
        if (cfg.objective == SearchObjective::weighted_distortion) {
            const double r = cfg.rate.to_double();
            double depth = 0.0;
            by_count_.push_back(cfg.model(0.0));
            for (int l = 1; l <= cfg.color_count; ++l) {
                depth += l * cfg.profile[static_cast<std::size_t>(l - 1)];
                by_count_.push_back(cfg.model(r * depth));
            }
        }
    }

    bool trf() const { return cfg_.objective == SearchObjective::total_rainbow_flow; }

    double key(const std::vector<int>& counts) const {
        double total = 0.0;
        if (trf()) {
            for (int c : counts) total += c;
            return total;
        }
        for (std::size_t t = 0; t < counts.size(); ++t) total += cfg_.weights.p[t] * by_count_[static_cast<std::size_t>(counts[t])];
        return -total;
    }

    /// Best key reachable when `remaining` more colors can each reach up to
    /// `max_cover` sinks.
    double bound(const std::vector<int>& counts, int remaining, std::size_t max_cover) const {
        if (trf()) return key(counts) + static_cast<double>(remaining) * static_cast<double>(max_cover);
        double total = 0.0;
        for (std::size_t t = 0; t < counts.size(); ++t) {
            const int c = std::min(cfg_.color_count, counts[t] + remaining);
            total += cfg_.weights.p[t] * by_count_[static_cast<std::size_t>(c)];
        }
        return -total;
    }

    /// Key change when sinks in `fresh` each gain one color.
    double gain(const std::vector<int>& counts, const std::vector<std::size_t>& fresh) const {
        if (trf()) return static_cast<double>(fresh.size());
        double g = 0.0;
        for (std::size_t t : fresh) {
            const auto c = static_cast<std::size_t>(counts[t]);
            g += cfg_.weights.p[t] * (by_count_[c] - by_count_[c + 1]);
        }
        return g;
    }

private:
    const SearchConfig& cfg_;
    std::vector<double> by_count_;
};

bool fits(const SearchConfig& cfg, const Rational& capacity, int colors) {
    const Rational load = cfg.rate * Rational(colors);
    return cfg.rule == CapacityRule::strict ? load < capacity : load <= capacity;
}

struct PathInfo {
    std::size_t index;  // into the enumerated universe
    EdgeMask edges;
    std::vector<std::size_t> sinks;  // sink positions touched
};

/// Paths that can carry one color on their own, with their sink coverage.
std::vector<PathInfo> usable_paths(const Network& net, const std::vector<FlowPath>& universe, const SearchConfig& cfg) {
    std::vector<PathInfo> out;
    for (std::size_t i = 0; i < universe.size(); ++i) {
        const FlowPath& p = universe[i];
        if (!std::all_of(p.edges.begin(), p.edges.end(), [&](EdgeId e) { return fits(cfg, net.edge(e).capacity, 1); }))
            continue;
        PathInfo info{i, EdgeMask(net.edge_count()), {}};
        for (EdgeId e : p.edges) info.edges.set(e);
        for (NodeId v : path_nodes(net, p))
            if (auto pos = net.sink_position(v)) info.sinks.push_back(*pos);
        std::sort(info.sinks.begin(), info.sinks.end());
        info.sinks.erase(std::unique(info.sinks.begin(), info.sinks.end()), info.sinks.end());
        out.push_back(std::move(info));
    }
    return out;
}

/// Edge set one color could occupy: a union of usable paths.
struct ColorLayer {
    EdgeMask mask;
    std::vector<EdgeId> edges;
    std::vector<std::size_t> sinks;
    std::vector<std::size_t> paths;  // indices into the path universe
};

std::vector<std::size_t> sinks_of(const Network& net, const EdgeMask& mask) {
    std::vector<bool> hit(net.sinks().size(), false);
    for (EdgeId e = 0; e < net.edge_count(); ++e) {
        if (!mask.test(e)) continue;
        for (NodeId v : {net.edge(e).tail, net.edge(e).head})
            if (auto pos = net.sink_position(v)) hit[*pos] = true;
    }
    std::vector<std::size_t> out;
    for (std::size_t t = 0; t < hit.size(); ++t)
        if (hit[t]) out.push_back(t);
    return out;
}

std::vector<ColorLayer> distinct_layers(const Network& net, const std::vector<PathInfo>& paths, std::uint64_t budget) {
    std::vector<ColorLayer> layers;
    std::map<EdgeMask, std::size_t> seen;
    layers.push_back({EdgeMask(net.edge_count()), {}, {}, {}});
    seen.emplace(layers.back().mask, 0);
    for (const PathInfo& p : paths) {
        const std::size_t existing = layers.size();
        for (std::size_t i = 0; i < existing; ++i) {
            EdgeMask merged = layers[i].mask | p.edges;
            if (seen.contains(merged)) continue;
            ColorLayer layer{merged, {}, {}, layers[i].paths};
            layer.paths.push_back(p.index);
            seen.emplace(merged, layers.size());
            layers.push_back(std::move(layer));
            if (layers.size() > budget) throw InstanceTooLarge("exact search: too many distinct color layers");
        }
    }
    for (ColorLayer& layer : layers) {
        for (EdgeId e = 0; e < net.edge_count(); ++e)
            if (layer.mask.test(e)) layer.edges.push_back(e);
        layer.sinks = sinks_of(net, layer.mask);
    }
    return layers;
}

/// Drops layers that use a superset of another layer's edges without
/// reaching more sinks; the smaller layer is never worse.
std::vector<ColorLayer> prune_dominated(std::vector<ColorLayer> layers) {
    constexpr std::size_t kPruneLimit = 20000;
    if (layers.size() > kPruneLimit) return layers;
    std::vector<bool> drop(layers.size(), false);
    for (std::size_t u = 0; u < layers.size(); ++u) {
        for (std::size_t v = 0; v < layers.size() && !drop[u]; ++v) {
            if (u == v || drop[v]) continue;
            if (layers[v].mask.subset_of(layers[u].mask) &&
                std::includes(layers[v].sinks.begin(), layers[v].sinks.end(), layers[u].sinks.begin(), layers[u].sinks.end()))
                drop[u] = true;
        }
    }
    std::vector<ColorLayer> kept;
    for (std::size_t u = 0; u < layers.size(); ++u)
        if (!drop[u]) kept.push_back(std::move(layers[u]));
    return kept;
}

SearchResult finish(std::shared_ptr<const Network> net, const SearchConfig& cfg, std::vector<ColoredPath> paths,
                    std::uint64_t candidates) {
    DiscreteRnf flow(std::move(net), std::move(paths), cfg.color_count, cfg.rate);
    const Rational omega = total_rainbow_flow(flow);
    const double objective = evaluate_objective(flow, cfg);
    return {std::move(flow), omega, objective, candidates};
}

}  // namespace

double evaluate_objective(const DiscreteRnf& flow, const SearchConfig& cfg) {
    if (cfg.objective == SearchObjective::total_rainbow_flow) return total_rainbow_flow(flow).to_double();
    const auto counts = descriptions_per_sink(flow);
    return weighted_distortion(eval_drnf_distortion(counts, cfg.profile, cfg.rate.to_double(), cfg.model), cfg.weights);
}

SearchResult exact_search(std::shared_ptr<const Network> net, const SearchConfig& cfg) {
    cfg.validate(*net);
    const auto universe = enumerate_paths(*net, cfg.max_path_len);
    const auto paths = usable_paths(*net, universe, cfg);
    const auto layers = prune_dominated(distinct_layers(*net, paths, cfg.candidate_budget));
    const Scorer scorer(cfg);

    std::size_t max_cover = 0;
    for (const ColorLayer& layer : layers) max_cover = std::max(max_cover, layer.sinks.size());

    const int k = cfg.color_count;
    std::vector<int> load(net->edge_count(), 0);
    std::vector<int> counts(net->sinks().size(), 0);
    std::vector<std::size_t> choice(static_cast<std::size_t>(k), 0);
    std::vector<std::size_t> best_choice(static_cast<std::size_t>(k), 0);
    double best = scorer.key(counts);  // all colors unused
    std::uint64_t visited = 0;

    auto dfs = [&](auto&& self, int color, std::size_t first) -> void {
        if (++visited > cfg.candidate_budget) throw InstanceTooLarge("exact search: candidate budget exceeded");
        if (color == k) {
            const double key = scorer.key(counts);
            if (key > best) {
                best = key;
                best_choice = choice;
            }
            return;
        }
        if (scorer.bound(counts, k - color, max_cover) <= best) return;
        for (std::size_t u = first; u < layers.size(); ++u) {
            const ColorLayer& layer = layers[u];
            const bool ok = std::all_of(layer.edges.begin(), layer.edges.end(),
                                        [&](EdgeId e) { return fits(cfg, net->edge(e).capacity, load[e] + 1); });
            if (!ok) continue;
            for (EdgeId e : layer.edges) ++load[e];
            for (std::size_t t : layer.sinks) ++counts[t];
            choice[static_cast<std::size_t>(color)] = u;
            self(self, color + 1, u);
            for (EdgeId e : layer.edges) --load[e];
            for (std::size_t t : layer.sinks) --counts[t];
        }
    };
    dfs(dfs, 0, 0);

    std::vector<ColoredPath> flow_paths;
    for (int c = 0; c < k; ++c)
        for (std::size_t p : layers[best_choice[static_cast<std::size_t>(c)]].paths) flow_paths.push_back({universe[p], c + 1});
    return finish(std::move(net), cfg, std::move(flow_paths), visited);
}

SearchResult exact_search_by_path_coloring(std::shared_ptr<const Network> net, const SearchConfig& cfg) {
    cfg.validate(*net);
    const auto universe = enumerate_paths(*net, cfg.max_path_len);
    const auto paths = usable_paths(*net, universe, cfg);
    const Scorer scorer(cfg);
    const int k = cfg.color_count;

    // Every path may carry any subset of the colors (duplicated paths are
    // legal flows), so each path has 2^K states.
    const int states = 1 << k;
    double total = 1.0;
    for (std::size_t i = 0; i < paths.size(); ++i) total *= states;
    if (k > 20 || total > static_cast<double>(cfg.candidate_budget))
        throw InstanceTooLarge("path-coloring search: candidate budget exceeded");

    std::vector<int> assign(paths.size(), 0);  // color bitmask per path
    std::vector<int> best_assign = assign;
    double best = -std::numeric_limits<double>::infinity();
    std::uint64_t visited = 0;
    for (;;) {
        ++visited;
        std::vector<EdgeMask> masks(static_cast<std::size_t>(k), EdgeMask(net->edge_count()));
        for (std::size_t i = 0; i < paths.size(); ++i)
            for (int c = 0; c < k; ++c)
                if (assign[i] >> c & 1) masks[static_cast<std::size_t>(c)] = masks[static_cast<std::size_t>(c)] | paths[i].edges;
        bool ok = true;
        for (EdgeId e = 0; e < net->edge_count() && ok; ++e) {
            int colors = 0;
            for (const EdgeMask& m : masks) colors += m.test(e);
            ok = colors == 0 || fits(cfg, net->edge(e).capacity, colors);
        }
        if (ok) {
            std::vector<int> counts(net->sinks().size(), 0);
            for (const EdgeMask& m : masks)
                for (std::size_t t : sinks_of(*net, m)) ++counts[t];
            const double key = scorer.key(counts);
            if (key > best) {
                best = key;
                best_assign = assign;
            }
        }
        std::size_t pos = 0;
        while (pos < assign.size() && assign[pos] == states - 1) assign[pos++] = 0;
        if (pos == assign.size()) break;
        ++assign[pos];
    }

    std::vector<ColoredPath> flow_paths;
    for (int c = 0; c < k; ++c)
        for (std::size_t i = 0; i < paths.size(); ++i)
            if (best_assign[i] >> c & 1) flow_paths.push_back({universe[paths[i].index], c + 1});
    return finish(std::move(net), cfg, std::move(flow_paths), visited);
}

SearchResult greedy_search(std::shared_ptr<const Network> net, const SearchConfig& cfg) {
    cfg.validate(*net);
    const auto universe = enumerate_paths(*net, cfg.max_path_len);
    const auto paths = usable_paths(*net, universe, cfg);
    const Scorer scorer(cfg);
    const auto k = static_cast<std::size_t>(cfg.color_count);
    const std::size_t sink_count = net->sinks().size();

    std::vector<EdgeMask> masks(k, EdgeMask(net->edge_count()));
    std::vector<std::vector<bool>> covered(k, std::vector<bool>(sink_count, false));
    std::vector<int> load(net->edge_count(), 0);
    std::vector<int> counts(sink_count, 0);
    std::vector<ColoredPath> flow_paths;
    std::uint64_t evaluated = 0;

    for (bool progress = true; progress;) {
        progress = false;
        for (std::size_t c = 0; c < k; ++c) {
            double best_gain = 0.0;
            std::size_t best_path = paths.size();
            std::vector<std::size_t> best_fresh;
            for (std::size_t i = 0; i < paths.size(); ++i) {
                ++evaluated;
                const FlowPath& p = universe[paths[i].index];
                const bool ok = std::all_of(p.edges.begin(), p.edges.end(), [&](EdgeId e) {
                    return masks[c].test(e) || fits(cfg, net->edge(e).capacity, load[e] + 1);
                });
                if (!ok) continue;
                std::vector<std::size_t> fresh;
                for (std::size_t t : paths[i].sinks)
                    if (!covered[c][t]) fresh.push_back(t);
                const double g = scorer.gain(counts, fresh);
                if (g > best_gain) {
                    best_gain = g;
                    best_path = i;
                    best_fresh = std::move(fresh);
                }
            }
            if (best_path == paths.size()) continue;
            const FlowPath& p = universe[paths[best_path].index];
            for (EdgeId e : p.edges) {
                if (!masks[c].test(e)) ++load[e];
                masks[c].set(e);
            }
            for (std::size_t t : best_fresh) {
                covered[c][t] = true;
                ++counts[t];
            }
            flow_paths.push_back({p, static_cast<Color>(c + 1)});
            progress = true;
        }
    }
    return finish(std::move(net), cfg, std::move(flow_paths), evaluated);
}

SearchResult search(std::shared_ptr<const Network> net, const SearchConfig& cfg) {
    return cfg.mode == SearchMode::exact ? exact_search(std::move(net), cfg) : greedy_search(std::move(net), cfg);
}

BaselineResult separate_coding_baseline(const Network& net, const DistortionModel& model) {
    bool any = false;
    Rational rate;
    for (NodeId t : net.sinks()) {
        if (net.is_source(t)) continue;
        const Rational f = max_flow(net, t);
        rate = any ? min(rate, f) : f;
        any = true;
    }
    const double d = model(rate.to_double());
    return {rate, DistortionVector{std::vector<double>(net.sinks().size(), d)}};
}

WeightVector max_flow_weights(const Network& net) {
    Rational total_capacity;
    for (const Edge& e : net.edges()) total_capacity += e.capacity;
    std::vector<double> raw;
    for (NodeId t : net.sinks()) {
        const double c = net.is_source(t) ? total_capacity.to_double() : max_flow(net, t).to_double();
        raw.push_back(std::exp2(2.0 * c));
    }
    return WeightVector::normalized(std::move(raw));
}

JointResult joint_optimize(std::shared_ptr<const Network> net, SearchConfig cfg, int max_rounds) {
    if (max_rounds < 1) throw std::invalid_argument("at least one round required");
    if (cfg.weights.p.size() != net->sinks().size()) throw std::invalid_argument("one weight per sink required");
    cfg.objective = SearchObjective::total_rainbow_flow;
    SearchResult routing = search(net, cfg);
    PetOptimum profile = optimize_pet_profile(rainbow_flow_vector(routing.flow), cfg.weights, cfg.color_count,
                                              cfg.rate, cfg.model);
    JointResult best{std::move(routing), std::move(profile), 1};
    for (int round = 2; round <= max_rounds; ++round) {
        cfg.objective = SearchObjective::weighted_distortion;
        cfg.profile = best.profile.y;
        SearchResult next = search(net, cfg);
        PetOptimum refit = optimize_pet_profile(rainbow_flow_vector(next.flow), cfg.weights, cfg.color_count,
                                                cfg.rate, cfg.model);
        if (!(refit.objective < best.profile.objective - 1e-12)) break;
        best = {std::move(next), std::move(refit), round};
    }
    return best;
}

}  // namespace rnf
