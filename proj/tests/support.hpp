#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "rainbow_net/network.hpp"
#include "rainbow_net/rainbow_flow.hpp"

namespace testsupport {

inline std::string data_path(const std::string& name) { return std::string(RAINBOW_NET_DATA_DIR) + "/" + name; }

inline std::shared_ptr<const rnf::Network> load(const std::string& name) {
    return std::make_shared<const rnf::Network>(rnf::load_scenario_file(data_path(name)));
}

/// Four-sink diamond with every capacity set to `c`.
inline std::shared_ptr<const rnf::Network> fig1(rnf::Rational c = 1) {
    std::vector<rnf::EdgeSpec> edges;
    for (auto [t, h] : std::vector<std::pair<int, int>>{{1, 2}, {1, 3}, {2, 4}, {2, 5}, {3, 4}, {3, 5}, {4, 5}, {5, 4}})
        edges.push_back({std::to_string(t) + "-" + std::to_string(h), std::to_string(t), std::to_string(h), c});
    return std::make_shared<const rnf::Network>(std::vector<std::string>{"1", "2", "3", "4", "5"}, edges,
                                                std::vector<std::string>{"1"},
                                                std::vector<std::string>{"2", "3", "4", "5"});
}

/// The hand coloring: description 1 over node 2, description 2 over node 3.
inline rnf::DiscreteRnf fig1_flow(const std::shared_ptr<const rnf::Network>& net, rnf::Rational rate) {
    auto path = [&](std::initializer_list<const char*> ids) {
        rnf::FlowPath p;
        for (const char* id : ids) p.edges.push_back(net->edge_index(id));
        return p;
    };
    std::vector<rnf::ColoredPath> paths{{path({"1-2", "2-4"}), 1},
                                        {path({"1-2", "2-5"}), 1},
                                        {path({"1-3", "3-4"}), 2},
                                        {path({"1-3", "3-5"}), 2}};
    return rnf::DiscreteRnf(net, std::move(paths), 2, rate);
}

/// Random DAG-ish digraph: node 0 is the only source, a random nonempty set
/// of other nodes are sinks, capacities from {0, 1/2, 1, 3/2, 2}.
inline std::shared_ptr<const rnf::Network> random_network(std::mt19937_64& rng, int max_nodes, double density = 0.45,
                                                          bool allow_back_edges = true) {
    std::uniform_int_distribution<int> size(3, max_nodes);
    const int n = size(rng);
    std::vector<std::string> nodes;
    for (int i = 0; i < n; ++i) nodes.push_back("v" + std::to_string(i));
    std::bernoulli_distribution coin(density);
    std::bernoulli_distribution back(0.15);
    std::uniform_int_distribution<int> cap(0, 4);
    std::vector<rnf::EdgeSpec> edges;
    for (int t = 0; t < n; ++t)
        for (int h = 1; h < n; ++h) {
            if (t == h) continue;
            if (h < t && !(allow_back_edges && back(rng))) continue;
            if (h > t && !coin(rng)) continue;
            edges.push_back({"e" + std::to_string(edges.size()), nodes[t], nodes[h], rnf::Rational(cap(rng), 2)});
        }
    std::vector<std::string> sinks;
    for (int i = 1; i < n; ++i)
        if (coin(rng)) sinks.push_back(nodes[i]);
    if (sinks.empty()) sinks.push_back(nodes[n - 1]);
    return std::make_shared<const rnf::Network>(nodes, edges, std::vector<std::string>{nodes[0]}, sinks);
}

/// Random (not necessarily admissible) discrete flow over enumerated paths.
inline rnf::DiscreteRnf random_flow(std::mt19937_64& rng, const std::shared_ptr<const rnf::Network>& net, int k,
                                    rnf::Rational rate, std::size_t max_len = 4) {
    const auto universe = rnf::enumerate_paths(*net, max_len);
    std::vector<rnf::ColoredPath> paths;
    std::bernoulli_distribution pick(0.4);
    std::uniform_int_distribution<int> color(1, k);
    for (const auto& p : universe)
        if (pick(rng)) paths.push_back({p, color(rng)});
    return rnf::DiscreteRnf(net, std::move(paths), k, rate);
}

/// Brute-force minimum cut separating the sources from `sink`.
inline rnf::Rational brute_force_min_cut(const rnf::Network& net, rnf::NodeId sink) {
    const std::size_t n = net.node_count();
    rnf::Rational best = -1;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
        auto in = [&](rnf::NodeId v) { return ((mask >> v) & 1u) != 0; };
        if (in(sink)) continue;
        bool ok = true;
        for (rnf::NodeId s : net.sources()) ok = ok && in(s);
        if (!ok) continue;
        rnf::Rational cut = 0;
        for (const auto& e : net.edges())
            if (in(e.tail) && !in(e.head)) cut += e.capacity;
        if (best < 0 || cut < best) best = cut;
    }
    return best;
}

/// Unit Gaussian distortion-rate function, written out independently.
inline double gaussian_d(double rate) { return std::pow(2.0, -2.0 * rate); }

/// Balanced two-description joint bound, written out independently.
inline double ozarow_rhs(double d, double c) {
    const double e = std::pow(2.0, -4.0 * c);
    const double s = std::sqrt(std::max(0.0, d * d - e));
    return e / ((d + s) * (2.0 - d - s));
}

/// Average four-sink distortion minimized by plain grid scan.
inline double fig1_grid_optimum(double c, double step) {
    const double lo = std::pow(2.0, -2.0 * c);
    double best = 1.0;
    for (double d = lo; d <= 1.0; d += step) best = std::min(best, (2.0 * d + 2.0 * ozarow_rhs(d, c)) / 4.0);
    return std::min(best, (2.0 + 2.0 * ozarow_rhs(1.0, c)) / 4.0);
}

/// Weighted PET objective evaluated from scratch: counts[t] descriptions at
/// sink t, weights p, profile y, rate r, Gaussian model.
inline double pet_objective_oracle(const std::vector<int>& counts, const std::vector<double>& p,
                                   const std::vector<double>& y, double r) {
    double total = 0.0;
    for (std::size_t t = 0; t < counts.size(); ++t) {
        double depth = 0.0;
        for (int i = 1; i <= counts[t]; ++i) depth += i * y[static_cast<std::size_t>(i - 1)];
        total += p[t] * gaussian_d(r * depth);
    }
    return total;
}

/// Minimum of the oracle objective over the simplex grid with spacing 1/steps
/// (K <= 3).
inline double pet_grid_optimum(const std::vector<int>& counts, const std::vector<double>& p, int k, double r,
                               int steps) {
    double best = 1e300;
    const double h = 1.0 / steps;
    if (k == 1) return pet_objective_oracle(counts, p, {1.0}, r);
    if (k == 2) {
        for (int a = 0; a <= steps; ++a)
            best = std::min(best, pet_objective_oracle(counts, p, {a * h, 1.0 - a * h}, r));
        return best;
    }
    for (int a = 0; a <= steps; ++a)
        for (int b = 0; a + b <= steps; ++b)
            best = std::min(best, pet_objective_oracle(counts, p, {a * h, b * h, (steps - a - b) * h}, r));
    return best;
}

}  // namespace testsupport
