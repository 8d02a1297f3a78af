#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <vector>

#include "rainbow_net/distortion.hpp"
#include "rainbow_net/network.hpp"
#include "rainbow_net/rainbow_flow.hpp"

namespace rnf {

enum class SearchMode { exact, greedy };

enum class SearchObjective {
    total_rainbow_flow,   // maximize the sum of sink spectrum measures
    weighted_distortion,  // minimize p . d under a fixed profile y
};

struct SearchConfig {
    int color_count = 1;
    Rational rate{1};
    std::size_t max_path_len = 4;
    SearchMode mode = SearchMode::exact;
    SearchObjective objective = SearchObjective::total_rainbow_flow;
    /// Used by the weighted-distortion objective only.
    WeightVector weights;
    std::vector<double> profile;
    DistortionModel model = DistortionModel::gaussian();
    CapacityRule rule = CapacityRule::non_strict;
    /// Exact search gives up with InstanceTooLarge beyond this many candidates.
    std::uint64_t candidate_budget = 10'000'000;

    void validate(const Network& net) const;
};

struct SearchResult {
    DiscreteRnf flow;
    Rational total_flow;
    /// Total rainbow flow (as double) or weighted distortion, per objective.
    double objective = 0.0;
    std::uint64_t candidates = 0;
};

/// Globally optimal flow over the enumerated path universe. Enumerates, per
/// color, the distinct edge sets reachable as unions of usable paths and
/// searches color multisets with capacity pruning and a bound.
SearchResult exact_search(std::shared_ptr<const Network> net, const SearchConfig& cfg);

/// Same optimum by brute force over every (path -> subset of colors)
/// assignment. Exponential; exists to cross-check exact_search.
SearchResult exact_search_by_path_coloring(std::shared_ptr<const Network> net, const SearchConfig& cfg);

/// Heuristic: colors take turns adding the single path with the largest
/// marginal objective gain that still fits the residual capacities; stops
/// after a full round without gain. Ties go to the lowest path index.
SearchResult greedy_search(std::shared_ptr<const Network> net, const SearchConfig& cfg);

SearchResult search(std::shared_ptr<const Network> net, const SearchConfig& cfg);

/// Objective value of an arbitrary flow under cfg's objective.
double evaluate_objective(const DiscreteRnf& flow, const SearchConfig& cfg);

struct BaselineResult {
    Rational rate;  // min over sinks of max-flow
    DistortionVector distortion;
};

/// Separate source and network coding: one common stream at the largest
/// rate every sink can receive. Sinks that are sources are left out of the
/// minimum; if every sink is a source the rate is reported as 0.
BaselineResult separate_coding_baseline(const Network& net, const DistortionModel& model);

/// Weights proportional to 2^(2 C_t), C_t the max-flow into sink t.
WeightVector max_flow_weights(const Network& net);

struct JointResult {
    SearchResult routing;
    PetOptimum profile;
    int rounds = 0;
};

/// Alternates flow search and profile optimization: first maximize total
/// rainbow flow and fit y, then re-search under the weighted objective with
/// the current y and refit, until no improvement or `max_rounds`.
JointResult joint_optimize(std::shared_ptr<const Network> net, SearchConfig cfg, int max_rounds = 4);

}  // namespace rnf
