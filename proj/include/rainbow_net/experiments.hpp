#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "rainbow_net/distortion.hpp"
#include "rainbow_net/network.hpp"
#include "rainbow_net/pet_profile.hpp"
#include "rainbow_net/routing_search.hpp"

namespace rnf {

/// One row of the four-sink two-description comparison.
struct Fig1Row {
    double rate;
    double separate;       // d_S = 2^(-2C)
    double mdc_average;    // optimized balanced-MDC average distortion
    double side;           // D*
    double joint;          // D12*
    bool strictly_better;  // mdc_average < separate
};

std::vector<Fig1Row> fig1_sweep(std::span<const double> rates);

struct PropertyResult {
    std::string property;
    std::string scenario;
    bool passed = false;
    std::string detail;
};

struct LemmaOptions {
    int color_count = 2;
    Rational rate{1};
    std::size_t max_path_len = 4;
    /// Refinement depth for the small-packet trend check (r_n = rate * 2^-n).
    int trend_steps = 6;
    double slack = 1e-9;
};

/// Runs the description-count, rate-splitting and small-packet properties
/// on one network with uniform sink weights and the Gaussian model.
std::vector<PropertyResult> run_lemma_suite(const std::shared_ptr<const Network>& net, const std::string& label,
                                            const LemmaOptions& options = {});

/// Exact search, falling back to greedy when the instance is too large.
SearchResult best_effort_search(const std::shared_ptr<const Network>& net, const SearchConfig& cfg);

struct PipelineRow {
    std::string sink;
    Rational q;
    int descriptions = 0;
    double analytic = 0.0;
    double empirical = 0.0;
};

struct PipelineResult {
    SearchResult routing;
    PetProfile profile;
    double objective = 0.0;  // weighted analytic distortion
    std::vector<PipelineRow> rows;
};

struct PipelineOptions {
    int color_count = 2;
    Rational rate{1};
    std::size_t max_path_len = 4;
    SearchMode mode = SearchMode::exact;
    std::int64_t block_length = 8192;
    std::uint64_t seed = 0;
};

/// Search a flow, fit the PET profile, encode a seeded Gaussian block and
/// decode at every sink from the descriptions its spectrum holds.
PipelineResult run_pipeline(const std::shared_ptr<const Network>& net, const WeightVector& weights,
                            const PipelineOptions& options = {});

}  // namespace rnf
