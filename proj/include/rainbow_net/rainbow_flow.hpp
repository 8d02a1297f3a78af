#pragma once

#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "rainbow_net/interval_set.hpp"
#include "rainbow_net/network.hpp"
#include "rainbow_net/rational.hpp"

namespace rnf {

/// Description label carried by a discrete flow path, in 1..K.
using Color = int;
using ColorSet = std::set<Color>;

struct ColoredPath {
    FlowPath path;
    Color color = 1;
};

struct SpectralPath {
    FlowPath path;
    IntervalSet spectrum;
};

/// Discrete rainbow network flow: every path carries one whole description
/// (color) of rate `rate`. Relays duplicate, so same-colored paths sharing an
/// edge consume the rate once.
class DiscreteRnf {
public:
    DiscreteRnf(std::shared_ptr<const Network> net, std::vector<ColoredPath> paths, int color_count, Rational rate);

    const Network& net() const noexcept { return *net_; }
    const std::shared_ptr<const Network>& net_ptr() const noexcept { return net_; }
    const std::vector<ColoredPath>& paths() const noexcept { return paths_; }
    int color_count() const noexcept { return color_count_; }
    const Rational& rate() const noexcept { return rate_; }

private:
    std::shared_ptr<const Network> net_;
    std::vector<ColoredPath> paths_;
    int color_count_;
    Rational rate_;
};

/// Continuous rainbow network flow: every path carries a finite union of
/// intervals of the nonnegative half-line; measure is Lebesgue length.
class ContinuousRnf {
public:
    ContinuousRnf(std::shared_ptr<const Network> net, std::vector<SpectralPath> paths);

    const Network& net() const noexcept { return *net_; }
    const std::shared_ptr<const Network>& net_ptr() const noexcept { return net_; }
    const std::vector<SpectralPath>& paths() const noexcept { return paths_; }

private:
    std::shared_ptr<const Network> net_;
    std::vector<SpectralPath> paths_;
};

/// Per-sink spectrum measure, in network sink order.
struct RainbowFlowVector {
    std::vector<Rational> q;

    friend bool operator==(const RainbowFlowVector&, const RainbowFlowVector&) = default;
};

enum class CapacityRule {
    non_strict,  // measure <= capacity
    strict,      // measure <  capacity
};

struct EdgeLoad {
    EdgeId edge;
    Rational measure;
    Rational capacity;
    bool within_capacity;

    Rational slack() const { return capacity - measure; }
};

struct AdmissibilityReport {
    bool admissible = true;
    std::vector<EdgeLoad> edges;  // one per network edge, in edge order
};

ColorSet edge_spectrum(const DiscreteRnf& rnf, EdgeId e);
IntervalSet edge_spectrum(const ContinuousRnf& rnf, EdgeId e);

/// A path contains v iff v is an endpoint of one of its edges.
ColorSet node_spectrum(const DiscreteRnf& rnf, NodeId v);
IntervalSet node_spectrum(const ContinuousRnf& rnf, NodeId v);

Rational spectrum_measure(const DiscreteRnf& rnf, const ColorSet& colors);
inline Rational spectrum_measure(const ContinuousRnf&, const IntervalSet& set) { return set.measure(); }

AdmissibilityReport check_admissible(const DiscreteRnf& rnf, CapacityRule rule = CapacityRule::non_strict);
AdmissibilityReport check_admissible(const ContinuousRnf& rnf, CapacityRule rule = CapacityRule::non_strict);

template <class Flow>
bool is_admissible(const Flow& rnf, CapacityRule rule = CapacityRule::non_strict) {
    return check_admissible(rnf, rule).admissible;
}

RainbowFlowVector rainbow_flow_vector(const DiscreteRnf& rnf);
RainbowFlowVector rainbow_flow_vector(const ContinuousRnf& rnf);

Rational total_rainbow_flow(const DiscreteRnf& rnf);
Rational total_rainbow_flow(const ContinuousRnf& rnf);

/// Number of distinct descriptions reaching each sink (q_t / r).
std::vector<int> descriptions_per_sink(const DiscreteRnf& rnf);

/// Splits every description into `factor` sub-descriptions of rate r/factor:
/// color c becomes colors (c-1)*factor+1 .. c*factor, each path duplicated
/// once per sub-color. Edge loads and the flow vector are unchanged.
DiscreteRnf refine(const DiscreteRnf& rnf, int factor);

using AnyRnf = std::variant<DiscreteRnf, ContinuousRnf>;

/// Flow document: {"rate", "K", "paths": [{"edges": [...], "color"}]} for the
/// discrete case, or paths with "intervals": [[a, b], ...] for the continuous
/// case. Edge references use edge ids from the scenario.
AnyRnf load_flow(std::shared_ptr<const Network> net, std::string_view text);
AnyRnf load_flow_file(std::shared_ptr<const Network> net, const std::string& path);
std::string dump_flow(const DiscreteRnf& rnf);
std::string dump_flow(const ContinuousRnf& rnf);

}  // namespace rnf
