#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "rainbow_net/pet_profile.hpp"
#include "rainbow_net/rainbow_flow.hpp"
#include "rainbow_net/rational.hpp"

namespace rnf {

/// Distortion-rate function D_X(R) of the source: convex, decreasing.
///
/// The Gaussian model is the unit-variance squared-error case 2^(-2R). The
/// tabulated model interpolates (rate, distortion) knots linearly; knots
/// must start at rate 0, decrease strictly and have nondecreasing slopes.
/// Past the last knot the distortion stays at its last value.
class DistortionModel {
public:
    static DistortionModel gaussian();
    static DistortionModel tabulated(std::vector<std::pair<double, double>> knots);

    bool is_gaussian() const noexcept { return knots_.empty(); }
    const std::vector<std::pair<double, double>>& knots() const noexcept { return knots_; }

    /// D_X(rate); rate must be >= 0.
    double operator()(double rate) const;
    /// dD_X/dR (right derivative at knots).
    double derivative(double rate) const;
    /// sup |D_X'|, the Lipschitz bound of the model.
    double derivative_bound() const;

    std::string name() const { return is_gaussian() ? "gaussian" : "tabulated"; }

private:
    DistortionModel() = default;
    std::vector<std::pair<double, double>> knots_;
};

struct DistortionVector {
    std::vector<double> d;
};

/// Sink weights: nonnegative, summing to 1 (checked to 1e-9).
struct WeightVector {
    std::vector<double> p;

    static WeightVector uniform(std::size_t sinks);
    /// Normalizes nonnegative raw weights.
    static WeightVector normalized(std::vector<double> raw);
    void validate() const;
};

/// Distortion under a balanced PET code when sink t holds `descriptions[t]`
/// distinct descriptions: D_X(r * sum_{i<=l_t} i*y_i).
DistortionVector eval_drnf_distortion(std::span<const int> descriptions, std::span<const double> y, double rate,
                                      const DistortionModel& model);

/// Same, from a flow vector and a quantized profile; the rate argument is
/// formed exactly before conversion, so it agrees bit-for-bit with
/// D_X(recoverable_bits(l) / n). Throws std::invalid_argument when some q_t
/// is not a multiple of r or exceeds K*r.
DistortionVector eval_drnf_distortion(const RainbowFlowVector& q, const PetProfile& profile,
                                      const DistortionModel& model);

/// Nonnegative piecewise-constant density on [0, inf): `height` on [lo, hi).
struct DensityPiece {
    Rational lo;
    Rational hi;
    Rational height;
};

class StepDensity {
public:
    /// Pieces must be nonnegative, non-overlapping and integrate to exactly 1.
    explicit StepDensity(std::vector<DensityPiece> pieces);
    static StepDensity uniform(Rational lo, Rational hi);

    const std::vector<DensityPiece>& pieces() const noexcept { return pieces_; }
    /// Exact integral of x * y(x) over [0, upper].
    Rational first_moment(const Rational& upper) const;

private:
    std::vector<DensityPiece> pieces_;
};

/// Continuous-flow distortion: D_X(integral_0^{q_t} x y(x) dx) per sink.
DistortionVector eval_crnf_distortion(const RainbowFlowVector& q, const StepDensity& y, const DistortionModel& model);

/// p . d; throws std::invalid_argument on a size mismatch.
double weighted_distortion(const DistortionVector& d, const WeightVector& p);

/// Lower bound on the joint distortion of a balanced two-description code
/// for the unit Gaussian at per-description rate C and side distortion D.
/// Requires 2^(-2C) <= D <= 1.
double ozarow_joint_bound(double side, double rate);

struct OzarowOptimum {
    double rate;        // C
    double separate;    // 2^(-2C), separate source/network coding
    double side;        // D*
    double joint;       // D12*
    double average;     // (2 D* + 2 D12*) / 4
};

/// Minimizes (2D + 2 D12(D)) / 4 over D in [2^(-2C), 1] for the four-sink
/// two-description example. Golden-section search to interval width 1e-10.
/// C = 0 is accepted and returns the degenerate point (1, 1, 1).
OzarowOptimum optimize_fig1_ozarow(double rate);

/// Weighted PET objective sum_l z_l D_X(r * sum_{i<=l} i*y_i), where z_l is
/// the total weight of sinks holding exactly l descriptions.
class PetObjective {
public:
    PetObjective(std::span<const int> descriptions, const WeightVector& p, int color_count, double rate,
                 DistortionModel model);

    int dimension() const noexcept { return color_count_; }
    double value(std::span<const double> y) const;
    std::vector<double> gradient(std::span<const double> y) const;
    /// z_0..z_K
    const std::vector<double>& level_weights() const noexcept { return z_; }

private:
    std::vector<double> z_;
    int color_count_;
    double rate_;
    DistortionModel model_;
};

/// Euclidean projection onto the probability simplex (in place).
void project_to_simplex(std::span<double> v);

struct PetOptimum {
    std::vector<double> y;
    double objective = 0.0;
    int iterations = 0;
};

struct PetOptimizerOptions {
    int max_iterations = 10000;
    double min_improvement = 1e-12;
};

/// Minimizes the PET objective over the simplex by projected gradient with
/// backtracking, starting from the uniform profile.
PetOptimum optimize_pet_profile(const PetObjective& objective, const PetOptimizerOptions& options = {});
PetOptimum optimize_pet_profile(const RainbowFlowVector& q, const WeightVector& p, int color_count,
                                const Rational& rate, const DistortionModel& model,
                                const PetOptimizerOptions& options = {});

/// Descriptions per sink implied by a flow vector (q_t / r), validated.
std::vector<int> descriptions_from_rfv(const RainbowFlowVector& q, const Rational& rate, int color_count);

}  // namespace rnf
