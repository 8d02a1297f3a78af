#include "rainbow_net/distortion.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <stdexcept>

namespace rnf {

DistortionModel DistortionModel::gaussian() { return DistortionModel(); }

DistortionModel DistortionModel::tabulated(std::vector<std::pair<double, double>> knots) {
    if (knots.size() < 2) throw std::invalid_argument("tabulated model needs at least two knots");
    if (knots.front().first != 0.0) throw std::invalid_argument("tabulated model must start at rate 0");
    double prev_slope = -INFINITY;
    for (std::size_t i = 1; i < knots.size(); ++i) {
        const auto [r0, d0] = knots[i - 1];
        const auto [r1, d1] = knots[i];
        if (!(r1 > r0)) throw std::invalid_argument("tabulated rates must increase strictly");
        if (!(d1 < d0)) throw std::invalid_argument("tabulated distortions must decrease strictly");
        const double slope = (d1 - d0) / (r1 - r0);
        if (slope < prev_slope) throw std::invalid_argument("tabulated model is not convex");
        prev_slope = slope;
    }
    if (!(knots.back().second > 0.0)) throw std::invalid_argument("tabulated distortions must stay positive");
    DistortionModel m;
    m.knots_ = std::move(knots);
    return m;
}

double DistortionModel::operator()(double rate) const {
    if (rate < 0.0) throw std::domain_error("negative rate");
    if (is_gaussian()) return std::exp2(-2.0 * rate);
    if (rate >= knots_.back().first) return knots_.back().second;
    auto it = std::upper_bound(knots_.begin(), knots_.end(), rate,
                               [](double r, const std::pair<double, double>& k) { return r < k.first; });
    const auto& [r1, d1] = *it;
    const auto& [r0, d0] = *(it - 1);
    return d0 + (d1 - d0) * (rate - r0) / (r1 - r0);
}

double DistortionModel::derivative(double rate) const {
    if (rate < 0.0) throw std::domain_error("negative rate");
    if (is_gaussian()) return -2.0 * std::log(2.0) * std::exp2(-2.0 * rate);
    if (rate >= knots_.back().first) return 0.0;
    auto it = std::upper_bound(knots_.begin(), knots_.end(), rate,
                               [](double r, const std::pair<double, double>& k) { return r < k.first; });
    return (it->second - (it - 1)->second) / (it->first - (it - 1)->first);
}

double DistortionModel::derivative_bound() const {
    if (is_gaussian()) return 2.0 * std::log(2.0);
    return std::abs((knots_[1].second - knots_[0].second) / (knots_[1].first - knots_[0].first));
}

WeightVector WeightVector::uniform(std::size_t sinks) {
    if (sinks == 0) throw std::invalid_argument("no sinks to weight");
    return WeightVector{std::vector<double>(sinks, 1.0 / static_cast<double>(sinks))};
}

WeightVector WeightVector::normalized(std::vector<double> raw) {
    double sum = 0.0;
    for (double v : raw) {
        if (!(v >= 0.0) || !std::isfinite(v)) throw std::invalid_argument("weights must be finite and nonnegative");
        sum += v;
    }
    if (!(sum > 0.0)) throw std::invalid_argument("weights must not all be zero");
    for (double& v : raw) v /= sum;
    return WeightVector{std::move(raw)};
}

void WeightVector::validate() const {
    double sum = 0.0;
    for (double v : p) {
        if (!(v >= 0.0)) throw std::invalid_argument("weights must be nonnegative");
        sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-9) throw std::invalid_argument("weights must sum to 1");
}

DistortionVector eval_drnf_distortion(std::span<const int> descriptions, std::span<const double> y, double rate,
                                      const DistortionModel& model) {
    DistortionVector out;
    for (int l : descriptions) {
        if (l < 0 || static_cast<std::size_t>(l) > y.size())
            throw std::invalid_argument("sink holds " + std::to_string(l) + " descriptions but K = " + std::to_string(y.size()));
        double depth = 0.0;
        for (int i = 1; i <= l; ++i) depth += i * y[static_cast<std::size_t>(i - 1)];
        out.d.push_back(model(rate * depth));
    }
    return out;
}

std::vector<int> descriptions_from_rfv(const RainbowFlowVector& q, const Rational& rate, int color_count) {
    std::vector<int> out;
    for (const Rational& qt : q.q) {
        const Rational count = qt / rate;
        if (!count.is_integer() || count.is_negative())
            throw std::invalid_argument("q_t = " + qt.to_string() + " is not a multiple of r = " + rate.to_string());
        if (count > Rational(color_count))
            throw std::invalid_argument("q_t / r = " + count.to_string() + " exceeds K = " + std::to_string(color_count));
        out.push_back(static_cast<int>(count.num()));
    }
    return out;
}

DistortionVector eval_drnf_distortion(const RainbowFlowVector& q, const PetProfile& profile,
                                      const DistortionModel& model) {
    const auto counts = descriptions_from_rfv(q, profile.rate(), profile.description_count());
    const auto y = profile.y();
    DistortionVector out;
    for (int l : counts) {
        Rational depth;
        for (int i = 1; i <= l; ++i) depth += Rational(i) * y[static_cast<std::size_t>(i - 1)];
        out.d.push_back(model((profile.rate() * depth).to_double()));
    }
    return out;
}

StepDensity::StepDensity(std::vector<DensityPiece> pieces) : pieces_(std::move(pieces)) {
    std::sort(pieces_.begin(), pieces_.end(), [](const DensityPiece& a, const DensityPiece& b) { return a.lo < b.lo; });
    Rational mass;
    for (std::size_t i = 0; i < pieces_.size(); ++i) {
        const DensityPiece& piece = pieces_[i];
        if (piece.lo.is_negative()) throw std::invalid_argument("density support must lie in [0, inf)");
        if (piece.hi < piece.lo) throw std::invalid_argument("density piece is reversed");
        if (piece.height.is_negative()) throw std::invalid_argument("density must be nonnegative");
        if (i > 0 && piece.lo < pieces_[i - 1].hi) throw std::invalid_argument("density pieces overlap");
        mass += piece.height * (piece.hi - piece.lo);
    }
    if (mass != Rational(1)) throw std::invalid_argument("density integrates to " + mass.to_string() + ", not 1");
}

StepDensity StepDensity::uniform(Rational lo, Rational hi) {
    return StepDensity({{lo, hi, Rational(1) / (hi - lo)}});
}

Rational StepDensity::first_moment(const Rational& upper) const {
    Rational total;
    for (const DensityPiece& piece : pieces_) {
        if (piece.lo >= upper) break;
        const Rational hi = min(piece.hi, upper);
        total += piece.height * (hi * hi - piece.lo * piece.lo) / Rational(2);
    }
    return total;
}

DistortionVector eval_crnf_distortion(const RainbowFlowVector& q, const StepDensity& y, const DistortionModel& model) {
    DistortionVector out;
    for (const Rational& qt : q.q) out.d.push_back(model(y.first_moment(qt).to_double()));
    return out;
}

double weighted_distortion(const DistortionVector& d, const WeightVector& p) {
    if (d.d.size() != p.p.size())
        throw std::invalid_argument("distortion vector has " + std::to_string(d.d.size()) + " entries, weights " +
                                    std::to_string(p.p.size()));
    return std::inner_product(d.d.begin(), d.d.end(), p.p.begin(), 0.0);
}

double ozarow_joint_bound(double side, double rate) {
    if (rate < 0.0) throw std::domain_error("negative rate");
    const double floor_side = std::exp2(-2.0 * rate);
    const double floor_joint = std::exp2(-4.0 * rate);
    // Allow round-off at the lower end; the discriminant is clamped below.
    if (side < floor_side * (1.0 - 1e-12) || side > 1.0 + 1e-12)
        throw std::domain_error("side distortion outside [2^(-2C), 1]");
    const double s = std::sqrt(std::max(side * side - floor_joint, 0.0));
    return floor_joint / ((side + s) * (2.0 - side - s));
}

OzarowOptimum optimize_fig1_ozarow(double rate) {
    if (!(rate >= 0.0)) throw std::domain_error("rate must be nonnegative");
    auto average = [rate](double side) { return (2.0 * side + 2.0 * ozarow_joint_bound(side, rate)) / 4.0; };
    const double separate = std::exp2(-2.0 * rate);
    double lo = separate;
    double hi = 1.0;
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = hi - inv_phi * (hi - lo);
    double x2 = lo + inv_phi * (hi - lo);
    double f1 = average(x1);
    double f2 = average(x2);
    while (hi - lo > 1e-10) {
        if (f1 <= f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = average(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = average(x2);
        }
    }
    const double side = std::clamp((lo + hi) / 2.0, separate, 1.0);
    const double joint = ozarow_joint_bound(side, rate);
    return {rate, separate, side, joint, (2.0 * side + 2.0 * joint) / 4.0};
}

PetObjective::PetObjective(std::span<const int> descriptions, const WeightVector& p, int color_count, double rate,
                           DistortionModel model)
    : z_(static_cast<std::size_t>(color_count) + 1, 0.0), color_count_(color_count), rate_(rate), model_(std::move(model)) {
    if (color_count < 1) throw std::invalid_argument("K must be at least 1");
    if (descriptions.size() != p.p.size()) throw std::invalid_argument("weights and sinks differ in length");
    for (std::size_t t = 0; t < descriptions.size(); ++t) {
        const int l = descriptions[t];
        if (l < 0 || l > color_count) throw std::invalid_argument("descriptions per sink outside 0..K");
        z_[static_cast<std::size_t>(l)] += p.p[t];
    }
}

double PetObjective::value(std::span<const double> y) const {
    double total = z_[0] * model_(0.0);
    double depth = 0.0;
    for (int l = 1; l <= color_count_; ++l) {
        depth += l * y[static_cast<std::size_t>(l - 1)];
        if (z_[static_cast<std::size_t>(l)] != 0.0) total += z_[static_cast<std::size_t>(l)] * model_(rate_ * std::max(depth, 0.0));
    }
    return total;
}

std::vector<double> PetObjective::gradient(std::span<const double> y) const {
    // d/dy_i sum_l z_l D(r S_l) = r * i * sum_{l>=i} z_l D'(r S_l)
    std::vector<double> depth(static_cast<std::size_t>(color_count_) + 1, 0.0);
    for (int l = 1; l <= color_count_; ++l)
        depth[static_cast<std::size_t>(l)] = depth[static_cast<std::size_t>(l - 1)] + l * y[static_cast<std::size_t>(l - 1)];
    std::vector<double> grad(static_cast<std::size_t>(color_count_), 0.0);
    double tail = 0.0;
    for (int i = color_count_; i >= 1; --i) {
        const double zi = z_[static_cast<std::size_t>(i)];
        if (zi != 0.0) tail += zi * model_.derivative(rate_ * std::max(depth[static_cast<std::size_t>(i)], 0.0));
        grad[static_cast<std::size_t>(i - 1)] = rate_ * i * tail;
    }
    return grad;
}

void project_to_simplex(std::span<double> v) {
    if (v.empty()) return;
    std::vector<double> sorted(v.begin(), v.end());
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    double cumulative = 0.0;
    double threshold = 0.0;
    for (std::size_t k = 0; k < sorted.size(); ++k) {
        cumulative += sorted[k];
        const double candidate = (cumulative - 1.0) / static_cast<double>(k + 1);
        if (sorted[k] - candidate > 0.0) threshold = candidate;
    }
    for (double& x : v) x = std::max(x - threshold, 0.0);
}

namespace {

double squared_distance(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return s;
}

PetOptimum descend(const PetObjective& objective, std::vector<double> y, const PetOptimizerOptions& options) {
    double fy = objective.value(y);
    double step = 1.0;
    int it = 0;
    std::vector<double> next(y.size());
    for (; it < options.max_iterations; ++it) {
        const auto grad = objective.gradient(y);
        double f_next = fy;
        double moved = 0.0;
        for (;;) {
            for (std::size_t i = 0; i < y.size(); ++i) next[i] = y[i] - step * grad[i];
            project_to_simplex(next);
            double lin = 0.0;
            for (std::size_t i = 0; i < y.size(); ++i) lin += grad[i] * (next[i] - y[i]);
            moved = squared_distance(next, y);
            f_next = objective.value(next);
            if (f_next <= fy + lin + moved / (2.0 * step) || step < 1e-30) break;
            step /= 2.0;
        }
        const double improvement = fy - f_next;
        if (f_next <= fy) {
            y.swap(next);
            fy = f_next;
        }
        // Small objective change alone can stall on flat stretches; also
        // require the projected step to have (nearly) vanished.
        if (improvement < options.min_improvement && std::sqrt(moved) / step < 1e-9) break;
        if (improvement < options.min_improvement && moved == 0.0) break;
        step *= 2.0;
    }
    return {std::move(y), fy, it};
}

}  // namespace

PetOptimum optimize_pet_profile(const PetObjective& objective, const PetOptimizerOptions& options) {
    const auto k = static_cast<std::size_t>(objective.dimension());
    PetOptimum best = descend(objective, std::vector<double>(k, 1.0 / static_cast<double>(k)), options);
    // A vertex at least as good as the descent result means it stalled
    // (or crawled towards that vertex); restart there.
    for (std::size_t v = 0; v < k; ++v) {
        std::vector<double> vertex(k, 0.0);
        vertex[v] = 1.0;
        if (objective.value(vertex) <= best.objective) {
            PetOptimum again = descend(objective, vertex, options);
            again.iterations += best.iterations;
            if (again.objective <= best.objective) best = std::move(again);
        }
    }
    return best;
}

PetOptimum optimize_pet_profile(const RainbowFlowVector& q, const WeightVector& p, int color_count,
                                const Rational& rate, const DistortionModel& model, const PetOptimizerOptions& options) {
    const auto counts = descriptions_from_rfv(q, rate, color_count);
    return optimize_pet_profile(PetObjective(counts, p, color_count, rate.to_double(), model), options);
}

}  // namespace rnf
