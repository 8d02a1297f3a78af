#include "rainbow_net/pet_profile.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace rnf {

namespace {

constexpr int kMaxDescriptions = 255;

std::int64_t bytes_per_description(const Rational& rate, std::int64_t n) {
    if (n < 1) throw std::invalid_argument("block length n must be positive");
    if (rate <= Rational(0)) throw std::invalid_argument("description rate must be positive");
    const Rational bits = rate * Rational(n);
    if (!bits.is_integer() || bits.num() % 8 != 0)
        throw std::invalid_argument("n*r = " + bits.to_string() + " bits is not a whole number of bytes");
    return bits.num() / 8;
}

// Pushes the rounding residual onto the largest segment, one byte at a time
// so that no segment goes negative.
void absorb_residual(std::vector<std::int64_t>& bytes, std::int64_t total) {
    std::int64_t sum = std::accumulate(bytes.begin(), bytes.end(), std::int64_t{0});
    while (sum != total) {
        auto largest = std::max_element(bytes.begin(), bytes.end());
        if (sum < total) {
            *largest += total - sum;
            sum = total;
        } else {
            const std::int64_t take = std::min(*largest, sum - total);
            *largest -= take;
            sum -= take;
        }
    }
}

}  // namespace

PetProfile::PetProfile(std::vector<std::int64_t> bytes, Rational rate, std::int64_t n)
    : bytes_(std::move(bytes)), rate_(rate), n_(n), total_bytes_(bytes_per_description(rate, n)) {
    if (bytes_.empty() || bytes_.size() > kMaxDescriptions)
        throw std::invalid_argument("description count must be in 1..255");
    if (std::any_of(bytes_.begin(), bytes_.end(), [](std::int64_t b) { return b < 0; }))
        throw std::invalid_argument("negative segment size");
    if (std::accumulate(bytes_.begin(), bytes_.end(), std::int64_t{0}) != total_bytes_)
        throw std::invalid_argument("segment sizes do not fill the description");
}

PetProfile PetProfile::quantize(std::span<const double> y, Rational rate, std::int64_t n) {
    const std::int64_t total = bytes_per_description(rate, n);
    double sum = 0.0;
    for (double v : y) {
        if (!(v >= 0.0) || !std::isfinite(v)) throw std::invalid_argument("profile entries must be finite and nonnegative");
        sum += v;
    }
    if (y.empty() || y.size() > kMaxDescriptions) throw std::invalid_argument("description count must be in 1..255");
    if (!(sum > 0.0)) throw std::invalid_argument("profile must have positive mass");
    std::vector<std::int64_t> bytes;
    for (double v : y) bytes.push_back(std::llround(v / sum * static_cast<double>(total)));
    absorb_residual(bytes, total);
    return PetProfile(std::move(bytes), rate, n);
}

PetProfile PetProfile::quantize(std::span<const Rational> y, Rational rate, std::int64_t n) {
    const std::int64_t total = bytes_per_description(rate, n);
    if (y.empty() || y.size() > kMaxDescriptions) throw std::invalid_argument("description count must be in 1..255");
    Rational sum;
    for (const Rational& v : y) {
        if (v.is_negative()) throw std::invalid_argument("profile entries must be nonnegative");
        sum += v;
    }
    if (sum.is_zero()) throw std::invalid_argument("profile must have positive mass");
    std::vector<std::int64_t> bytes;
    for (const Rational& v : y) bytes.push_back((v / sum * Rational(total) + Rational(1, 2)).floor());
    absorb_residual(bytes, total);
    return PetProfile(std::move(bytes), rate, n);
}

PetProfile PetProfile::from_segment_bytes(std::vector<std::int64_t> bytes, Rational rate, std::int64_t n) {
    return PetProfile(std::move(bytes), rate, n);
}

std::vector<Rational> PetProfile::y() const {
    std::vector<Rational> out;
    for (std::int64_t b : bytes_) out.emplace_back(b, total_bytes_);
    return out;
}

std::vector<double> PetProfile::y_double() const {
    std::vector<double> out;
    for (const Rational& v : y()) out.push_back(v.to_double());
    return out;
}

std::int64_t PetProfile::recoverable_bits(int l) const {
    if (l < 0 || l > description_count()) throw std::out_of_range("subset size outside 0..K");
    std::int64_t bits = 0;
    for (int k = 1; k <= l; ++k) bits += static_cast<std::int64_t>(k) * 8 * bytes_[static_cast<std::size_t>(k - 1)];
    return bits;
}

Rational PetProfile::recoverable_rate(int l) const {
    return Rational(recoverable_bits(l), n_);
}

}  // namespace rnf
