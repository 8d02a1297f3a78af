#include "rainbow_net/progressive_source.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include <boost/math/special_functions/erf.hpp>

namespace rnf {

namespace {

constexpr int kMaxPlanes = 48;

double phi(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi); }

/// E[|X| | a <= |X| < b] for X ~ N(0,1), 0 <= a < b <= inf.
double half_normal_centroid(double a, double b) {
    const double mass = 0.5 * (std::erfc(a / std::numbers::sqrt2) - (std::isinf(b) ? 0.0 : std::erfc(b / std::numbers::sqrt2)));
    const double num = phi(a) - (std::isinf(b) ? 0.0 : phi(b));
    if (mass > 1e-300 && num > 0.0) {
        const double c = num / mass;
        if (c >= a && (std::isinf(b) || c <= b)) return c;
    }
    return std::isinf(b) ? a : 0.5 * (a + b);
}

bool bit_at(std::span<const std::uint8_t> stream, std::int64_t pos) {
    return (stream[static_cast<std::size_t>(pos / 8)] >> (7 - pos % 8)) & 1u;
}

}  // namespace

GaussianBitplaneCoder::GaussianBitplaneCoder(double compand_scale) : scale_(compand_scale) {
    if (!(compand_scale > 0.0)) throw std::invalid_argument("compand scale must be positive");
}

std::vector<std::uint8_t> GaussianBitplaneCoder::encode(std::span<const double> samples, int planes) const {
    if (planes < 1 || planes > kMaxPlanes) throw std::invalid_argument("plane count must be in 1..48");
    const std::size_t n = samples.size();
    const auto total_bits = static_cast<std::int64_t>(n) * planes;
    std::vector<std::uint8_t> out(static_cast<std::size_t>((total_bits + 7) / 8), 0);
    const int mag_bits = planes - 1;
    const double cells = std::ldexp(1.0, mag_bits);

    std::vector<std::uint64_t> codes(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double u = std::erf(std::abs(samples[j]) / (scale_ * std::numbers::sqrt2));
        const double cell = std::min(std::floor(u * cells), cells - 1.0);
        codes[j] = (samples[j] < 0.0 ? std::uint64_t{1} << mag_bits : 0) | static_cast<std::uint64_t>(cell);
    }
    std::int64_t pos = 0;
    for (int plane = 0; plane < planes; ++plane) {
        const int shift = mag_bits - plane;
        for (std::size_t j = 0; j < n; ++j, ++pos)
            if ((codes[j] >> shift) & 1u) out[static_cast<std::size_t>(pos / 8)] |= static_cast<std::uint8_t>(0x80u >> (pos % 8));
    }
    return out;
}

std::vector<double> GaussianBitplaneCoder::decode(std::span<const std::uint8_t> stream, std::int64_t prefix_bits,
                                                  std::size_t n, int planes) const {
    if (planes < 1 || planes > kMaxPlanes) throw std::invalid_argument("plane count must be in 1..48");
    const auto total_bits = static_cast<std::int64_t>(n) * planes;
    prefix_bits = std::clamp<std::int64_t>(prefix_bits, 0, total_bits);
    if (static_cast<std::int64_t>(stream.size()) * 8 < prefix_bits) throw std::invalid_argument("stream shorter than prefix");

    std::vector<double> out(n, 0.0);
    const auto sn = static_cast<std::int64_t>(n);
    for (std::size_t j = 0; j < n; ++j) {
        const auto sj = static_cast<std::int64_t>(j);
        if (sj >= prefix_bits) continue;  // sign unknown: mean
        const bool negative = bit_at(stream, sj);
        int known = 0;
        std::uint64_t cell = 0;
        for (int plane = 1; plane < planes; ++plane) {
            const std::int64_t pos = plane * sn + sj;
            if (pos >= prefix_bits) break;
            cell = (cell << 1) | (bit_at(stream, pos) ? 1u : 0u);
            ++known;
        }
        const double width = std::ldexp(1.0, -known);
        const double u_lo = static_cast<double>(cell) * width;
        const double u_hi = u_lo + width;
        const double a = u_lo <= 0.0 ? 0.0 : scale_ * std::numbers::sqrt2 * boost::math::erf_inv(u_lo);
        const double b = u_hi >= 1.0 ? INFINITY : scale_ * std::numbers::sqrt2 * boost::math::erf_inv(u_hi);
        const double magnitude = half_normal_centroid(a, b);
        out[j] = negative ? -magnitude : magnitude;
    }
    return out;
}

ProgressiveSource progressive_gaussian_source(std::uint64_t seed, std::size_t n, double max_rate) {
    if (n < 1) throw std::invalid_argument("n must be positive");
    if (!(max_rate > 0.0)) throw std::invalid_argument("max rate must be positive");
    std::mt19937_64 engine(seed);
    auto uniform = [&engine] { return (static_cast<double>(engine() >> 11) + 0.5) * 0x1.0p-53; };
    ProgressiveSource src;
    src.samples.resize(n);
    for (std::size_t j = 0; j < n; j += 2) {
        const double radius = std::sqrt(-2.0 * std::log(uniform()));
        const double angle = 2.0 * std::numbers::pi * uniform();
        src.samples[j] = radius * std::cos(angle);
        if (j + 1 < n) src.samples[j + 1] = radius * std::sin(angle);
    }
    src.planes = static_cast<int>(std::ceil(max_rate - 1e-12));
    src.planes = std::max(src.planes, 1);
    src.bits = static_cast<std::int64_t>(n) * src.planes;
    src.bitstream = GaussianBitplaneCoder().encode(src.samples, src.planes);
    return src;
}

double mse(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size() || a.empty()) throw std::invalid_argument("mse: size mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return s / static_cast<double>(a.size());
}

double empirical_mse(const ProgressiveSource& source, std::int64_t prefix_bits, const GaussianBitplaneCoder& coder) {
    const auto rec = coder.decode(source.bitstream, prefix_bits, source.samples.size(), source.planes);
    return mse(source.samples, rec);
}

}  // namespace rnf
