#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "rainbow_net/rational.hpp"

namespace rnf {

/// Design of a balanced K-description PET code: rate split y over the K
/// protection levels, description rate r (bits/symbol), block length n.
///
/// y is always held on the byte grid 1/(n*r/8): segment i occupies exactly
/// n*r*y_i/8 whole bytes of every description.
class PetProfile {
public:
    /// Quantizes y onto the byte grid (round to nearest, residual absorbed by
    /// the first largest component). y must be nonnegative with positive sum;
    /// it is normalized first. Throws std::invalid_argument on violations.
    static PetProfile quantize(std::span<const double> y, Rational rate, std::int64_t n);
    static PetProfile quantize(std::span<const Rational> y, Rational rate, std::int64_t n);
    /// Builds from explicit per-segment byte counts (must sum to n*r/8).
    static PetProfile from_segment_bytes(std::vector<std::int64_t> bytes, Rational rate, std::int64_t n);

    int description_count() const noexcept { return static_cast<int>(bytes_.size()); }
    const Rational& rate() const noexcept { return rate_; }
    std::int64_t block_length() const noexcept { return n_; }
    /// Bytes per description (n*r/8).
    std::int64_t description_bytes() const noexcept { return total_bytes_; }
    const std::vector<std::int64_t>& segment_bytes() const noexcept { return bytes_; }
    /// Quantized y, exact.
    std::vector<Rational> y() const;
    std::vector<double> y_double() const;

    /// Source bits recoverable from any l descriptions: sum_{k<=l} k*n*r*y_k.
    std::int64_t recoverable_bits(int l) const;
    /// Total source bits consumed by the code (l = K).
    std::int64_t source_bits() const { return recoverable_bits(description_count()); }
    /// recoverable_bits(l) / n, the per-symbol rate decoded from l descriptions.
    Rational recoverable_rate(int l) const;

    friend bool operator==(const PetProfile&, const PetProfile&) = default;

private:
    PetProfile(std::vector<std::int64_t> bytes, Rational rate, std::int64_t n);

    std::vector<std::int64_t> bytes_;
    Rational rate_;
    std::int64_t n_ = 0;
    std::int64_t total_bytes_ = 0;
};

}  // namespace rnf
