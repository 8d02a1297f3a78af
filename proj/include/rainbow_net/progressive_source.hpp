#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace rnf {

/// Embedded scalar quantizer for unit-variance Gaussian samples.
///
/// Bit plane 0 is the sign; planes 1.. are the binary expansion of the
/// companded magnitude u = 2*Phi(|x|/s) - 1. The stream is plane-major
/// (all samples' plane 0, then plane 1, ...), MSB-first within bytes, so any
/// prefix of R*n bits refines every sample to about R bits. Decoding
/// reconstructs each sample at the conditional mean of its cell.
class GaussianBitplaneCoder {
public:
    /// Scale placing the second-plane threshold at the 4-level Lloyd-Max
    /// point (0.9816), which keeps the 2-bit distortion near optimal.
    static constexpr double kDefaultScale = 1.4553;

    explicit GaussianBitplaneCoder(double compand_scale = kDefaultScale);

    std::vector<std::uint8_t> encode(std::span<const double> samples, int planes) const;
    /// Reconstruction from the first `prefix_bits` bits of a stream produced
    /// by encode() with the same n and plane count.
    std::vector<double> decode(std::span<const std::uint8_t> stream, std::int64_t prefix_bits, std::size_t n,
                               int planes) const;

private:
    double scale_;
};

struct ProgressiveSource {
    std::vector<double> samples;
    std::vector<std::uint8_t> bitstream;
    int planes = 0;
    std::int64_t bits = 0;  // n * planes, before byte padding
};

/// n i.i.d. N(0,1) samples from a seeded mt19937_64 (Box-Muller), coded
/// with ceil(max_rate) bit planes.
ProgressiveSource progressive_gaussian_source(std::uint64_t seed, std::size_t n, double max_rate);

/// Mean squared error of the reconstruction from the first `prefix_bits`.
double empirical_mse(const ProgressiveSource& source, std::int64_t prefix_bits,
                     const GaussianBitplaneCoder& coder = GaussianBitplaneCoder());

double mse(std::span<const double> a, std::span<const double> b);

}  // namespace rnf
