#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace rnf::gf256 {

// Arithmetic in GF(2^8) modulo x^8 + x^4 + x^3 + x^2 + 1 (0x11d).

std::uint8_t add(std::uint8_t a, std::uint8_t b) noexcept;
std::uint8_t mul(std::uint8_t a, std::uint8_t b) noexcept;
/// a / b; b must be nonzero.
std::uint8_t div(std::uint8_t a, std::uint8_t b);
std::uint8_t inv(std::uint8_t a);

/// Row-major square matrix over GF(256).
struct Matrix {
    std::size_t n = 0;
    std::vector<std::uint8_t> a;

    explicit Matrix(std::size_t size = 0) : n(size), a(size * size, 0) {}
    std::uint8_t& at(std::size_t r, std::size_t c) { return a[r * n + c]; }
    std::uint8_t at(std::size_t r, std::size_t c) const { return a[r * n + c]; }
};

/// Gauss-Jordan inverse; nullopt when singular.
std::optional<Matrix> invert(Matrix m);

/// Systematic MDS generator for `data` symbols among `total` shares:
/// row j < data is the unit vector e_j, row j >= data is a Cauchy row
/// 1 / (x_j + y_c) with x_j = j, y_c = c. Any `data` rows are independent.
std::vector<std::uint8_t> generator_row(int data, int row);

}  // namespace rnf::gf256
