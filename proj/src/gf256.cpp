#include "rainbow_net/gf256.hpp"

#include <array>
#include <stdexcept>

namespace rnf::gf256 {

namespace {

struct Tables {
    std::array<std::uint8_t, 512> exp{};
    std::array<int, 256> log{};

    Tables() {
        unsigned x = 1;
        for (int i = 0; i < 255; ++i) {
            exp[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(x);
            log[x] = i;
            x <<= 1;
            if (x & 0x100u) x ^= 0x11du;
        }
        for (int i = 255; i < 512; ++i) exp[static_cast<std::size_t>(i)] = exp[static_cast<std::size_t>(i - 255)];
        log[0] = -1;
    }
};

const Tables& tables() {
    static const Tables t;
    return t;
}

}  // namespace

std::uint8_t add(std::uint8_t a, std::uint8_t b) noexcept { return a ^ b; }

std::uint8_t mul(std::uint8_t a, std::uint8_t b) noexcept {
    if (a == 0 || b == 0) return 0;
    const Tables& t = tables();
    return t.exp[static_cast<std::size_t>(t.log[a] + t.log[b])];
}

std::uint8_t div(std::uint8_t a, std::uint8_t b) {
    if (b == 0) throw std::domain_error("GF(256) division by zero");
    if (a == 0) return 0;
    const Tables& t = tables();
    return t.exp[static_cast<std::size_t>(t.log[a] + 255 - t.log[b])];
}

std::uint8_t inv(std::uint8_t a) { return div(1, a); }

std::optional<Matrix> invert(Matrix m) {
    const std::size_t n = m.n;
    Matrix out(n);
    for (std::size_t i = 0; i < n; ++i) out.at(i, i) = 1;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        while (pivot < n && m.at(pivot, col) == 0) ++pivot;
        if (pivot == n) return std::nullopt;
        if (pivot != col) {
            for (std::size_t c = 0; c < n; ++c) {
                std::swap(m.at(pivot, c), m.at(col, c));
                std::swap(out.at(pivot, c), out.at(col, c));
            }
        }
        const std::uint8_t scale = inv(m.at(col, col));
        for (std::size_t c = 0; c < n; ++c) {
            m.at(col, c) = mul(m.at(col, c), scale);
            out.at(col, c) = mul(out.at(col, c), scale);
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col || m.at(r, col) == 0) continue;
            const std::uint8_t f = m.at(r, col);
            for (std::size_t c = 0; c < n; ++c) {
                m.at(r, c) ^= mul(f, m.at(col, c));
                out.at(r, c) ^= mul(f, out.at(col, c));
            }
        }
    }
    return out;
}

std::vector<std::uint8_t> generator_row(int data, int row) {
    if (data < 1 || row < 0 || row > 255) throw std::out_of_range("generator row outside the field");
    std::vector<std::uint8_t> r(static_cast<std::size_t>(data), 0);
    if (row < data) {
        r[static_cast<std::size_t>(row)] = 1;
        return r;
    }
    // x_row = row (>= data) and y_c = c (< data) never coincide.
    for (int c = 0; c < data; ++c) r[static_cast<std::size_t>(c)] = inv(static_cast<std::uint8_t>(row ^ c));
    return r;
}

}  // namespace rnf::gf256
