#include <doctest.h>

#include <algorithm>
#include <random>

#include "rainbow_net/errors.hpp"
#include "rainbow_net/gf256.hpp"
#include "rainbow_net/pet_codec.hpp"
#include "rainbow_net/pet_profile.hpp"

using namespace rnf;

namespace {

std::vector<std::uint8_t> random_bytes(std::mt19937_64& rng, std::size_t n) {
    std::vector<std::uint8_t> v(n);
    for (auto& b : v) b = static_cast<std::uint8_t>(rng());
    return v;
}

std::vector<Description> pick(const std::vector<Description>& all, std::initializer_list<int> idx) {
    std::vector<Description> out;
    for (int i : idx) out.push_back(all[static_cast<std::size_t>(i - 1)]);
    return out;
}

bool is_prefix(const std::vector<std::uint8_t>& prefix, const std::vector<std::uint8_t>& stream) {
    return prefix.size() <= stream.size() && std::equal(prefix.begin(), prefix.end(), stream.begin());
}

}  // namespace

TEST_CASE("field arithmetic") {
    for (int a = 1; a < 256; ++a) {
        const auto x = static_cast<std::uint8_t>(a);
        CHECK(gf256::mul(x, gf256::inv(x)) == 1);
        CHECK(gf256::div(gf256::mul(x, 0x53), 0x53) == x);
    }
    CHECK(gf256::mul(0x80, 0x02) == 0x1d);
    CHECK(gf256::add(0x0f, 0xf0) == 0xff);
    gf256::Matrix singular(2);
    singular.at(0, 0) = singular.at(0, 1) = singular.at(1, 0) = singular.at(1, 1) = 7;
    CHECK_FALSE(gf256::invert(singular).has_value());
}

TEST_CASE("every square submatrix of the generator is invertible") {
    for (int data = 1; data <= 5; ++data)
        for (int total = data; total <= 6; ++total) {
            std::vector<int> rows(static_cast<std::size_t>(total));
            for (int i = 0; i < total; ++i) rows[static_cast<std::size_t>(i)] = i;
            std::vector<bool> chosen(static_cast<std::size_t>(total), false);
            std::fill(chosen.begin(), chosen.begin() + data, true);
            do {
                gf256::Matrix m(static_cast<std::size_t>(data));
                std::size_t r = 0;
                for (int i = 0; i < total; ++i) {
                    if (!chosen[static_cast<std::size_t>(i)]) continue;
                    const auto row = gf256::generator_row(data, i);
                    for (std::size_t c = 0; c < row.size(); ++c) m.at(r, c) = row[c];
                    ++r;
                }
                CHECK(gf256::invert(m).has_value());
            } while (std::prev_permutation(chosen.begin(), chosen.end()));
        }
}

TEST_CASE("profile quantization") {
    const std::vector<double> y{0.5, 0.3, 0.2};
    const PetProfile p = PetProfile::quantize(std::span<const double>(y), Rational(1), 80);
    CHECK(p.description_bytes() == 10);
    CHECK(p.segment_bytes() == std::vector<std::int64_t>{5, 3, 2});
    const std::vector<double> third{1.0, 1.0, 1.0};
    const PetProfile q = PetProfile::quantize(std::span<const double>(third), Rational(1), 24);
    CHECK(q.segment_bytes() == std::vector<std::int64_t>{1, 1, 1});
    CHECK(q.recoverable_bits(1) == 8);
    CHECK(q.recoverable_bits(2) == 24);
    CHECK(q.recoverable_bits(3) == 48);
    const std::vector<double> odd{1.0, 1.0};
    const PetProfile r = PetProfile::quantize(std::span<const double>(odd), Rational(1), 24);
    std::int64_t sum = 0;
    for (auto b : r.segment_bytes()) sum += b;
    CHECK(sum == 3);
    CHECK(r.segment_bytes() == std::vector<std::int64_t>{1, 2});
    CHECK_THROWS_AS(PetProfile::quantize(std::span<const double>(odd), Rational(1), 12), std::invalid_argument);
    const std::vector<double> neg{1.5, -0.5};
    CHECK_THROWS_AS(PetProfile::quantize(std::span<const double>(neg), Rational(1), 16), std::invalid_argument);
    CHECK_THROWS_AS(PetProfile::from_segment_bytes({1, 1}, Rational(1), 8), std::invalid_argument);
}

TEST_CASE("repetition and full-rate extremes") {
    std::mt19937_64 rng(1);
    const auto stream = random_bytes(rng, 64);
    const PetProfile rep = PetProfile::from_segment_bytes({16, 0}, Rational(1), 128);
    const auto d = pet_encode(stream, rep);
    REQUIRE(d.size() == 2);
    CHECK(d[0].payload == d[1].payload);
    CHECK(rep.recoverable_bits(1) == 128);
    CHECK(rep.recoverable_bits(2) == 128);
    const RecoveredPrefix one = pet_decode(pick(d, {2}));
    CHECK(one.bits == 128);
    CHECK(is_prefix(one.bytes, stream));
    CHECK(one.bytes.size() == 16);

    const PetProfile full = PetProfile::from_segment_bytes({0, 16}, Rational(1), 128);
    const auto e = pet_encode(stream, full);
    CHECK(pet_decode(pick(e, {1})).bits == 0);
    CHECK(pet_decode(pick(e, {2})).bytes.empty());
    const RecoveredPrefix both = pet_decode(pick(e, {2, 1}));
    CHECK(both.bits == 256);
    CHECK(both.bytes == std::vector<std::uint8_t>(stream.begin(), stream.begin() + 32));
    CHECK(pet_decode(std::span<const Description>()).bits == 0);
}

TEST_CASE("balance over every subset") {
    std::mt19937_64 rng(2);
    for (int k = 1; k <= 5; ++k)
        for (int trial = 0; trial < 5; ++trial) {
            std::vector<std::int64_t> bytes(static_cast<std::size_t>(k), 0);
            for (int b = 0; b < 40; ++b) ++bytes[rng() % static_cast<std::size_t>(k)];
            const PetProfile p = PetProfile::from_segment_bytes(bytes, Rational(1, 2), 640);
            const auto stream = random_bytes(rng, static_cast<std::size_t>(p.source_bits() / 8));
            const auto all = pet_encode(stream, p);
            for (const Description& d : all) CHECK(d.payload.size() == 40);
            std::vector<std::uint8_t> previous;
            for (std::uint32_t mask = 0; mask < (1u << k); ++mask) {
                std::vector<Description> subset;
                for (int i = 0; i < k; ++i)
                    if (mask >> i & 1u) subset.push_back(all[static_cast<std::size_t>(i)]);
                std::shuffle(subset.begin(), subset.end(), rng);
                const int l = static_cast<int>(subset.size());
                const RecoveredPrefix got = pet_decode(subset);
                CHECK(got.descriptions == l);
                CHECK(got.bits == p.recoverable_bits(l));
                CHECK(static_cast<std::int64_t>(got.bytes.size()) * 8 == got.bits);
                CHECK(is_prefix(got.bytes, stream));
            }
        }
}

TEST_CASE("corruption and header mismatch are detected") {
    std::mt19937_64 rng(4);
    const PetProfile p = PetProfile::from_segment_bytes({2, 3, 3}, Rational(1), 64);
    const auto stream = random_bytes(rng, static_cast<std::size_t>(p.source_bits() / 8));
    auto all = pet_encode(stream, p);
    auto tampered = all;
    tampered[2].payload[0] ^= 0x40;
    CHECK_THROWS_AS(pet_decode(tampered), DecodeError);
    CHECK_THROWS_AS(pet_decode(pick(all, {1, 1})), DecodeError);
    auto other = all;
    other[1].profile = PetProfile::from_segment_bytes({8, 0, 0}, Rational(1), 64);
    CHECK_THROWS_AS(pet_decode(other), DecodeError);
    auto shorter = all;
    shorter[0].payload.pop_back();
    CHECK_THROWS_AS(pet_decode(shorter), DecodeError);
    const std::vector<std::uint8_t> too_short(3);
    CHECK_THROWS_AS(pet_encode(too_short, p), std::invalid_argument);
}

TEST_CASE("description file round trip") {
    std::mt19937_64 rng(6);
    const PetProfile p = PetProfile::from_segment_bytes({1, 2, 3}, Rational(3, 2), 32);
    const auto stream = random_bytes(rng, static_cast<std::size_t>(p.source_bits() / 8));
    const auto all = pet_encode(stream, p);
    const auto bytes = serialize_description(all[1]);
    CHECK(std::string(bytes.begin(), bytes.begin() + 4) == "RNF1");
    CHECK(bytes[4] == 3);
    CHECK(bytes[5] == 2);
    CHECK(bytes[6] == 32);
    CHECK(bytes.size() == 4 + 2 + 4 + 8 + 3 * 4 + all[1].payload.size());
    const Description back = parse_description(bytes);
    CHECK(back.index == 2);
    CHECK(back.profile == p);
    CHECK(back.payload == all[1].payload);
    auto bad = bytes;
    bad[0] = 'X';
    CHECK_THROWS_AS(parse_description(bad), DecodeError);
    bad = bytes;
    bad.pop_back();
    CHECK_THROWS_AS(parse_description(bad), DecodeError);
}
