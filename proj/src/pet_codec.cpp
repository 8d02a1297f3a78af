#include "rainbow_net/pet_codec.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <string>

#include "rainbow_net/errors.hpp"
#include "rainbow_net/gf256.hpp"

namespace rnf {

namespace {

std::vector<std::int64_t> segment_offsets(const PetProfile& profile) {
    std::vector<std::int64_t> offsets{0};
    for (std::int64_t b : profile.segment_bytes()) offsets.push_back(offsets.back() + b);
    return offsets;
}

}  // namespace

std::vector<Description> pet_encode(std::span<const std::uint8_t> stream, const PetProfile& profile) {
    const int k = profile.description_count();
    const std::int64_t needed = profile.source_bits() / 8;
    if (static_cast<std::int64_t>(stream.size()) < needed)
        throw std::invalid_argument("source stream has " + std::to_string(stream.size()) + " bytes, profile needs " +
                                    std::to_string(needed));

    std::vector<Description> out;
    for (int j = 1; j <= k; ++j)
        out.push_back({profile, j, std::vector<std::uint8_t>(static_cast<std::size_t>(profile.description_bytes()), 0)});

    const auto offsets = segment_offsets(profile);
    std::int64_t source = 0;
    for (int i = 1; i <= k; ++i) {
        const std::int64_t width = profile.segment_bytes()[static_cast<std::size_t>(i - 1)];
        const std::int64_t col0 = offsets[static_cast<std::size_t>(i - 1)];
        for (int row = 0; row < i; ++row)
            for (std::int64_t c = 0; c < width; ++c)
                out[static_cast<std::size_t>(row)].payload[static_cast<std::size_t>(col0 + c)] =
                    stream[static_cast<std::size_t>(source + row * width + c)];
        for (int row = i; row < k; ++row) {
            const auto coeffs = gf256::generator_row(i, row);
            auto& dst = out[static_cast<std::size_t>(row)].payload;
            for (std::int64_t c = 0; c < width; ++c) {
                std::uint8_t acc = 0;
                for (int d = 0; d < i; ++d)
                    acc ^= gf256::mul(coeffs[static_cast<std::size_t>(d)],
                                      stream[static_cast<std::size_t>(source + d * width + c)]);
                dst[static_cast<std::size_t>(col0 + c)] = acc;
            }
        }
        source += i * width;
    }
    return out;
}

RecoveredPrefix pet_decode(std::span<const Description> subset) {
    RecoveredPrefix result;
    if (subset.empty()) return result;

    const PetProfile& profile = subset.front().profile;
    const int k = profile.description_count();
    std::vector<const Description*> got;
    for (const Description& d : subset) {
        if (!(d.profile == profile)) throw DecodeError("descriptions come from different code profiles");
        if (d.index < 1 || d.index > k) throw DecodeError("description index " + std::to_string(d.index) + " outside 1..K");
        if (static_cast<std::int64_t>(d.payload.size()) != profile.description_bytes())
            throw DecodeError("description " + std::to_string(d.index) + " has the wrong payload size");
        got.push_back(&d);
    }
    std::sort(got.begin(), got.end(), [](const Description* a, const Description* b) { return a->index < b->index; });
    for (std::size_t i = 1; i < got.size(); ++i)
        if (got[i]->index == got[i - 1]->index) throw DecodeError("duplicate description " + std::to_string(got[i]->index));

    const int l = static_cast<int>(got.size());
    const auto offsets = segment_offsets(profile);
    result.descriptions = l;
    result.bits = profile.recoverable_bits(l);
    result.bytes.reserve(static_cast<std::size_t>(result.bits / 8));

    for (int i = 1; i <= l; ++i) {
        const std::int64_t width = profile.segment_bytes()[static_cast<std::size_t>(i - 1)];
        if (width == 0) continue;
        const std::int64_t col0 = offsets[static_cast<std::size_t>(i - 1)];
        const auto ui = static_cast<std::size_t>(i);

        // The first i received rows determine the segment.
        gf256::Matrix g(ui);
        for (std::size_t r = 0; r < ui; ++r) {
            const auto row = gf256::generator_row(i, got[r]->index - 1);
            for (std::size_t c = 0; c < ui; ++c) g.at(r, c) = row[c];
        }
        const auto ginv = gf256::invert(g);
        if (!ginv) throw DecodeError("singular decoding matrix");

        std::vector<std::vector<std::uint8_t>> data(ui, std::vector<std::uint8_t>(static_cast<std::size_t>(width)));
        for (std::int64_t c = 0; c < width; ++c) {
            for (std::size_t d = 0; d < ui; ++d) {
                std::uint8_t acc = 0;
                for (std::size_t r = 0; r < ui; ++r)
                    acc ^= gf256::mul(ginv->at(d, r), got[r]->payload[static_cast<std::size_t>(col0 + c)]);
                data[d][static_cast<std::size_t>(c)] = acc;
            }
        }

        for (std::size_t r = ui; r < got.size(); ++r) {
            const auto row = gf256::generator_row(i, got[r]->index - 1);
            for (std::int64_t c = 0; c < width; ++c) {
                std::uint8_t acc = 0;
                for (std::size_t d = 0; d < ui; ++d) acc ^= gf256::mul(row[d], data[d][static_cast<std::size_t>(c)]);
                if (acc != got[r]->payload[static_cast<std::size_t>(col0 + c)])
                    throw DecodeError("parity check failed in segment " + std::to_string(i) + " of description " +
                                      std::to_string(got[r]->index));
            }
        }
        for (const auto& row : data) result.bytes.insert(result.bytes.end(), row.begin(), row.end());
    }
    return result;
}

namespace {

void put_u32(std::vector<std::uint8_t>& out, std::uint64_t v) {
    if (v > std::numeric_limits<std::uint32_t>::max()) throw std::invalid_argument("header field exceeds 32 bits");
    for (int s = 0; s < 32; s += 8) out.push_back(static_cast<std::uint8_t>(v >> s));
}

std::uint32_t get_u32(std::span<const std::uint8_t> in, std::size_t at) {
    std::uint32_t v = 0;
    for (int s = 0; s < 4; ++s) v |= static_cast<std::uint32_t>(in[at + static_cast<std::size_t>(s)]) << (8 * s);
    return v;
}

}  // namespace

std::vector<std::uint8_t> serialize_description(const Description& d) {
    const PetProfile& p = d.profile;
    if (p.rate().is_negative()) throw std::invalid_argument("negative rate");
    std::vector<std::uint8_t> out{'R', 'N', 'F', '1'};
    out.push_back(static_cast<std::uint8_t>(p.description_count()));
    out.push_back(static_cast<std::uint8_t>(d.index));
    put_u32(out, static_cast<std::uint64_t>(p.block_length()));
    put_u32(out, static_cast<std::uint64_t>(p.rate().num()));
    put_u32(out, static_cast<std::uint64_t>(p.rate().den()));
    for (std::int64_t b : p.segment_bytes()) put_u32(out, static_cast<std::uint64_t>(8 * b));
    out.insert(out.end(), d.payload.begin(), d.payload.end());
    return out;
}

Description parse_description(std::span<const std::uint8_t> bytes) {
    constexpr std::size_t kFixed = 4 + 1 + 1 + 4 + 4 + 4;
    if (bytes.size() < kFixed || bytes[0] != 'R' || bytes[1] != 'N' || bytes[2] != 'F' || bytes[3] != '1')
        throw DecodeError("not a description file (bad magic)");
    const int k = bytes[4];
    const int index = bytes[5];
    const std::uint32_t n = get_u32(bytes, 6);
    const std::uint32_t rnum = get_u32(bytes, 10);
    const std::uint32_t rden = get_u32(bytes, 14);
    if (k < 1 || rden == 0 || n == 0) throw DecodeError("corrupt description header");
    const std::size_t header = kFixed + 4 * static_cast<std::size_t>(k);
    if (bytes.size() < header) throw DecodeError("truncated description header");
    std::vector<std::int64_t> segments;
    for (int i = 0; i < k; ++i) {
        const std::uint32_t bits = get_u32(bytes, kFixed + 4 * static_cast<std::size_t>(i));
        if (bits % 8 != 0) throw DecodeError("segment size is not byte aligned");
        segments.push_back(bits / 8);
    }
    try {
        PetProfile profile = PetProfile::from_segment_bytes(std::move(segments), Rational(rnum, rden), n);
        Description d{std::move(profile), index, {bytes.begin() + static_cast<std::ptrdiff_t>(header), bytes.end()}};
        if (static_cast<std::int64_t>(d.payload.size()) != d.profile.description_bytes())
            throw DecodeError("payload length does not match header");
        return d;
    } catch (const std::invalid_argument& e) {
        throw DecodeError(std::string("inconsistent description header: ") + e.what());
    }
}

}  // namespace rnf
