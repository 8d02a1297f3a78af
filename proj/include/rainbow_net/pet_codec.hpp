#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "rainbow_net/pet_profile.hpp"

namespace rnf {

/// One of the K equal-length descriptions of a PET block, with the header
/// needed to decode it alongside its siblings.
struct Description {
    PetProfile profile;
    int index = 1;  // 1..K
    std::vector<std::uint8_t> payload;
};

/// Splits the first profile.source_bits() of `stream` into K segments.
/// Segment i holds i*m_i source bytes (m_i = segment_bytes()[i-1]) laid out
/// as i data rows of m_i bytes; rows i+1..K carry the systematic MDS parity,
/// one codeword per byte column. Description j is row j across all segments.
/// Throws std::invalid_argument if the stream is too short.
std::vector<Description> pet_encode(std::span<const std::uint8_t> stream, const PetProfile& profile);

struct RecoveredPrefix {
    std::vector<std::uint8_t> bytes;
    std::int64_t bits = 0;
    int descriptions = 0;
};

/// Recovers the first recoverable_bits(l) bits of the source stream from any
/// l distinct descriptions of one block. Redundant descriptions are checked
/// against the decoded data; throws DecodeError on mismatched headers,
/// duplicate indices, wrong payload sizes or a failed parity check.
RecoveredPrefix pet_decode(std::span<const Description> subset);

/// Binary description file: "RNF1", K:u8, index:u8, n:u32, r as num:u32
/// den:u32, K x u32 numerators of y over the common denominator n*r, then
/// the payload. Integers are little-endian.
std::vector<std::uint8_t> serialize_description(const Description& d);
Description parse_description(std::span<const std::uint8_t> bytes);

}  // namespace rnf
