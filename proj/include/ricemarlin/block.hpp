#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace ricemarlin {

class DictionarySet;

struct Escape {
    std::uint64_t location;
    std::uint8_t byte;

    friend bool operator==(const Escape&, const Escape&) = default;
};

/// One compressed block. dict_index 255 marks a raw block whose payload is
/// held in `raw`; the other fields are then empty.
struct CompressedBlock {
    std::uint8_t dict_index = 0;
    std::vector<std::uint8_t> quotients;  ///< K-bit codewords packed MSB first
    std::vector<Escape> escapes;          ///< ascending locations
    std::vector<std::uint8_t> reminders;  ///< n * S bits packed MSB first
    std::vector<std::uint8_t> raw;

    bool is_raw() const { return dict_index == 255; }
    friend bool operator==(const CompressedBlock&, const CompressedBlock&) = default;
};

CompressedBlock make_raw_block(std::span<const std::uint8_t> message);

/// Serialized length of `block` for an original size of n symbols.
std::size_t serialized_size(const CompressedBlock& block, std::size_t n);

/// Wire layout: #D | #U | quotients | #U x (location, byte) | reminders, with
/// locations little-endian in loc_bytes(n) bytes; or 255 | raw bytes.
std::vector<std::uint8_t> serialize_block(const CompressedBlock& block, std::size_t n);
void serialize_block(const CompressedBlock& block, std::size_t n, std::vector<std::uint8_t>& out);

/// Inverse of serialize_block given the out-of-band original size n. Section
/// boundaries come from the size arithmetic and the shift of dictionary #D.
/// Throws CorruptData on any inconsistency.
CompressedBlock parse_block(std::span<const std::uint8_t> bytes, std::size_t n, const DictionarySet& set);

}  // namespace ricemarlin
