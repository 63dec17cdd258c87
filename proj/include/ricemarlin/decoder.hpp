#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "ricemarlin/block.hpp"
#include "ricemarlin/dictionary.hpp"

namespace ricemarlin {

/// Codeword-indexed word table with fixed-width rows.
class DecoderTable {
public:
    explicit DecoderTable(const MarlinDictionary& dict);

    unsigned key_bits() const { return key_bits_; }
    unsigned overlap_bits() const { return overlap_bits_; }
    std::size_t entries() const { return lengths_.size(); }
    std::size_t row_width() const { return row_width_; }
    std::size_t max_word_length() const { return max_length_; }

    std::span<const std::uint8_t> word(std::uint32_t codeword) const {
        return {symbols_.data() + codeword * row_width_, lengths_[codeword]};
    }
    std::uint8_t length(std::uint32_t codeword) const { return lengths_[codeword]; }
    const std::uint8_t* row(std::uint32_t codeword) const { return symbols_.data() + codeword * row_width_; }

private:
    unsigned key_bits_ = 0;
    unsigned overlap_bits_ = 0;
    std::size_t row_width_ = 0;
    std::size_t max_length_ = 0;
    std::vector<std::uint8_t> symbols_;
    std::vector<std::uint8_t> lengths_;
};

DecoderTable build_decoder_table(const MarlinDictionary& dict);

/// Decodes n quotients from a stream of K-bit units, starting from a zero
/// window. Throws CorruptData when the stream runs out or when it holds more
/// units than needed.
std::vector<std::uint8_t> decode_quotients(const DecoderTable& table, std::span<const std::uint8_t> stream,
                                           std::size_t n);

/// Reconstructs the n original bytes of a non-raw block coded with `dict`,
/// or returns the payload of a raw block.
std::vector<std::uint8_t> decode_block(const MarlinDictionary& dict, const DecoderTable& table,
                                       const CompressedBlock& block, std::size_t n);

}  // namespace ricemarlin
