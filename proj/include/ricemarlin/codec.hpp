#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <mutex>
#include <span>
#include <vector>

#include "ricemarlin/block.hpp"
#include "ricemarlin/decoder.hpp"
#include "ricemarlin/dictionary_set.hpp"
#include "ricemarlin/encoder.hpp"

namespace ricemarlin {

enum class Selection {
    Fast,   ///< per-byte cost model over the block histogram
    Exact,  ///< abr_estimate under the block histogram
};

/// Encodes and decodes single blocks against a dictionary set. Encoder
/// matrices and decoder tables are built on first use; a codec may be shared
/// by concurrent threads.
class BlockCodec {
public:
    explicit BlockCodec(std::shared_ptr<const DictionarySet> set, Selection selection = Selection::Fast);

    const DictionarySet& set() const { return *set_; }
    std::uint64_t set_digest() const { return digest_; }

    std::size_t select(std::span<const std::uint8_t> message) const;

    CompressedBlock encode(std::span<const std::uint8_t> message) const;
    CompressedBlock encode_with(std::size_t index, std::span<const std::uint8_t> message) const;

    /// encode + serialize_block.
    std::vector<std::uint8_t> compress(std::span<const std::uint8_t> message) const;

    /// parse_block + decode for an original size of n symbols.
    std::vector<std::uint8_t> decompress(std::span<const std::uint8_t> bytes, std::size_t n) const;
    std::vector<std::uint8_t> decode(const CompressedBlock& block, std::size_t n) const;

    const EncoderMatrix& matrix(std::size_t index) const;
    const DecoderTable& table(std::size_t index) const;

private:
    std::shared_ptr<const DictionarySet> set_;
    Selection selection_;
    std::uint64_t digest_;
    std::unique_ptr<std::once_flag[]> matrix_once_;
    std::unique_ptr<std::once_flag[]> table_once_;
    mutable std::vector<std::unique_ptr<EncoderMatrix>> matrices_;
    mutable std::vector<std::unique_ptr<DecoderTable>> tables_;
};

}  // namespace ricemarlin
