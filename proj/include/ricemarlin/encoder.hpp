#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "ricemarlin/block.hpp"
#include "ricemarlin/dictionary.hpp"

namespace ricemarlin {

/// Prefix tree of a dictionary as a transition matrix with one row per
/// quotient rank and one column per codeword state.
///
/// A cell holds the next state; bit 31 flags that the current state's
/// codeword is emitted before moving. Cells for quotients that cannot follow
/// a state hold kTrap.
class EncoderMatrix {
public:
    static constexpr std::uint32_t kEmit = 0x80000000u;
    static constexpr std::uint32_t kTrap = 0xFFFFFFFFu;

    explicit EncoderMatrix(const MarlinDictionary& dict);

    std::size_t ranks() const { return ranks_; }
    std::size_t states() const { return states_; }
    std::uint32_t cell(std::size_t rank, std::uint32_t state) const { return cells_[rank * states_ + state]; }
    std::span<const std::uint32_t> cells() const { return cells_; }

    /// State for a message whose first quotient has `rank` (chapter 0).
    std::uint32_t initial_state(std::size_t rank) const { return initial_[rank]; }

private:
    std::size_t ranks_ = 0;
    std::size_t states_ = 0;
    std::vector<std::uint32_t> cells_;
    std::vector<std::uint32_t> initial_;
};

EncoderMatrix build_encoder_matrix(const MarlinDictionary& dict);

/// Codewords (the low K bits of each emitted state) for a rank sequence,
/// ending with the flush of the final state. Empty input gives no codewords.
std::vector<std::uint32_t> encode_ranks(const EncoderMatrix& matrix, std::span<const std::uint8_t> ranks,
                                        unsigned key_bits);

/// Three-stage block encoder. Falls back to a raw block when more than 255
/// symbols need escaping or the coded block would not be smaller than 1 + n
/// bytes.
CompressedBlock encode_block(const MarlinDictionary& dict, const EncoderMatrix& matrix, std::uint8_t dict_index,
                             std::span<const std::uint8_t> message);

}  // namespace ricemarlin
