#include "ricemarlin/encoder.hpp"

#include <array>

#include "ricemarlin/bit_io.hpp"
#include "ricemarlin/dictionary_set.hpp"
#include "ricemarlin/errors.hpp"

namespace ricemarlin {

EncoderMatrix::EncoderMatrix(const MarlinDictionary& dict) {
    if (dict.is_empty_quotient()) return;
    const auto& shape = dict.shape();
    ranks_ = shape.ranks;
    states_ = shape.nodes.size();
    cells_.assign(ranks_ * states_, kTrap);
    for (std::uint32_t s = 0; s < states_; ++s) {
        const auto& node = shape.nodes[s];
        const std::size_t next = shape.next_chapter(s);
        for (std::size_t a = 0; a < ranks_; ++a) {
            std::uint32_t& cell = cells_[a * states_ + s];
            if (a < node.children) {
                cell = shape.child_codes[node.first_child + a];
            } else {
                const std::int32_t single = shape.singles[next * ranks_ + a];
                if (single >= 0) cell = static_cast<std::uint32_t>(single) | kEmit;
            }
        }
    }
    initial_.resize(ranks_);
    for (std::size_t a = 0; a < ranks_; ++a) initial_[a] = static_cast<std::uint32_t>(shape.singles[a]);
}

EncoderMatrix build_encoder_matrix(const MarlinDictionary& dict) { return EncoderMatrix(dict); }

namespace {

template <typename Emit>
void walk(const EncoderMatrix& matrix, std::span<const std::uint8_t> ranks, Emit&& emit) {
    if (ranks.empty()) return;
    const std::uint32_t* cells = matrix.cells().data();
    const std::size_t states = matrix.states();
    std::uint32_t state = matrix.initial_state(ranks[0]);
    for (std::size_t i = 1; i < ranks.size(); ++i) {
        const std::uint32_t cell = cells[ranks[i] * states + state];
        if (cell == EncoderMatrix::kTrap) [[unlikely]]
            throw std::logic_error("encoder reached a trap cell");
        if (cell & EncoderMatrix::kEmit) emit(state);
        state = cell & ~EncoderMatrix::kEmit;
    }
    emit(state);
}

}  // namespace

std::vector<std::uint32_t> encode_ranks(const EncoderMatrix& matrix, std::span<const std::uint8_t> ranks,
                                        unsigned key_bits) {
    std::vector<std::uint32_t> out;
    const std::uint32_t mask = (1u << key_bits) - 1u;
    walk(matrix, ranks, [&](std::uint32_t state) { out.push_back(state & mask); });
    return out;
}

CompressedBlock encode_block(const MarlinDictionary& dict, const EncoderMatrix& matrix, std::uint8_t dict_index,
                             std::span<const std::uint8_t> message) {
    if (dict_index == kRawBlockIndex) throw InvalidArgument("dictionary index 255 is reserved for raw blocks");
    const std::size_t n = message.size();
    const auto& alphabet = dict.alphabet();
    CompressedBlock block;
    block.dict_index = dict_index;

    // Stage 2 first: escapes decide whether coding is possible at all.
    for (std::size_t i = 0; i < n; ++i)
        if (alphabet.is_excluded(message[i])) {
            if (block.escapes.size() == 255) return make_raw_block(message);
            block.escapes.push_back({i, message[i]});
        }

    // Stage 1: quotients, escaped ones replaced by the placeholder (rank 0).
    if (!dict.is_empty_quotient() && n > 0) {
        std::array<std::uint8_t, kAlphabetSize> rank_of{};
        for (std::size_t x = 0; x < kAlphabetSize; ++x)
            rank_of[x] = static_cast<std::uint8_t>(alphabet.parse_rank(static_cast<std::uint8_t>(x)));
        std::vector<std::uint8_t> ranks(n);
        for (std::size_t i = 0; i < n; ++i) ranks[i] = rank_of[message[i]];

        const unsigned K = dict.key_bits();
        const std::uint32_t mask = (1u << K) - 1u;
        block.quotients.reserve(n * K / 8 / 2 + 16);
        if (K == 8) {
            walk(matrix, ranks, [&](std::uint32_t state) { block.quotients.push_back(static_cast<std::uint8_t>(state)); });
        } else {
            BitWriter writer(block.quotients);
            walk(matrix, ranks, [&](std::uint32_t state) { writer.put(state & mask, K); });
            writer.finish();
        }
    }

    // Stage 3: reminders of the original bytes.
    block.reminders = pack_reminders(message, dict.shift());

    if (n > 0 && serialized_size(block, n) >= 1 + n) return make_raw_block(message);
    return block;
}

}  // namespace ricemarlin
