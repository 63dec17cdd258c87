#include "ricemarlin/decoder.hpp"

#include <algorithm>
#include <cstring>
#include <sstream>

#include "ricemarlin/bit_io.hpp"
#include "ricemarlin/errors.hpp"

namespace ricemarlin {

DecoderTable::DecoderTable(const MarlinDictionary& dict)
    : key_bits_(dict.key_bits()), overlap_bits_(dict.overlap_bits()) {
    if (dict.is_empty_quotient()) return;
    max_length_ = dict.max_word_length();
    if (max_length_ > 255) throw InvalidArgument("decoder rows hold at most 255 symbols");
    row_width_ = std::max<std::size_t>(8, (max_length_ + 7) / 8 * 8);
    const auto words = dict.words();
    symbols_.assign(words.size() * row_width_, 0);
    lengths_.resize(words.size());
    for (std::size_t cw = 0; cw < words.size(); ++cw) {
        std::copy(words[cw].symbols.begin(), words[cw].symbols.end(), symbols_.begin() + cw * row_width_);
        lengths_[cw] = static_cast<std::uint8_t>(words[cw].symbols.size());
    }
}

DecoderTable build_decoder_table(const MarlinDictionary& dict) { return DecoderTable(dict); }

std::vector<std::uint8_t> decode_quotients(const DecoderTable& table, std::span<const std::uint8_t> stream,
                                           std::size_t n) {
    if (n == 0) {
        if (!stream.empty()) throw CorruptData("quotient data present for an empty block");
        return {};
    }
    if (table.entries() == 0) throw InvalidArgument("decoder table is empty");
    const unsigned K = table.key_bits();
    const std::uint32_t window_mask = (1u << table.overlap_bits()) - 1u;
    const std::size_t width = table.row_width();

    std::vector<std::uint8_t> out(n + width);
    std::uint8_t* dst = out.data();
    std::size_t produced = 0;
    std::uint32_t window = 0;
    std::size_t units = 0;
    if (K == 8) {
        const std::size_t available = stream.size();
        while (produced < n) {
            if (units >= available) throw CorruptData("quotient stream exhausted");
            const std::uint32_t cw = (window << 8) | stream[units++];
            std::memcpy(dst + produced, table.row(cw), width);
            produced += table.length(cw);
            window = cw & window_mask;
        }
    } else {
        BitReader reader(stream);
        while (produced < n) {
            const std::uint32_t cw = (window << K) | reader.get(K);
            ++units;
            std::memcpy(dst + produced, table.row(cw), width);
            produced += table.length(cw);
            window = cw & window_mask;
        }
    }
    const std::size_t expected = (units * K + 7) / 8;
    if (expected != stream.size()) {
        std::ostringstream os;
        os << "quotient section holds " << stream.size() << " bytes but decoding used " << expected;
        throw CorruptData(os.str());
    }
    out.resize(n);
    return out;
}

std::vector<std::uint8_t> decode_block(const MarlinDictionary& dict, const DecoderTable& table,
                                       const CompressedBlock& block, std::size_t n) {
    if (block.is_raw()) {
        if (block.raw.size() != n) throw CorruptData("raw block size differs from the original size");
        return block.raw;
    }
    const unsigned S = dict.shift();
    std::vector<std::uint8_t> out;
    if (dict.is_empty_quotient()) {
        if (!block.quotients.empty()) throw CorruptData("quotient data for an empty-quotient dictionary");
        out.assign(n, dict.alphabet().placeholder());
    } else {
        out = decode_quotients(table, block.quotients, n);
    }

    if (S > 0) {
        const auto reminders = unpack_reminders(block.reminders, n, S);
        for (std::size_t i = 0; i < n; ++i) out[i] = join_quotient(out[i], reminders[i], S);
    } else if (!block.reminders.empty()) {
        throw CorruptData("reminder data for a zero shift");
    }

    for (const auto& e : block.escapes) {
        if (e.location >= n) throw CorruptData("escape location outside the block");
        out[e.location] = e.byte;
    }
    return out;
}

}  // namespace ricemarlin
