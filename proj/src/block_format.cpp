#include <sstream>

#include "ricemarlin/bit_io.hpp"
#include "ricemarlin/block.hpp"
#include "ricemarlin/dictionary_set.hpp"
#include "ricemarlin/errors.hpp"

namespace ricemarlin {

CompressedBlock make_raw_block(std::span<const std::uint8_t> message) {
    CompressedBlock block;
    block.dict_index = kRawBlockIndex;
    block.raw.assign(message.begin(), message.end());
    return block;
}

std::size_t serialized_size(const CompressedBlock& block, std::size_t n) {
    if (block.is_raw()) return 1 + block.raw.size();
    return 2 + block.quotients.size() + block.escapes.size() * (loc_bytes(n) + 1) + block.reminders.size();
}

void serialize_block(const CompressedBlock& block, std::size_t n, std::vector<std::uint8_t>& out) {
    if (block.is_raw()) {
        if (block.raw.size() != n) throw InvalidArgument("raw payload size differs from the block size");
        out.push_back(kRawBlockIndex);
        out.insert(out.end(), block.raw.begin(), block.raw.end());
        return;
    }
    if (block.escapes.size() > 255) throw InvalidArgument("a block holds at most 255 escapes");
    const std::size_t loc = loc_bytes(n);
    out.push_back(block.dict_index);
    out.push_back(static_cast<std::uint8_t>(block.escapes.size()));
    out.insert(out.end(), block.quotients.begin(), block.quotients.end());
    for (const auto& e : block.escapes) {
        if (e.location >= n) throw InvalidArgument("escape location outside the block");
        for (std::size_t b = 0; b < loc; ++b) out.push_back(static_cast<std::uint8_t>(e.location >> (8 * b)));
        out.push_back(e.byte);
    }
    out.insert(out.end(), block.reminders.begin(), block.reminders.end());
}

std::vector<std::uint8_t> serialize_block(const CompressedBlock& block, std::size_t n) {
    std::vector<std::uint8_t> out;
    out.reserve(serialized_size(block, n));
    serialize_block(block, n, out);
    return out;
}

CompressedBlock parse_block(std::span<const std::uint8_t> bytes, std::size_t n, const DictionarySet& set) {
    if (bytes.empty()) throw CorruptData("empty block");
    CompressedBlock block;
    block.dict_index = bytes[0];
    if (block.is_raw()) {
        if (bytes.size() != 1 + n) {
            std::ostringstream os;
            os << "raw block of " << bytes.size() << " bytes cannot hold " << n << " symbols";
            throw CorruptData(os.str());
        }
        block.raw.assign(bytes.begin() + 1, bytes.end());
        return block;
    }
    if (block.dict_index >= set.size()) {
        std::ostringstream os;
        os << "block names dictionary " << unsigned{block.dict_index} << " but the set has " << set.size();
        throw CorruptData(os.str());
    }
    if (bytes.size() < 2) throw CorruptData("truncated block header");
    const std::size_t escapes = bytes[1];
    const std::size_t loc = loc_bytes(n);
    const auto& dict = set[block.dict_index];
    const std::size_t reminder_size = reminder_bytes(n, dict.shift());
    const std::size_t fixed = 2 + escapes * (loc + 1) + reminder_size;
    if (bytes.size() < fixed) throw CorruptData("block too short for its escape and reminder sections");
    const std::size_t quotient_size = bytes.size() - fixed;
    if (dict.is_empty_quotient() && quotient_size != 0)
        throw CorruptData("quotient section present for an empty-quotient dictionary");

    std::size_t pos = 2;
    block.quotients.assign(bytes.begin() + pos, bytes.begin() + pos + quotient_size);
    pos += quotient_size;
    block.escapes.reserve(escapes);
    for (std::size_t i = 0; i < escapes; ++i) {
        std::uint64_t location = 0;
        for (std::size_t b = 0; b < loc; ++b) location |= std::uint64_t{bytes[pos + b]} << (8 * b);
        pos += loc;
        if (location >= n) throw CorruptData("escape location outside the block");
        if (!block.escapes.empty() && location <= block.escapes.back().location)
            throw CorruptData("escape locations are not strictly ascending");
        block.escapes.push_back({location, bytes[pos++]});
    }
    block.reminders.assign(bytes.begin() + pos, bytes.end());
    return block;
}

}  // namespace ricemarlin
