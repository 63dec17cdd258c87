#include "ricemarlin/codec.hpp"

#include <algorithm>
#include <array>

#include "ricemarlin/dictset_io.hpp"
#include "ricemarlin/errors.hpp"

namespace ricemarlin {

BlockCodec::BlockCodec(std::shared_ptr<const DictionarySet> set, Selection selection)
    : set_(std::move(set)), selection_(selection) {
    if (!set_) throw InvalidArgument("codec needs a dictionary set");
    digest_ = dictset_digest(*set_);
    matrix_once_ = std::make_unique<std::once_flag[]>(set_->size());
    table_once_ = std::make_unique<std::once_flag[]>(set_->size());
    matrices_.resize(set_->size());
    tables_.resize(set_->size());
}

const EncoderMatrix& BlockCodec::matrix(std::size_t index) const {
    std::call_once(matrix_once_[index], [&] { matrices_[index] = std::make_unique<EncoderMatrix>((*set_)[index]); });
    return *matrices_[index];
}

const DecoderTable& BlockCodec::table(std::size_t index) const {
    std::call_once(table_once_[index], [&] { tables_[index] = std::make_unique<DecoderTable>((*set_)[index]); });
    return *tables_[index];
}

std::size_t BlockCodec::select(std::span<const std::uint8_t> message) const {
    if (message.empty() || set_->size() == 1) return 0;
    if (selection_ == Selection::Exact)
        return select_dictionary(*set_, empirical_histogram(message), message.size());
    std::array<std::uint32_t, kAlphabetSize> counts{};
    for (auto b : message) ++counts[b];
    return select_dictionary_fast(*set_, counts);
}

CompressedBlock BlockCodec::encode_with(std::size_t index, std::span<const std::uint8_t> message) const {
    if (index >= set_->size()) throw InvalidArgument("dictionary index out of range");
    return encode_block((*set_)[index], matrix(index), static_cast<std::uint8_t>(index), message);
}

CompressedBlock BlockCodec::encode(std::span<const std::uint8_t> message) const {
    return encode_with(select(message), message);
}

std::vector<std::uint8_t> BlockCodec::compress(std::span<const std::uint8_t> message) const {
    return serialize_block(encode(message), message.size());
}

std::vector<std::uint8_t> BlockCodec::decode(const CompressedBlock& block, std::size_t n) const {
    if (block.is_raw()) {
        if (block.raw.size() != n) throw CorruptData("raw block size differs from the original size");
        return block.raw;
    }
    if (block.dict_index >= set_->size()) throw CorruptData("unknown dictionary index");
    return decode_block((*set_)[block.dict_index], table(block.dict_index), block, n);
}

std::vector<std::uint8_t> BlockCodec::decompress(std::span<const std::uint8_t> bytes, std::size_t n) const {
    return decode(parse_block(bytes, n, *set_), n);
}

}  // namespace ricemarlin
