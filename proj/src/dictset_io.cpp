#include "ricemarlin/dictset_io.hpp"

#include <array>
#include <fstream>
#include <iterator>
#include <sstream>

#include "le_io.hpp"
#include "ricemarlin/errors.hpp"

namespace ricemarlin {

namespace {

constexpr std::array<std::uint8_t, 4> kMagic{'R', 'M', 'D', 'S'};

}  // namespace

std::vector<std::uint8_t> save_dictset(const DictionarySet& set) {
    std::vector<std::uint8_t> out;
    detail::LeWriter w(out);
    for (auto c : kMagic) w.u8(c);
    w.u8(kDictSetVersion);
    const auto& params = set.params();
    w.u8(static_cast<std::uint8_t>(params.key_bits));
    w.u8(static_cast<std::uint8_t>(params.overlap_bits));
    w.u8(static_cast<std::uint8_t>(params.max_word_length));
    w.u8(static_cast<std::uint8_t>(params.refinement_rounds));
    w.u64(params.block_n);
    w.str(set.metadata_json());
    w.u8(static_cast<std::uint8_t>(set.size()));
    for (const auto& dict : set.dictionaries()) {
        const auto& alphabet = dict.alphabet();
        w.str(dict.source_id());
        w.f64(dict.source_entropy());
        w.u64(dict.nominal_block());
        w.u8(static_cast<std::uint8_t>(alphabet.shift()));
        w.f64(alphabet.threshold());
        w.f64(alphabet.p_escape());
        w.u16(static_cast<std::uint16_t>(alphabet.size()));
        for (const auto& q : alphabet.quotients()) {
            w.u8(q.value);
            w.f64(q.prob);
        }
        w.u8(dict.is_empty_quotient() ? 1 : 0);
        for (const auto& word : dict.words()) {
            w.u8(static_cast<std::uint8_t>(word.symbols.size()));
            w.bytes(word.symbols);
        }
    }
    w.u64(detail::fnv1a64(out));
    return out;
}

DictionarySet load_dictset(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < kMagic.size() + 8) throw CorruptData("dictionary-set file is truncated");
    const auto body = bytes.first(bytes.size() - 8);
    detail::LeReader tail(bytes.last(8), "dictionary-set digest");
    if (tail.u64() != detail::fnv1a64(body)) throw CorruptData("dictionary-set digest mismatch");

    detail::LeReader r(body, "dictionary-set file");
    const auto magic = r.bytes(4);
    if (!std::equal(magic.begin(), magic.end(), kMagic.begin())) throw CorruptData("not a dictionary-set file");
    const auto version = r.u8();
    if (version != kDictSetVersion) {
        std::ostringstream os;
        os << "unsupported dictionary-set version " << unsigned{version};
        throw CorruptData(os.str());
    }
    BuildParams params;
    params.key_bits = r.u8();
    params.overlap_bits = r.u8();
    params.max_word_length = r.u8();
    params.refinement_rounds = r.u8();
    params.block_n = r.u64();
    try {
        validate(params);
    } catch (const InvalidArgument& e) {
        throw CorruptData(std::string("dictionary-set parameters: ") + e.what());
    }
    std::string metadata = r.str();
    const std::size_t count = r.u8();
    if (count == 0) throw CorruptData("dictionary set is empty");

    const std::size_t codewords = std::size_t{1} << (params.key_bits + params.overlap_bits);
    std::vector<MarlinDictionary> dictionaries;
    dictionaries.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        try {
            std::string source_id = r.str();
            const double source_entropy = r.f64();
            const std::size_t block_n = r.u64();
            const unsigned shift = r.u8();
            const double threshold = r.f64();
            const double p_escape = r.f64();
            const std::size_t ranks = r.u16();
            std::vector<RankedQuotient> quotients(ranks);
            for (auto& q : quotients) {
                q.value = r.u8();
                q.prob = r.f64();
            }
            QuotientAlphabet alphabet(shift, std::move(quotients), p_escape, threshold);
            if (r.u8() != 0) {
                dictionaries.push_back(MarlinDictionary::empty_quotient(params.key_bits, params.overlap_bits,
                                                                        std::move(alphabet), std::move(source_id),
                                                                        source_entropy, block_n));
                continue;
            }
            std::vector<std::vector<std::uint8_t>> words(codewords);
            for (auto& word : words) {
                const std::size_t len = r.u8();
                const auto b = r.bytes(len);
                word.assign(b.begin(), b.end());
            }
            dictionaries.push_back(MarlinDictionary::assemble(params.key_bits, params.overlap_bits,
                                                              std::move(alphabet), words, std::move(source_id),
                                                              source_entropy, block_n));
        } catch (const CorruptData&) {
            throw;
        } catch (const Error& e) {
            std::ostringstream os;
            os << "dictionary " << i << " is invalid: " << e.what();
            throw CorruptData(os.str());
        }
    }
    if (r.remaining() != 0) throw CorruptData("trailing data in dictionary-set file");
    return DictionarySet(std::move(dictionaries), params, std::move(metadata));
}

std::uint64_t dictset_digest(const DictionarySet& set) {
    const auto bytes = save_dictset(set);
    detail::LeReader r(std::span<const std::uint8_t>(bytes).last(8), "digest");
    return r.u64();
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path.string());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> data) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot create " + path.string());
    out.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size()));
    if (!out) throw Error("cannot write " + path.string());
}

void save_dictset_file(const DictionarySet& set, const std::filesystem::path& path) {
    write_file(path, save_dictset(set));
}

DictionarySet load_dictset_file(const std::filesystem::path& path) { return load_dictset(read_file(path)); }

}  // namespace ricemarlin
