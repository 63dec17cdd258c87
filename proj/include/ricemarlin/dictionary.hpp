#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ricemarlin/alphabet.hpp"
#include "ricemarlin/source_model.hpp"

namespace ricemarlin {

/// A dictionary word as seen by its chapter.
///
/// `children` is the number k of single-symbol extensions of the word present
/// in the same chapter; they are always the k lowest-ranked quotients.
/// raw_prob is the probability that parsing from the chapter's entry state
/// reads this word as a prefix and emit_prob the probability that longest
/// match parsing emits it: emit_prob = raw_prob * (1 - P(top k quotients)).
struct Word {
    std::vector<std::uint8_t> symbols;  ///< quotient values
    double raw_prob = 0.0;
    std::uint32_t children = 0;
    double emit_prob = 0.0;
};

/// Tree structure of a dictionary indexed by codeword. Holds everything the
/// probability model, the encoder and the decoder need, and nothing that
/// depends on source probabilities.
struct DictionaryShape {
    struct Node {
        std::int32_t parent = -1;  ///< codeword of the prefix, -1 for single-symbol words
        std::uint16_t first_rank = 0;
        std::uint16_t last_rank = 0;
        std::uint16_t length = 0;
        std::uint16_t children = 0;
        std::uint32_t first_child = 0;  ///< offset into child_codes
    };

    unsigned key_bits = 0;
    unsigned overlap_bits = 0;
    std::size_t ranks = 0;  ///< represented quotients

    std::vector<Node> nodes;                ///< 2^N entries
    std::vector<std::uint32_t> child_codes;  ///< children of each word by rank
    std::vector<std::uint32_t> by_length;    ///< codewords, prefixes first
    std::vector<std::int32_t> singles;       ///< [chapter * ranks + rank] -> codeword or -1
    std::vector<std::uint16_t> exclusion;    ///< lowest admissible rank per chapter
    std::size_t max_length = 0;

    std::size_t chapter_count() const { return std::size_t{1} << overlap_bits; }
    std::size_t chapter_size() const { return std::size_t{1} << key_bits; }
    std::uint32_t next_chapter(std::uint32_t codeword) const {
        return codeword & ((1u << overlap_bits) - 1u);
    }
    std::uint32_t chapter_of(std::uint32_t codeword) const { return codeword >> key_bits; }
};

/// Builds and validates a shape from per-codeword rank sequences. Checks that
/// every chapter is prefix closed with distinct words, that its single-symbol
/// words are exactly the ranks >= its exclusion level (0 for chapter 0), that
/// children are contiguous from rank 0, and that every word's child count is
/// at least the exclusion level of its next chapter.
DictionaryShape make_shape(unsigned key_bits, unsigned overlap_bits, std::size_t ranks,
                           const std::vector<std::vector<std::uint16_t>>& rank_words);

/// Stationary behaviour of the parser over (chapter, exclusion) states.
///
/// After emitting a word with k children the next quotient is known not to be
/// among the k most probable; the pair (next chapter, k) is therefore an exact
/// Markov state of longest-match parsing over an i.i.d. quotient source.
struct ChainSolution {
    std::size_t levels = 0;               ///< exclusion levels per chapter (ranks + 1)
    std::vector<double> state_probs;      ///< [chapter * levels + k]
    std::vector<double> chapter_probs;    ///< marginal over chapters
    double mean_word_length = 0.0;        ///< expected symbols per emitted word
    std::size_t iterations = 0;
    double residual = 0.0;
};

struct ChainOptions {
    double tolerance = 1e-12;     ///< L1 change of one step
    std::size_t max_iterations = 100000;
};

/// Power iteration (lazy kernel) from the parser's initial state, chapter 0
/// with nothing excluded, or from `warm_start` when given.
ChainSolution solve_chain(const DictionaryShape& shape, std::span<const double> parse_probs,
                          const ChainOptions& options = {}, const std::vector<double>* warm_start = nullptr);

/// Probability of each admissible first quotient for parsing that starts in
/// `chapter`, mixing the exclusion states that enter it in `solution`.
std::vector<double> chapter_root(const DictionaryShape& shape, const ChainSolution& solution,
                                 std::span<const double> parse_probs, unsigned chapter);

inline std::size_t loc_bytes(std::size_t n) {
    if (n <= (std::size_t{1} << 8)) return 1;
    if (n <= (std::size_t{1} << 16)) return 2;
    if (n <= (std::size_t{1} << 32)) return 4;
    return 8;
}

/// Parameters shared by every dictionary of a set.
struct BuildParams {
    unsigned key_bits = 8;
    unsigned overlap_bits = 4;
    std::size_t block_n = 4096;          ///< nominal block size for the escape cost
    unsigned max_word_length = 64;
    unsigned refinement_rounds = 3;
};

void validate(const BuildParams& params);

/// An immutable Rice-Marlin dictionary: 2^O chapters of 2^K words each, the
/// quotient alphabet it codes, and its probability model under the training
/// source.
///
/// A dictionary whose alphabet has a single quotient is "empty-quotient": it
/// has no words and its blocks carry no quotient section.
class MarlinDictionary {
public:
    /// Assembles a dictionary from explicit words, one rank-free symbol
    /// sequence (quotient values) per codeword, and computes its model.
    static MarlinDictionary assemble(unsigned key_bits, unsigned overlap_bits, QuotientAlphabet alphabet,
                                     const std::vector<std::vector<std::uint8_t>>& words_by_codeword,
                                     std::string source_id, double source_entropy, std::size_t block_n);

    static MarlinDictionary empty_quotient(unsigned key_bits, unsigned overlap_bits, QuotientAlphabet alphabet,
                                           std::string source_id, double source_entropy, std::size_t block_n);

    unsigned key_bits() const { return shape_.key_bits; }
    unsigned overlap_bits() const { return shape_.overlap_bits; }
    unsigned codeword_bits() const { return shape_.key_bits + shape_.overlap_bits; }
    unsigned shift() const { return alphabet_.shift(); }
    const QuotientAlphabet& alphabet() const { return alphabet_; }
    const DictionaryShape& shape() const { return shape_; }

    bool is_empty_quotient() const { return words_.empty(); }

    std::span<const Word> words() const { return words_; }
    const Word& word(std::uint32_t codeword) const { return words_[codeword]; }
    std::span<const Word> chapter(unsigned c) const {
        return std::span<const Word>(words_).subspan(std::size_t{c} << key_bits(), std::size_t{1} << key_bits());
    }
    std::size_t chapter_count() const { return std::size_t{1} << overlap_bits(); }
    std::uint32_t next_chapter(std::uint32_t codeword) const { return shape_.next_chapter(codeword); }
    unsigned chapter_exclusion(unsigned c) const { return is_empty_quotient() ? 0u : shape_.exclusion[c]; }
    std::size_t max_word_length() const { return shape_.max_length; }

    /// Stationary chapter occupancy under the training source.
    std::span<const double> stationary() const { return stationary_; }
    double mean_word_length() const { return mean_word_length_; }

    /// Estimated bits per source symbol under the training source.
    double abr_estimate() const { return abr_; }
    double source_entropy() const { return source_entropy_; }
    double efficiency_estimate() const { return abr_ > 0.0 ? source_entropy_ / abr_ : 1.0; }
    std::size_t nominal_block() const { return block_n_; }
    const std::string& source_id() const { return source_id_; }

private:
    MarlinDictionary() = default;

    QuotientAlphabet alphabet_{0, {{0, 1.0}}, 0.0, 0.0};
    DictionaryShape shape_;
    std::vector<Word> words_;
    std::vector<double> stationary_;
    double mean_word_length_ = 0.0;
    double abr_ = 0.0;
    double source_entropy_ = 0.0;
    std::size_t block_n_ = 0;
    std::string source_id_;
};

/// Words of one chapter grown greedily from `root` (probability of each
/// first rank, zero below `exclusion`): every admissible single-symbol word,
/// then the most probable pending extension until `size` words exist. Each
/// word offers one extension at a time, by its next most probable quotient.
std::vector<Word> grow_chapter(const QuotientAlphabet& alphabet, std::span<const double> root, unsigned exclusion,
                               std::size_t size, unsigned max_word_length);

/// grow_chapter for a chapter whose entry state excludes the `exclusion`
/// most probable quotients.
std::vector<Word> grow_chapter(const QuotientAlphabet& alphabet, unsigned exclusion, std::size_t size,
                               unsigned max_word_length);

/// Codeword within [0, 2^K) for each word of a chapter. Words are ordered by
/// child count (then emission probability) and dealt into the 2^O low-bit
/// groups, 2^(K-O) words per group, so low-child words lead to low chapters.
std::vector<std::uint32_t> assign_codewords(std::span<const Word> chapter, unsigned key_bits,
                                            unsigned overlap_bits);

/// Builds the dictionary for a split alphabet. Throws BuildError when the
/// alphabet does not fit (2^K must exceed the number of quotients).
MarlinDictionary build_dictionary(const QuotientAlphabet& alphabet, const BuildParams& params,
                                  std::string source_id, double source_entropy);

/// Expected bits per symbol when `dict` codes a source `dist` in blocks of
/// `block_n` symbols: K / mean word length + S + escape cost. The word
/// structure is fixed; emission statistics are recomputed under `dist`.
double abr_estimate(const MarlinDictionary& dict, const SymbolDistribution& dist, std::size_t block_n);

/// Stationary chapter occupancy of `dict` under its training source.
std::vector<double> chapter_stationary(const MarlinDictionary& dict);

}  // namespace ricemarlin
