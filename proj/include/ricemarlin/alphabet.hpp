#pragma once

#include <array>
#include <bitset>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "ricemarlin/source_model.hpp"

namespace ricemarlin {

inline constexpr unsigned kMaxShift = 8;

/// High part of x after removing `shift` reminder bits.
constexpr std::uint8_t quotient_of(std::uint8_t x, unsigned shift) {
    return shift >= 8 ? std::uint8_t{0} : static_cast<std::uint8_t>(x >> shift);
}

/// The `shift` least significant bits of x.
constexpr std::uint8_t reminder_of(std::uint8_t x, unsigned shift) {
    return shift >= 8 ? x : static_cast<std::uint8_t>(x & ((1u << shift) - 1u));
}

/// Inverse of the quotient/reminder split.
constexpr std::uint8_t join_quotient(std::uint8_t q, std::uint8_t r, unsigned shift) {
    return shift >= 8 ? r : static_cast<std::uint8_t>((static_cast<unsigned>(q) << shift) | r);
}

struct RankedQuotient {
    std::uint8_t value;
    double prob;

    friend bool operator==(const RankedQuotient&, const RankedQuotient&) = default;
};

/// Quotients left in the dictionary alphabet after the shift split and the
/// exclusion of rare quotients, ordered by probability (rank 0 first).
///
/// Every byte maps either to a represented quotient or to the excluded set.
/// Excluded bytes are escaped by the encoder and parsed as the placeholder,
/// the rank-0 quotient.
class QuotientAlphabet {
public:
    QuotientAlphabet(unsigned shift, std::vector<RankedQuotient> represented, double p_escape, double threshold);

    unsigned shift() const { return shift_; }
    double threshold() const { return threshold_; }
    double p_escape() const { return p_escape_; }

    /// Number of represented quotients.
    std::size_t size() const { return quotients_.size(); }
    std::span<const RankedQuotient> quotients() const { return quotients_; }
    std::uint8_t placeholder() const { return quotients_.front().value; }

    /// Number of distinct quotient values for this shift (256 >> S).
    std::size_t quotient_range() const { return shift_ >= 8 ? 1 : (kAlphabetSize >> shift_); }

    /// Rank of a quotient value, or -1 when it is excluded.
    int rank_of(std::uint8_t quotient) const { return rank_of_quotient_[quotient]; }

    bool is_excluded(std::uint8_t byte) const { return excluded_[byte]; }
    const std::bitset<kAlphabetSize>& excluded_symbols() const { return excluded_; }

    /// Rank of the quotient the parser sees for `byte` (escaped bytes read as
    /// the placeholder, rank 0).
    unsigned parse_rank(std::uint8_t byte) const {
        const int r = rank_of_quotient_[quotient_of(byte, shift_)];
        return r < 0 ? 0u : static_cast<unsigned>(r);
    }

    /// Per-rank probabilities of the parsed quotient stream: represented
    /// probabilities with the escape mass merged into the placeholder.
    std::vector<double> parse_probs() const;

    /// The same per-rank vector for a different source, keeping this
    /// alphabet's ranks and exclusions.
    std::vector<double> parse_probs(const SymbolDistribution& dist) const;

    /// Total probability of the excluded bytes under `dist`.
    double escape_mass(const SymbolDistribution& dist) const;

    friend bool operator==(const QuotientAlphabet& a, const QuotientAlphabet& b) {
        return a.shift_ == b.shift_ && a.threshold_ == b.threshold_ && a.p_escape_ == b.p_escape_ &&
               a.quotients_ == b.quotients_;
    }

private:
    unsigned shift_;
    double threshold_;
    double p_escape_;
    std::vector<RankedQuotient> quotients_;
    std::array<std::int16_t, kAlphabetSize> rank_of_quotient_{};
    std::bitset<kAlphabetSize> excluded_;
};

/// Splits every byte into quotient and reminder, then excludes quotients whose
/// probability is below `threshold`. Requires 0 <= shift <= 8 and
/// 0 <= threshold < 1; throws BuildError when nothing would remain.
QuotientAlphabet split_alphabet(const SymbolDistribution& dist, unsigned shift, double threshold);

/// Entropy of the quotient marginal of `dist` at `shift` (no exclusion).
double quotient_entropy(const SymbolDistribution& dist, unsigned shift);

/// H(X) / (S + H(Q)): the best efficiency any dictionary can reach when S
/// reminder bits are stored verbatim. Defined as 1 for S = 0.
double shift_efficiency_bound(const SymbolDistribution& dist, unsigned shift);

}  // namespace ricemarlin
