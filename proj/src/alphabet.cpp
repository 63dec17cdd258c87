#include "ricemarlin/alphabet.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ricemarlin/errors.hpp"

namespace ricemarlin {

namespace {

std::array<double, kAlphabetSize> quotient_marginal(const SymbolDistribution& dist, unsigned shift) {
    std::array<double, kAlphabetSize> q{};
    for (std::size_t x = 0; x < kAlphabetSize; ++x) q[quotient_of(static_cast<std::uint8_t>(x), shift)] += dist[x];
    return q;
}

}  // namespace

QuotientAlphabet::QuotientAlphabet(unsigned shift, std::vector<RankedQuotient> represented, double p_escape,
                                   double threshold)
    : shift_(shift), threshold_(threshold), p_escape_(p_escape), quotients_(std::move(represented)) {
    if (shift_ > kMaxShift) throw InvalidArgument("shift must be in [0, 8]");
    if (quotients_.empty()) throw InvalidArgument("alphabet has no represented quotient");
    if (!(p_escape_ >= 0.0) || p_escape_ > 1.0) throw InvalidArgument("escape probability out of range");

    rank_of_quotient_.fill(-1);
    double total = p_escape_;
    for (std::size_t r = 0; r < quotients_.size(); ++r) {
        const auto& q = quotients_[r];
        if (q.value >= quotient_range()) throw InvalidArgument("quotient value out of range for shift");
        if (rank_of_quotient_[q.value] >= 0) throw InvalidArgument("duplicate quotient in alphabet");
        if (!(q.prob >= 0.0)) throw InvalidArgument("negative quotient probability");
        if (r > 0) {
            const auto& prev = quotients_[r - 1];
            if (prev.prob < q.prob || (prev.prob == q.prob && prev.value > q.value))
                throw InvalidArgument("quotients must be sorted by descending probability");
        }
        rank_of_quotient_[q.value] = static_cast<std::int16_t>(r);
        total += q.prob;
    }
    if (std::abs(total - 1.0) > 1e-9) {
        std::ostringstream os;
        os << "quotient probabilities plus escape mass sum to " << total;
        throw InvalidArgument(os.str());
    }
    for (std::size_t x = 0; x < kAlphabetSize; ++x)
        excluded_[x] = rank_of_quotient_[quotient_of(static_cast<std::uint8_t>(x), shift_)] < 0;
}

std::vector<double> QuotientAlphabet::parse_probs() const {
    std::vector<double> p(quotients_.size());
    for (std::size_t r = 0; r < quotients_.size(); ++r) p[r] = quotients_[r].prob;
    p[0] += p_escape_;
    return p;
}

std::vector<double> QuotientAlphabet::parse_probs(const SymbolDistribution& dist) const {
    std::vector<double> p(quotients_.size(), 0.0);
    for (std::size_t x = 0; x < kAlphabetSize; ++x) p[parse_rank(static_cast<std::uint8_t>(x))] += dist[x];
    return p;
}

double QuotientAlphabet::escape_mass(const SymbolDistribution& dist) const {
    double m = 0.0;
    for (std::size_t x = 0; x < kAlphabetSize; ++x)
        if (excluded_[x]) m += dist[x];
    return m;
}

QuotientAlphabet split_alphabet(const SymbolDistribution& dist, unsigned shift, double threshold) {
    if (shift > kMaxShift) throw InvalidArgument("shift must be in [0, 8]");
    if (!(threshold >= 0.0) || !(threshold < 1.0)) throw InvalidArgument("threshold must be in [0, 1)");

    const auto marginal = quotient_marginal(dist, shift);
    const std::size_t range = shift >= 8 ? 1 : (kAlphabetSize >> shift);

    std::vector<RankedQuotient> kept;
    double p_escape = 0.0;
    for (std::size_t q = 0; q < range; ++q) {
        if (marginal[q] < threshold)
            p_escape += marginal[q];
        else
            kept.push_back({static_cast<std::uint8_t>(q), marginal[q]});
    }
    if (kept.empty()) {
        std::ostringstream os;
        os << "threshold " << threshold << " excludes every quotient at shift " << shift;
        throw BuildError(os.str());
    }
    std::stable_sort(kept.begin(), kept.end(),
                     [](const RankedQuotient& a, const RankedQuotient& b) { return a.prob > b.prob; });
    return QuotientAlphabet(shift, std::move(kept), p_escape, threshold);
}

double quotient_entropy(const SymbolDistribution& dist, unsigned shift) {
    const auto marginal = quotient_marginal(dist, shift);
    return entropy(marginal);
}

double shift_efficiency_bound(const SymbolDistribution& dist, unsigned shift) {
    if (shift > kMaxShift) throw InvalidArgument("shift must be in [0, 8]");
    if (shift == 0) return 1.0;
    return entropy(dist) / (static_cast<double>(shift) + quotient_entropy(dist, shift));
}

}  // namespace ricemarlin
