#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ricemarlin {

inline constexpr std::size_t kAlphabetSize = 256;

/// Probability vector over the 256 byte symbols.
///
/// Construction validates the vector: every entry non-negative and the total
/// equal to one within 1e-9. Use from_weights() to normalize arbitrary
/// non-negative weights.
class SymbolDistribution {
public:
    explicit SymbolDistribution(const std::array<double, kAlphabetSize>& probs);

    static SymbolDistribution from_weights(std::span<const double> weights);
    static SymbolDistribution uniform();
    static SymbolDistribution point_mass(std::uint8_t symbol);

    double operator[](std::size_t symbol) const { return probs_[symbol]; }
    std::span<const double, kAlphabetSize> probs() const { return probs_; }

    friend bool operator==(const SymbolDistribution&, const SymbolDistribution&) = default;

private:
    std::array<double, kAlphabetSize> probs_;
};

/// Shannon entropy in bits of an arbitrary probability vector (0 log 0 = 0).
double entropy(std::span<const double> probs);

inline double entropy(const SymbolDistribution& dist) { return entropy(dist.probs()); }

enum class Family { LaplacianResidual, Poisson, ExponentialResidual };

std::string_view to_string(Family family);
Family parse_family(std::string_view name);

struct SyntheticFamily {
    Family family;
    double target_entropy_fraction;  ///< fraction of 8 bits, in (0, 1)
};

/// Distribution of `family` for a raw shape parameter (Laplacian/Exponential
/// scale b, Poisson rate lambda).
SymbolDistribution family_distribution(Family family, double parameter);

/// Largest entropy fraction make_distribution() can reach for `family`.
double max_entropy_fraction(Family family);

/// Searches the family's shape parameter until the entropy is within 0.1% of
/// 8 * target_entropy_fraction bits.
SymbolDistribution make_distribution(const SyntheticFamily& spec);

/// Name of the sampling algorithm, recorded in reports so corpora can be
/// regenerated elsewhere: 64-bit Mersenne Twister (std::mt19937_64 seeded with
/// the seed value), top 53 bits scaled to [0,1), inverse-CDF lookup.
inline constexpr std::string_view kSamplerAlgorithm = "mt19937_64/u53/inverse-cdf";

/// n i.i.d. symbols drawn from `dist`; deterministic for a given seed.
std::vector<std::uint8_t> sample(const SymbolDistribution& dist, std::size_t n, std::uint64_t seed);

/// Normalized byte histogram. Throws InvalidArgument on an empty message.
SymbolDistribution empirical_histogram(std::span<const std::uint8_t> message);

}  // namespace ricemarlin
