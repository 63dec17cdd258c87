#include "ricemarlin/source_model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "ricemarlin/errors.hpp"

namespace ricemarlin {

namespace {

constexpr double kSumTolerance = 1e-9;

// Search brackets for the shape parameter of each family. Entropy is
// monotone increasing in the parameter over each bracket.
struct Bracket {
    double lo;
    double hi;
};

Bracket bracket_for(Family family) {
    switch (family) {
        case Family::LaplacianResidual:
        case Family::ExponentialResidual:
            return {1e-3, 1e9};
        case Family::Poisson:
            return {1e-30, 5000.0};
    }
    throw InvalidArgument("unknown family");
}

std::array<double, kAlphabetSize> normalized(std::array<double, kAlphabetSize> w) {
    const double total = std::accumulate(w.begin(), w.end(), 0.0);
    for (auto& v : w) v /= total;
    return w;
}

std::array<double, kAlphabetSize> laplacian_weights(double b) {
    std::array<double, kAlphabetSize> w{};
    for (std::size_t x = 0; x < kAlphabetSize; ++x) {
        // Two's-complement view of the residual byte.
        const int c = x < 128 ? static_cast<int>(x) : static_cast<int>(x) - 256;
        w[x] = std::exp(-std::abs(c) / b);
    }
    return normalized(w);
}

std::array<double, kAlphabetSize> exponential_weights(double b) {
    std::array<double, kAlphabetSize> w{};
    for (std::size_t x = 0; x < kAlphabetSize; ++x) w[x] = std::exp(-static_cast<double>(x) / b);
    return normalized(w);
}

// Poisson pmf folded modulo 256 so that large rates spread over the whole
// byte range instead of piling up at the truncation point.
std::array<double, kAlphabetSize> poisson_weights(double lambda) {
    const double log_lambda = std::log(lambda);
    const auto k_max = static_cast<std::size_t>(lambda + 40.0 * std::sqrt(lambda) + 64.0);
    const double mode = std::floor(lambda);
    const double log_peak = mode * log_lambda - lambda - std::lgamma(mode + 1.0);
    std::array<double, kAlphabetSize> w{};
    for (std::size_t k = 0; k <= k_max; ++k) {
        const double kd = static_cast<double>(k);
        const double log_p = kd * log_lambda - lambda - std::lgamma(kd + 1.0);
        w[k % kAlphabetSize] += std::exp(log_p - log_peak);
    }
    return normalized(w);
}

}  // namespace

SymbolDistribution::SymbolDistribution(const std::array<double, kAlphabetSize>& probs) : probs_(probs) {
    double total = 0.0;
    for (double p : probs_) {
        if (!(p >= 0.0) || !std::isfinite(p)) throw InvalidArgument("probabilities must be finite and non-negative");
        total += p;
    }
    if (std::abs(total - 1.0) > kSumTolerance) {
        std::ostringstream os;
        os << "probabilities sum to " << total << ", expected 1";
        throw InvalidArgument(os.str());
    }
}

SymbolDistribution SymbolDistribution::from_weights(std::span<const double> weights) {
    if (weights.size() != kAlphabetSize) throw InvalidArgument("expected 256 weights");
    std::array<double, kAlphabetSize> w{};
    double total = 0.0;
    for (std::size_t i = 0; i < kAlphabetSize; ++i) {
        if (!(weights[i] >= 0.0) || !std::isfinite(weights[i]))
            throw InvalidArgument("weights must be finite and non-negative");
        w[i] = weights[i];
        total += w[i];
    }
    if (total <= 0.0) throw InvalidArgument("weights sum to zero");
    for (auto& v : w) v /= total;
    return SymbolDistribution(w);
}

SymbolDistribution SymbolDistribution::uniform() {
    std::array<double, kAlphabetSize> p{};
    p.fill(1.0 / kAlphabetSize);
    return SymbolDistribution(p);
}

SymbolDistribution SymbolDistribution::point_mass(std::uint8_t symbol) {
    std::array<double, kAlphabetSize> p{};
    p[symbol] = 1.0;
    return SymbolDistribution(p);
}

double entropy(std::span<const double> probs) {
    double h = 0.0;
    for (double p : probs)
        if (p > 0.0) h -= p * std::log2(p);
    return std::max(h, 0.0);
}

std::string_view to_string(Family family) {
    switch (family) {
        case Family::LaplacianResidual: return "laplacian";
        case Family::Poisson: return "poisson";
        case Family::ExponentialResidual: return "exponential";
    }
    return "unknown";
}

Family parse_family(std::string_view name) {
    if (name == "laplacian" || name == "LaplacianResidual") return Family::LaplacianResidual;
    if (name == "poisson" || name == "Poisson") return Family::Poisson;
    if (name == "exponential" || name == "ExponentialResidual") return Family::ExponentialResidual;
    throw InvalidArgument("unknown distribution family '" + std::string(name) + "'");
}

SymbolDistribution family_distribution(Family family, double parameter) {
    if (!(parameter > 0.0) || !std::isfinite(parameter)) throw InvalidArgument("shape parameter must be positive");
    switch (family) {
        case Family::LaplacianResidual: return SymbolDistribution(laplacian_weights(parameter));
        case Family::Poisson: return SymbolDistribution(poisson_weights(parameter));
        case Family::ExponentialResidual: return SymbolDistribution(exponential_weights(parameter));
    }
    throw InvalidArgument("unknown family");
}

double max_entropy_fraction(Family family) {
    return entropy(family_distribution(family, bracket_for(family).hi)) / 8.0;
}

SymbolDistribution make_distribution(const SyntheticFamily& spec) {
    const double fraction = spec.target_entropy_fraction;
    const double max_fraction = max_entropy_fraction(spec.family);
    if (!(fraction > 0.0) || !(fraction < 1.0) || fraction > max_fraction) {
        std::ostringstream os;
        os << "entropy fraction " << fraction << " is unreachable for family " << to_string(spec.family)
           << "; achievable range is (0, " << max_fraction << "]";
        throw InvalidArgument(os.str());
    }
    const double target = 8.0 * fraction;
    const Bracket bracket = bracket_for(spec.family);
    double lo = std::log(bracket.lo);
    double hi = std::log(bracket.hi);
    for (int iter = 0; iter < 200 && hi - lo > 1e-15; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (entropy(family_distribution(spec.family, std::exp(mid))) < target)
            lo = mid;
        else
            hi = mid;
    }
    SymbolDistribution dist = family_distribution(spec.family, std::exp(0.5 * (lo + hi)));
    const double achieved = entropy(dist);
    if (std::abs(achieved - target) > 1e-3 * target) {
        std::ostringstream os;
        os << "parameter search for " << to_string(spec.family) << " reached " << achieved << " bits, target "
           << target;
        throw InvalidArgument(os.str());
    }
    return dist;
}

std::vector<std::uint8_t> sample(const SymbolDistribution& dist, std::size_t n, std::uint64_t seed) {
    std::array<double, kAlphabetSize> cdf{};
    double running = 0.0;
    std::size_t last_positive = 0;
    for (std::size_t i = 0; i < kAlphabetSize; ++i) {
        running += dist[i];
        cdf[i] = running;
        if (dist[i] > 0.0) last_positive = i;
    }

    std::mt19937_64 engine(seed);
    std::vector<std::uint8_t> out(n);
    for (auto& symbol : out) {
        const double u = static_cast<double>(engine() >> 11) * 0x1.0p-53;
        const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
        const auto index = static_cast<std::size_t>(it - cdf.begin());
        symbol = static_cast<std::uint8_t>(std::min(index, last_positive));
    }
    return out;
}

SymbolDistribution empirical_histogram(std::span<const std::uint8_t> message) {
    if (message.empty()) throw InvalidArgument("histogram of an empty message");
    std::array<std::size_t, kAlphabetSize> counts{};
    for (auto b : message) ++counts[b];
    std::array<double, kAlphabetSize> p{};
    const double n = static_cast<double>(message.size());
    for (std::size_t i = 0; i < kAlphabetSize; ++i) p[i] = static_cast<double>(counts[i]) / n;
    return SymbolDistribution(p);
}

}  // namespace ricemarlin
