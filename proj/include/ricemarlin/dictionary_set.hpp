#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ricemarlin/dictionary.hpp"
#include "ricemarlin/source_model.hpp"

namespace ricemarlin {

inline constexpr std::size_t kMaxDictionaries = 255;
inline constexpr std::uint8_t kRawBlockIndex = 255;

/// Exclusion thresholds tried by best_dictionary_for, ascending: 0 then 2^-16 .. 2^-6.
std::vector<double> threshold_grid();

struct SearchOptions {
    unsigned max_shift = kMaxShift;
    /// Skip shifts whose efficiency bound cannot beat the best candidate so far.
    bool prune_by_bound = true;
};

/// Builds every (S, threshold) candidate for `dist` and returns the one with
/// the highest estimated efficiency. Ties keep the smaller S, then the
/// smaller threshold. Throws BuildError only when every candidate fails.
MarlinDictionary best_dictionary_for(const SymbolDistribution& dist, const BuildParams& params,
                                     std::string source_id, const SearchOptions& options = {});

/// Same search with S fixed.
MarlinDictionary best_dictionary_for_shift(const SymbolDistribution& dist, unsigned shift,
                                           const BuildParams& params, std::string source_id);

struct GridPoint {
    Family family;
    double fraction;

    std::string id() const;
};

struct SetConfig {
    std::vector<GridPoint> grid;
    BuildParams params;
    unsigned threads = 0;  ///< 0 = hardware concurrency
};

/// Laplacian 0.02..0.98 step 0.02 plus Poisson 0.1..0.9 step 0.1, K=8, O=4,
/// nominal block 4096.
SetConfig default_set_config();

/// Grid of one family over the given fractions.
std::vector<GridPoint> family_grid(Family family, std::span<const double> fractions);

/// Per-byte cost in bits of coding with one dictionary, derived from its
/// training statistics. Used to rank dictionaries for a block from its
/// histogram in O(256) per dictionary.
struct ByteCostModel {
    std::array<double, kAlphabetSize> bits{};
};

ByteCostModel make_cost_model(const MarlinDictionary& dict, std::size_t block_n);

/// Ordered collection of at most 255 dictionaries sharing (K, O).
class DictionarySet {
public:
    DictionarySet(std::vector<MarlinDictionary> dictionaries, BuildParams params, std::string metadata_json);

    std::size_t size() const { return dictionaries_.size(); }
    const MarlinDictionary& operator[](std::size_t i) const { return dictionaries_[i]; }
    std::span<const MarlinDictionary> dictionaries() const { return dictionaries_; }
    const BuildParams& params() const { return params_; }
    unsigned key_bits() const { return params_.key_bits; }
    unsigned overlap_bits() const { return params_.overlap_bits; }
    const std::string& metadata_json() const { return metadata_; }
    const ByteCostModel& cost_model(std::size_t i) const { return costs_[i]; }

private:
    std::vector<MarlinDictionary> dictionaries_;
    BuildParams params_;
    std::string metadata_;
    std::vector<ByteCostModel> costs_;
};

/// One best dictionary per grid point, in grid order. Deterministic for a
/// given config regardless of the thread count.
DictionarySet build_dictionary_set(const SetConfig& config);

/// Index minimizing abr_estimate under `hist`; ties go to the lowest index.
std::size_t select_dictionary(const DictionarySet& set, const SymbolDistribution& hist, std::size_t block_n);

/// Index minimizing the byte cost model over the block's symbol counts; ties
/// go to the lowest index.
std::size_t select_dictionary_fast(const DictionarySet& set, std::span<const std::uint32_t, kAlphabetSize> counts);

}  // namespace ricemarlin
