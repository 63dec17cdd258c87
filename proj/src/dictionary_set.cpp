#include "ricemarlin/dictionary_set.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>

#include <json.hpp>

#include "ricemarlin/errors.hpp"
#include "ricemarlin/parallel.hpp"

namespace ricemarlin {

std::vector<double> threshold_grid() {
    std::vector<double> grid{0.0};
    for (int i = 16; i >= 6; --i) grid.push_back(std::ldexp(1.0, -i));
    return grid;
}

namespace {

bool same_split(const QuotientAlphabet& a, const QuotientAlphabet& b) {
    if (a.shift() != b.shift() || a.size() != b.size()) return false;
    return a.excluded_symbols() == b.excluded_symbols();
}

void search_shift(const SymbolDistribution& dist, unsigned shift, const BuildParams& params, const std::string& id,
                  double h, std::optional<MarlinDictionary>& best, std::string& last_error) {
    std::optional<QuotientAlphabet> previous;
    for (double threshold : threshold_grid()) {
        try {
            QuotientAlphabet alphabet = split_alphabet(dist, shift, threshold);
            if (previous && same_split(*previous, alphabet)) continue;
            previous = alphabet;
            if (alphabet.size() > 1 && (std::size_t{1} << params.key_bits) <= alphabet.size()) continue;
            MarlinDictionary dict = build_dictionary(alphabet, params, id, h);
            if (!best || dict.efficiency_estimate() > best->efficiency_estimate()) best = std::move(dict);
        } catch (const BuildError& e) {
            last_error = e.what();
        } catch (const ConvergenceError& e) {
            last_error = e.what();
        }
    }
}

}  // namespace

MarlinDictionary best_dictionary_for(const SymbolDistribution& dist, const BuildParams& params, std::string source_id,
                                     const SearchOptions& options) {
    validate(params);
    const double h = entropy(dist);
    std::optional<MarlinDictionary> best;
    std::string last_error = "no candidate fits the parameters";
    for (unsigned shift = 0; shift <= std::min(options.max_shift, kMaxShift); ++shift) {
        if (options.prune_by_bound && best && shift_efficiency_bound(dist, shift) <= best->efficiency_estimate())
            continue;
        search_shift(dist, shift, params, source_id, h, best, last_error);
    }
    if (!best) throw BuildError("every (shift, threshold) candidate failed: " + last_error);
    return std::move(*best);
}

MarlinDictionary best_dictionary_for_shift(const SymbolDistribution& dist, unsigned shift, const BuildParams& params,
                                           std::string source_id) {
    validate(params);
    std::optional<MarlinDictionary> best;
    std::string last_error = "no candidate fits the parameters";
    search_shift(dist, shift, params, source_id, entropy(dist), best, last_error);
    if (!best) throw BuildError("every threshold candidate failed: " + last_error);
    return std::move(*best);
}

std::string GridPoint::id() const {
    std::ostringstream os;
    os << to_string(family) << ':' << fraction;
    return os.str();
}

std::vector<GridPoint> family_grid(Family family, std::span<const double> fractions) {
    std::vector<GridPoint> grid;
    for (double f : fractions) grid.push_back({family, f});
    return grid;
}

SetConfig default_set_config() {
    SetConfig config;
    for (int i = 1; i <= 49; ++i) config.grid.push_back({Family::LaplacianResidual, i * 0.02});
    for (int i = 1; i <= 9; ++i) config.grid.push_back({Family::Poisson, i * 0.1});
    return config;
}

ByteCostModel make_cost_model(const MarlinDictionary& dict, std::size_t block_n) {
    ByteCostModel model;
    const auto& alphabet = dict.alphabet();
    const double reminder = static_cast<double>(dict.shift());
    const double escape = 8.0 * (1.0 + static_cast<double>(loc_bytes(block_n)));
    std::vector<double> quotient_bits(alphabet.size(), 0.0);
    if (!dict.is_empty_quotient()) {
        const auto p = alphabet.parse_probs();
        const double hq = entropy(p);
        const double rate = static_cast<double>(dict.key_bits()) / dict.mean_word_length();
        const double scale = hq > 0.0 ? rate / hq : 0.0;
        const double cap = static_cast<double>(dict.key_bits());
        for (std::size_t r = 0; r < p.size(); ++r)
            quotient_bits[r] = p[r] > 0.0 ? std::min(cap, -std::log2(p[r]) * scale + (hq > 0.0 ? 0.0 : rate)) : cap;
    }
    for (std::size_t x = 0; x < kAlphabetSize; ++x) {
        const auto byte = static_cast<std::uint8_t>(x);
        double bits = reminder + quotient_bits[alphabet.parse_rank(byte)];
        if (alphabet.is_excluded(byte)) bits += escape;
        model.bits[x] = bits;
    }
    return model;
}

DictionarySet::DictionarySet(std::vector<MarlinDictionary> dictionaries, BuildParams params, std::string metadata_json)
    : dictionaries_(std::move(dictionaries)), params_(params), metadata_(std::move(metadata_json)) {
    if (dictionaries_.empty()) throw InvalidArgument("a dictionary set needs at least one dictionary");
    if (dictionaries_.size() > kMaxDictionaries) throw InvalidArgument("a dictionary set holds at most 255 entries");
    for (const auto& d : dictionaries_)
        if (d.key_bits() != params_.key_bits || d.overlap_bits() != params_.overlap_bits)
            throw InvalidArgument("all dictionaries of a set must share (K, O)");
    costs_.reserve(dictionaries_.size());
    for (const auto& d : dictionaries_) costs_.push_back(make_cost_model(d, params_.block_n));
}

DictionarySet build_dictionary_set(const SetConfig& config) {
    if (config.grid.empty()) throw InvalidArgument("dictionary set grid is empty");
    if (config.grid.size() > kMaxDictionaries) {
        std::ostringstream os;
        os << "grid has " << config.grid.size() << " points; at most " << kMaxDictionaries << " are allowed";
        throw InvalidArgument(os.str());
    }
    validate(config.params);

    const std::size_t count = config.grid.size();
    std::vector<std::optional<MarlinDictionary>> built(count);
    parallel_for(count, config.threads, [&](std::size_t i) {
        const auto& point = config.grid[i];
        const auto dist = make_distribution({point.family, point.fraction});
        built[i] = best_dictionary_for(dist, config.params, point.id());
    });

    nlohmann::json meta;
    meta["key_bits"] = config.params.key_bits;
    meta["overlap_bits"] = config.params.overlap_bits;
    meta["block_n"] = config.params.block_n;
    meta["max_word_length"] = config.params.max_word_length;
    meta["refinement_rounds"] = config.params.refinement_rounds;
    meta["grid"] = nlohmann::json::array();
    for (const auto& point : config.grid)
        meta["grid"].push_back({{"family", std::string(to_string(point.family))}, {"fraction", point.fraction}});

    std::vector<MarlinDictionary> dictionaries;
    dictionaries.reserve(count);
    for (auto& d : built) dictionaries.push_back(std::move(*d));
    return DictionarySet(std::move(dictionaries), config.params, meta.dump());
}

std::size_t select_dictionary(const DictionarySet& set, const SymbolDistribution& hist, std::size_t block_n) {
    std::size_t best = 0;
    double best_abr = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < set.size(); ++i) {
        double abr;
        try {
            abr = abr_estimate(set[i], hist, block_n);
        } catch (const ConvergenceError&) {
            continue;
        }
        if (abr < best_abr) {
            best_abr = abr;
            best = i;
        }
    }
    return best;
}

std::size_t select_dictionary_fast(const DictionarySet& set, std::span<const std::uint32_t, kAlphabetSize> counts) {
    std::size_t best = 0;
    double best_cost = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < set.size(); ++i) {
        const auto& bits = set.cost_model(i).bits;
        double cost = 0.0;
        for (std::size_t x = 0; x < kAlphabetSize; ++x)
            if (counts[x]) cost += counts[x] * bits[x];
        if (cost < best_cost) {
            best_cost = cost;
            best = i;
        }
    }
    return best;
}

}  // namespace ricemarlin
