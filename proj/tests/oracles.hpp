#pragma once

// Independent reference implementations used by the tests. They favour
// directness over speed and share no code with the library internals.

#include <algorithm>
#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <unordered_map>
#include <vector>

#include "ricemarlin/alphabet.hpp"
#include "ricemarlin/dictionary.hpp"
#include "ricemarlin/errors.hpp"

namespace oracle {

using ricemarlin::MarlinDictionary;
using ricemarlin::QuotientAlphabet;

/// Quotient values of the four-symbol example: a=0, b=1, c=2, d=3 at S=0.
inline QuotientAlphabet abcd_alphabet() {
    return QuotientAlphabet(0, {{0, 0.7}, {1, 0.15}, {2, 0.1}, {3, 0.05}}, 0.0, 0.0);
}

inline std::vector<std::uint8_t> letters(const std::string& s) {
    std::vector<std::uint8_t> out;
    for (char ch : s) out.push_back(static_cast<std::uint8_t>(ch - 'a'));
    return out;
}

inline std::string to_letters(const std::vector<std::uint8_t>& v) {
    std::string s;
    for (auto q : v) s.push_back(static_cast<char>('a' + q));
    return s;
}

/// A K=3, O=1 dictionary over the four-symbol alphabet,
/// listed by codeword 0000..1111.
inline MarlinDictionary four_symbol_dictionary() {
    const char* words[16] = {"aaaa", "a", "ba", "aa", "c", "aaa", "d", "b",
                             "baaa", "ba", "ca", "baa", "bb", "c", "d", "b"};
    std::vector<std::vector<std::uint8_t>> by_codeword;
    for (const char* w : words) by_codeword.push_back(letters(w));
    return MarlinDictionary::assemble(3, 1, abcd_alphabet(), by_codeword, "four-symbol", 0.0, 256);
}

/// Greedy growth by exhaustive scan: each step adds the extension w + q with
/// the largest raw(w) * p(q), where q is w's next unused quotient by rank.
inline std::vector<std::string> brute_force_growth(const std::vector<double>& root, const std::vector<double>& p,
                                                   unsigned exclusion, std::size_t size, unsigned max_len = 64) {
    struct Entry {
        std::string ranks;
        double raw;
        std::size_t children;
    };
    std::vector<Entry> set;
    for (std::size_t r = exclusion; r < p.size(); ++r) set.push_back({std::string(1, char(r)), root[r], 0});
    while (set.size() < size) {
        std::size_t best = set.size();
        double best_priority = -1.0;
        for (std::size_t i = 0; i < set.size(); ++i) {
            const auto& e = set[i];
            if (e.children >= p.size() || e.ranks.size() >= max_len) continue;
            const double priority = e.raw * p[e.children];
            if (priority > best_priority) {
                best_priority = priority;
                best = i;
            }
        }
        if (best == set.size()) throw ricemarlin::BuildError("oracle ran out of candidates");
        const std::size_t q = set[best].children++;
        set.push_back({set[best].ranks + char(q), set[best].raw * p[q], 0});
    }
    std::vector<std::string> out;
    for (auto& e : set) out.push_back(e.ranks);
    std::sort(out.begin(), out.end());
    return out;
}

struct ParseStats {
    double mean_word_length = 0.0;
    std::vector<double> chapter_frequency;  ///< chapter of each emitted word
    bool always_parsed = true;
};

/// Longest-match parsing of `symbols` i.i.d. ranks drawn from p, starting in
/// chapter 0, by direct prefix lookup in per-chapter word maps.
inline ParseStats monte_carlo_parse(const MarlinDictionary& dict, std::size_t symbols, std::uint64_t seed) {
    const auto& shape = dict.shape();
    const std::size_t chapters = dict.chapter_count();
    std::vector<std::unordered_map<std::string, std::uint32_t>> index(chapters);
    std::size_t max_len = 0;
    for (std::uint32_t cw = 0; cw < dict.words().size(); ++cw) {
        std::string key;
        for (auto q : dict.word(cw).symbols) key.push_back(char(dict.alphabet().rank_of(q)));
        max_len = std::max(max_len, key.size());
        index[shape.chapter_of(cw)].emplace(key, cw);
    }
    const auto p = dict.alphabet().parse_probs();
    std::mt19937_64 engine(seed);
    std::discrete_distribution<int> draw(p.begin(), p.end());
    std::string stream(symbols, '\0');
    for (auto& s : stream) s = char(draw(engine));

    ParseStats stats;
    stats.chapter_frequency.assign(chapters, 0.0);
    std::size_t pos = 0, words = 0, consumed = 0;
    std::uint32_t chapter = 0;
    while (pos + max_len <= stream.size()) {
        std::size_t len = max_len;
        std::uint32_t cw = 0;
        bool found = false;
        for (; len > 0; --len) {
            auto it = index[chapter].find(stream.substr(pos, len));
            if (it != index[chapter].end()) {
                cw = it->second;
                found = true;
                break;
            }
        }
        if (!found) {
            stats.always_parsed = false;
            break;
        }
        stats.chapter_frequency[chapter] += 1.0;
        ++words;
        consumed += len;
        pos += len;
        chapter = shape.next_chapter(cw);
    }
    for (auto& f : stats.chapter_frequency) f /= double(words);
    stats.mean_word_length = double(consumed) / double(words);
    return stats;
}

}  // namespace oracle
