#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>
#include <string>

#include "oracles.hpp"
#include "ricemarlin/alphabet.hpp"
#include "ricemarlin/dictionary.hpp"
#include "ricemarlin/dictionary_set.hpp"
#include "ricemarlin/errors.hpp"

using namespace ricemarlin;

namespace {

std::set<std::string> word_strings(std::span<const Word> words) {
    std::set<std::string> out;
    for (const auto& w : words) out.insert(oracle::to_letters(w.symbols));
    return out;
}

// Checks the structural invariants every built dictionary must satisfy.
void expect_invariants(const MarlinDictionary& d, const SymbolDistribution& dist) {
    if (d.is_empty_quotient()) return;
    const std::size_t size = std::size_t{1} << d.key_bits();
    ASSERT_EQ(d.words().size(), size * d.chapter_count());
    const auto p = d.alphabet().parse_probs();
    for (unsigned c = 0; c < d.chapter_count(); ++c) {
        std::set<std::vector<std::uint8_t>> distinct;
        double emitted = 0.0;
        for (const auto& w : d.chapter(c)) {
            distinct.insert(w.symbols);
            emitted += w.emit_prob;
            double top = 0.0;
            for (std::size_t r = 0; r < w.children; ++r) top += p[r];
            EXPECT_NEAR(w.emit_prob, w.raw_prob * (1.0 - top), 1e-12);
        }
        EXPECT_EQ(distinct.size(), size);
        EXPECT_NEAR(emitted, 1.0, 1e-9);
        const unsigned x = d.chapter_exclusion(c);
        for (std::size_t r = 0; r < d.alphabet().size(); ++r) {
            EXPECT_EQ(d.shape().singles[c * d.alphabet().size() + r] >= 0, r >= x);
        }
    }
    for (std::uint32_t cw = 0; cw < d.words().size(); ++cw) {
        EXPECT_EQ(d.next_chapter(cw), cw & ((1u << d.overlap_bits()) - 1));
        EXPECT_GE(d.word(cw).children, d.chapter_exclusion(d.next_chapter(cw)));
    }
    const auto pi = d.stationary();
    EXPECT_NEAR(std::accumulate(pi.begin(), pi.end(), 0.0), 1.0, 1e-9);
    for (double v : pi) EXPECT_GE(v, 0.0);
    EXPECT_GE(d.abr_estimate(), d.shift());
    EXPECT_LE(entropy(dist) / d.abr_estimate(), shift_efficiency_bound(dist, d.shift()) + 1e-9);
}

}  // namespace

TEST(SplitAlphabet, SplitExample) {
    EXPECT_EQ(quotient_of(119, 3), 14);
    EXPECT_EQ(reminder_of(119, 3), 7);
    EXPECT_EQ(join_quotient(14, 7, 3), 119);
}

TEST(SplitAlphabet, ZeroShiftKeepsEveryByte) {
    const auto d = make_distribution({Family::LaplacianResidual, 0.5});
    const auto a = split_alphabet(d, 0, 0.0);
    EXPECT_EQ(a.size(), 256u);
    EXPECT_TRUE(a.excluded_symbols().none());
    EXPECT_EQ(a.placeholder(), 0);
    EXPECT_EQ(a.p_escape(), 0.0);
}

TEST(SplitAlphabet, ThresholdExcludesRareQuotients) {
    std::array<double, kAlphabetSize> p{};
    p[0] = 0.9;
    p[1] = 0.099;
    p[255] = 0.001;
    const auto a = split_alphabet(SymbolDistribution(p), 0, 0.01);
    EXPECT_TRUE(a.is_excluded(255));
    EXPECT_FALSE(a.is_excluded(0));
    EXPECT_FALSE(a.is_excluded(1));
    EXPECT_NEAR(a.p_escape(), 0.001, 1e-15);
    EXPECT_EQ(a.placeholder(), 0);
    EXPECT_EQ(a.size(), 2u);
    EXPECT_EQ(a.parse_rank(255), 0u);
}

TEST(SplitAlphabet, QuotientMarginalsAndOrder) {
    const auto d = make_distribution({Family::LaplacianResidual, 0.6});
    const auto a = split_alphabet(d, 3, 0.0);
    EXPECT_EQ(a.size(), 32u);
    double total = 0.0;
    for (std::size_t r = 0; r < a.size(); ++r) {
        const auto q = a.quotients()[r];
        double m = 0.0;
        for (int x = 0; x < 8; ++x) m += d[q.value * 8 + x];
        EXPECT_NEAR(q.prob, m, 1e-15);
        if (r > 0) {
            EXPECT_GE(a.quotients()[r - 1].prob, q.prob);
        }
        total += q.prob;
    }
    EXPECT_NEAR(total, 1.0, 1e-12);
}

TEST(SplitAlphabet, Errors) {
    EXPECT_THROW(split_alphabet(SymbolDistribution::uniform(), 0, 0.5), BuildError);
    EXPECT_THROW(split_alphabet(SymbolDistribution::uniform(), 9, 0.0), InvalidArgument);
    EXPECT_THROW(split_alphabet(SymbolDistribution::uniform(), 0, 1.0), InvalidArgument);
    const auto full = split_alphabet(SymbolDistribution::uniform(), 8, 0.0);
    EXPECT_EQ(full.size(), 1u);
}

TEST(ShiftBound, ReferenceValues) {
    const auto lap = make_distribution({Family::LaplacianResidual, 0.5});
    EXPECT_DOUBLE_EQ(shift_efficiency_bound(lap, 0), 1.0);
    EXPECT_DOUBLE_EQ(shift_efficiency_bound(SymbolDistribution::point_mass(0), 1), 0.0);
    const double expected[] = {0.995, 0.976, 0.917, 0.796, 0.669};
    for (unsigned s = 1; s <= 5; ++s) EXPECT_NEAR(shift_efficiency_bound(lap, s), expected[s - 1], 0.01);
}

TEST(GrowChapter, FourSymbolExample) {
    const auto a = oracle::abcd_alphabet();
    const auto words = grow_chapter(a, 0, 8, 64);
    EXPECT_EQ(word_strings(words), (std::set<std::string>{"a", "b", "c", "d", "aa", "aaa", "aaaa", "aaaaa"}));
    const auto second = grow_chapter(a, 1, 8, 64);
    ASSERT_EQ(second.size(), 8u);
    for (const auto& w : second) EXPECT_NE(w.symbols.front(), 0);
    const auto s = word_strings(second);
    EXPECT_TRUE(s.count("b") && s.count("c") && s.count("d") && s.count("ba"));
}

TEST(GrowChapter, NoRoomToGrow) {
    const QuotientAlphabet a(0, {{0, 0.6}, {1, 0.4}}, 0.0, 0.0);
    const auto words = grow_chapter(a, 0, 2, 64);
    EXPECT_EQ(word_strings(words), (std::set<std::string>{"a", "b"}));
}

TEST(GrowChapter, Errors) {
    const auto a = oracle::abcd_alphabet();
    EXPECT_THROW(grow_chapter(a, 4, 8, 64), BuildError);
    EXPECT_THROW(grow_chapter(a, 0, 2, 64), BuildError);
    EXPECT_THROW(grow_chapter(a, 0, 64, 2), BuildError);
}

TEST(GrowChapter, MatchesBruteForceOracle) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.05, 1.0);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t q = 2 + trial % 7;
        std::vector<double> w(q);
        for (auto& v : w) v = u(rng);
        std::sort(w.rbegin(), w.rend());
        const double total = std::accumulate(w.begin(), w.end(), 0.0);
        std::vector<RankedQuotient> quotients;
        for (std::size_t r = 0; r < q; ++r) quotients.push_back({static_cast<std::uint8_t>(r), w[r] / total});
        const QuotientAlphabet a(0, quotients, 0.0, 0.0);
        const auto p = a.parse_probs();
        const unsigned exclusion = trial % 2 ? 1u : 0u;
        const std::size_t size = std::size_t{1} << (4 + trial % 3);
        // A root unrelated to p keeps exact priority ties out of the comparison.
        std::vector<double> root(q, 0.0);
        double tail = 0.0;
        for (std::size_t r = exclusion; r < q; ++r) tail += root[r] = u(rng);
        for (std::size_t r = exclusion; r < q; ++r) root[r] /= tail;

        std::vector<std::string> got;
        for (const auto& word : grow_chapter(a, root, exclusion, size, 64)) {
            std::string s;
            for (auto v : word.symbols) s.push_back(char(a.rank_of(v)));
            got.push_back(s);
        }
        // Words built from the same symbols in another order tie exactly, so
        // the comparison is on the sorted word probabilities.
        auto probs = [&](const std::vector<std::string>& words) {
            std::vector<double> out;
            for (const auto& w : words) {
                double v = root[std::size_t(w[0])];
                for (std::size_t i = 1; i < w.size(); ++i) v *= p[std::size_t(w[i])];
                out.push_back(v);
            }
            std::sort(out.begin(), out.end());
            return out;
        };
        const auto expected = probs(oracle::brute_force_growth(root, p, exclusion, size));
        const auto actual = probs(got);
        ASSERT_EQ(actual.size(), expected.size());
        for (std::size_t i = 0; i < actual.size(); ++i)
            EXPECT_NEAR(actual[i], expected[i], 1e-12 * expected[i]) << "trial " << trial;
    }
}

TEST(AssignCodewords, FourSymbolEvenOddSplit) {
    const auto d = oracle::four_symbol_dictionary();
    const auto chapter0 = d.chapter(0);
    const auto slots = assign_codewords(chapter0, 3, 1);
    std::set<std::string> even, odd;
    for (std::size_t i = 0; i < chapter0.size(); ++i)
        (slots[i] % 2 ? odd : even).insert(oracle::to_letters(chapter0[i].symbols));
    EXPECT_EQ(even, (std::set<std::string>{"aaaa", "ba", "c", "d"}));
    EXPECT_EQ(odd, (std::set<std::string>{"a", "aa", "aaa", "b"}));
}

TEST(AssignCodewords, BijectionAndChildOrder) {
    const auto a = oracle::abcd_alphabet();
    const auto words = grow_chapter(a, 0, 16, 64);
    for (unsigned o : {0u, 1u, 2u, 4u}) {
        const auto slots = assign_codewords(words, 4, o);
        std::set<std::uint32_t> unique(slots.begin(), slots.end());
        EXPECT_EQ(unique.size(), 16u);
        EXPECT_LT(*unique.rbegin(), 16u);
        const std::uint32_t mask = (1u << o) - 1u;
        for (std::size_t i = 0; i < words.size(); ++i)
            for (std::size_t j = 0; j < words.size(); ++j) {
                if ((slots[i] & mask) < (slots[j] & mask)) {
                    EXPECT_LE(words[i].children, words[j].children);
                }
            }
        if (o == 0) {
            for (auto s : slots) EXPECT_EQ(s & mask, 0u);
        }
    }
}

TEST(MakeShape, RejectsInvalidDictionaries) {
    auto base = [] {
        std::vector<std::vector<std::uint16_t>> w{{0}, {1}, {0, 0}, {0, 1}};
        return w;
    };
    EXPECT_NO_THROW(make_shape(2, 0, 2, base()));
    auto dup = base();
    dup[3] = {0, 0};
    EXPECT_THROW(make_shape(2, 0, 2, dup), InvalidArgument);
    auto orphan = base();
    orphan[3] = {1, 1, 1};
    EXPECT_THROW(make_shape(2, 0, 2, orphan), InvalidArgument);
    auto gap = base();
    gap[2] = {0, 1};
    gap[3] = {1, 1};
    EXPECT_THROW(make_shape(2, 0, 2, gap), InvalidArgument);
    auto missing = base();
    missing[1] = {0, 0, 0};
    EXPECT_THROW(make_shape(2, 0, 2, missing), InvalidArgument);
}

TEST(MakeShape, SafetyViolationIsRejected) {
    // Chapter 1 admits only rank 1, so odd codewords need at least one child.
    // Codeword 3 ("aa") has none.
    std::vector<std::vector<std::uint16_t>> w{{0}, {1}, {1, 0}, {0, 0}, {1}, {1, 1}, {1, 0}, {1, 1, 0}};
    EXPECT_THROW(make_shape(2, 1, 2, w), InvalidArgument);
}

TEST(Chain, SingleChapterIsTrivial) {
    const auto a = oracle::abcd_alphabet();
    BuildParams params{3, 0, 256, 64, 3};
    const auto d = build_dictionary(a, params, "abcd", 0.0);
    ASSERT_EQ(d.stationary().size(), 1u);
    EXPECT_DOUBLE_EQ(d.stationary()[0], 1.0);
}

TEST(Chain, MirroredChaptersSplitByOddEmissions) {
    // Both chapters hold {aa, ab, b, a} at codewords 0..3 of two equiprobable
    // symbols. Only "ab" (mass 1/4) and the never-emitted "a" lead to chapter 1.
    const QuotientAlphabet a(0, {{0, 0.5}, {1, 0.5}}, 0.0, 0.0);
    const std::vector<std::vector<std::uint8_t>> words{{0, 0}, {0, 1}, {1}, {0}, {0, 0}, {0, 1}, {1}, {0}};
    const auto d = MarlinDictionary::assemble(2, 1, a, words, "mirror", 1.0, 256);
    ASSERT_EQ(d.stationary().size(), 2u);
    EXPECT_NEAR(d.stationary()[0], 0.75, 1e-9);
    EXPECT_NEAR(d.stationary()[1], 0.25, 1e-9);
    EXPECT_NEAR(d.mean_word_length(), 1.5, 1e-9);
}

TEST(Chain, FourSymbolMatchesMonteCarlo) {
    const auto d = oracle::four_symbol_dictionary();
    const auto mc = oracle::monte_carlo_parse(d, 2'000'000, 11);
    EXPECT_TRUE(mc.always_parsed);
    EXPECT_NEAR(mc.mean_word_length / d.mean_word_length(), 1.0, 3e-3);
    for (unsigned c = 0; c < 2; ++c) EXPECT_NEAR(mc.chapter_frequency[c], d.stationary()[c], 3e-3);
}

TEST(Chain, ReportsNonConvergence) {
    const auto d = oracle::four_symbol_dictionary();
    ChainOptions opts;
    opts.max_iterations = 2;
    opts.tolerance = 1e-15;
    EXPECT_THROW(solve_chain(d.shape(), d.alphabet().parse_probs(), opts), ConvergenceError);
}

TEST(BuildDictionary, ToyMatchesMonteCarlo) {
    const auto a = oracle::abcd_alphabet();
    BuildParams params{3, 1, 256, 64, 3};
    const auto d = build_dictionary(a, params, "abcd", 0.0);
    std::array<double, kAlphabetSize> p{};
    p[0] = 0.7, p[1] = 0.15, p[2] = 0.1, p[3] = 0.05;
    expect_invariants(d, SymbolDistribution(p));
    const auto mc = oracle::monte_carlo_parse(d, 2'000'000, 5);
    EXPECT_TRUE(mc.always_parsed);
    EXPECT_NEAR(mc.mean_word_length / d.mean_word_length(), 1.0, 3e-3);
    for (unsigned c = 0; c < 2; ++c) EXPECT_NEAR(mc.chapter_frequency[c], d.stationary()[c], 3e-3);
}

TEST(BuildDictionary, InvariantsAcrossSources) {
    for (auto family : {Family::LaplacianResidual, Family::Poisson, Family::ExponentialResidual})
        for (double f : {0.1, 0.4, 0.7})
            for (unsigned o : {0u, 2u, 4u}) {
                const auto dist = make_distribution({family, f});
                const auto a = split_alphabet(dist, f > 0.5 ? 2 : 0, 1.0 / 4096);
                BuildParams params{8, o, 4096, 64, 3};
                const auto d = build_dictionary(a, params, "x", entropy(dist));
                SCOPED_TRACE(std::string(to_string(family)) + " " + std::to_string(f) + " O=" + std::to_string(o));
                expect_invariants(d, dist);
            }
}

TEST(BuildDictionary, RejectsOversizedAlphabet) {
    const auto a = split_alphabet(SymbolDistribution::uniform(), 0, 0.0);
    EXPECT_THROW(build_dictionary(a, BuildParams{8, 0, 4096, 64, 3}, "u", 8.0), BuildError);
    EXPECT_THROW(build_dictionary(a, BuildParams{8, 9, 4096, 64, 3}, "u", 8.0), InvalidArgument);
}

TEST(AbrEstimate, PointMassFollowsDeepestChain) {
    const auto dist = SymbolDistribution::point_mass(0);
    const auto a = split_alphabet(dist, 0, 0.0);
    const auto d = build_dictionary(a, BuildParams{9, 0, 4096, 64, 3}, "pm", 0.0);
    EXPECT_NEAR(d.mean_word_length(), 64.0, 1e-9);
    EXPECT_NEAR(abr_estimate(d, dist, 4096), 9.0 / 64.0, 1e-9);
}

TEST(AbrEstimate, FullShiftIsPureReminder) {
    const auto a = split_alphabet(SymbolDistribution::uniform(), 8, 0.0);
    const auto d = build_dictionary(a, BuildParams{}, "u", 8.0);
    EXPECT_TRUE(d.is_empty_quotient());
    EXPECT_DOUBLE_EQ(abr_estimate(d, SymbolDistribution::uniform(), 4096), 8.0);
    EXPECT_DOUBLE_EQ(d.efficiency_estimate(), 1.0);
}

TEST(AbrEstimate, LaplacianHalfEntropyLargeDictionary) {
    const auto dist = make_distribution({Family::LaplacianResidual, 0.5});
    const auto d = best_dictionary_for_shift(dist, 0, BuildParams{12, 0, 4096, 64, 3}, "lap");
    EXPECT_NEAR(d.efficiency_estimate(), 0.935321, 0.025);
}

TEST(AbrEstimate, ReusesStructureUnderOtherSources) {
    const auto train = make_distribution({Family::LaplacianResidual, 0.5});
    const auto d = best_dictionary_for(train, BuildParams{}, "lap");
    EXPECT_NEAR(abr_estimate(d, train, 4096), d.abr_estimate(), 1e-9);
    const auto other = make_distribution({Family::LaplacianResidual, 0.3});
    EXPECT_GE(abr_estimate(d, other, 4096), d.shift());
}

TEST(BestDictionary, ShiftChoices) {
    const BuildParams params;
    EXPECT_GE(best_dictionary_for(SymbolDistribution::uniform(), params, "u").shift(), 4u);
    EXPECT_EQ(best_dictionary_for(SymbolDistribution::point_mass(0), params, "pm").shift(), 0u);
    EXPECT_GE(best_dictionary_for(make_distribution({Family::LaplacianResidual, 0.95}), params, "l").shift(), 1u);
}

TEST(BestDictionary, PruningDoesNotChangeResult) {
    for (double f : {0.3, 0.8}) {
        const auto dist = make_distribution({Family::Poisson, f});
        const auto pruned = best_dictionary_for(dist, BuildParams{}, "p");
        const auto full = best_dictionary_for(dist, BuildParams{}, "p", SearchOptions{kMaxShift, false});
        EXPECT_EQ(pruned.shift(), full.shift());
        EXPECT_DOUBLE_EQ(pruned.efficiency_estimate(), full.efficiency_estimate());
    }
}

TEST(ThresholdGrid, AscendingLogGrid) {
    const auto g = threshold_grid();
    ASSERT_EQ(g.size(), 12u);
    EXPECT_EQ(g.front(), 0.0);
    EXPECT_DOUBLE_EQ(g[1], std::ldexp(1.0, -16));
    EXPECT_DOUBLE_EQ(g.back(), 1.0 / 64);
    EXPECT_TRUE(std::is_sorted(g.begin(), g.end()));
}

class SetTest : public ::testing::Test {
protected:
    static void SetUpTestSuite() {
        SetConfig config;
        const std::vector<double> fractions{0.1, 0.3, 0.5, 0.7, 0.9};
        config.grid = family_grid(Family::LaplacianResidual, fractions);
        set_ = new DictionarySet(build_dictionary_set(config));
    }
    static void TearDownTestSuite() {
        delete set_;
        set_ = nullptr;
    }
    static DictionarySet* set_;
};

DictionarySet* SetTest::set_ = nullptr;

TEST_F(SetTest, OneDictionaryPerGridPoint) {
    ASSERT_EQ(set_->size(), 5u);
    EXPECT_EQ((*set_)[2].source_id(), "laplacian:0.5");
    EXPECT_NE(set_->metadata_json().find("\"grid\""), std::string::npos);
}

TEST_F(SetTest, SelectsTrainingDictionary) {
    const std::vector<double> fractions{0.1, 0.3, 0.5, 0.7, 0.9};
    for (std::size_t i = 0; i < fractions.size(); ++i) {
        const auto dist = make_distribution({Family::LaplacianResidual, fractions[i]});
        const auto chosen = select_dictionary(*set_, dist, 4096);
        EXPECT_LE(abr_estimate((*set_)[chosen], dist, 4096), abr_estimate((*set_)[i], dist, 4096));
    }
}

TEST_F(SetTest, PointMassAndUniformHistograms) {
    EXPECT_EQ(select_dictionary(*set_, SymbolDistribution::point_mass(0), 4096), 0u);
    const auto chosen = select_dictionary(*set_, SymbolDistribution::uniform(), 4096);
    unsigned max_shift = 0;
    for (const auto& d : set_->dictionaries()) max_shift = std::max(max_shift, d.shift());
    EXPECT_EQ((*set_)[chosen].shift(), max_shift);
}

TEST_F(SetTest, FastSelectionTracksTrainingSource) {
    const std::vector<double> fractions{0.1, 0.3, 0.5, 0.7, 0.9};
    for (std::size_t i = 0; i < fractions.size(); ++i) {
        const auto m = sample(make_distribution({Family::LaplacianResidual, fractions[i]}), 4096, 9 + i);
        std::array<std::uint32_t, kAlphabetSize> counts{};
        for (auto b : m) ++counts[b];
        EXPECT_EQ(select_dictionary_fast(*set_, counts), i);
    }
}

TEST(DictionarySet, GridErrors) {
    SetConfig config;
    EXPECT_THROW(build_dictionary_set(config), InvalidArgument);
    config.grid.assign(256, GridPoint{Family::LaplacianResidual, 0.5});
    EXPECT_THROW(build_dictionary_set(config), InvalidArgument);
}

TEST(DictionarySet, CountsGridPoints) {
    SetConfig config;
    for (int i = 1; i <= 19; ++i) config.grid.push_back({Family::LaplacianResidual, 0.05 * i});
    EXPECT_EQ(build_dictionary_set(config).size(), 19u);
}

TEST(DictionarySet, DefaultConfigShape) {
    const auto config = default_set_config();
    EXPECT_EQ(config.grid.size(), 58u);
    EXPECT_EQ(config.params.key_bits, 8u);
    EXPECT_EQ(config.params.overlap_bits, 4u);
    EXPECT_EQ(config.params.block_n, 4096u);
}
