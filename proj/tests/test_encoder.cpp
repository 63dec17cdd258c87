#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "ricemarlin/alphabet.hpp"
#include "ricemarlin/bit_io.hpp"
#include "ricemarlin/block.hpp"
#include "ricemarlin/decoder.hpp"
#include "ricemarlin/dictionary.hpp"
#include "ricemarlin/dictionary_set.hpp"
#include "ricemarlin/encoder.hpp"

using namespace ricemarlin;

namespace {

const std::vector<std::uint8_t> kExample = oracle::letters("aaabac");

}  // namespace

TEST(EncoderMatrix, FourSymbolTransitions) {
    const auto d = oracle::four_symbol_dictionary();
    const auto m = build_encoder_matrix(d);
    EXPECT_EQ(m.ranks(), 4u);
    EXPECT_EQ(m.states(), 16u);
    // "aa" (0011) extended by 'a' becomes "aaa" (0101) without emitting.
    EXPECT_EQ(m.cell(0, 0b0011), 0b0101u);
    // "aa" followed by 'b' emits 0011 and continues at "b" of chapter 1 (1111).
    EXPECT_EQ(m.cell(1, 0b0011), EncoderMatrix::kEmit | 0b1111u);
    // "aaaa" has no children: 'a' emits and restarts at "a" in chapter 0.
    EXPECT_EQ(m.cell(0, 0b0000), EncoderMatrix::kEmit | 0b0001u);
    EXPECT_EQ(m.initial_state(0), 0b0001u);
    EXPECT_EQ(m.initial_state(3), 0b0110u);
}

TEST(EncoderMatrix, ExcludedFirstSymbolIsTrapped) {
    const auto d = oracle::four_symbol_dictionary();
    const auto m = build_encoder_matrix(d);
    // Chapter 1 admits only b, c, d as first symbols; "ba" (1001) continues
    // with 'a' into "baa" and nothing trapped there.
    EXPECT_EQ(m.cell(0, 0b1001), 0b1011u);
    for (std::uint32_t s = 0; s < m.states(); ++s)
        for (std::size_t r = 0; r < m.ranks(); ++r) {
            const auto cell = m.cell(r, s);
            if (cell == EncoderMatrix::kTrap) continue;
            const std::uint32_t next = cell & ~EncoderMatrix::kEmit;
            ASSERT_LT(next, m.states());
            if (cell & EncoderMatrix::kEmit) {
                EXPECT_EQ(next >> 3, s & 1u);
            }
        }
}

TEST(EncodeRanks, FourSymbolMessage) {
    const auto d = oracle::four_symbol_dictionary();
    const auto m = build_encoder_matrix(d);
    EXPECT_EQ(encode_ranks(m, kExample, 3), (std::vector<std::uint32_t>{5, 1, 5}));
    EXPECT_EQ(encode_ranks(m, oracle::letters("a"), 3), (std::vector<std::uint32_t>{1}));
    EXPECT_TRUE(encode_ranks(m, {}, 3).empty());
}

TEST(EncodeBlock, FourSymbolBlockLayout) {
    const auto d = oracle::four_symbol_dictionary();
    const auto m = build_encoder_matrix(d);
    const auto block = encode_block(d, m, 7, kExample);
    ASSERT_FALSE(block.is_raw());
    EXPECT_EQ(block.dict_index, 7);
    EXPECT_EQ(block.quotients, (std::vector<std::uint8_t>{0xA6, 0x80}));
    EXPECT_TRUE(block.escapes.empty());
    EXPECT_TRUE(block.reminders.empty());
    EXPECT_EQ(serialized_size(block, kExample.size()), 4u);
}

TEST(EncodeBlock, EmptyMessageIsCodedEmptyBlock) {
    const auto d = oracle::four_symbol_dictionary();
    const auto block = encode_block(d, build_encoder_matrix(d), 0, {});
    EXPECT_FALSE(block.is_raw());
    EXPECT_TRUE(block.quotients.empty());
    EXPECT_EQ(serialize_block(block, 0), (std::vector<std::uint8_t>{0x00, 0x00}));
}

TEST(EncodeBlock, IncompressibleInputFallsBackToRaw) {
    const auto dist = make_distribution({Family::LaplacianResidual, 0.2});
    const auto d = best_dictionary_for_shift(dist, 0, BuildParams{}, "low");
    const auto m = build_encoder_matrix(d);
    const auto message = sample(SymbolDistribution::uniform(), 4096, 3);
    const auto block = encode_block(d, m, 0, message);
    ASSERT_TRUE(block.is_raw());
    EXPECT_EQ(block.raw, message);
    EXPECT_EQ(serialized_size(block, message.size()), message.size() + 1);
}

TEST(EncodeBlock, TooManyEscapesFallsBackToRaw) {
    const auto dist = make_distribution({Family::LaplacianResidual, 0.5});
    const auto a = split_alphabet(dist, 0, 1.0 / 1024);
    ASSERT_GT(a.excluded_symbols().count(), 0u);
    const auto d = build_dictionary(a, BuildParams{}, "esc", entropy(dist));
    const auto m = build_encoder_matrix(d);
    std::uint8_t excluded = 0;
    while (!a.is_excluded(excluded)) ++excluded;

    std::vector<std::uint8_t> message(2000, a.placeholder());
    for (std::size_t i = 0; i < 255; ++i) message[i * 7] = excluded;
    const auto coded = encode_block(d, m, 0, message);
    ASSERT_FALSE(coded.is_raw());
    ASSERT_EQ(coded.escapes.size(), 255u);
    for (std::size_t i = 0; i < 255; ++i) EXPECT_EQ(coded.escapes[i], (Escape{i * 7, excluded}));

    message[1999] = excluded;
    EXPECT_TRUE(encode_block(d, m, 0, message).is_raw());
}

TEST(EncodeBlock, ReminderFieldMatchesPacking) {
    const auto dist = make_distribution({Family::LaplacianResidual, 0.8});
    const auto d = best_dictionary_for_shift(dist, 3, BuildParams{}, "s3");
    const auto message = sample(dist, 1000, 5);
    const auto block = encode_block(d, build_encoder_matrix(d), 0, message);
    ASSERT_FALSE(block.is_raw());
    EXPECT_EQ(block.reminders, pack_reminders(message, 3));
}

TEST(EncodeBlock, Deterministic) {
    const auto dist = make_distribution({Family::Poisson, 0.4});
    const auto d = best_dictionary_for(dist, BuildParams{}, "p");
    const auto m = build_encoder_matrix(d);
    const auto message = sample(dist, 4096, 8);
    EXPECT_EQ(encode_block(d, m, 1, message), encode_block(d, m, 1, message));
}

TEST(EncodeBlock, RoundTripAcrossShapes) {
    std::mt19937_64 rng(21);
    for (unsigned o : {0u, 1u, 4u})
        for (double f : {0.15, 0.5, 0.85}) {
            const auto dist = make_distribution({Family::LaplacianResidual, f});
            const auto d = best_dictionary_for(dist, BuildParams{8, o, 4096, 64, 3}, "rt");
            const auto m = build_encoder_matrix(d);
            const auto t = build_decoder_table(d);
            for (std::size_t n : {1u, 2u, 17u, 300u, 4096u}) {
                const auto message = sample(dist, n, rng());
                const auto block = encode_block(d, m, 0, message);
                EXPECT_EQ(decode_block(d, t, block, n), message) << "O=" << o << " f=" << f << " n=" << n;
            }
        }
}
