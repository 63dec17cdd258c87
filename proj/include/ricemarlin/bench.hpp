#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "ricemarlin/codec.hpp"
#include "ricemarlin/source_model.hpp"

namespace ricemarlin {

/// Compressed size of a message coded block by block.
struct MeasuredSize {
    std::size_t symbols = 0;
    std::size_t payload_bits = 0;  ///< block bytes minus the 2-byte headers (raw: the payload)
    std::size_t total_bits = 0;    ///< every block byte
    std::size_t raw_blocks = 0;
    std::size_t blocks = 0;

    double bits_per_symbol() const { return symbols ? double(payload_bits) / double(symbols) : 0.0; }
    double bits_per_symbol_with_headers() const { return symbols ? double(total_bits) / double(symbols) : 0.0; }
};

MeasuredSize measure_compressed_size(const BlockCodec& codec, std::span<const std::uint8_t> message,
                                     std::size_t block_size, unsigned threads = 0);

struct SyntheticConfig {
    std::vector<Family> families{Family::LaplacianResidual};
    std::vector<double> fractions{0.5};
    std::vector<unsigned> key_bits{8};  ///< dictionary sizes 2^K
    unsigned overlap_bits = 4;
    std::optional<unsigned> shift;  ///< fixed S, or search every S
    std::size_t sample_bytes = std::size_t{16} << 20;
    std::size_t block_size = 4096;
    std::uint64_t seed = 1;
    unsigned threads = 0;
};

struct SyntheticRow {
    Family family;
    double fraction;
    std::size_t dictionary_size;
    unsigned key_bits;
    unsigned overlap_bits;
    unsigned shift;
    double threshold;
    double entropy;
    double predicted_efficiency;
    double measured_efficiency;
    double measured_efficiency_with_headers;
    double shift_bound;
};

/// One row per (family, fraction, K): builds the best dictionary for the
/// source (overlap bits clamped to K), codes sample_bytes drawn from it and
/// compares the measured rate with the source entropy.
std::vector<SyntheticRow> run_synthetic(const SyntheticConfig& config);

void write_synthetic_csv(std::ostream& out, std::span<const SyntheticRow> rows);

struct SpeedConfig {
    std::size_t block_size = 4096;
    unsigned runs = 5;
    unsigned threads = 0;  ///< multi-threaded passes (0 = hardware concurrency)
};

struct SpeedReport {
    std::size_t original_bytes = 0;
    std::size_t compressed_bytes = 0;
    double ratio = 0.0;
    double encode_mib_s = 0.0;  ///< single thread, median
    double decode_mib_s = 0.0;
    double encode_mib_s_mt = 0.0;
    double decode_mib_s_mt = 0.0;
    unsigned threads_mt = 0;
    unsigned runs = 0;
};

/// Times container compression and decompression of `corpus` after one
/// warm-up pass, reporting the median of `runs` passes. Throws
/// InvalidArgument on an empty corpus or when a round trip differs.
SpeedReport bench_speed(const BlockCodec& codec, std::span<const std::uint8_t> corpus, const SpeedConfig& config);

}  // namespace ricemarlin
