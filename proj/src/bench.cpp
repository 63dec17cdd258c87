#include "ricemarlin/bench.hpp"

#include <algorithm>
#include <chrono>
#include <iomanip>
#include <memory>
#include <sstream>
#include <thread>

#include "ricemarlin/container.hpp"
#include "ricemarlin/dictionary_set.hpp"
#include "ricemarlin/errors.hpp"
#include "ricemarlin/parallel.hpp"

namespace ricemarlin {

MeasuredSize measure_compressed_size(const BlockCodec& codec, std::span<const std::uint8_t> message,
                                     std::size_t block_size, unsigned threads) {
    if (block_size == 0) throw InvalidArgument("block size must be positive");
    const std::size_t count = (message.size() + block_size - 1) / block_size;
    std::vector<std::size_t> sizes(count);
    std::vector<char> raw(count);
    parallel_for(count, threads, [&](std::size_t i) {
        const auto chunk = message.subspan(i * block_size, std::min(block_size, message.size() - i * block_size));
        const auto block = codec.encode(chunk);
        sizes[i] = serialized_size(block, chunk.size());
        raw[i] = block.is_raw();
    });
    MeasuredSize m;
    m.symbols = message.size();
    m.blocks = count;
    for (std::size_t i = 0; i < count; ++i) {
        m.total_bits += 8 * sizes[i];
        m.payload_bits += 8 * (sizes[i] - (raw[i] ? 1 : 2));
        m.raw_blocks += raw[i] ? 1 : 0;
    }
    return m;
}

std::vector<SyntheticRow> run_synthetic(const SyntheticConfig& config) {
    std::vector<SyntheticRow> rows;
    for (Family family : config.families)
        for (double fraction : config.fractions)
            for (unsigned key_bits : config.key_bits) {
                const auto dist = make_distribution({family, fraction});
                const double h = entropy(dist);
                BuildParams params;
                params.key_bits = key_bits;
                params.overlap_bits = std::min(config.overlap_bits, key_bits);
                params.block_n = config.block_size;
                std::ostringstream id;
                id << to_string(family) << ':' << fraction;
                MarlinDictionary dict = config.shift ? best_dictionary_for_shift(dist, *config.shift, params, id.str())
                                                     : best_dictionary_for(dist, params, id.str());
                SyntheticRow row{family,
                                 fraction,
                                 std::size_t{1} << key_bits,
                                 key_bits,
                                 params.overlap_bits,
                                 dict.shift(),
                                 dict.alphabet().threshold(),
                                 h,
                                 dict.efficiency_estimate(),
                                 0.0,
                                 0.0,
                                 shift_efficiency_bound(dist, dict.shift())};
                std::vector<MarlinDictionary> one;
                one.push_back(std::move(dict));
                const BlockCodec codec(std::make_shared<DictionarySet>(std::move(one), params, "{}"));
                const auto message = sample(dist, config.sample_bytes, config.seed);
                const auto measured = measure_compressed_size(codec, message, config.block_size, config.threads);
                row.measured_efficiency = h / measured.bits_per_symbol();
                row.measured_efficiency_with_headers = h / measured.bits_per_symbol_with_headers();
                rows.push_back(row);
            }
    return rows;
}

void write_synthetic_csv(std::ostream& out, std::span<const SyntheticRow> rows) {
    out << "family,entropy_fraction,dictionary_size,K,O,S,threshold,entropy_bits,predicted_efficiency,"
           "measured_efficiency,measured_efficiency_with_headers,shift_bound\n";
    const auto flags = out.flags();
    for (const auto& r : rows) {
        out << to_string(r.family) << ',' << std::setprecision(6) << r.fraction << ',' << r.dictionary_size << ','
            << r.key_bits << ',' << r.overlap_bits << ',' << r.shift << ',' << r.threshold << ','
            << std::setprecision(8) << r.entropy << ',' << r.predicted_efficiency << ',' << r.measured_efficiency
            << ',' << r.measured_efficiency_with_headers << ',' << r.shift_bound << '\n';
    }
    out.flags(flags);
}

namespace {

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t m = v.size() / 2;
    return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

template <typename Fn>
double seconds(Fn&& fn) {
    const auto start = std::chrono::steady_clock::now();
    fn();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

SpeedReport bench_speed(const BlockCodec& codec, std::span<const std::uint8_t> corpus, const SpeedConfig& config) {
    if (corpus.empty()) throw InvalidArgument("benchmark corpus is empty");
    if (config.runs == 0) throw InvalidArgument("at least one timed run is required");
    const unsigned mt = config.threads ? config.threads : std::max(1u, std::thread::hardware_concurrency());
    const double mib = static_cast<double>(corpus.size()) / double(1 << 20);

    auto container = compress_bytes(codec, corpus, config.block_size, 1);
    if (decompress_container(codec, container, 1) != std::vector<std::uint8_t>(corpus.begin(), corpus.end()))
        throw InvalidArgument("benchmark round trip failed");

    SpeedReport report;
    report.original_bytes = corpus.size();
    report.compressed_bytes = container.size();
    report.ratio = static_cast<double>(corpus.size()) / static_cast<double>(container.size());
    report.runs = config.runs;
    report.threads_mt = mt;

    auto measure = [&](unsigned threads, double& encode, double& decode) {
        std::vector<double> enc, dec;
        for (unsigned run = 0; run < config.runs; ++run) {
            enc.push_back(seconds([&] { container = compress_bytes(codec, corpus, config.block_size, threads); }));
            std::vector<std::uint8_t> out;
            dec.push_back(seconds([&] { out = decompress_container(codec, container, threads); }));
            if (out.size() != corpus.size()) throw InvalidArgument("benchmark round trip failed");
        }
        encode = mib / median(enc);
        decode = mib / median(dec);
    };
    measure(1, report.encode_mib_s, report.decode_mib_s);
    measure(mt, report.encode_mib_s_mt, report.decode_mib_s_mt);
    return report;
}

}  // namespace ricemarlin
