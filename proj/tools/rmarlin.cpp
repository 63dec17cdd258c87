#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ricemarlin/bench.hpp"
#include "ricemarlin/codec.hpp"
#include "ricemarlin/container.hpp"
#include "ricemarlin/dictionary_set.hpp"
#include "ricemarlin/dictset_io.hpp"
#include "ricemarlin/errors.hpp"
#include "ricemarlin/image.hpp"

namespace rm = ricemarlin;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitCorrupt = 3;
constexpr int kExitFailure = 4;

rm::SetConfig load_set_config(const std::string& path) {
    rm::SetConfig config = rm::default_set_config();
    if (path.empty()) return config;
    const auto bytes = rm::read_file(path);
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(bytes.begin(), bytes.end());
    } catch (const nlohmann::json::exception& e) {
        throw rm::InvalidArgument(std::string("config: ") + e.what());
    }
    config.params.key_bits = j.value("key_bits", config.params.key_bits);
    config.params.overlap_bits = j.value("overlap_bits", config.params.overlap_bits);
    config.params.block_n = j.value("block_n", config.params.block_n);
    config.params.max_word_length = j.value("max_word_length", config.params.max_word_length);
    config.params.refinement_rounds = j.value("refinement_rounds", config.params.refinement_rounds);
    if (j.contains("grid")) {
        config.grid.clear();
        for (const auto& entry : j.at("grid")) {
            const auto family = rm::parse_family(entry.at("family").get<std::string>());
            for (double f : entry.at("fractions").get<std::vector<double>>()) config.grid.push_back({family, f});
        }
    }
    return config;
}

std::shared_ptr<const rm::DictionarySet> load_set(const std::string& path) {
    return std::make_shared<const rm::DictionarySet>(rm::load_dictset_file(path));
}

void print_set(const rm::DictionarySet& set, std::ostream& out) {
    out << "index,source,S,threshold,quotients,efficiency\n";
    for (std::size_t i = 0; i < set.size(); ++i) {
        const auto& d = set[i];
        out << i << ',' << d.source_id() << ',' << d.shift() << ',' << d.alphabet().threshold() << ','
            << d.alphabet().size() << ',' << std::setprecision(6) << d.efficiency_estimate() << '\n';
    }
}

std::vector<rm::Family> parse_families(const std::vector<std::string>& names) {
    std::vector<rm::Family> out;
    for (const auto& n : names) out.push_back(rm::parse_family(n));
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Rice-Marlin variable-to-fixed entropy codec"};
    app.require_subcommand(1);

    // build-dictset
    auto* build = app.add_subcommand("build-dictset", "Build a dictionary set and save it");
    std::string build_out, build_config;
    std::optional<unsigned> build_k, build_o;
    std::optional<std::size_t> build_block;
    unsigned build_threads = 0;
    build->add_option("-o,--out", build_out, "Output dictionary-set file")->required();
    build->add_option("-c,--config", build_config, "JSON config (key_bits, overlap_bits, block_n, grid)");
    build->add_option("-K,--key-bits", build_k, "Bits consumed per codeword");
    build->add_option("-O,--overlap-bits", build_o, "Overlap bits between codewords");
    build->add_option("-b,--block-size", build_block, "Nominal block size for the escape cost");
    build->add_option("-j,--threads", build_threads, "Worker threads (0 = all cores)");

    // compress
    auto* compress = app.add_subcommand("compress", "Compress a file into a container");
    std::string c_set, c_in, c_out;
    std::size_t c_block = rm::kDefaultBlockSize;
    bool c_image = false, c_exact = false;
    unsigned c_threads = 0;
    compress->add_option("-s,--set", c_set, "Dictionary-set file")->required();
    compress->add_option("input", c_in, "Input file")->required();
    compress->add_option("output", c_out, "Output container")->required();
    compress->add_option("-b,--block-size", c_block, "Block size in bytes");
    compress->add_flag("--image", c_image, "Treat input as an 8-bit PGM and code 64x64 tile residuals");
    compress->add_flag("--exact-selection", c_exact, "Pick dictionaries by the full rate model");
    compress->add_option("-j,--threads", c_threads, "Worker threads (0 = all cores)");

    // decompress
    auto* decompress = app.add_subcommand("decompress", "Restore a file from a container");
    std::string d_set, d_in, d_out;
    unsigned d_threads = 0;
    decompress->add_option("-s,--set", d_set, "Dictionary-set file")->required();
    decompress->add_option("input", d_in, "Input container")->required();
    decompress->add_option("output", d_out, "Output file")->required();
    decompress->add_option("-j,--threads", d_threads, "Worker threads (0 = all cores)");

    // bench-synthetic
    auto* synth = app.add_subcommand("bench-synthetic", "Efficiency study on synthetic sources (CSV)");
    std::vector<std::string> s_families{"laplacian"};
    rm::SyntheticConfig s_config;
    std::optional<unsigned> s_shift;
    std::string s_csv;
    synth->add_option("--families", s_families, "Distribution families");
    synth->add_option("--fractions", s_config.fractions, "Entropy fractions of 8 bits");
    synth->add_option("--key-bits", s_config.key_bits, "Dictionary sizes as K (2^K words)");
    synth->add_option("-O,--overlap-bits", s_config.overlap_bits, "Overlap bits (clamped to K)");
    synth->add_option("--shift", s_shift, "Fixed shift S (default: search)");
    synth->add_option("--sample-bytes", s_config.sample_bytes, "Symbols coded per row");
    synth->add_option("-b,--block-size", s_config.block_size, "Block size");
    synth->add_option("--seed", s_config.seed, "Sampling seed");
    synth->add_option("-j,--threads", s_config.threads, "Worker threads (0 = all cores)");
    synth->add_option("--csv", s_csv, "CSV output path (default: stdout)");

    // bench-speed
    auto* speed = app.add_subcommand("bench-speed", "Throughput benchmark");
    std::string b_set, b_corpus, b_family = "laplacian";
    double b_fraction = 0.5;
    std::size_t b_bytes = std::size_t{64} << 20;
    std::uint64_t b_seed = 1;
    rm::SpeedConfig b_config;
    speed->add_option("-s,--set", b_set, "Dictionary-set file")->required();
    speed->add_option("--corpus", b_corpus, "Corpus file (default: synthetic sample)");
    speed->add_option("--family", b_family, "Synthetic corpus family");
    speed->add_option("--fraction", b_fraction, "Synthetic corpus entropy fraction");
    speed->add_option("--bytes", b_bytes, "Synthetic corpus size");
    speed->add_option("--seed", b_seed, "Synthetic corpus seed");
    speed->add_option("--runs", b_config.runs, "Timed runs (median reported)");
    speed->add_option("-b,--block-size", b_config.block_size, "Block size");
    speed->add_option("-j,--threads", b_config.threads, "Threads for the multi-threaded pass (0 = all cores)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (*build) {
            rm::SetConfig config = load_set_config(build_config);
            if (build_k) config.params.key_bits = *build_k;
            if (build_o) config.params.overlap_bits = *build_o;
            if (build_block) config.params.block_n = *build_block;
            config.threads = build_threads;
            const auto set = rm::build_dictionary_set(config);
            rm::save_dictset_file(set, build_out);
            print_set(set, std::cout);
        } else if (*compress) {
            const rm::BlockCodec codec(load_set(c_set), c_exact ? rm::Selection::Exact : rm::Selection::Fast);
            const auto input = rm::read_file(c_in);
            const auto output = c_image ? rm::compress_image(codec, rm::parse_pgm(input), c_threads)
                                        : rm::compress_bytes(codec, input, c_block, c_threads);
            rm::write_file(c_out, output);
            std::cerr << input.size() << " -> " << output.size() << " bytes\n";
        } else if (*decompress) {
            const rm::BlockCodec codec(load_set(d_set));
            rm::write_file(d_out, rm::decompress_container(codec, rm::read_file(d_in), d_threads));
        } else if (*synth) {
            s_config.families = parse_families(s_families);
            s_config.shift = s_shift;
            const auto rows = rm::run_synthetic(s_config);
            if (s_csv.empty()) {
                rm::write_synthetic_csv(std::cout, rows);
            } else {
                std::ofstream out(s_csv);
                if (!out) throw rm::Error("cannot create " + s_csv);
                rm::write_synthetic_csv(out, rows);
            }
        } else if (*speed) {
            const rm::BlockCodec codec(load_set(b_set));
            const auto corpus =
                b_corpus.empty()
                    ? rm::sample(rm::make_distribution({rm::parse_family(b_family), b_fraction}), b_bytes, b_seed)
                    : rm::read_file(b_corpus);
            const auto r = rm::bench_speed(codec, corpus, b_config);
            std::cout << std::fixed << std::setprecision(3) << "bytes," << r.original_bytes << '\n'
                      << "compressed," << r.compressed_bytes << '\n'
                      << "ratio," << r.ratio << '\n'
                      << "runs," << r.runs << '\n'
                      << "encode_mib_s_1t," << r.encode_mib_s << '\n'
                      << "decode_mib_s_1t," << r.decode_mib_s << '\n'
                      << "threads," << r.threads_mt << '\n'
                      << "encode_mib_s_mt," << r.encode_mib_s_mt << '\n'
                      << "decode_mib_s_mt," << r.decode_mib_s_mt << '\n';
        }
    } catch (const rm::CorruptData& e) {
        std::cerr << "corrupt input: " << e.what() << '\n';
        return kExitCorrupt;
    } catch (const rm::InvalidArgument& e) {
        std::cerr << "invalid argument: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitFailure;
    }
    return 0;
}
