#include "ricemarlin/dictionary.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <string>
#include <unordered_map>

#include "dictionary_internal.hpp"
#include "ricemarlin/errors.hpp"

namespace ricemarlin {

namespace detail {

std::vector<double> tail_masses(std::span<const double> p) {
    std::vector<double> tail(p.size() + 1, 0.0);
    for (std::size_t r = p.size(); r-- > 0;) tail[r] = tail[r + 1] + p[r];
    return tail;
}

std::vector<double> mixture_root(std::span<const double> entering, std::span<const double> p,
                                 std::span<const double> tail, unsigned exclusion) {
    const std::size_t ranks = p.size();
    std::vector<double> root(ranks, 0.0);
    const double mass = std::accumulate(entering.begin(), entering.end(), 0.0);

    if (mass > 0.0) {
        // Mix the per-exclusion conditionals p(r) / tail(e), r >= e.
        double running = 0.0;
        for (std::size_t r = 0; r < ranks; ++r) {
            if (tail[r] > 0.0) running += entering[r] / mass / tail[r];
            if (r >= exclusion) root[r] = running * p[r];
        }
    } else if (tail[exclusion] > 0.0) {
        for (std::size_t r = exclusion; r < ranks; ++r) root[r] = p[r] / tail[exclusion];
    }

    double total = std::accumulate(root.begin(), root.end(), 0.0);
    if (!(total > 0.0)) {
        std::fill(root.begin() + exclusion, root.end(), 1.0);
        total = static_cast<double>(ranks - exclusion);
    }
    for (auto& v : root) v /= total;
    return root;
}

}  // namespace detail

DictionaryShape make_shape(unsigned key_bits, unsigned overlap_bits, std::size_t ranks,
                           const std::vector<std::vector<std::uint16_t>>& rank_words) {
    if (overlap_bits > key_bits) throw InvalidArgument("overlap bits must not exceed key bits");
    if (key_bits + overlap_bits > 24) throw InvalidArgument("K + O must not exceed 24");
    if (ranks == 0 || ranks > kAlphabetSize) throw InvalidArgument("rank count out of range");

    DictionaryShape shape;
    shape.key_bits = key_bits;
    shape.overlap_bits = overlap_bits;
    shape.ranks = ranks;
    const std::size_t total = std::size_t{1} << (key_bits + overlap_bits);
    if (rank_words.size() != total) throw InvalidArgument("expected 2^(K+O) words");

    const std::size_t chapters = shape.chapter_count();
    const std::size_t per_chapter = shape.chapter_size();
    shape.nodes.resize(total);
    shape.singles.assign(chapters * ranks, -1);
    shape.exclusion.assign(chapters, 0);

    std::vector<std::vector<std::uint32_t>> children(total);
    for (std::size_t c = 0; c < chapters; ++c) {
        std::unordered_map<std::string, std::uint32_t> index;
        index.reserve(per_chapter * 2);
        const std::size_t base = c * per_chapter;
        for (std::size_t i = 0; i < per_chapter; ++i) {
            const auto& w = rank_words[base + i];
            if (w.empty()) throw InvalidArgument("dictionary words must be non-empty");
            if (w.size() > std::numeric_limits<std::uint16_t>::max()) throw InvalidArgument("word too long");
            std::string key;
            key.reserve(w.size());
            for (auto r : w) {
                if (r >= ranks) throw InvalidArgument("word symbol is not a represented quotient");
                key.push_back(static_cast<char>(r));
            }
            if (!index.emplace(std::move(key), static_cast<std::uint32_t>(base + i)).second) {
                std::ostringstream os;
                os << "duplicate word in chapter " << c;
                throw InvalidArgument(os.str());
            }
        }
        for (std::size_t i = 0; i < per_chapter; ++i) {
            const auto cw = static_cast<std::uint32_t>(base + i);
            const auto& w = rank_words[cw];
            auto& node = shape.nodes[cw];
            node.first_rank = w.front();
            node.last_rank = w.back();
            node.length = static_cast<std::uint16_t>(w.size());
            shape.max_length = std::max<std::size_t>(shape.max_length, w.size());
            if (w.size() == 1) {
                shape.singles[c * ranks + w.front()] = static_cast<std::int32_t>(cw);
                continue;
            }
            std::string prefix;
            for (std::size_t j = 0; j + 1 < w.size(); ++j) prefix.push_back(static_cast<char>(w[j]));
            const auto it = index.find(prefix);
            if (it == index.end()) {
                std::ostringstream os;
                os << "chapter " << c << " is not prefix closed";
                throw InvalidArgument(os.str());
            }
            node.parent = static_cast<std::int32_t>(it->second);
            children[it->second].push_back(cw);
        }

        std::size_t lowest = ranks;
        for (std::size_t r = 0; r < ranks; ++r)
            if (shape.singles[c * ranks + r] >= 0) {
                lowest = r;
                break;
            }
        if (lowest == ranks) throw InvalidArgument("chapter without single-symbol words");
        for (std::size_t r = lowest; r < ranks; ++r)
            if (shape.singles[c * ranks + r] < 0) {
                std::ostringstream os;
                os << "chapter " << c << " misses the single-symbol word of rank " << r;
                throw InvalidArgument(os.str());
            }
        if (c == 0 && lowest != 0) throw InvalidArgument("chapter 0 must admit every quotient");
        shape.exclusion[c] = static_cast<std::uint16_t>(lowest);
    }

    shape.child_codes.reserve(total);
    for (std::size_t cw = 0; cw < total; ++cw) {
        auto& kids = children[cw];
        std::sort(kids.begin(), kids.end(), [&](std::uint32_t a, std::uint32_t b) {
            return shape.nodes[a].last_rank < shape.nodes[b].last_rank;
        });
        for (std::size_t j = 0; j < kids.size(); ++j)
            if (shape.nodes[kids[j]].last_rank != j)
                throw InvalidArgument("word children must be the most probable quotients");
        auto& node = shape.nodes[cw];
        node.children = static_cast<std::uint16_t>(kids.size());
        node.first_child = static_cast<std::uint32_t>(shape.child_codes.size());
        shape.child_codes.insert(shape.child_codes.end(), kids.begin(), kids.end());
    }

    for (std::size_t cw = 0; cw < total; ++cw) {
        auto& node = shape.nodes[cw];
        if (node.parent >= 0) node.first_rank = shape.nodes[node.parent].first_rank;
        const auto next = shape.next_chapter(static_cast<std::uint32_t>(cw));
        if (node.children < shape.exclusion[next]) {
            std::ostringstream os;
            os << "codeword " << cw << " leads to chapter " << next << " but excludes only " << node.children
               << " quotients";
            throw InvalidArgument(os.str());
        }
    }
    // first_rank of deep words depends on their ancestors; resolve in length order.
    shape.by_length.resize(total);
    std::iota(shape.by_length.begin(), shape.by_length.end(), 0u);
    std::stable_sort(shape.by_length.begin(), shape.by_length.end(), [&](std::uint32_t a, std::uint32_t b) {
        return shape.nodes[a].length < shape.nodes[b].length;
    });
    for (auto cw : shape.by_length) {
        auto& node = shape.nodes[cw];
        if (node.parent >= 0) node.first_rank = shape.nodes[node.parent].first_rank;
    }
    return shape;
}

ChainSolution solve_chain(const DictionaryShape& shape, std::span<const double> parse_probs,
                          const ChainOptions& options, const std::vector<double>* warm_start) {
    const std::size_t ranks = shape.ranks;
    if (parse_probs.size() != ranks) throw InvalidArgument("parse probabilities do not match the alphabet");
    const std::size_t levels = ranks + 1;
    const std::size_t chapters = shape.chapter_count();
    const std::size_t per_chapter = shape.chapter_size();
    const auto tail = detail::tail_masses(parse_probs);

    struct Edge {
        std::uint32_t target;
        std::uint32_t first_rank;
        double weight;
        double length;
    };
    std::vector<double> prod(shape.nodes.size(), 0.0);
    for (auto cw : shape.by_length) {
        const auto& node = shape.nodes[cw];
        prod[cw] = node.parent < 0 ? parse_probs[node.first_rank] : prod[node.parent] * parse_probs[node.last_rank];
    }
    std::vector<Edge> edges(shape.nodes.size());
    for (std::size_t cw = 0; cw < shape.nodes.size(); ++cw) {
        const auto& node = shape.nodes[cw];
        edges[cw] = {static_cast<std::uint32_t>(shape.next_chapter(static_cast<std::uint32_t>(cw)) * levels +
                                                node.children),
                     node.first_rank, prod[cw] * tail[node.children], static_cast<double>(node.length)};
    }

    const std::size_t states = chapters * levels;
    std::vector<double> pi(states, 0.0);
    if (warm_start && warm_start->size() == states)
        pi = *warm_start;
    else
        pi[0] = 1.0;

    std::vector<double> next(states);
    std::vector<double> gate(ranks);
    // gate[r] = sum over exclusion levels e <= r of pi(c, e) / tail(e)
    auto step = [&](const std::vector<double>& from, std::vector<double>& to, double* mean_length) {
        std::fill(to.begin(), to.end(), 0.0);
        double length_acc = 0.0;
        for (std::size_t c = 0; c < chapters; ++c) {
            const double* row = from.data() + c * levels;
            double running = 0.0;
            bool any = false;
            for (std::size_t r = 0; r < ranks; ++r) {
                if (row[r] != 0.0 && tail[r] > 0.0) {
                    running += row[r] / tail[r];
                    any = true;
                }
                gate[r] = running;
            }
            if (!any) continue;
            const Edge* e = edges.data() + c * per_chapter;
            for (std::size_t i = 0; i < per_chapter; ++i) {
                const double flow = gate[e[i].first_rank] * e[i].weight;
                to[e[i].target] += flow;
                length_acc += flow * e[i].length;
            }
        }
        if (mean_length) *mean_length = length_acc;
    };

    ChainSolution sol;
    sol.levels = levels;
    double residual = std::numeric_limits<double>::infinity();
    std::size_t it = 0;
    for (; it < options.max_iterations; ++it) {
        step(pi, next, nullptr);
        const double mass = std::accumulate(next.begin(), next.end(), 0.0);
        if (!(mass > 0.0)) throw ConvergenceError("chain lost all probability mass", 1.0);
        residual = 0.0;
        for (std::size_t s = 0; s < states; ++s) {
            const double v = next[s] / mass;
            residual += std::abs(v - pi[s]);
            pi[s] = 0.5 * (pi[s] + v);
        }
        if (residual < options.tolerance) {
            ++it;
            break;
        }
    }
    if (!(residual < options.tolerance)) {
        std::ostringstream os;
        os << "stationary distribution did not converge after " << options.max_iterations
           << " iterations (residual " << residual << ")";
        throw ConvergenceError(os.str(), residual);
    }
    const double mass = std::accumulate(pi.begin(), pi.end(), 0.0);
    for (auto& v : pi) v /= mass;

    double emitted_length = 0.0;
    step(pi, next, &emitted_length);
    sol.mean_word_length = emitted_length;
    sol.iterations = it;
    sol.residual = residual;
    sol.chapter_probs.assign(chapters, 0.0);
    for (std::size_t c = 0; c < chapters; ++c)
        for (std::size_t e = 0; e < levels; ++e) sol.chapter_probs[c] += pi[c * levels + e];
    sol.state_probs = std::move(pi);
    return sol;
}

std::vector<double> chapter_root(const DictionaryShape& shape, const ChainSolution& solution,
                                 std::span<const double> parse_probs, unsigned chapter) {
    const auto tail = detail::tail_masses(parse_probs);
    const std::span<const double> entering(solution.state_probs.data() + chapter * solution.levels, solution.levels);
    return detail::mixture_root(entering, parse_probs, tail, shape.exclusion[chapter]);
}

void validate(const BuildParams& params) {
    if (params.key_bits < 1) throw InvalidArgument("K must be at least 1");
    if (params.overlap_bits > params.key_bits) {
        std::ostringstream os;
        os << "O=" << params.overlap_bits << " exceeds K=" << params.key_bits << " (O <= K required)";
        throw InvalidArgument(os.str());
    }
    if (params.key_bits + params.overlap_bits > 24) throw InvalidArgument("K + O must not exceed 24");
    if (params.block_n == 0) throw InvalidArgument("nominal block size must be positive");
    if (params.max_word_length < 2 || params.max_word_length > 255)
        throw InvalidArgument("maximum word length must be in [2, 255]");
}

namespace {

double escape_cost_bits(double p_escape, std::size_t block_n) {
    return p_escape * 8.0 * (1.0 + static_cast<double>(loc_bytes(block_n)));
}

}  // namespace

MarlinDictionary MarlinDictionary::assemble(unsigned key_bits, unsigned overlap_bits, QuotientAlphabet alphabet,
                                            const std::vector<std::vector<std::uint8_t>>& words_by_codeword,
                                            std::string source_id, double source_entropy, std::size_t block_n) {
    if (alphabet.size() < 2) throw InvalidArgument("a single-quotient alphabet needs an empty-quotient dictionary");
    if ((std::size_t{1} << key_bits) <= alphabet.size())
        throw BuildError("2^K must exceed the number of represented quotients");

    std::vector<std::vector<std::uint16_t>> rank_words(words_by_codeword.size());
    for (std::size_t cw = 0; cw < words_by_codeword.size(); ++cw) {
        rank_words[cw].reserve(words_by_codeword[cw].size());
        for (auto q : words_by_codeword[cw]) {
            const int r = alphabet.rank_of(q);
            if (r < 0) throw InvalidArgument("dictionary word uses an excluded quotient");
            rank_words[cw].push_back(static_cast<std::uint16_t>(r));
        }
    }

    MarlinDictionary dict;
    dict.shape_ = make_shape(key_bits, overlap_bits, alphabet.size(), rank_words);
    dict.alphabet_ = std::move(alphabet);
    dict.source_id_ = std::move(source_id);
    dict.source_entropy_ = source_entropy;
    dict.block_n_ = block_n;

    const auto p = dict.alphabet_.parse_probs();
    const auto tail = detail::tail_masses(p);
    const ChainSolution sol = solve_chain(dict.shape_, p);

    const auto& shape = dict.shape_;
    dict.words_.resize(shape.nodes.size());
    std::vector<std::vector<double>> roots(shape.chapter_count());
    for (unsigned c = 0; c < shape.chapter_count(); ++c) roots[c] = chapter_root(shape, sol, p, c);
    for (auto cw : shape.by_length) {
        const auto& node = shape.nodes[cw];
        auto& w = dict.words_[cw];
        w.symbols = words_by_codeword[cw];
        w.children = node.children;
        w.raw_prob = node.parent < 0 ? roots[shape.chapter_of(cw)][node.first_rank]
                                     : dict.words_[node.parent].raw_prob * p[node.last_rank];
        w.emit_prob = w.raw_prob * tail[node.children];
    }

    dict.stationary_ = sol.chapter_probs;
    dict.mean_word_length_ = sol.mean_word_length;
    dict.abr_ = static_cast<double>(key_bits) / sol.mean_word_length + static_cast<double>(dict.alphabet_.shift()) +
                escape_cost_bits(dict.alphabet_.p_escape(), block_n);
    return dict;
}

MarlinDictionary MarlinDictionary::empty_quotient(unsigned key_bits, unsigned overlap_bits, QuotientAlphabet alphabet,
                                                  std::string source_id, double source_entropy,
                                                  std::size_t block_n) {
    if (alphabet.size() != 1) throw InvalidArgument("empty-quotient dictionaries have exactly one quotient");
    if (overlap_bits > key_bits) throw InvalidArgument("overlap bits must not exceed key bits");
    MarlinDictionary dict;
    dict.shape_.key_bits = key_bits;
    dict.shape_.overlap_bits = overlap_bits;
    dict.shape_.ranks = 1;
    dict.alphabet_ = std::move(alphabet);
    dict.source_id_ = std::move(source_id);
    dict.source_entropy_ = source_entropy;
    dict.block_n_ = block_n;
    dict.stationary_.assign(std::size_t{1} << overlap_bits, 0.0);
    dict.stationary_[0] = 1.0;
    dict.abr_ = static_cast<double>(dict.alphabet_.shift()) + escape_cost_bits(dict.alphabet_.p_escape(), block_n);
    return dict;
}

double abr_estimate(const MarlinDictionary& dict, const SymbolDistribution& dist, std::size_t block_n) {
    const double escape = escape_cost_bits(dict.alphabet().escape_mass(dist), block_n);
    const double reminder = static_cast<double>(dict.shift());
    if (dict.is_empty_quotient()) return reminder + escape;
    const auto p = dict.alphabet().parse_probs(dist);
    const ChainSolution sol = solve_chain(dict.shape(), p);
    return static_cast<double>(dict.key_bits()) / sol.mean_word_length + reminder + escape;
}

std::vector<double> chapter_stationary(const MarlinDictionary& dict) {
    return {dict.stationary().begin(), dict.stationary().end()};
}

}  // namespace ricemarlin
