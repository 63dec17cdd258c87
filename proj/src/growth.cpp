#include <algorithm>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <queue>
#include <sstream>

#include "dictionary_internal.hpp"
#include "ricemarlin/dictionary.hpp"
#include "ricemarlin/errors.hpp"

namespace ricemarlin {

namespace {

struct GrowthNode {
    std::int32_t parent;
    std::uint16_t rank;  // last symbol
    std::uint16_t length;
    std::uint32_t children = 0;
    double raw;
};

struct Candidate {
    double priority;
    std::uint64_t seq;
    std::uint32_t node;

    // Max-heap on priority; older candidates win ties.
    bool operator<(const Candidate& o) const {
        if (priority != o.priority) return priority < o.priority;
        return seq > o.seq;
    }
};

std::vector<GrowthNode> grow_nodes(std::span<const double> root, std::span<const double> p, unsigned exclusion,
                                   std::size_t size, unsigned max_word_length) {
    const std::size_t ranks = p.size();
    if (exclusion >= ranks) throw BuildError("chapter admits no quotient");
    if (ranks - exclusion > size) {
        std::ostringstream os;
        os << (ranks - exclusion) << " admissible quotients do not fit in " << size << " words";
        throw BuildError(os.str());
    }

    std::vector<GrowthNode> nodes;
    nodes.reserve(size);
    std::priority_queue<Candidate> heap;
    std::uint64_t seq = 0;
    auto offer = [&](std::uint32_t i) {
        const auto& n = nodes[i];
        if (n.children < ranks && n.length < max_word_length) heap.push({n.raw * p[n.children], seq++, i});
    };

    for (std::size_t r = exclusion; r < ranks; ++r)
        nodes.push_back({-1, static_cast<std::uint16_t>(r), 1, 0, root[r]});
    for (std::uint32_t i = 0; i < nodes.size(); ++i) offer(i);

    while (nodes.size() < size) {
        if (heap.empty()) {
            std::ostringstream os;
            os << "cannot grow a chapter to " << size << " words within length " << max_word_length;
            throw BuildError(os.str());
        }
        const Candidate best = heap.top();
        heap.pop();
        const std::uint32_t parent = best.node;
        const auto rank = static_cast<std::uint16_t>(nodes[parent].children);
        const GrowthNode child{static_cast<std::int32_t>(parent), rank,
                               static_cast<std::uint16_t>(nodes[parent].length + 1), 0,
                               nodes[parent].raw * p[rank]};
        ++nodes[parent].children;
        nodes.push_back(child);
        offer(parent);
        offer(static_cast<std::uint32_t>(nodes.size() - 1));
    }
    return nodes;
}

std::vector<std::uint16_t> rank_sequence(const std::vector<GrowthNode>& nodes, std::uint32_t i) {
    std::vector<std::uint16_t> seq(nodes[i].length);
    for (std::int32_t j = static_cast<std::int32_t>(i), pos = nodes[i].length - 1; j >= 0;
         j = nodes[j].parent, --pos)
        seq[pos] = nodes[j].rank;
    return seq;
}

std::vector<Word> to_words(const QuotientAlphabet& alphabet, const std::vector<GrowthNode>& nodes,
                           std::span<const double> tail) {
    std::vector<Word> words(nodes.size());
    for (std::uint32_t i = 0; i < nodes.size(); ++i) {
        const auto ranks = rank_sequence(nodes, i);
        auto& w = words[i];
        w.symbols.reserve(ranks.size());
        for (auto r : ranks) w.symbols.push_back(alphabet.quotients()[r].value);
        w.raw_prob = nodes[i].raw;
        w.children = nodes[i].children;
        w.emit_prob = w.raw_prob * tail[w.children];
    }
    return words;
}

std::vector<std::uint32_t> assign_slots(std::span<const std::uint32_t> children, std::span<const double> emit,
                                        unsigned key_bits, unsigned overlap_bits) {
    const std::size_t size = std::size_t{1} << key_bits;
    if (children.size() != size) throw InvalidArgument("a chapter must hold exactly 2^K words");
    if (overlap_bits > key_bits) throw InvalidArgument("overlap bits must not exceed key bits");
    std::vector<std::uint32_t> order(size);
    std::iota(order.begin(), order.end(), 0u);
    std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
        if (children[a] != children[b]) return children[a] < children[b];
        if (emit[a] != emit[b]) return emit[a] > emit[b];
        return a < b;
    });
    const unsigned group_bits = key_bits - overlap_bits;
    const std::uint32_t group_mask = (1u << group_bits) - 1u;
    std::vector<std::uint32_t> slot(size);
    for (std::uint32_t i = 0; i < size; ++i) {
        const std::uint32_t v = i >> group_bits;
        const std::uint32_t t = i & group_mask;
        slot[order[i]] = (t << overlap_bits) | v;
    }
    return slot;
}

}  // namespace

std::vector<Word> grow_chapter(const QuotientAlphabet& alphabet, std::span<const double> root, unsigned exclusion,
                               std::size_t size, unsigned max_word_length) {
    const auto p = alphabet.parse_probs();
    if (root.size() != p.size()) throw InvalidArgument("root distribution does not match the alphabet");
    const auto tail = detail::tail_masses(p);
    return to_words(alphabet, grow_nodes(root, p, exclusion, size, max_word_length), tail);
}

std::vector<Word> grow_chapter(const QuotientAlphabet& alphabet, unsigned exclusion, std::size_t size,
                               unsigned max_word_length) {
    const auto p = alphabet.parse_probs();
    const auto tail = detail::tail_masses(p);
    if (exclusion >= p.size()) throw BuildError("chapter admits no quotient");
    std::vector<double> entering(p.size() + 1, 0.0);
    entering[exclusion] = 1.0;
    const auto root = detail::mixture_root(entering, p, tail, exclusion);
    return to_words(alphabet, grow_nodes(root, p, exclusion, size, max_word_length), tail);
}

std::vector<std::uint32_t> assign_codewords(std::span<const Word> chapter, unsigned key_bits, unsigned overlap_bits) {
    std::vector<std::uint32_t> children(chapter.size());
    std::vector<double> emit(chapter.size());
    for (std::size_t i = 0; i < chapter.size(); ++i) {
        children[i] = chapter[i].children;
        emit[i] = chapter[i].emit_prob;
    }
    return assign_slots(children, emit, key_bits, overlap_bits);
}

MarlinDictionary build_dictionary(const QuotientAlphabet& alphabet, const BuildParams& params,
                                  std::string source_id, double source_entropy) {
    validate(params);
    const unsigned K = params.key_bits;
    const unsigned O = params.overlap_bits;
    const std::size_t ranks = alphabet.size();
    if (ranks == 1)
        return MarlinDictionary::empty_quotient(K, O, alphabet, std::move(source_id), source_entropy, params.block_n);
    const std::size_t size = std::size_t{1} << K;
    if (size <= ranks) {
        std::ostringstream os;
        os << "2^K = " << size << " does not exceed the " << ranks << " represented quotients";
        throw BuildError(os.str());
    }

    const auto p = alphabet.parse_probs();
    const auto tail = detail::tail_masses(p);
    const std::size_t chapters = std::size_t{1} << O;
    const std::size_t levels = ranks + 1;

    std::vector<unsigned> exclusion(chapters, 0);
    std::vector<std::vector<double>> roots(chapters, std::vector<double>(p.begin(), p.end()));
    std::vector<std::vector<GrowthNode>> grown(chapters);
    std::vector<std::vector<std::uint32_t>> slots(chapters);
    std::vector<double> warm;
    const std::vector<double>* warm_ptr = nullptr;

    auto grow = [&](std::size_t c) {
        if (c > 0 && exclusion[c] == exclusion[c - 1] && roots[c] == roots[c - 1])
            grown[c] = grown[c - 1];
        else
            grown[c] = grow_nodes(roots[c], p, exclusion[c], size, params.max_word_length);
        std::vector<std::uint32_t> children(size);
        std::vector<double> emit(size);
        for (std::size_t i = 0; i < size; ++i) {
            children[i] = grown[c][i].children;
            emit[i] = grown[c][i].raw * tail[children[i]];
        }
        slots[c] = assign_slots(children, emit, K, O);
    };
    // Lowest child count among the words whose codewords lead to each chapter.
    auto group_minimum = [&]() {
        std::vector<unsigned> need(chapters, std::numeric_limits<unsigned>::max());
        for (std::size_t c = 0; c < chapters; ++c)
            for (std::size_t i = 0; i < size; ++i) {
                const std::uint32_t v = slots[c][i] & static_cast<std::uint32_t>(chapters - 1);
                need[v] = std::min<unsigned>(need[v], grown[c][i].children);
            }
        for (auto& n : need) n = std::min<unsigned>(n, static_cast<unsigned>(ranks - 1));
        need[0] = 0;
        return need;
    };
    auto restricted_root = [&](std::size_t c, const ChainSolution* sol) {
        std::vector<double> entering(levels, 0.0);
        if (sol)
            std::copy_n(sol->state_probs.begin() + static_cast<std::ptrdiff_t>(c * levels), levels, entering.begin());
        return detail::mixture_root(entering, p, tail, exclusion[c]);
    };

    std::vector<std::vector<std::uint16_t>> rank_words(chapters * size);
    std::optional<ChainSolution> solution;
    for (unsigned round = 0;; ++round) {
        for (std::size_t c = 0; c < chapters; ++c) grow(c);
        for (;;) {
            const auto need = group_minimum();
            bool changed = false;
            for (std::size_t v = 0; v < chapters; ++v)
                if (need[v] < exclusion[v]) {
                    exclusion[v] = need[v];
                    roots[v] = restricted_root(v, solution ? &*solution : nullptr);
                    grow(v);
                    changed = true;
                }
            if (!changed) break;
        }

        for (std::size_t c = 0; c < chapters; ++c)
            for (std::size_t i = 0; i < size; ++i)
                rank_words[c * size + slots[c][i]] = rank_sequence(grown[c], static_cast<std::uint32_t>(i));
        const DictionaryShape shape = make_shape(K, O, ranks, rank_words);
        solution = solve_chain(shape, p, ChainOptions{}, warm_ptr);
        if (round >= params.refinement_rounds || O == 0) break;

        warm = solution->state_probs;
        warm_ptr = &warm;
        const auto need = group_minimum();
        for (std::size_t c = 0; c < chapters; ++c) {
            exclusion[c] = need[c];
            roots[c] = restricted_root(c, &*solution);
        }
    }

    std::vector<std::vector<std::uint8_t>> words(rank_words.size());
    for (std::size_t cw = 0; cw < rank_words.size(); ++cw) {
        words[cw].reserve(rank_words[cw].size());
        for (auto r : rank_words[cw]) words[cw].push_back(alphabet.quotients()[r].value);
    }
    return MarlinDictionary::assemble(K, O, alphabet, words, std::move(source_id), source_entropy, params.block_n);
}

}  // namespace ricemarlin
