#include "phyred/parsimony.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <string>

#include "phyred/parallel.hpp"

namespace phyred {
namespace {

void check_length(const Tree& tree, const Character& ch) {
    if (static_cast<int>(ch.size()) != tree.leaf_count())
        throw std::invalid_argument("character length " + std::to_string(ch.size()) + " does not match " +
                                    std::to_string(tree.leaf_count()) + " leaves");
}

std::uint8_t leaf_state(const Tree& tree, const Character& ch, int v) {
    return ch[static_cast<std::size_t>(tree.label(v) - 1)];
}

}  // namespace

int fitch_score(const Tree& tree, const Character& ch) {
    check_length(tree, ch);
    if (tree.vertex_count() <= 1) return 0;

    const RootedView view = root_at(tree, tree.canonical_root());
    // bit s of mask[v] set <=> state s is optimal for the subtree below v
    std::vector<std::uint8_t> mask(static_cast<std::size_t>(tree.vertex_count()), 0);
    std::vector<int> count0(mask.size(), 0), count1(mask.size(), 0), children(mask.size(), 0);
    int cost = 0;

    for (auto it = view.order.rbegin(); it != view.order.rend(); ++it) {
        const int v = *it;
        const auto vi = static_cast<std::size_t>(v);
        if (tree.is_leaf(v)) {
            const std::uint8_t s = leaf_state(tree, ch, v);
            // a leaf used as root (two-leaf tree) is pinned to its own state
            if (children[vi] > 0) cost += children[vi] - (s ? count1[vi] : count0[vi]);
            mask[vi] = static_cast<std::uint8_t>(1U << s);
        } else {
            const int best = std::max(count0[vi], count1[vi]);
            cost += children[vi] - best;
            mask[vi] = static_cast<std::uint8_t>((count0[vi] == best ? 1U : 0U) | (count1[vi] == best ? 2U : 0U));
        }
        const int p = view.parent[vi];
        if (p >= 0) {
            const auto pi = static_cast<std::size_t>(p);
            ++children[pi];
            count0[pi] += mask[vi] & 1U;
            count1[pi] += (mask[vi] >> 1) & 1U;
        }
    }
    return cost;
}

int count_flips(const Tree& tree, const std::vector<std::uint8_t>& states) {
    int flips = 0;
    for (const auto& e : tree.edges())
        flips += states[static_cast<std::size_t>(e.u)] != states[static_cast<std::size_t>(e.v)];
    return flips;
}

int brute_force_score(const Tree& tree, const Character& ch, int cap) {
    check_length(tree, ch);
    std::vector<int> internal;
    std::vector<std::uint8_t> states(static_cast<std::size_t>(tree.vertex_count()), 0);
    for (int v = 0; v < tree.vertex_count(); ++v) {
        if (tree.is_leaf(v))
            states[static_cast<std::size_t>(v)] = leaf_state(tree, ch, v);
        else
            internal.push_back(v);
    }
    if (static_cast<int>(internal.size()) > cap)
        throw CapExceeded("brute-force parsimony refused: " + std::to_string(internal.size()) +
                          " internal vertices exceeds limit " + std::to_string(cap));

    int best = std::numeric_limits<int>::max();
    const std::uint64_t total = std::uint64_t{1} << internal.size();
    for (std::uint64_t assign = 0; assign < total; ++assign) {
        for (std::size_t i = 0; i < internal.size(); ++i)
            states[static_cast<std::size_t>(internal[i])] = static_cast<std::uint8_t>((assign >> i) & 1U);
        best = std::min(best, count_flips(tree, states));
    }
    return best;
}

std::int64_t parsimony_score(const Tree& tree, const DataMatrix& data) {
    if (data.leaf_count() != tree.leaf_count())
        throw std::invalid_argument("matrix has " + std::to_string(data.leaf_count()) + " leaves, tree has " +
                                    std::to_string(tree.leaf_count()));
    std::int64_t total = 0;
    for (const auto& p : data.patterns()) total += p.count * fitch_score(tree, p.character);
    return total;
}

MPSearchResult mp_search(const DataMatrix& data, int cap, int threads) {
    const std::vector<Tree> trees = enumerate_topologies(data.leaf_count(), cap);
    std::vector<std::int64_t> scores(trees.size());
    parallel_for(trees.size(), threads, [&](std::size_t i) { scores[i] = parsimony_score(trees[i], data); });

    MPSearchResult result;
    result.best_score = *std::min_element(scores.begin(), scores.end());
    std::vector<std::pair<std::string, std::size_t>> ties;
    for (std::size_t i = 0; i < trees.size(); ++i)
        if (scores[i] == result.best_score) ties.emplace_back(write_newick(trees[i]), i);
    std::sort(ties.begin(), ties.end());
    for (const auto& [nwk, i] : ties) result.optima.push_back(trees[i]);
    return result;
}

}  // namespace phyred
