#pragma once

#include <cstdint>
#include <vector>

#include "phyred/characters.hpp"
#include "phyred/tree.hpp"

namespace phyred {

inline constexpr int kBruteForceInternalCap = 24;

/// l(chi, T): fewest state changes over all extensions of `ch`.
///
/// Rooted at the canonical root. At each vertex the state set is the states
/// held by the most children and the cost grows by the number of children
/// outside that majority. With two children this is Fitch's
/// intersection/union rule; at higher degree it stays exact for two states
/// where the plain union rule would undercount.
int fitch_score(const Tree& tree, const Character& ch);

/// Same quantity by enumerating every assignment to the internal vertices.
/// Throws CapExceeded beyond `cap` internal vertices.
int brute_force_score(const Tree& tree, const Character& ch, int cap = kBruteForceInternalCap);

/// Number of edges whose endpoints differ; `states` is indexed by vertex id.
int count_flips(const Tree& tree, const std::vector<std::uint8_t>& states);

/// l(X, T) = sum over patterns of multiplicity * fitch_score.
std::int64_t parsimony_score(const Tree& tree, const DataMatrix& data);

struct MPSearchResult {
    std::int64_t best_score = 0;
    std::vector<Tree> optima;  // every minimizing topology, sorted by canonical Newick
};

/// Exhaustive search over all binary topologies on data.leaf_count() leaves.
MPSearchResult mp_search(const DataMatrix& data, int cap = kDefaultEnumerationCap, int threads = 1);

}  // namespace phyred
