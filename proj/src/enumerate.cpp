#include "phyred/tree.hpp"

namespace phyred {
namespace {

// Stepwise leaf insertion: leaf k (1-based) is attached to every edge of each
// tree on leaves 1..k-1. Each insertion subdivides edge e with a new internal
// vertex, so every topology is produced exactly once.
void insert_leaves(int n, int next_leaf, std::vector<Edge>& edges,
                   const std::function<void(const Tree&)>& visit) {
    if (next_leaf > n) {
        // renumber as parse_newick would number the canonical string, so that
        // vertex ids in .probs output match the tree that is printed
        visit(parse_newick(write_newick(Tree::normalized(n, 2 * n - 2, edges))));
        return;
    }
    const int leaf = next_leaf - 1;
    const int hub = n + next_leaf - 3;
    const std::size_t count = edges.size();
    for (std::size_t e = 0; e < count; ++e) {
        const Edge old = edges[e];
        edges[e] = {old.u, hub};
        edges.push_back({hub, old.v});
        edges.push_back({hub, leaf});
        insert_leaves(n, next_leaf + 1, edges, visit);
        edges.pop_back();
        edges.pop_back();
        edges[e] = old;
    }
}

}  // namespace

unsigned long long topology_count(int n) {
    if (n < 3) return n >= 1 ? 1ULL : 0ULL;
    unsigned long long c = 1;
    for (int i = 3; i <= 2 * n - 5; i += 2) c *= static_cast<unsigned long long>(i);
    return c;
}

void for_each_topology(int n, const std::function<void(const Tree&)>& visit, int cap) {
    if (n < 3) throw std::invalid_argument("topology enumeration needs n >= 3, got " + std::to_string(n));
    if (n > cap)
        throw CapExceeded("refusing to enumerate topologies for n=" + std::to_string(n) + ": limit is n <= " +
                          std::to_string(cap) + " (" + std::to_string(topology_count(n)) + " trees)");
    std::vector<Edge> edges{{0, n}, {1, n}, {2, n}};
    edges.reserve(static_cast<std::size_t>(2 * n - 3));
    insert_leaves(n, 4, edges, visit);
}

std::vector<Tree> enumerate_topologies(int n, int cap) {
    std::vector<Tree> out;
    for_each_topology(n, [&](const Tree& t) { out.push_back(t); }, cap);
    return out;
}

}  // namespace phyred
