#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "phyred/errors.hpp"

namespace phyred {

/// Raised for malformed Newick text. `position` is a 0-based character offset.
class NewickError : public std::runtime_error {
public:
    NewickError(const std::string& what, std::size_t position)
        : std::runtime_error(what + " (at position " + std::to_string(position) + ")"),
          position_(position) {}
    std::size_t position() const { return position_; }

private:
    std::size_t position_;
};

struct Edge {
    int u;
    int v;
    friend bool operator==(const Edge&, const Edge&) = default;
};

struct Neighbor {
    int vertex;
    int edge;
};

/// Unrooted leaf-labelled tree.
///
/// Vertex ids are dense, 0-based integers. Trees built by the parser and the
/// enumerator are normalized: the leaf with label L is vertex L-1 and internal
/// vertices are numbered from n upward. Construction does not check the tree
/// invariants so that `validate` can report them; every scoring routine
/// assumes a valid tree.
class Tree {
public:
    Tree() = default;

    /// `labels[v]` is the leaf label (1..n) of vertex v, or 0 for an unlabelled vertex.
    Tree(int leaf_count, std::vector<int> labels, std::vector<Edge> edges);

    /// Normalized tree: vertices 0..n-1 are leaves labelled 1..n.
    static Tree normalized(int leaf_count, int vertex_count, std::vector<Edge> edges);

    int leaf_count() const { return leaf_count_; }
    int vertex_count() const { return static_cast<int>(labels_.size()); }
    int edge_count() const { return static_cast<int>(edges_.size()); }
    int internal_count() const { return vertex_count() - leaf_count_; }

    std::span<const Edge> edges() const { return edges_; }
    const Edge& edge(int e) const { return edges_[static_cast<std::size_t>(e)]; }
    std::span<const Neighbor> neighbors(int v) const { return adjacency_[static_cast<std::size_t>(v)]; }
    int degree(int v) const { return static_cast<int>(adjacency_[static_cast<std::size_t>(v)].size()); }

    int label(int v) const { return labels_[static_cast<std::size_t>(v)]; }
    bool is_leaf(int v) const { return label(v) != 0; }

    /// Vertex carrying leaf label `label`, or -1.
    int leaf_vertex(int label) const;

    /// Index of the edge joining u and v, or -1.
    int find_edge(int u, int v) const;

    /// Internal vertex adjacent to leaf 1; leaf 1 itself when the tree has no internal vertex.
    int canonical_root() const;

private:
    int leaf_count_ = 0;
    std::vector<int> labels_;
    std::vector<Edge> edges_;
    std::vector<std::vector<Neighbor>> adjacency_;
    std::vector<int> leaf_vertex_;
};

/// The tree hung from `root`: vertices in pre-order with parent links.
struct RootedView {
    int root;
    std::vector<int> order;        // pre-order; order[0] == root
    std::vector<int> parent;       // -1 for the root
    std::vector<int> parent_edge;  // -1 for the root
};

RootedView root_at(const Tree& tree, int root);

/// Every violated tree invariant, in a fixed order. Empty iff the tree is valid.
std::vector<std::string> validate(const Tree& tree);

int edge_count(const Tree& tree);

// Newick --------------------------------------------------------------------

/// Parses rooted or unrooted Newick over integer labels 1..n. A degree-2 root is
/// suppressed. Throws NewickError on syntax errors, unknown labels or invalid trees.
Tree parse_newick(std::string_view text);

/// Canonical Newick: rooted at the internal vertex adjacent to leaf 1, children
/// ordered by their smallest descendant label.
std::string write_newick(const Tree& tree);

// Enumeration ---------------------------------------------------------------

inline constexpr int kDefaultEnumerationCap = 8;

/// (2n-5)!! for n >= 3.
unsigned long long topology_count(int n);

/// Visits every unrooted binary topology on leaves 1..n exactly once, in a
/// deterministic order. Throws CapExceeded if n > cap.
void for_each_topology(int n, const std::function<void(const Tree&)>& visit,
                       int cap = kDefaultEnumerationCap);

std::vector<Tree> enumerate_topologies(int n, int cap = kDefaultEnumerationCap);

}  // namespace phyred
