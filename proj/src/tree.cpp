#include "phyred/tree.hpp"

#include <algorithm>
#include <set>

namespace phyred {

Tree::Tree(int leaf_count, std::vector<int> labels, std::vector<Edge> edges)
    : leaf_count_(leaf_count), labels_(std::move(labels)), edges_(std::move(edges)) {
    const int nv = vertex_count();
    adjacency_.resize(labels_.size());
    for (int e = 0; e < static_cast<int>(edges_.size()); ++e) {
        auto [u, v] = edges_[static_cast<std::size_t>(e)];
        if (u < 0 || v < 0 || u >= nv || v >= nv)
            throw std::invalid_argument("edge endpoint out of range: " + std::to_string(u) + "-" +
                                        std::to_string(v));
        adjacency_[static_cast<std::size_t>(u)].push_back({v, e});
        if (u != v) adjacency_[static_cast<std::size_t>(v)].push_back({u, e});
    }
    leaf_vertex_.assign(static_cast<std::size_t>(std::max(leaf_count_, 0)) + 1, -1);
    for (int v = 0; v < nv; ++v) {
        int l = labels_[static_cast<std::size_t>(v)];
        if (l >= 1 && l <= leaf_count_ && leaf_vertex_[static_cast<std::size_t>(l)] == -1)
            leaf_vertex_[static_cast<std::size_t>(l)] = v;
    }
}

Tree Tree::normalized(int leaf_count, int vertex_count, std::vector<Edge> edges) {
    std::vector<int> labels(static_cast<std::size_t>(vertex_count), 0);
    for (int v = 0; v < leaf_count && v < vertex_count; ++v) labels[static_cast<std::size_t>(v)] = v + 1;
    for (auto& e : edges)
        if (e.u > e.v) std::swap(e.u, e.v);
    return Tree(leaf_count, std::move(labels), std::move(edges));
}

int Tree::leaf_vertex(int label) const {
    if (label < 1 || label > leaf_count_) return -1;
    return leaf_vertex_[static_cast<std::size_t>(label)];
}

int Tree::find_edge(int u, int v) const {
    if (u < 0 || u >= vertex_count()) return -1;
    for (const auto& nb : neighbors(u))
        if (nb.vertex == v) return nb.edge;
    return -1;
}

int Tree::canonical_root() const {
    int leaf1 = leaf_vertex(1);
    if (leaf1 < 0) return -1;
    for (const auto& nb : neighbors(leaf1))
        if (!is_leaf(nb.vertex)) return nb.vertex;
    return leaf1;
}

std::vector<std::string> validate(const Tree& tree) {
    std::vector<std::string> out;
    const int n = tree.leaf_count();
    const int nv = tree.vertex_count();
    if (n < 1) out.push_back("leaf count must be positive");
    if (nv == 0) {
        out.push_back("tree has no vertices");
        return out;
    }
    if (tree.edge_count() != nv - 1)
        out.push_back("edge count " + std::to_string(tree.edge_count()) + " != vertex count - 1 (" +
                      std::to_string(nv - 1) + ")");

    std::set<std::pair<int, int>> seen;
    for (const auto& e : tree.edges()) {
        if (e.u == e.v) {
            out.push_back("self-loop at vertex " + std::to_string(e.u));
            continue;
        }
        auto key = std::minmax(e.u, e.v);
        if (!seen.insert(key).second)
            out.push_back("duplicate edge " + std::to_string(key.first) + "-" + std::to_string(key.second));
    }

    std::vector<char> reached(static_cast<std::size_t>(nv), 0);
    std::vector<int> stack{0};
    reached[0] = 1;
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        for (const auto& nb : tree.neighbors(v))
            if (!reached[static_cast<std::size_t>(nb.vertex)]) {
                reached[static_cast<std::size_t>(nb.vertex)] = 1;
                stack.push_back(nb.vertex);
            }
    }
    if (std::count(reached.begin(), reached.end(), 1) != nv) out.push_back("tree is not connected");

    std::vector<int> label_uses(static_cast<std::size_t>(std::max(n, 0)) + 1, 0);
    bool labels_ok = true;
    int degree_one = 0;
    for (int v = 0; v < nv; ++v) {
        const int d = tree.degree(v);
        const int l = tree.label(v);
        if (d == 1) ++degree_one;
        if (l == 0) {
            if (d == 2)
                out.push_back("internal degree-2 vertex " + std::to_string(v));
            else if (d < 3)
                out.push_back("unlabelled vertex " + std::to_string(v) + " has degree " + std::to_string(d));
            continue;
        }
        if (l < 1 || l > n) {
            labels_ok = false;
            continue;
        }
        if (++label_uses[static_cast<std::size_t>(l)] > 1) labels_ok = false;
        if (d != 1 && !(nv == 1 && d == 0))
            out.push_back("leaf label " + std::to_string(l) + " on vertex " + std::to_string(v) +
                          " of degree " + std::to_string(d));
    }
    for (int l = 1; l <= n; ++l)
        if (label_uses[static_cast<std::size_t>(l)] != 1) labels_ok = false;
    if (!labels_ok) out.push_back("labels not bijective with 1.." + std::to_string(n));
    if (nv > 1 && degree_one != n)
        out.push_back(std::to_string(degree_one) + " degree-1 vertices, expected " + std::to_string(n));
    return out;
}

int edge_count(const Tree& tree) { return tree.edge_count(); }

RootedView root_at(const Tree& tree, int root) {
    const auto nv = static_cast<std::size_t>(tree.vertex_count());
    RootedView view{root, {}, std::vector<int>(nv, -1), std::vector<int>(nv, -1)};
    view.order.reserve(nv);
    std::vector<int> stack{root};
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        view.order.push_back(v);
        for (const auto& nb : tree.neighbors(v)) {
            if (nb.vertex == view.parent[static_cast<std::size_t>(v)] || nb.vertex == root) continue;
            view.parent[static_cast<std::size_t>(nb.vertex)] = v;
            view.parent_edge[static_cast<std::size_t>(nb.vertex)] = nb.edge;
            stack.push_back(nb.vertex);
        }
    }
    return view;
}

}  // namespace phyred
