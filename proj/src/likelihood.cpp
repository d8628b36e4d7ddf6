#include "phyred/likelihood.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <sstream>

#include "phyred/errors.hpp"

namespace phyred {

void check_probability(double p) {
    if (!(p >= 0.0 && p <= 0.5)) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.17g", p);
        throw std::domain_error(std::string("edge probability ") + buf + " outside [0, 1/2]");
    }
}

EdgeProbs::EdgeProbs(std::vector<double> probs) : p_(std::move(probs)) {
    for (double p : p_) check_probability(p);
}

EdgeProbs EdgeProbs::uniform(const Tree& tree, double p) {
    return EdgeProbs(std::vector<double>(static_cast<std::size_t>(tree.edge_count()), p));
}

double EdgeProbs::max() const { return p_.empty() ? 0.0 : *std::max_element(p_.begin(), p_.end()); }

void EdgeProbs::set(std::size_t e, double p) {
    check_probability(p);
    p_.at(e) = p;
}

EdgeProbs parse_edge_probs(std::string_view text, const Tree& tree) {
    std::vector<double> probs(static_cast<std::size_t>(tree.edge_count()), 0.0);
    std::vector<char> seen(probs.size(), 0);
    std::istringstream in{std::string(text)};
    int lineno = 0;
    for (std::string line; std::getline(in, line);) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        int u = 0, v = 0;
        double p = 0.0;
        if (!(ls >> u)) continue;
        std::string rest;
        if (!(ls >> v >> p) || (ls >> rest))
            throw std::invalid_argument("line " + std::to_string(lineno) + ": expected 'u v p'");
        int e = tree.find_edge(u - 1, v - 1);
        if (e < 0)
            throw std::invalid_argument("line " + std::to_string(lineno) + ": " + std::to_string(u) + "-" +
                                        std::to_string(v) + " is not an edge of the tree");
        if (seen[static_cast<std::size_t>(e)]++)
            throw std::invalid_argument("line " + std::to_string(lineno) + ": edge listed twice");
        try {
            check_probability(p);
        } catch (const std::domain_error& err) {
            throw std::invalid_argument("line " + std::to_string(lineno) + ": " + err.what());
        }
        probs[static_cast<std::size_t>(e)] = p;
    }
    for (std::size_t e = 0; e < seen.size(); ++e)
        if (!seen[e]) {
            const auto& ed = tree.edge(static_cast<int>(e));
            throw std::invalid_argument("missing probability for edge " + std::to_string(ed.u + 1) + "-" +
                                        std::to_string(ed.v + 1));
        }
    return EdgeProbs(std::move(probs));
}

std::string write_edge_probs(const Tree& tree, const EdgeProbs& probs) {
    std::string out;
    char buf[96];
    for (int e = 0; e < tree.edge_count(); ++e) {
        const auto& ed = tree.edge(e);
        std::snprintf(buf, sizeof buf, "%d %d %.17g\n", ed.u + 1, ed.v + 1, probs[static_cast<std::size_t>(e)]);
        out += buf;
    }
    return out;
}

namespace {

void check_inputs(const Tree& tree, const EdgeProbs& probs, const Character& ch) {
    if (static_cast<int>(ch.size()) != tree.leaf_count())
        throw std::invalid_argument("character length " + std::to_string(ch.size()) + " does not match " +
                                    std::to_string(tree.leaf_count()) + " leaves");
    if (static_cast<int>(probs.size()) != tree.edge_count())
        throw std::invalid_argument("edge probability count " + std::to_string(probs.size()) + " does not match " +
                                    std::to_string(tree.edge_count()) + " edges");
}

using Partial = std::array<double, 2>;

// Conditional likelihoods of the component of `root` once the edge to
// `excluded` is removed (excluded = -1 keeps the whole tree).
Partial component_partial(const Tree& tree, const EdgeProbs& probs, const Character& ch, int root, int excluded) {
    const auto nv = static_cast<std::size_t>(tree.vertex_count());
    std::vector<int> order, parent(nv, -1), parent_edge(nv, -1);
    order.reserve(nv);
    std::vector<int> stack{root};
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        order.push_back(v);
        for (const auto& nb : tree.neighbors(v)) {
            if (nb.vertex == parent[static_cast<std::size_t>(v)] || nb.vertex == root) continue;
            if (v == root && nb.vertex == excluded) continue;
            parent[static_cast<std::size_t>(nb.vertex)] = v;
            parent_edge[static_cast<std::size_t>(nb.vertex)] = nb.edge;
            stack.push_back(nb.vertex);
        }
    }

    std::vector<Partial> partial(nv);
    for (int v : order) {
        if (tree.is_leaf(v)) {
            const auto s = ch[static_cast<std::size_t>(tree.label(v) - 1)];
            partial[static_cast<std::size_t>(v)] = {s == 0 ? 1.0 : 0.0, s == 1 ? 1.0 : 0.0};
        } else {
            partial[static_cast<std::size_t>(v)] = {1.0, 1.0};
        }
    }
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        const int v = *it;
        const int p = parent[static_cast<std::size_t>(v)];
        if (p < 0) continue;
        const double pe = probs[static_cast<std::size_t>(parent_edge[static_cast<std::size_t>(v)])];
        const Partial& c = partial[static_cast<std::size_t>(v)];
        Partial& up = partial[static_cast<std::size_t>(p)];
        up[0] *= (1.0 - pe) * c[0] + pe * c[1];
        up[1] *= (1.0 - pe) * c[1] + pe * c[0];
    }
    return partial[static_cast<std::size_t>(root)];
}

}  // namespace

LikelihoodValue char_likelihood_exhaustive(const Tree& tree, const EdgeProbs& probs, const Character& ch,
                                           int cap) {
    check_inputs(tree, probs, ch);
    std::vector<int> internal;
    std::vector<std::uint8_t> states(static_cast<std::size_t>(tree.vertex_count()), 0);
    for (int v = 0; v < tree.vertex_count(); ++v) {
        if (tree.is_leaf(v))
            states[static_cast<std::size_t>(v)] = ch[static_cast<std::size_t>(tree.label(v) - 1)];
        else
            internal.push_back(v);
    }
    if (static_cast<int>(internal.size()) > cap)
        throw CapExceeded("exhaustive likelihood refused: " + std::to_string(internal.size()) +
                          " internal vertices exceeds limit " + std::to_string(cap));

    double sum = 0.0;
    const std::uint64_t total = std::uint64_t{1} << internal.size();
    for (std::uint64_t assign = 0; assign < total; ++assign) {
        for (std::size_t i = 0; i < internal.size(); ++i)
            states[static_cast<std::size_t>(internal[i])] = static_cast<std::uint8_t>((assign >> i) & 1U);
        double term = 1.0;
        for (int e = 0; e < tree.edge_count(); ++e) {
            const auto& ed = tree.edge(e);
            const double p = probs[static_cast<std::size_t>(e)];
            term *= states[static_cast<std::size_t>(ed.u)] != states[static_cast<std::size_t>(ed.v)] ? p : 1.0 - p;
        }
        sum += term;
    }
    return LikelihoodValue::from_linear(sum);
}

LikelihoodValue char_likelihood_pruning(const Tree& tree, const EdgeProbs& probs, const Character& ch) {
    return char_likelihood_pruning(tree, probs, ch, tree.canonical_root());
}

LikelihoodValue char_likelihood_pruning(const Tree& tree, const EdgeProbs& probs, const Character& ch, int root) {
    check_inputs(tree, probs, ch);
    if (root < 0 || root >= tree.vertex_count()) throw std::invalid_argument("root vertex out of range");
    const Partial top = component_partial(tree, probs, ch, root, -1);
    return LikelihoodValue::from_linear(top[0] + top[1]);
}

EdgeSplit edge_split(const Tree& tree, const EdgeProbs& probs, const Character& ch, int edge) {
    check_inputs(tree, probs, ch);
    const auto& ed = tree.edge(edge);
    const Partial a = component_partial(tree, probs, ch, ed.u, ed.v);
    const Partial b = component_partial(tree, probs, ch, ed.v, ed.u);
    return {a[0] * b[0] + a[1] * b[1], a[0] * b[1] + a[1] * b[0]};
}

std::vector<double> pattern_log_likelihoods(const Tree& tree, const EdgeProbs& probs, const DataMatrix& data) {
    if (data.leaf_count() != tree.leaf_count())
        throw std::invalid_argument("matrix has " + std::to_string(data.leaf_count()) + " leaves, tree has " +
                                    std::to_string(tree.leaf_count()));
    std::vector<double> out;
    out.reserve(data.patterns().size());
    for (const auto& p : data.patterns()) out.push_back(char_likelihood_pruning(tree, probs, p.character).log_f);
    return out;
}

double modified_loglik(const Tree& tree, const EdgeProbs& probs, const DataMatrix& data) {
    const auto logs = pattern_log_likelihoods(tree, probs, data);
    double total = 0.0;
    for (std::size_t i = 0; i < logs.size(); ++i) {
        if (logs[i] == -std::numeric_limits<double>::infinity()) return std::numeric_limits<double>::infinity();
        total -= static_cast<double>(data.patterns()[i].count) * logs[i];
    }
    return total;
}

std::vector<int> path_edges(const Tree& tree, int from, int to) {
    const RootedView view = root_at(tree, from);
    std::vector<int> out;
    for (int v = to; v != from; v = view.parent[static_cast<std::size_t>(v)]) {
        if (v < 0) throw std::invalid_argument("vertices are not connected");
        out.push_back(view.parent_edge[static_cast<std::size_t>(v)]);
    }
    std::reverse(out.begin(), out.end());
    return out;
}

double path_disagreement(const Tree& tree, const EdgeProbs& probs, int leaf_u, int leaf_v) {
    double prod = 1.0;
    for (int e : path_edges(tree, tree.leaf_vertex(leaf_u), tree.leaf_vertex(leaf_v)))
        prod *= 1.0 - 2.0 * probs[static_cast<std::size_t>(e)];
    return 0.5 * (1.0 - prod);
}

}  // namespace phyred
