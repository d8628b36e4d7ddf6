#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "phyred/characters.hpp"
#include "phyred/tree.hpp"

namespace phyred {

/// One transition probability per tree edge, indexed like Tree::edges().
/// Every value lies in [0, 1/2]; anything else is rejected.
class EdgeProbs {
public:
    EdgeProbs() = default;
    explicit EdgeProbs(std::vector<double> probs);

    static EdgeProbs uniform(const Tree& tree, double p);

    std::size_t size() const { return p_.size(); }
    double operator[](std::size_t e) const { return p_[e]; }
    const std::vector<double>& values() const { return p_; }
    double max() const;

    void set(std::size_t e, double p);

private:
    std::vector<double> p_;
};

void check_probability(double p);

/// Sidecar text: one "u v p" line per edge, 1-based vertex ids (leaf L is
/// vertex L, internal vertices n+1 and up). '#' starts a comment.
EdgeProbs parse_edge_probs(std::string_view text, const Tree& tree);
std::string write_edge_probs(const Tree& tree, const EdgeProbs& probs);

/// ln f~, where f~ = 2 P[chi | T, p]. -inf when the probability is exactly zero.
struct LikelihoodValue {
    double log_f = 0.0;

    double f() const { return std::exp(log_f); }
    bool is_zero() const { return log_f == -std::numeric_limits<double>::infinity(); }

    static LikelihoodValue from_linear(double f) { return {f > 0.0 ? std::log(f) : -std::numeric_limits<double>::infinity()}; }
};

/// Term-by-term sum over every extension of `ch`. Throws CapExceeded beyond
/// `cap` internal vertices.
LikelihoodValue char_likelihood_exhaustive(const Tree& tree, const EdgeProbs& probs, const Character& ch,
                                           int cap = 24);

/// Felsenstein pruning anchored at the canonical root.
LikelihoodValue char_likelihood_pruning(const Tree& tree, const EdgeProbs& probs, const Character& ch);

/// Pruning anchored at an arbitrary vertex.
LikelihoodValue char_likelihood_pruning(const Tree& tree, const EdgeProbs& probs, const Character& ch, int root);

/// f~ as a function of one edge's probability: f~ = (1 - p_e) * same + p_e * differ,
/// where same/differ weight the two sides agreeing or disagreeing across the edge.
struct EdgeSplit {
    double same;
    double differ;
    double at(double p) const { return (1.0 - p) * same + p * differ; }
};

EdgeSplit edge_split(const Tree& tree, const EdgeProbs& probs, const Character& ch, int edge);

/// ln f~ for every pattern of `data`, in pattern order.
std::vector<double> pattern_log_likelihoods(const Tree& tree, const EdgeProbs& probs, const DataMatrix& data);

/// L~(X; T, p) = -sum over patterns of N_chi * ln f~_chi. +inf when some
/// pattern has probability zero.
double modified_loglik(const Tree& tree, const EdgeProbs& probs, const DataMatrix& data);

/// P[chi(u) != chi(v)] for leaves u and v: (1 - prod over the path of (1 - 2 p_e)) / 2.
double path_disagreement(const Tree& tree, const EdgeProbs& probs, int leaf_u, int leaf_v);

/// Edge indices on the path between two vertices.
std::vector<int> path_edges(const Tree& tree, int from, int to);

}  // namespace phyred
