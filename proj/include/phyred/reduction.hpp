#pragma once

#include <cstdint>
#include <vector>

#include "phyred/characters.hpp"
#include "phyred/likelihood.hpp"
#include "phyred/mlopt.hpp"
#include "phyred/report.hpp"
#include "phyred/tree.hpp"

namespace phyred {

inline constexpr std::int64_t kDefaultLargeM = 32;

/// Canonical uniform probability q = l / (E_T (k + N_c)), threshold
/// p_bar = l ln(k + N_c) / N_c, and the normalizer ln(k + N_c).
struct ReductionQuantities {
    double q;
    double p_bar;
    double normalizer;
};

ReductionQuantities reduction_quantities(std::int64_t parsimony, int edges, std::int64_t k, std::int64_t n_c);

/// -ln P~[X0 | T, p] / ln(k + N_c).
double normalized_cost(const Tree& tree, const EdgeProbs& probs, const PaddedInstance& padded);

/// ln f~_chi - (l(chi,T) ln q - E_T (q + 2 q^2)); never negative for q in (0, 1/2].
double claim1_character_slack(const Tree& tree, const Character& ch, double q);

/// E_T (E_T p_bar)^l(chi,T) - f~_chi for a non-constant chi and p with every
/// p_e <= p_bar < 1/E_T; never negative.
double claim3_character_slack(const Tree& tree, const EdgeProbs& probs, const Character& ch, double p_bar);

struct VerifierConfig {
    std::int64_t large_m = kDefaultLargeM;  // M below this leaves "M large enough" bounds inconclusive
    OptimizerConfig optimizer;
    std::int64_t padding_cap = kDefaultPaddingCap;
};

/// claim1: at p = q everywhere the normalized cost is at most (1 + 2 eps) l(X,T).
/// Also checks the per-character lower bound for every pattern at q and at a
/// fixed q grid.
VerifierReport verify_claim1(const PaddedInstance& padded, const Tree& tree, const VerifierConfig& config = {});

/// claim2, contrapositive: any p with some p_e > p_bar has normalized cost > l(X,T).
/// Random trials resample one designated edge above p_bar; each edge is also
/// probed at p_bar (1 + 1e-6) with the other edges at 0.
VerifierReport verify_claim2(const PaddedInstance& padded, const Tree& tree, std::int64_t trials, std::uint64_t seed,
                             const VerifierConfig& config = {});

/// claim3: normalized cost >= (1 - 5 eps) l(X,T) over random p (plus a grid
/// when E_T <= 5), and the per-character upper bound whenever p_bar < 1/E_T.
VerifierReport verify_claim3(const PaddedInstance& padded, const Tree& tree, std::int64_t trials, std::uint64_t seed,
                             const VerifierConfig& config = {});

/// Exhaustive MP on X, exhaustive ML on the padded X0, then the inequality chain:
/// (i) cost(T', p') <= cost(T**, q) for every MP tree T** (optimality of ML,
/// up to 1e-8), and (ii) l(X,T') <= (1+2eps)/(1-5eps) l(X,T**) when eps < 0.2
/// and M is large enough.
VerifierReport verify_prop1_chain(const DataMatrix& base, double epsilon, const VerifierConfig& config = {});

/// normalized_cost(q everywhere) / l(X,T) for each padding count in `ladder`.
std::vector<double> padding_ladder(const DataMatrix& base, const Tree& tree, const std::vector<std::int64_t>& ladder,
                                   std::int64_t cap = kDefaultPaddingCap);

}  // namespace phyred
