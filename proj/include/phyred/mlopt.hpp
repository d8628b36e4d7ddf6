#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "phyred/characters.hpp"
#include "phyred/likelihood.hpp"
#include "phyred/tree.hpp"

namespace phyred {

struct OptimizerConfig {
    double tolerance = 1e-10;      // stop when a sweep improves L~ by less than this
    int max_sweeps = 500;
    int restarts = 5;              // total starting points: parsimony q, uniform 0.1, then random
    std::uint64_t seed = 0;
    bool grid_fallback = false;    // cross-check with a refined grid when E_T <= 5
    double golden_tolerance = 1e-12;
    double tie_tolerance = 1e-8;   // absolute, for ties between topologies
    int enumeration_cap = kDefaultEnumerationCap;
    int threads = 1;
};

struct MLResult {
    Tree tree;
    EdgeProbs probs;
    double value = 0.0;  // L~ at probs; +inf when every start has zero likelihood
    bool converged = false;
    int sweeps = 0;
    std::optional<double> grid_value;  // best refined-grid value, when the grid ran
};

/// Uniform start used first: l(X,T) / (E_T * k), capped at 1/2.
double parsimony_start(const Tree& tree, const DataMatrix& data);

/// Starting points in the order they are tried.
std::vector<EdgeProbs> starting_points(const Tree& tree, const DataMatrix& data, const OptimizerConfig& config);

/// Coordinate descent from a single start: each edge in turn is set to the
/// exact minimizer (golden section on [0, 1/2]) of L~ with the others fixed.
/// For fixed other edges every f~_chi is affine in p_e, so each scalar
/// subproblem is convex.
MLResult descend_from(const Tree& tree, const DataMatrix& data, EdgeProbs start, const OptimizerConfig& config);

/// Best local minimum of L~ over all starting points.
MLResult optimize_edges(const Tree& tree, const DataMatrix& data, const OptimizerConfig& config = {});

/// Best point of a grid over [0, 1/2]^E_T refined twice around the incumbent.
/// The first level uses step 1/512 when that fits the point budget and a
/// coarser power of two otherwise; each refinement divides the step by 4.
/// Throws std::invalid_argument for E_T > 5.
MLResult grid_search(const Tree& tree, const DataMatrix& data);

struct MLSearchResult {
    MLResult best;
    std::vector<Tree> optima;          // within tie_tolerance of best, canonical order
    std::vector<MLResult> per_topology;  // enumeration order
};

/// optimize_edges on every binary topology.
MLSearchResult ml_search(const DataMatrix& data, const OptimizerConfig& config = {});

/// Deterministic 64-bit mix of a seed with a stream index (splitmix64).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);
std::uint64_t derive_seed(std::uint64_t seed, std::string_view stream);

/// Uniform double in [0, 1) from the top 53 bits of a 64-bit draw.
double unit_interval(std::uint64_t bits);

}  // namespace phyred
