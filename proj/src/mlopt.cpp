#include "phyred/mlopt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "phyred/golden.hpp"
#include "phyred/parallel.hpp"
#include "phyred/parsimony.hpp"

namespace phyred {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t derive_seed(std::uint64_t seed, std::string_view stream) {
    std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
    for (char c : stream) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return derive_seed(seed, h);
}

double unit_interval(std::uint64_t bits) { return static_cast<double>(bits >> 11) * 0x1.0p-53; }

double parsimony_start(const Tree& tree, const DataMatrix& data) {
    if (tree.edge_count() == 0) return 0.0;
    const double q = static_cast<double>(parsimony_score(tree, data)) /
                     (static_cast<double>(tree.edge_count()) * static_cast<double>(data.k()));
    return std::min(q, 0.5);
}

std::vector<EdgeProbs> starting_points(const Tree& tree, const DataMatrix& data, const OptimizerConfig& config) {
    if (config.restarts < 1) throw std::invalid_argument("optimizer needs at least one start");
    std::vector<EdgeProbs> starts;
    starts.push_back(EdgeProbs::uniform(tree, parsimony_start(tree, data)));
    if (config.restarts >= 2) starts.push_back(EdgeProbs::uniform(tree, 0.1));
    std::mt19937_64 rng(derive_seed(config.seed, write_newick(tree)));
    for (int r = 2; r < config.restarts; ++r) {
        std::vector<double> p(static_cast<std::size_t>(tree.edge_count()));
        for (auto& x : p) x = 0.5 * unit_interval(rng());
        starts.emplace_back(std::move(p));
    }
    return starts;
}

MLResult descend_from(const Tree& tree, const DataMatrix& data, EdgeProbs start, const OptimizerConfig& config) {
    MLResult res{tree, std::move(start), 0.0, false, 0, std::nullopt};
    res.value = modified_loglik(tree, res.probs, data);
    if (tree.edge_count() == 0) {
        res.converged = true;
        return res;
    }

    const auto& patterns = data.patterns();
    std::vector<EdgeSplit> splits(patterns.size());
    auto edge_objective = [&](double x) {
        double total = 0.0;
        for (std::size_t i = 0; i < splits.size(); ++i) {
            const double f = splits[i].at(x);
            if (!(f > 0.0)) return kInf;
            total -= static_cast<double>(patterns[i].count) * std::log(f);
        }
        return total;
    };

    for (int sweep = 1; sweep <= config.max_sweeps; ++sweep) {
        const double before = res.value;
        for (int e = 0; e < tree.edge_count(); ++e) {
            for (std::size_t i = 0; i < patterns.size(); ++i)
                splits[i] = edge_split(tree, res.probs, patterns[i].character, e);
            const double current = edge_objective(res.probs[static_cast<std::size_t>(e)]);
            const ScalarMinimum m = golden_section_minimize(edge_objective, 0.0, 0.5, config.golden_tolerance);
            if (m.value < current) {
                res.probs.set(static_cast<std::size_t>(e), m.x);
                res.value = m.value;
            } else {
                res.value = current;
            }
        }
        res.sweeps = sweep;
        const bool both_inf = std::isinf(before) && std::isinf(res.value);
        if (both_inf || before - res.value < config.tolerance) {
            res.converged = true;
            break;
        }
    }
    // report the value recomputed from scratch rather than the running one
    res.value = modified_loglik(tree, res.probs, data);
    return res;
}

MLResult optimize_edges(const Tree& tree, const DataMatrix& data, const OptimizerConfig& config) {
    if (data.leaf_count() != tree.leaf_count())
        throw std::invalid_argument("matrix has " + std::to_string(data.leaf_count()) + " leaves, tree has " +
                                    std::to_string(tree.leaf_count()));
    std::optional<MLResult> best;
    for (auto& start : starting_points(tree, data, config)) {
        MLResult r = descend_from(tree, data, std::move(start), config);
        if (!best || r.value < best->value) best = std::move(r);
    }

    if (config.grid_fallback && tree.edge_count() <= 5) {
        MLResult grid = grid_search(tree, data);
        best->grid_value = grid.value;
        if (grid.value < best->value - 1e-6) {
            MLResult polished = descend_from(tree, data, grid.probs, config);
            if (polished.value < best->value) {
                polished.grid_value = grid.value;
                best = std::move(polished);
            }
        }
    }
    return *std::move(best);
}

MLResult grid_search(const Tree& tree, const DataMatrix& data) {
    const int dims = tree.edge_count();
    if (dims > 5) throw std::invalid_argument("grid search supports at most 5 edges, tree has " + std::to_string(dims));
    constexpr double kBudget = 70000.0;

    double step = 1.0 / 512.0;
    while (std::pow(0.5 / step + 1.0, dims) > kBudget) step *= 2.0;

    std::vector<double> center(static_cast<std::size_t>(dims), 0.25);
    double half_width = 0.25;
    MLResult best{tree, EdgeProbs::uniform(tree, 0.25), kInf, true, 0, std::nullopt};
    best.value = modified_loglik(tree, best.probs, data);

    for (int level = 0; level < 3; ++level) {
        std::vector<std::vector<double>> axes(static_cast<std::size_t>(dims));
        for (int d = 0; d < dims; ++d) {
            const double lo = std::max(0.0, center[static_cast<std::size_t>(d)] - half_width);
            const double hi = std::min(0.5, center[static_cast<std::size_t>(d)] + half_width);
            auto& axis = axes[static_cast<std::size_t>(d)];
            for (double x = lo; x <= hi + 1e-15; x += step) axis.push_back(std::min(x, 0.5));
        }
        std::vector<std::size_t> idx(static_cast<std::size_t>(dims), 0);
        std::vector<double> point(static_cast<std::size_t>(dims));
        while (true) {
            for (int d = 0; d < dims; ++d) point[static_cast<std::size_t>(d)] = axes[static_cast<std::size_t>(d)][idx[static_cast<std::size_t>(d)]];
            EdgeProbs probs(point);
            const double v = modified_loglik(tree, probs, data);
            if (v < best.value) {
                best.value = v;
                best.probs = std::move(probs);
            }
            int d = 0;
            for (; d < dims; ++d) {
                auto& i = idx[static_cast<std::size_t>(d)];
                if (++i < axes[static_cast<std::size_t>(d)].size()) break;
                i = 0;
            }
            if (d == dims) break;
        }
        center = best.probs.values();
        half_width = step;
        step /= 4.0;
    }
    return best;
}

MLSearchResult ml_search(const DataMatrix& data, const OptimizerConfig& config) {
    const std::vector<Tree> trees = enumerate_topologies(data.leaf_count(), config.enumeration_cap);
    MLSearchResult out;
    out.per_topology.resize(trees.size());
    parallel_for(trees.size(), config.threads,
                 [&](std::size_t i) { out.per_topology[i] = optimize_edges(trees[i], data, config); });

    std::vector<std::pair<std::string, std::size_t>> order;
    for (std::size_t i = 0; i < trees.size(); ++i) order.emplace_back(write_newick(trees[i]), i);
    std::sort(order.begin(), order.end());

    std::size_t best = order.front().second;
    for (const auto& [nwk, i] : order)
        if (out.per_topology[i].value < out.per_topology[best].value) best = i;
    out.best = out.per_topology[best];
    for (const auto& [nwk, i] : order) {
        const double v = out.per_topology[i].value;
        const double b = out.best.value;
        if (v == b || v - b <= config.tie_tolerance) out.optima.push_back(trees[i]);
    }
    return out;
}

}  // namespace phyred
