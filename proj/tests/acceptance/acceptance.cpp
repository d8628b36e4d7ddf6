// Acceptance suite: one line per criterion, non-zero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "phyred/cli.hpp"
#include "phyred/likelihood.hpp"
#include "phyred/mlopt.hpp"
#include "phyred/parsimony.hpp"
#include "phyred/reduction.hpp"

using namespace phyred;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

Character from_bits(unsigned bits, int n) {
    Character c;
    for (int i = 0; i < n; ++i) c.states.push_back(static_cast<std::uint8_t>((bits >> i) & 1U));
    return c;
}

EdgeProbs random_probs(int edges, std::mt19937_64& rng, double hi) {
    std::vector<double> p(static_cast<std::size_t>(edges));
    for (auto& x : p) x = hi * unit_interval(rng());
    return EdgeProbs(p);
}

std::string fmt(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3g", x);
    return buf;
}

Outcome likelihood_oracle() {
    const auto start = std::chrono::steady_clock::now();
    std::mt19937_64 rng(20240501);
    std::int64_t compared = 0, mismatches = 0;
    double worst = 0.0;
    for (const Tree& t : enumerate_topologies(5))
        for (int draw = 0; draw < 20; ++draw) {
            const EdgeProbs p = random_probs(t.edge_count(), rng, 0.5);
            for (unsigned bits = 0; bits < 32; ++bits) {
                const Character c = from_bits(bits, 5);
                const double a = char_likelihood_pruning(t, p, c).f();
                const double b = char_likelihood_exhaustive(t, p, c).f();
                const double rel = std::abs(a - b) / std::max(std::abs(a), std::abs(b));
                worst = std::max(worst, rel);
                ++compared;
                if (!(rel <= 1e-12)) ++mismatches;
            }
        }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return {mismatches == 0 && secs < 60.0, std::to_string(compared) + " comparisons, " + std::to_string(mismatches) +
                                                " above 1e-12, max relative difference " + fmt(worst) + ", " +
                                                fmt(secs) + " s"};
}

Outcome parsimony_oracle() {
    std::int64_t compared = 0, mismatches = 0;
    for (int n : {4, 5})
        for (const Tree& t : enumerate_topologies(n))
            for (unsigned bits = 0; bits < (1U << n); ++bits) {
                const Character c = from_bits(bits, n);
                ++compared;
                if (fitch_score(t, c) != brute_force_score(t, c)) ++mismatches;
            }
    std::mt19937_64 rng(6);
    for (const Tree& t : enumerate_topologies(6))
        for (int i = 0; i < 200; ++i) {
            const Character c = from_bits(static_cast<unsigned>(rng() & 63U), 6);
            ++compared;
            if (fitch_score(t, c) != brute_force_score(t, c)) ++mismatches;
        }
    return {mismatches == 0, std::to_string(compared) + " characters, " + std::to_string(mismatches) + " mismatches"};
}

const double kQGrid[] = {0.001, 0.01, 0.05, 0.1, 0.25, 0.5};

Outcome claim1_characters() {
    std::int64_t checked = 0, violations = 0;
    double worst = INFINITY;
    for (const Tree& t : enumerate_topologies(5))
        for (double q : kQGrid)
            for (unsigned bits = 0; bits < 32; ++bits) {
                const double s = claim1_character_slack(t, from_bits(bits, 5), q);
                worst = std::min(worst, s);
                ++checked;
                if (!(s >= 0.0)) ++violations;
            }
    return {violations == 0, std::to_string(checked) + " checks, " + std::to_string(violations) +
                                 " violations, min slack " + fmt(worst)};
}

Outcome claim2_contrapositive() {
    int instances = 0, non_vacuous = 0;
    std::int64_t checks = 0, violations = 0;
    double worst = INFINITY;
    std::vector<std::pair<DataMatrix, Tree>> cases;
    cases.emplace_back(DataMatrix::from_characters(4, {make_character("0011"), make_character("0101")}),
                       parse_newick("((1,2),(3,4));"));
    const auto trees = enumerate_topologies(5);
    for (std::uint64_t seed = 1; seed <= 5; ++seed) cases.emplace_back(random_instance(5, 6, seed), trees[seed * 2]);
    for (const auto& [x, t] : cases) {
        const VerifierReport r = verify_claim2(pad_constant_sites(x, 0.5), t, 1000, 17);
        ++instances;
        if (r.note != "vacuous" && r.note != "degenerate") ++non_vacuous;
        checks += r.checks;
        violations += r.violations;
        worst = std::min(worst, r.margin);
    }
    return {violations == 0 && non_vacuous >= 5,
            std::to_string(non_vacuous) + "/" + std::to_string(instances) + " instances with p_bar < 1/2, " +
                std::to_string(checks) + " cost evaluations, " + std::to_string(violations) +
                " violations, min margin " + fmt(worst)};
}

Outcome claim3_characters() {
    std::int64_t checked = 0, violations = 0;
    int thresholds = 0;
    double worst = INFINITY;
    std::mt19937_64 rng(33);
    for (const Tree& t : enumerate_topologies(5)) {
        const double E = t.edge_count();
        for (double p_bar : kQGrid) {
            if (!(p_bar < 1.0 / E)) continue;
            ++thresholds;
            for (int draw = 0; draw <= 20; ++draw) {
                const EdgeProbs p = draw == 0 ? EdgeProbs::uniform(t, p_bar) : random_probs(t.edge_count(), rng, p_bar);
                for (unsigned bits = 0; bits < 32; ++bits) {
                    const Character c = from_bits(bits, 5);
                    const double upper = E * std::pow(E * p_bar, fitch_score(t, c));
                    const double s = claim3_character_slack(t, p, c, p_bar);
                    worst = std::min(worst, s / upper);
                    ++checked;
                    if (s < 0.0) ++violations;
                }
            }
        }
    }
    return {violations == 0 && checked > 0,
            std::to_string(checked) + " checks over " + std::to_string(thresholds) +
                " (tree, p_bar) pairs with p_bar < 1/E_T, " + std::to_string(violations) +
                " violations, min relative slack " + fmt(worst)};
}

Outcome prop1_end_to_end() {
    const auto start = std::chrono::steady_clock::now();
    int coincide = 0, link_i = 0, padded_ok = 0;
    const int runs = 20;
    for (int seed = 1; seed <= runs; ++seed) {
        const VerifierReport r = verify_prop1_chain(random_instance(5, 6, static_cast<std::uint64_t>(seed)), 0.5);
        if (r.details["ml_tree_is_mp_optimal"] == true) ++coincide;
        if (r.details["link_i"] == "pass") ++link_i;
        if (r.quantities.N_c == r.quantities.M * r.quantities.M) ++padded_ok;
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return {coincide >= 18 && link_i == runs && padded_ok == runs && secs < 600.0,
            "l(X,T') = l(X,T**) in " + std::to_string(coincide) + "/20, link (i) in " + std::to_string(link_i) +
                "/20, N_c = M^2 in " + std::to_string(padded_ok) + "/20, " + fmt(secs) + " s"};
}

Outcome padding_ladder_check() {
    const auto start = std::chrono::steady_clock::now();
    const DataMatrix x = DataMatrix::from_characters(4, {make_character("0011"), make_character("0101")});
    const auto ratios = padding_ladder(x, parse_newick("((1,2),(3,4));"), {100, 1000, 10000, 100000});
    bool decreasing = true;
    std::string listed;
    for (std::size_t i = 0; i < ratios.size(); ++i) {
        if (i > 0 && !(ratios[i] < ratios[i - 1])) decreasing = false;
        listed += (i ? " " : "") + fmt(ratios[i]);
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool final_ok = ratios.back() > 1.0 && ratios.back() < 1.5;
    return {decreasing && final_ok && secs < 60.0, "ratios " + listed + (decreasing ? ", strictly decreasing" : ", not monotone")};
}

Outcome cli_determinism() {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "phyred_acceptance";
    fs::create_directories(dir);
    auto put = [&](const char* name, const std::string& text) {
        std::ofstream((dir / name).string()) << text;
        return (dir / name).string();
    };
    const std::string q_mat = put("q.mat", "4 2\n1 00\n2 01\n3 10\n4 11\n");
    const std::string q_nwk = put("q.nwk", "((1,2),(3,4));\n");
    const std::string q_probs = put("q.probs", "1 5 0.1\n2 5 0.2\n5 6 0.05\n3 6 0.3\n4 6 0.15\n");
    std::ostringstream gen_out, gen_err;
    cli::run({"gen", "--n", "5", "--k", "6", "--seed", "1"}, gen_out, gen_err);
    const std::string r_mat = put("r.mat", gen_out.str());
    const std::string r_nwk = put("r.nwk", "((1,2),(3,(4,5)));\n");

    std::vector<std::vector<std::string>> commands = {
        {"gen", "--n", "5", "--k", "6", "--seed", "1"},
        {"gen", "--n", "6", "--k", "20", "--seed", "9", "--layout", "compressed"},
        {"pad", "--matrix", q_mat, "--epsilon", "0.5"},
        {"score-mp", "--matrix", r_mat, "--tree", r_nwk},
        {"score-ml", "--matrix", q_mat, "--tree", q_nwk, "--probs", q_probs},
        {"score-ml", "--matrix", r_mat, "--tree", r_nwk, "--uniform", "0.07"},
        {"search-mp", "--matrix", r_mat},
        {"search-ml", "--matrix", r_mat, "--seed", "4"},
        {"search-ml", "--matrix", q_mat, "--seed", "4", "--grid"},
        {"enumerate", "--n", "6"},
        {"verify", "claim1", "--matrix", r_mat, "--tree", r_nwk},
        {"verify", "claim2", "--matrix", r_mat, "--tree", r_nwk, "--seed", "3"},
        {"verify", "claim3", "--matrix", r_mat, "--tree", r_nwk, "--seed", "3"},
        {"verify", "prop1", "--matrix", r_mat, "--seed", "3"},
    };
    int runs = 0, identical = 0;
    std::string first_diff;
    for (const auto& base : commands)
        for (const char* format : {"json", "csv", "text"}) {
            auto args = base;
            args.insert(args.end(), {"--format", format});
            std::ostringstream o1, e1, o2, e2;
            const int c1 = cli::run(args, o1, e1);
            const int c2 = cli::run(args, o2, e2);
            ++runs;
            if (c1 == c2 && c1 == cli::kExitOk && o1.str() == o2.str() && e1.str() == e2.str() && !o1.str().empty())
                ++identical;
            else if (first_diff.empty())
                first_diff = ", first difference: " + base[0] + " --format " + format;
        }
    return {identical == runs, std::to_string(identical) + "/" + std::to_string(runs) +
                                   " command runs byte-identical" + first_diff};
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"likelihood pruning matches exhaustive sum (n=5)", likelihood_oracle},
        {"fitch matches brute-force parsimony (n=4,5,6)", parsimony_oracle},
        {"claim1 per-character lower bound", claim1_characters},
        {"claim2 contrapositive on random trials", claim2_contrapositive},
        {"claim3 per-character upper bound", claim3_characters},
        {"prop1 chain on 20 random instances", prop1_end_to_end},
        {"N_c ladder monotone with final ratio in (1, 1.5)", padding_ladder_check},
        {"CLI output is deterministic", cli_determinism},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        if (!o.pass) ++failed;
        std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << i + 1 << ": " << criteria[i].first << " ("
                  << o.detail << ")" << std::endl;
    }
    std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed") << std::endl;
    return failed == 0 ? 0 : 1;
}
