#include "phyred/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "phyred/characters.hpp"
#include "phyred/likelihood.hpp"
#include "phyred/mlopt.hpp"
#include "phyred/parsimony.hpp"
#include "phyred/reduction.hpp"
#include "phyred/report.hpp"
#include "phyred/tree.hpp"

namespace phyred::cli {
namespace {

using json = nlohmann::ordered_json;

class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    std::string tree_path;
    std::string matrix_path;
    std::string probs_path;
    std::optional<double> uniform_p;
    double epsilon = 0.5;
    std::uint64_t seed = 0;
    std::int64_t trials = 1000;
    std::string format;
    std::string layout;
    int n = 0;
    std::int64_t k = 0;
    int n_max = kDefaultEnumerationCap;
    std::int64_t nc_max = kDefaultPaddingCap;
    std::int64_t m_min = kDefaultLargeM;
    int threads = 1;
    int restarts = 5;
    bool grid = false;
    bool timing = false;
};

std::string read_file(const std::string& path, const char* flag) {
    if (path.empty()) throw InputError(std::string("missing required option ") + flag);
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open file '" + path + "' given to " + flag);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Tree load_tree(const RunConfig& c) {
    const std::string text = read_file(c.tree_path, "--tree");
    try {
        return parse_newick(text);
    } catch (const NewickError& e) {
        throw InputError("'" + c.tree_path + "': " + e.what());
    }
}

DataMatrix load_matrix(const RunConfig& c) {
    const std::string text = read_file(c.matrix_path, "--matrix");
    try {
        return parse_matrix(text);
    } catch (const MatrixError& e) {
        throw InputError("'" + c.matrix_path + "': " + e.what());
    }
}

void check_dimensions(const Tree& tree, const DataMatrix& m) {
    if (tree.leaf_count() != m.leaf_count())
        throw InputError("tree has " + std::to_string(tree.leaf_count()) + " leaves but matrix has " +
                         std::to_string(m.leaf_count()));
}

EdgeProbs load_probs(const RunConfig& c, const Tree& tree) {
    if (c.uniform_p && !c.probs_path.empty()) throw InputError("--probs and --uniform are mutually exclusive");
    if (c.uniform_p) {
        try {
            return EdgeProbs::uniform(tree, *c.uniform_p);
        } catch (const std::domain_error& e) {
            throw InputError(std::string("--uniform: ") + e.what());
        }
    }
    const std::string text = read_file(c.probs_path, "--probs");
    try {
        return parse_edge_probs(text, tree);
    } catch (const std::invalid_argument& e) {
        throw InputError("'" + c.probs_path + "': " + e.what());
    }
}

OptimizerConfig optimizer_config(const RunConfig& c) {
    OptimizerConfig o;
    o.seed = c.seed;
    o.restarts = c.restarts;
    o.grid_fallback = c.grid;
    o.enumeration_cap = c.n_max;
    o.threads = c.threads;
    return o;
}

VerifierConfig verifier_config(const RunConfig& c) {
    VerifierConfig v;
    v.large_m = c.m_min;
    v.optimizer = optimizer_config(c);
    v.padding_cap = c.nc_max;
    return v;
}

json matrix_json(const DataMatrix& m) {
    json pats = json::array();
    for (const auto& p : m.patterns()) pats.push_back({{"character", to_string(p.character)}, {"count", p.count}});
    return {{"n", m.leaf_count()}, {"k", m.k()}, {"patterns", pats}};
}

void emit_json(std::ostream& out, const json& j) { out << j.dump(2) << '\n'; }

MatrixLayout layout_of(const RunConfig& c) {
    return c.layout == "compressed" ? MatrixLayout::compressed : MatrixLayout::expanded;
}

// subcommands ----------------------------------------------------------------

int cmd_gen(const RunConfig& c, std::ostream& out) {
    const DataMatrix m = random_instance(c.n, c.k, c.seed);
    if (c.format == "json") {
        json j = matrix_json(m);
        j["seed"] = c.seed;
        emit_json(out, j);
    } else if (c.format == "csv") {
        out << "character,count\n";
        for (const auto& p : m.patterns()) out << to_string(p.character) << ',' << p.count << '\n';
    } else {
        out << write_matrix(m, layout_of(c));
    }
    return kExitOk;
}

int cmd_pad(const RunConfig& c, std::ostream& out) {
    const DataMatrix base = load_matrix(c);
    const PaddedInstance padded = pad_constant_sites(base, c.epsilon, c.nc_max);
    if (c.format == "json") {
        json j = matrix_json(padded.padded);
        j["params"] = {{"epsilon", padded.params.epsilon}, {"M", padded.params.M}, {"N_c", padded.params.N_c}};
        emit_json(out, j);
    } else if (c.format == "csv") {
        out << "epsilon,M,N_c,base_k,padded_k\n"
            << format_double(padded.params.epsilon) << ',' << padded.params.M << ',' << padded.params.N_c << ','
            << base.k() << ',' << padded.padded.k() << '\n';
    } else {
        out << "# epsilon=" << format_double(padded.params.epsilon) << " M=" << padded.params.M
            << " N_c=" << padded.params.N_c << '\n'
            << write_matrix(padded.padded, layout_of(c));
    }
    return kExitOk;
}

int cmd_score_mp(const RunConfig& c, std::ostream& out) {
    const Tree tree = load_tree(c);
    const DataMatrix m = load_matrix(c);
    check_dimensions(tree, m);
    const std::int64_t score = parsimony_score(tree, m);
    if (c.format == "json") {
        json pats = json::array();
        for (const auto& p : m.patterns())
            pats.push_back({{"character", to_string(p.character)},
                            {"count", p.count},
                            {"score", fitch_score(tree, p.character)}});
        emit_json(out, {{"tree", write_newick(tree)}, {"parsimony", score}, {"patterns", pats}});
    } else if (c.format == "csv") {
        out << "tree,parsimony\n\"" << write_newick(tree) << "\"," << score << '\n';
    } else {
        out << "l(X,T) = " << score << '\n';
    }
    return kExitOk;
}

int cmd_score_ml(const RunConfig& c, std::ostream& out) {
    const Tree tree = load_tree(c);
    const DataMatrix m = load_matrix(c);
    check_dimensions(tree, m);
    const EdgeProbs probs = load_probs(c, tree);
    const double value = modified_loglik(tree, probs, m);
    if (c.format == "json") {
        const auto logs = pattern_log_likelihoods(tree, probs, m);
        json pats = json::array();
        for (std::size_t i = 0; i < logs.size(); ++i)
            pats.push_back({{"character", to_string(m.patterns()[i].character)},
                            {"count", m.patterns()[i].count},
                            {"log_f", json_number(logs[i])}});
        emit_json(out, {{"tree", write_newick(tree)}, {"modified_loglik", json_number(value)}, {"patterns", pats}});
    } else if (c.format == "csv") {
        out << "tree,modified_loglik\n\"" << write_newick(tree) << "\"," << format_double(value) << '\n';
    } else {
        out << "L(X;T,p) = " << format_double(value) << '\n';
    }
    return kExitOk;
}

int cmd_search_mp(const RunConfig& c, std::ostream& out) {
    const DataMatrix m = load_matrix(c);
    const MPSearchResult r = mp_search(m, c.n_max, c.threads);
    std::vector<std::string> trees;
    for (const auto& t : r.optima) trees.push_back(write_newick(t));
    if (c.format == "json") {
        emit_json(out, {{"parsimony", r.best_score}, {"optima", trees}});
    } else if (c.format == "csv") {
        out << "tree,parsimony\n";
        for (const auto& t : trees) out << '"' << t << "\"," << r.best_score << '\n';
    } else {
        out << "best parsimony " << r.best_score << '\n';
        for (const auto& t : trees) out << t << '\n';
    }
    return kExitOk;
}

int cmd_search_ml(const RunConfig& c, std::ostream& out) {
    const DataMatrix m = load_matrix(c);
    const MLSearchResult r = ml_search(m, optimizer_config(c));
    if (c.format == "json") {
        json all = json::array();
        for (const auto& t : r.per_topology)
            all.push_back({{"tree", write_newick(t.tree)},
                           {"value", json_number(t.value)},
                           {"converged", t.converged},
                           {"sweeps", t.sweeps}});
        json optima = json::array();
        for (const auto& t : r.optima) optima.push_back(write_newick(t));
        json probs = json::array();
        for (int e = 0; e < r.best.tree.edge_count(); ++e) {
            const auto& ed = r.best.tree.edge(e);
            probs.push_back({ed.u + 1, ed.v + 1, r.best.probs[static_cast<std::size_t>(e)]});
        }
        emit_json(out, {{"best", {{"tree", write_newick(r.best.tree)},
                                  {"value", json_number(r.best.value)},
                                  {"converged", r.best.converged},
                                  {"probs", probs}}},
                        {"optima", optima},
                        {"topologies", all}});
    } else if (c.format == "csv") {
        out << "tree,value,converged,sweeps\n";
        for (const auto& t : r.per_topology)
            out << '"' << write_newick(t.tree) << "\"," << format_double(t.value) << ','
                << (t.converged ? "true" : "false") << ',' << t.sweeps << '\n';
    } else {
        out << "best L " << format_double(r.best.value) << '\n'
            << "tree " << write_newick(r.best.tree) << '\n'
            << write_edge_probs(r.best.tree, r.best.probs) << "optima";
        for (const auto& t : r.optima) out << ' ' << write_newick(t);
        out << '\n';
    }
    return kExitOk;
}

int cmd_enumerate(const RunConfig& c, std::ostream& out) {
    std::vector<std::string> trees;
    for_each_topology(c.n, [&](const Tree& t) { trees.push_back(write_newick(t)); }, c.n_max);
    if (c.format == "json") {
        emit_json(out, {{"n", c.n}, {"count", trees.size()}, {"trees", trees}});
    } else if (c.format == "csv") {
        out << "index,tree\n";
        for (std::size_t i = 0; i < trees.size(); ++i) out << i << ",\"" << trees[i] << "\"\n";
    } else {
        for (const auto& t : trees) out << t << '\n';
    }
    return kExitOk;
}

int emit_report(const RunConfig& c, const VerifierReport& r, std::ostream& out) {
    if (c.format == "csv") {
        out << csv_header() << '\n' << to_csv_row(r, c.timing) << '\n';
    } else if (c.format == "text") {
        out << r.check << ": " << to_string(r.verdict);
        if (!r.note.empty()) out << " (" << r.note << ")";
        out << "\ninstance " << r.instance << "\nlhs " << format_double(r.lhs) << "\nbound "
            << format_double(r.bound) << "\nmargin " << format_double(r.margin) << "\nviolations " << r.violations
            << " of " << r.checks << '\n';
    } else {
        emit_json(out, to_json(r, c.timing));
    }
    switch (r.verdict) {
        case Verdict::pass: return kExitOk;
        case Verdict::fail: return kExitFail;
        case Verdict::inconclusive: return kExitInconclusive;
    }
    return kExitFail;
}

int cmd_verify(const std::string& which, const RunConfig& c, std::ostream& out) {
    const DataMatrix base = load_matrix(c);
    const VerifierConfig vc = verifier_config(c);
    if (which == "prop1") return emit_report(c, verify_prop1_chain(base, c.epsilon, vc), out);

    const Tree tree = load_tree(c);
    check_dimensions(tree, base);
    const PaddedInstance padded = pad_constant_sites(base, c.epsilon, c.nc_max);
    if (which == "claim1") return emit_report(c, verify_claim1(padded, tree, vc), out);
    if (which == "claim2") return emit_report(c, verify_claim2(padded, tree, c.trials, c.seed, vc), out);
    return emit_report(c, verify_claim3(padded, tree, c.trials, c.seed, vc), out);
}

template <class T>
void env_default(const char* name, T& target) {
    if (const char* v = std::getenv(name)) {
        try {
            if constexpr (std::is_same_v<T, int>)
                target = std::stoi(v);
            else
                target = static_cast<T>(std::stoll(v));
        } catch (const std::exception&) {
            throw InputError(std::string("environment variable ") + name + " is not an integer: '" + v + "'");
        }
    }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    RunConfig c;
    try {
        env_default("PHYRED_N_MAX", c.n_max);
        env_default("PHYRED_NC_MAX", c.nc_max);
        env_default("PHYRED_M_MIN", c.m_min);
    } catch (const InputError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }

    CLI::App app{"Binary-state phylogenetics engine and MP-to-ML reduction verifier", "phyred"};
    app.require_subcommand(1, 1);
    auto formats = CLI::IsMember({"json", "csv", "text"});

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--format", c.format, "Output format: json, csv or text")->check(formats);
        sub->add_option("--threads", c.threads, "Worker threads")->check(CLI::PositiveNumber);
        sub->add_option("--n-max", c.n_max, "Largest leaf count for exhaustive search")->check(CLI::PositiveNumber);
        sub->add_option("--nc-max", c.nc_max, "Largest allowed N_c")->check(CLI::PositiveNumber);
        sub->add_option("--m-min", c.m_min, "M at which bounds stated for large M are enforced")
            ->check(CLI::PositiveNumber);
    };
    auto add_matrix = [&](CLI::App* sub) { sub->add_option("--matrix", c.matrix_path, "Character matrix (.mat)"); };
    auto add_tree = [&](CLI::App* sub) { sub->add_option("--tree", c.tree_path, "Newick tree (.nwk)"); };
    auto add_search = [&](CLI::App* sub) {
        sub->add_option("--seed", c.seed, "Seed for random restarts");
        sub->add_option("--restarts", c.restarts, "Optimizer starting points")->check(CLI::PositiveNumber);
        sub->add_flag("--grid", c.grid, "Cross-check edge optimization on a refined grid (E_T <= 5)");
    };
    auto add_layout = [&](CLI::App* sub) {
        sub->add_option("--layout", c.layout, "Matrix layout: expanded or compressed")
            ->check(CLI::IsMember({"expanded", "compressed"}));
    };

    auto* gen = app.add_subcommand("gen", "Generate a random character matrix");
    gen->add_option("--n", c.n, "Leaf count")->required()->check(CLI::Range(3, 1 << 20));
    gen->add_option("--k", c.k, "Character count")->required()->check(CLI::PositiveNumber);
    gen->add_option("--seed", c.seed, "Random seed");
    add_layout(gen);

    auto* pad = app.add_subcommand("pad", "Adjoin N_c = ceil(M^(1/epsilon)) all-0 characters");
    add_matrix(pad);
    pad->add_option("--epsilon", c.epsilon, "Epsilon in (0, 1]")->check(CLI::Range(0.0, 1.0));
    add_layout(pad);

    auto* score_mp = app.add_subcommand("score-mp", "Parsimony score l(X,T)");
    add_matrix(score_mp);
    add_tree(score_mp);

    auto* score_ml = app.add_subcommand("score-ml", "Modified log-likelihood for a fixed tree and edge probabilities");
    add_matrix(score_ml);
    add_tree(score_ml);
    score_ml->add_option("--probs", c.probs_path, "Edge probability sidecar (.probs)");
    score_ml->add_option("--uniform", c.uniform_p, "Use the same probability on every edge");

    auto* search_mp = app.add_subcommand("search-mp", "Exhaustive maximum parsimony");
    add_matrix(search_mp);

    auto* search_ml = app.add_subcommand("search-ml", "Exhaustive maximum likelihood");
    add_matrix(search_ml);
    add_search(search_ml);

    auto* enumerate = app.add_subcommand("enumerate", "List all binary topologies");
    enumerate->add_option("--n", c.n, "Leaf count")->required()->check(CLI::PositiveNumber);

    auto* verify = app.add_subcommand("verify", "Check one inequality of the reduction");
    std::string which;
    verify->add_option("check", which, "claim1, claim2, claim3 or prop1")
        ->required()
        ->check(CLI::IsMember({"claim1", "claim2", "claim3", "prop1"}));
    add_matrix(verify);
    add_tree(verify);
    verify->add_option("--epsilon", c.epsilon, "Epsilon in (0, 1]")->check(CLI::Range(0.0, 1.0));
    verify->add_option("--trials", c.trials, "Random trials")->check(CLI::NonNegativeNumber);
    verify->add_option("--seed", c.seed, "Random seed");
    verify->add_option("--restarts", c.restarts, "Optimizer starting points (prop1)")->check(CLI::PositiveNumber);
    verify->add_flag("--grid", c.grid, "Grid cross-check in the ML search (prop1)");
    verify->add_flag("--timing", c.timing, "Include runtime_ms in the report");

    for (auto* sub : {gen, pad, score_mp, score_ml, search_mp, search_ml, enumerate, verify}) add_common(sub);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::Success& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    // reports default to JSON, everything else to text
    if (c.format.empty()) c.format = *verify ? "json" : "text";
    if (c.layout.empty()) c.layout = *pad ? "compressed" : "expanded";

    try {
        if (*gen) return cmd_gen(c, out);
        if (*pad) return cmd_pad(c, out);
        if (*score_mp) return cmd_score_mp(c, out);
        if (*score_ml) return cmd_score_ml(c, out);
        if (*search_mp) return cmd_search_mp(c, out);
        if (*search_ml) return cmd_search_ml(c, out);
        if (*enumerate) return cmd_enumerate(c, out);
        return cmd_verify(which, c, out);
    } catch (const InputError& e) {
        err << "error: " << e.what() << '\n';
    } catch (const CapExceeded& e) {
        err << "error: " << e.what() << '\n';
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
    } catch (const std::domain_error& e) {
        err << "error: " << e.what() << '\n';
    }
    return kExitUsage;
}

}  // namespace phyred::cli
