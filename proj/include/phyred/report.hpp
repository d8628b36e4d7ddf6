#pragma once

#include <cstdint>
#include <string>

#include "json.hpp"

namespace phyred {

enum class Verdict { pass, fail, inconclusive };

std::string to_string(Verdict v);

struct Quantities {
    double q = 0.0;
    double p_bar = 0.0;
    std::int64_t N_c = 0;
    std::int64_t M = 0;
    double epsilon = 0.0;
    double normalizer = 0.0;  // ln(k + N_c)
    std::int64_t parsimony = 0;  // l(X, T)
    int edges = 0;               // E_T
    std::int64_t k = 0;          // base character count
};

/// Outcome of one verifier run. `margin` is signed slack in the direction of
/// the checked inequality: non-negative means the inequality held.
struct VerifierReport {
    std::string check;
    std::string instance;
    Quantities quantities;
    double lhs = 0.0;
    double bound = 0.0;
    double margin = 0.0;
    bool preconditions_met = true;
    Verdict verdict = Verdict::pass;
    std::string note;  // "degenerate", "vacuous" or empty
    std::int64_t checks = 0;
    std::int64_t violations = 0;
    std::int64_t trials = 0;
    std::uint64_t seed = 0;
    double runtime_ms = 0.0;
    nlohmann::ordered_json details = nlohmann::ordered_json::object();
};

/// Stable JSON layout. runtime_ms is null unless `include_timing` is set, so
/// that reports from identical runs are byte-identical.
nlohmann::ordered_json to_json(const VerifierReport& r, bool include_timing = false);

std::string csv_header();
std::string to_csv_row(const VerifierReport& r, bool include_timing = false);

/// JSON number, or a string ("inf", "-inf", "nan") for non-finite values.
nlohmann::ordered_json json_number(double x);

/// Shortest decimal text that round-trips the double ("inf" / "-inf" / "nan" for non-finite values).
std::string format_double(double x);

}  // namespace phyred
