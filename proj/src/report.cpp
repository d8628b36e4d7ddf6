#include "phyred/report.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>

namespace phyred {

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::pass: return "pass";
        case Verdict::fail: return "fail";
        case Verdict::inconclusive: return "inconclusive";
    }
    return "unknown";
}

std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[40];
    for (int prec = 1; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, x);
        if (std::strtod(buf, nullptr) == x) break;
    }
    return buf;
}

nlohmann::ordered_json json_number(double x) {
    if (std::isfinite(x)) return x;
    return format_double(x);
}

namespace {

nlohmann::ordered_json number(double x) { return json_number(x); }

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

}  // namespace

nlohmann::ordered_json to_json(const VerifierReport& r, bool include_timing) {
    nlohmann::ordered_json j;
    j["check"] = r.check;
    j["instance"] = r.instance;
    j["quantities"] = {
        {"q", number(r.quantities.q)},
        {"p_bar", number(r.quantities.p_bar)},
        {"N_c", r.quantities.N_c},
        {"M", r.quantities.M},
        {"epsilon", number(r.quantities.epsilon)},
        {"normalizer", number(r.quantities.normalizer)},
        {"parsimony", r.quantities.parsimony},
        {"edges", r.quantities.edges},
        {"k", r.quantities.k},
    };
    j["lhs"] = number(r.lhs);
    j["bound"] = number(r.bound);
    j["margin"] = number(r.margin);
    j["preconditions_met"] = r.preconditions_met;
    j["verdict"] = to_string(r.verdict);
    j["note"] = r.note;
    j["checks"] = r.checks;
    j["violations"] = r.violations;
    j["trials"] = r.trials;
    j["seed"] = r.seed;
    j["runtime_ms"] = include_timing ? nlohmann::ordered_json(r.runtime_ms) : nlohmann::ordered_json(nullptr);
    j["details"] = r.details;
    return j;
}

std::string csv_header() {
    return "check,instance,q,p_bar,N_c,M,epsilon,parsimony,lhs,bound,margin,preconditions_met,verdict,note,"
           "checks,violations,trials,seed,runtime_ms";
}

std::string to_csv_row(const VerifierReport& r, bool include_timing) {
    std::ostringstream os;
    os << csv_field(r.check) << ',' << csv_field(r.instance) << ',' << format_double(r.quantities.q) << ','
       << format_double(r.quantities.p_bar) << ',' << r.quantities.N_c << ',' << r.quantities.M << ','
       << format_double(r.quantities.epsilon) << ',' << r.quantities.parsimony << ',' << format_double(r.lhs) << ','
       << format_double(r.bound) << ',' << format_double(r.margin) << ',' << (r.preconditions_met ? "true" : "false")
       << ',' << to_string(r.verdict) << ',' << csv_field(r.note) << ',' << r.checks << ',' << r.violations << ','
       << r.trials << ',' << r.seed << ',' << (include_timing ? format_double(r.runtime_ms) : "");
    return os.str();
}

}  // namespace phyred
