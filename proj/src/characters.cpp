#include "phyred/characters.hpp"
#include "phyred/errors.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace phyred {

Character make_character(std::string_view bits) {
    Character ch;
    ch.states.reserve(bits.size());
    for (char c : bits) {
        if (c != '0' && c != '1') throw std::invalid_argument(std::string("non-binary state '") + c + "'");
        ch.states.push_back(static_cast<std::uint8_t>(c - '0'));
    }
    return ch;
}

std::string to_string(const Character& ch) {
    std::string s;
    s.reserve(ch.size());
    for (auto b : ch.states) s += static_cast<char>('0' + b);
    return s;
}

bool is_constant(const Character& ch) {
    return std::adjacent_find(ch.states.begin(), ch.states.end(), std::not_equal_to<>()) == ch.states.end();
}

Character complement(const Character& ch) {
    Character out = ch;
    for (auto& b : out.states) b ^= 1U;
    return out;
}

DataMatrix DataMatrix::from_characters(int leaf_count, const std::vector<Character>& chars) {
    DataMatrix m(leaf_count);
    for (const auto& c : chars) m.add(c);
    return m;
}

void DataMatrix::add(const Character& ch, std::int64_t count) {
    if (static_cast<int>(ch.size()) != n_)
        throw std::invalid_argument("character has length " + std::to_string(ch.size()) + ", expected " +
                                    std::to_string(n_));
    if (count < 1) throw std::invalid_argument("pattern multiplicity must be >= 1");
    auto [it, inserted] = index_.try_emplace(ch, patterns_.size());
    if (inserted)
        patterns_.push_back({ch, count});
    else
        patterns_[it->second].count += count;
    k_ += count;
}

std::int64_t DataMatrix::multiplicity(const Character& ch) const {
    auto it = index_.find(ch);
    return it == index_.end() ? 0 : patterns_[it->second].count;
}

ReductionParams reduction_params(int n, std::int64_t k, double epsilon, std::int64_t cap) {
    if (!(epsilon > 0.0 && epsilon <= 1.0))
        throw std::invalid_argument("epsilon must lie in (0, 1], got " + std::to_string(epsilon));
    const std::int64_t M = std::max<std::int64_t>(2 * static_cast<std::int64_t>(n), k);
    const double raw = std::pow(static_cast<double>(M), 1.0 / epsilon);
    const double snapped = std::round(raw);
    const double n_c = std::abs(raw - snapped) <= 1e-9 * raw ? snapped : std::ceil(raw);
    if (!(n_c <= static_cast<double>(cap))) {
        std::ostringstream os;
        os << "N_c = " << n_c << " exceeds the padding cap " << cap << " (M=" << M << ", epsilon=" << epsilon
           << ")";
        throw CapExceeded(os.str());
    }
    return {epsilon, M, static_cast<std::int64_t>(n_c)};
}

namespace {

PaddedInstance make_padded(const DataMatrix& base, ReductionParams params) {
    DataMatrix padded = base;
    Character zero{std::vector<std::uint8_t>(static_cast<std::size_t>(base.leaf_count()), 0)};
    padded.add(zero, params.N_c);
    return {base, std::move(padded), params};
}

}  // namespace

PaddedInstance pad_constant_sites(const DataMatrix& base, double epsilon, std::int64_t cap) {
    if (base.k() < 1) throw std::invalid_argument("k >= 1 required");
    return make_padded(base, reduction_params(base.leaf_count(), base.k(), epsilon, cap));
}

PaddedInstance pad_with_count(const DataMatrix& base, std::int64_t n_c, std::int64_t cap) {
    if (base.k() < 1) throw std::invalid_argument("k >= 1 required");
    if (n_c > cap)
        throw CapExceeded("N_c = " + std::to_string(n_c) + " exceeds the padding cap " + std::to_string(cap));
    const std::int64_t M = std::max<std::int64_t>(2 * static_cast<std::int64_t>(base.leaf_count()), base.k());
    if (n_c < M) throw std::invalid_argument("N_c must be at least M = " + std::to_string(M));
    const double eps = std::log(static_cast<double>(M)) / std::log(static_cast<double>(n_c));
    return make_padded(base, {eps, M, n_c});
}

// ---------------------------------------------------------------------------

namespace {

std::vector<std::string> tokens_of(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream is(line);
    for (std::string t; is >> t;) out.push_back(t);
    return out;
}

long long parse_int(const std::string& tok, int line, const char* what) {
    std::size_t used = 0;
    long long v = 0;
    try {
        v = std::stoll(tok, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != tok.size()) throw MatrixError(std::string("expected integer ") + what + ", got '" + tok + "'", line);
    return v;
}

}  // namespace

DataMatrix parse_matrix(std::string_view text) {
    std::vector<std::pair<int, std::vector<std::string>>> lines;
    std::istringstream in{std::string(text)};
    int lineno = 0;
    for (std::string raw; std::getline(in, raw);) {
        ++lineno;
        if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
        auto toks = tokens_of(raw);
        if (!toks.empty()) lines.emplace_back(lineno, std::move(toks));
    }
    if (lines.empty()) throw MatrixError("empty matrix: header 'n k' expected; k >= 1 required", 0);

    auto& [hline, header] = lines.front();
    if (header.size() != 2) throw MatrixError("header must be 'n k'", hline);
    const long long n = parse_int(header[0], hline, "n");
    const long long k = parse_int(header[1], hline, "k");
    if (n < 1) throw MatrixError("n >= 1 required", hline);
    if (k < 1) throw MatrixError("k >= 1 required", hline);

    std::size_t row = 1;
    std::vector<std::int64_t> weights;
    if (row < lines.size() && lines[row].second.front() == "weights") {
        const int wl = lines[row].first;
        long long total = 0;
        for (std::size_t i = 1; i < lines[row].second.size(); ++i) {
            long long w = parse_int(lines[row].second[i], wl, "weight");
            if (w < 1) throw MatrixError("weights must be >= 1", wl);
            weights.push_back(w);
            total += w;
        }
        if (weights.empty()) throw MatrixError("weights line lists no weights", wl);
        if (total != k)
            throw MatrixError("weights sum to " + std::to_string(total) + " but k = " + std::to_string(k), wl);
        ++row;
    }
    const std::size_t columns = weights.empty() ? static_cast<std::size_t>(k) : weights.size();

    std::vector<std::string> bits_by_leaf(static_cast<std::size_t>(n));
    std::vector<char> have(static_cast<std::size_t>(n), 0);
    int last_line = hline;
    for (; row < lines.size(); ++row) {
        const auto& [ln, toks] = lines[row];
        last_line = ln;
        const long long id = parse_int(toks[0], ln, "leaf id");
        if (id < 1 || id > n)
            throw MatrixError("leaf id " + std::to_string(id) + " outside 1.." + std::to_string(n), ln);
        if (have[static_cast<std::size_t>(id - 1)]) throw MatrixError("duplicate leaf id " + std::to_string(id), ln);
        have[static_cast<std::size_t>(id - 1)] = 1;
        std::string bits;
        for (std::size_t i = 1; i < toks.size(); ++i) bits += toks[i];
        for (char c : bits)
            if (c != '0' && c != '1') throw MatrixError(std::string("non-binary symbol '") + c + "'", ln);
        if (bits.size() != columns)
            throw MatrixError("ragged row: " + std::to_string(bits.size()) + " states, expected " +
                                  std::to_string(columns),
                              ln);
        bits_by_leaf[static_cast<std::size_t>(id - 1)] = std::move(bits);
    }
    for (long long l = 0; l < n; ++l)
        if (!have[static_cast<std::size_t>(l)])
            throw MatrixError("missing row for leaf " + std::to_string(l + 1), last_line);

    DataMatrix m(static_cast<int>(n));
    for (std::size_t j = 0; j < columns; ++j) {
        Character ch;
        ch.states.resize(static_cast<std::size_t>(n));
        for (std::size_t l = 0; l < static_cast<std::size_t>(n); ++l)
            ch.states[l] = static_cast<std::uint8_t>(bits_by_leaf[l][j] - '0');
        m.add(ch, weights.empty() ? 1 : weights[j]);
    }
    return m;
}

std::string write_matrix(const DataMatrix& m, MatrixLayout layout) {
    std::ostringstream os;
    os << m.leaf_count() << ' ' << m.k() << '\n';
    std::vector<std::pair<const Character*, std::int64_t>> columns;
    if (layout == MatrixLayout::compressed) {
        os << "weights";
        for (const auto& p : m.patterns()) {
            os << ' ' << p.count;
            columns.emplace_back(&p.character, 1);
        }
        os << '\n';
    } else {
        for (const auto& p : m.patterns()) columns.emplace_back(&p.character, p.count);
    }
    for (int l = 0; l < m.leaf_count(); ++l) {
        os << (l + 1) << ' ';
        for (const auto& [ch, reps] : columns) os << std::string(static_cast<std::size_t>(reps), static_cast<char>('0' + (*ch)[static_cast<std::size_t>(l)]));
        os << '\n';
    }
    return os.str();
}

DataMatrix random_instance(int n, std::int64_t k, std::uint64_t seed) {
    if (n < 3) throw std::invalid_argument("random_instance needs n >= 3");
    if (k < 1) throw std::invalid_argument("random_instance needs k >= 1");
    std::mt19937_64 rng(seed);
    DataMatrix m(n);
    Character ch;
    ch.states.resize(static_cast<std::size_t>(n));
    for (std::int64_t i = 0; i < k; ++i) {
        for (auto& b : ch.states) b = static_cast<std::uint8_t>(rng() >> 63);
        m.add(ch);
    }
    return m;
}

}  // namespace phyred
