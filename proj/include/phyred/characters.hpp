#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace phyred {

/// Raised by the matrix reader. `line` is 1-based; 0 when the error is not tied to a line.
class MatrixError : public std::runtime_error {
public:
    MatrixError(const std::string& what, int line)
        : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

/// Binary leaf assignment; `states[L-1]` is the state of the leaf labelled L.
struct Character {
    std::vector<std::uint8_t> states;

    std::size_t size() const { return states.size(); }
    std::uint8_t operator[](std::size_t i) const { return states[i]; }
    friend auto operator<=>(const Character&, const Character&) = default;
};

Character make_character(std::string_view bits);
std::string to_string(const Character& ch);

bool is_constant(const Character& ch);
Character complement(const Character& ch);

struct Pattern {
    Character character;
    std::int64_t count;
};

/// Multiset of characters stored as distinct patterns with multiplicities.
/// Patterns keep first-insertion order.
class DataMatrix {
public:
    explicit DataMatrix(int leaf_count) : n_(leaf_count) {}

    static DataMatrix from_characters(int leaf_count, const std::vector<Character>& chars);

    /// Merges into an existing equal pattern. Throws std::invalid_argument on a
    /// length mismatch or a non-positive count.
    void add(const Character& ch, std::int64_t count = 1);

    int leaf_count() const { return n_; }
    std::int64_t k() const { return k_; }
    const std::vector<Pattern>& patterns() const { return patterns_; }
    std::int64_t multiplicity(const Character& ch) const;

private:
    int n_;
    std::int64_t k_ = 0;
    std::vector<Pattern> patterns_;
    std::map<Character, std::size_t> index_;
};

inline constexpr std::int64_t kDefaultPaddingCap = 10'000'000;

struct ReductionParams {
    double epsilon;
    std::int64_t M;
    std::int64_t N_c;
};

/// X augmented with N_c all-0 characters.
struct PaddedInstance {
    DataMatrix base;
    DataMatrix padded;
    ReductionParams params;
};

/// ceil(M^(1/epsilon)) with M = max(2n, k). Results within 1e-9 relative of an
/// integer are snapped to it so that exact powers are not rounded up.
ReductionParams reduction_params(int n, std::int64_t k, double epsilon, std::int64_t cap = kDefaultPaddingCap);

PaddedInstance pad_constant_sites(const DataMatrix& base, double epsilon, std::int64_t cap = kDefaultPaddingCap);

/// Padding with an explicit count; `params.epsilon` records ln M / ln N_c.
PaddedInstance pad_with_count(const DataMatrix& base, std::int64_t n_c, std::int64_t cap = kDefaultPaddingCap);

// Text format ----------------------------------------------------------------
//
//   n k
//   [weights w_1 ... w_p]
//   <leaf id> <bits>      (n rows)
//
// Bits may be written contiguously or separated by whitespace. Without a
// weights line each column is one character; with it, column j stands for
// w_j copies and k must equal the sum of the weights. '#' starts a comment.

DataMatrix parse_matrix(std::string_view text);

enum class MatrixLayout { expanded, compressed };
std::string write_matrix(const DataMatrix& m, MatrixLayout layout = MatrixLayout::expanded);

/// k i.i.d. uniform characters on n leaves from a 64-bit Mersenne Twister.
DataMatrix random_instance(int n, std::int64_t k, std::uint64_t seed);

}  // namespace phyred
