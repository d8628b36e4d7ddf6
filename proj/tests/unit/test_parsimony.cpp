#include <random>

#include "doctest.h"
#include "phyred/parsimony.hpp"

using namespace phyred;

namespace {

Character ch(const char* bits) { return make_character(bits); }

Character from_bits(unsigned bits, int n) {
    Character c;
    for (int i = 0; i < n; ++i) c.states.push_back(static_cast<std::uint8_t>((bits >> i) & 1U));
    return c;
}

// Contracts each internal edge with probability 1/2, producing a multifurcating tree.
Tree contract_random(const Tree& t, std::mt19937& rng) {
    std::vector<int> rep(static_cast<std::size_t>(t.vertex_count()));
    for (int v = 0; v < t.vertex_count(); ++v) rep[static_cast<std::size_t>(v)] = v;
    auto find = [&](int v) {
        while (rep[static_cast<std::size_t>(v)] != v) v = rep[static_cast<std::size_t>(v)];
        return v;
    };
    std::vector<Edge> kept;
    for (const auto& e : t.edges()) {
        if (!t.is_leaf(e.u) && !t.is_leaf(e.v) && (rng() & 1U)) {
            rep[static_cast<std::size_t>(find(e.v))] = find(e.u);
        } else {
            kept.push_back(e);
        }
    }
    std::vector<int> id(rep.size(), -1);
    int next = t.leaf_count();
    for (int v = 0; v < t.vertex_count(); ++v) {
        if (t.is_leaf(v)) {
            id[static_cast<std::size_t>(v)] = v;
        } else if (find(v) == v) {
            id[static_cast<std::size_t>(v)] = next++;
        }
    }
    for (auto& e : kept) e = {id[static_cast<std::size_t>(find(e.u))], id[static_cast<std::size_t>(find(e.v))]};
    return Tree::normalized(t.leaf_count(), next, kept);
}

}  // namespace

TEST_CASE("fitch_score on the quartet") {
    const Tree q = parse_newick("((1,2),(3,4));");
    CHECK(fitch_score(q, ch("0000")) == 0);
    CHECK(fitch_score(q, ch("0011")) == 1);
    CHECK(fitch_score(q, ch("0101")) == 2);
    CHECK(brute_force_score(q, ch("0011")) == 1);
    CHECK(brute_force_score(q, ch("0101")) == 2);
    CHECK_THROWS_AS(fitch_score(q, ch("001")), std::invalid_argument);
}

TEST_CASE("two-leaf tree") {
    const Tree t = parse_newick("(1,2);");
    CHECK(fitch_score(t, ch("01")) == 1);
    CHECK(fitch_score(t, ch("00")) == 0);
    CHECK(brute_force_score(t, ch("01")) == 1);
    CHECK(brute_force_score(t, ch("00")) == 0);
}

TEST_CASE("multifurcation where the plain union rule undercounts") {
    // vertex above leaves 1,2,3 holds states 0,0,1; leaves 4 and 5 hold 1
    const Tree t = parse_newick("((1,2,3),4,5);");
    CHECK(brute_force_score(t, ch("00111")) == 2);
    CHECK(fitch_score(t, ch("00111")) == 2);
}

TEST_CASE("fitch agrees with brute force on every n<=6 topology and character") {
    for (int n = 3; n <= 6; ++n)
        for_each_topology(n, [&](const Tree& t) {
            for (unsigned bits = 0; bits < (1U << n); ++bits) {
                const Character c = from_bits(bits, n);
                REQUIRE(fitch_score(t, c) == brute_force_score(t, c));
            }
        });
}

TEST_CASE("fitch agrees with brute force on random multifurcating trees") {
    std::mt19937 rng(2024);
    for (int n = 4; n <= 7; ++n)
        for (const auto& t : enumerate_topologies(n)) {
            const Tree m = contract_random(t, rng);
            REQUIRE(validate(m).empty());
            for (unsigned bits = 0; bits < (1U << n); bits += 3) {
                const Character c = from_bits(bits, n);
                REQUIRE(fitch_score(m, c) == brute_force_score(m, c));
            }
        }
}

TEST_CASE("parsimony score properties") {
    std::mt19937 rng(5);
    for (const auto& t : enumerate_topologies(6)) {
        for (int trial = 0; trial < 10; ++trial) {
            const Character c = from_bits(rng() & 63U, 6);
            const int l = fitch_score(t, c);
            int ones = 0;
            for (auto s : c.states) ones += s;
            CHECK(l >= 0);
            CHECK(l <= std::min(ones, 6 - ones));
            CHECK((l == 0) == is_constant(c));
            CHECK(fitch_score(t, complement(c)) == l);
        }
    }
}

TEST_CASE("parsimony_score sums over patterns with multiplicity") {
    const Tree q = parse_newick("((1,2),(3,4));");
    const DataMatrix x = DataMatrix::from_characters(4, {ch("0011"), ch("0101")});
    CHECK(parsimony_score(q, x) == 3);

    DataMatrix constant(4);
    constant.add(ch("0000"), 5);
    constant.add(ch("1111"), 2);
    CHECK(parsimony_score(q, constant) == 0);

    CHECK(parsimony_score(q, pad_constant_sites(x, 0.5).padded) == 3);

    // compressed and uncompressed give the same score
    const DataMatrix big = random_instance(6, 200, 9);
    std::vector<Character> expanded;
    for (const auto& p : big.patterns())
        for (std::int64_t i = 0; i < p.count; ++i) expanded.push_back(p.character);
    const Tree t = enumerate_topologies(6)[40];
    std::int64_t direct = 0;
    for (const auto& c : expanded) direct += fitch_score(t, c);
    CHECK(parsimony_score(t, big) == direct);

    CHECK_THROWS_AS(parsimony_score(parse_newick("((1,2),(3,(4,5)));"), x), std::invalid_argument);
}

TEST_CASE("padding leaves parsimony unchanged on every tree") {
    const DataMatrix x = random_instance(5, 6, 31);
    const PaddedInstance p = pad_constant_sites(x, 0.5);
    for (const auto& t : enumerate_topologies(5)) CHECK(parsimony_score(t, p.padded) == parsimony_score(t, x));
}

TEST_CASE("mp_search returns every optimum in canonical order") {
    SUBCASE("tie between two quartets") {
        const auto r = mp_search(DataMatrix::from_characters(4, {ch("0011"), ch("0101")}));
        CHECK(r.best_score == 3);
        REQUIRE(r.optima.size() == 2);
        CHECK(write_newick(r.optima[0]) == "(1,(2,4),3);");
        CHECK(write_newick(r.optima[1]) == "(1,2,(3,4));");
    }
    SUBCASE("single informative character") {
        const auto r = mp_search(DataMatrix::from_characters(4, {ch("0011")}));
        CHECK(r.best_score == 1);
        REQUIRE(r.optima.size() == 1);
        CHECK(write_newick(r.optima[0]) == "(1,2,(3,4));");
    }
    SUBCASE("constant data") {
        const auto r = mp_search(DataMatrix::from_characters(4, {ch("0000"), ch("1111")}));
        CHECK(r.best_score == 0);
        CHECK(r.optima.size() == 3);
    }
    SUBCASE("threads do not change the answer") {
        const DataMatrix x = random_instance(6, 8, 3);
        const auto a = mp_search(x, 8, 1);
        const auto b = mp_search(x, 8, 4);
        CHECK(a.best_score == b.best_score);
        REQUIRE(a.optima.size() == b.optima.size());
        for (std::size_t i = 0; i < a.optima.size(); ++i) CHECK(write_newick(a.optima[i]) == write_newick(b.optima[i]));
    }
    CHECK_THROWS_AS(mp_search(random_instance(9, 3, 1)), CapExceeded);
}
