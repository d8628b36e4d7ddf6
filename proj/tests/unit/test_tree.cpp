#include <algorithm>
#include <random>
#include <set>

#include "doctest.h"
#include "phyred/tree.hpp"

using namespace phyred;

namespace {

bool has_violation(const Tree& t, const std::string& needle) {
    for (const auto& v : validate(t))
        if (v.find(needle) != std::string::npos) return true;
    return false;
}

}  // namespace

TEST_CASE("validate accepts the quartet") {
    const Tree t = parse_newick("((1,2),(3,4));");
    CHECK(validate(t).empty());
    CHECK(edge_count(t) == 5);
    CHECK(t.leaf_count() == 4);
}

TEST_CASE("validate reports an internal degree-2 vertex") {
    // path 1 - v - 2
    const Tree t(2, {1, 2, 0}, {{0, 2}, {2, 1}});
    CHECK(has_violation(t, "internal degree-2 vertex"));
}

TEST_CASE("validate reports duplicate leaf labels") {
    const Tree t(3, {1, 1, 3, 0}, {{0, 3}, {1, 3}, {2, 3}});
    CHECK(has_violation(t, "labels not bijective"));
}

TEST_CASE("validate reports cycles and disconnection") {
    SUBCASE("extra edge") {
        const Tree t(3, {1, 2, 3, 0}, {{0, 3}, {1, 3}, {2, 3}, {0, 1}});
        CHECK(has_violation(t, "edge count"));
    }
    SUBCASE("two components") {
        const Tree t(4, {1, 2, 3, 4}, {{0, 1}, {2, 3}, {1, 1}});
        CHECK(has_violation(t, "self-loop"));
        CHECK(has_violation(t, "not connected"));
    }
    SUBCASE("label on an inner vertex") {
        const Tree t(4, {1, 2, 3, 4}, {{0, 3}, {1, 3}, {2, 3}});
        CHECK(has_violation(t, "leaf label 4"));
    }
}

TEST_CASE("edge_count") {
    CHECK(edge_count(parse_newick("(1,2);")) == 1);
    CHECK(edge_count(parse_newick("((1,2),(3,(4,5)));")) == 7);
    for (int n = 3; n <= 7; ++n)
        for_each_topology(n, [&](const Tree& t) { CHECK(edge_count(t) == 2 * n - 3); });
}

TEST_CASE("parse_newick handles multifurcations and suppresses a degree-2 root") {
    const Tree star = parse_newick("((1,2),3,4);");
    CHECK(validate(star).empty());
    CHECK(star.edge_count() == 5);
    for (int v = star.leaf_count(); v < star.vertex_count(); ++v) CHECK(star.degree(v) == 3);

    const Tree rooted = parse_newick("  ( (1,2) , (3,4) ) ;\n");
    CHECK(write_newick(rooted) == "(1,2,(3,4));");
    CHECK(write_newick(star) == "(1,2,(3,4));");

    const Tree poly = parse_newick("(1,2,3,4,5);");
    CHECK(poly.edge_count() == 5);
    CHECK(poly.degree(5) == 5);
}

TEST_CASE("parse_newick errors carry a position") {
    CHECK_THROWS_AS(parse_newick("((1,2),(3,4)"), NewickError);
    CHECK_THROWS_AS(parse_newick("((1,2),(3,5));"), NewickError);   // 5 is not in 1..4
    CHECK_THROWS_AS(parse_newick("((1,2),(3,3));"), NewickError);   // duplicate
    CHECK_THROWS_AS(parse_newick("((1,2),(3,4)) x;"), NewickError);
    CHECK_THROWS_AS(parse_newick("((1:0.1,2),(3,4));"), NewickError);
    CHECK_THROWS_AS(parse_newick("((1,2),((3),4));"), NewickError);  // degree-2 vertex
    try {
        parse_newick("((1,2)(3,4));");
        FAIL("expected a parse error");
    } catch (const NewickError& e) {
        CHECK(e.position() == 6);
    }
}

TEST_CASE("canonical Newick is independent of input order") {
    const char* spellings[] = {"((1,2),(3,4));", "((4,3),(2,1));", "(3,4,(2,1));", "((3,4),1,2);", "(2,1,(4,3));"};
    for (const char* s : spellings) CHECK(write_newick(parse_newick(s)) == "(1,2,(3,4));");
    CHECK(write_newick(parse_newick("(2,1);")) == "(1,2);");
}

TEST_CASE("topology counts match (2n-5)!! and are pairwise distinct") {
    const unsigned long long expected[] = {0, 0, 0, 1, 3, 15, 105, 945};
    for (int n = 3; n <= 7; ++n) {
        std::set<std::string> seen;
        std::size_t produced = 0;
        for_each_topology(n, [&](const Tree& t) {
            CHECK(validate(t).empty());
            seen.insert(write_newick(t));
            ++produced;
        });
        CHECK(topology_count(n) == expected[n]);
        CHECK(produced == expected[n]);
        CHECK(seen.size() == produced);
    }
}

TEST_CASE("n=4 enumeration matches an independent quartet listing") {
    // the three resolutions of four taxa, canonical form written by hand
    std::set<std::string> want{"(1,2,(3,4));", "(1,(2,4),3);", "(1,(2,3),4);"};
    std::set<std::string> got;
    for (const auto& t : enumerate_topologies(4)) got.insert(write_newick(t));
    CHECK(got == want);
}

TEST_CASE("enumerated trees are numbered like their parsed canonical Newick") {
    for (const auto& t : enumerate_topologies(6)) {
        const Tree back = parse_newick(write_newick(t));
        REQUIRE(back.edge_count() == t.edge_count());
        for (int e = 0; e < t.edge_count(); ++e) {
            CHECK(back.edge(e).u == t.edge(e).u);
            CHECK(back.edge(e).v == t.edge(e).v);
        }
    }
}

TEST_CASE("enumeration refuses past the cap and below n=3") {
    CHECK_THROWS_AS(enumerate_topologies(9), CapExceeded);
    CHECK_THROWS_AS(enumerate_topologies(6, 5), CapExceeded);
    CHECK_THROWS_AS(enumerate_topologies(2), std::invalid_argument);
    CHECK(enumerate_topologies(3).size() == 1);
}

TEST_CASE("write/parse round trip on random relabellings") {
    std::mt19937 rng(17);
    for (const auto& t : enumerate_topologies(6)) {
        const std::string canon = write_newick(t);
        const Tree back = parse_newick(canon);
        CHECK(write_newick(back) == canon);
        CHECK(write_newick(parse_newick(write_newick(back))) == canon);
        // the same tree with edges listed in a shuffled order
        std::vector<Edge> edges(t.edges().begin(), t.edges().end());
        std::shuffle(edges.begin(), edges.end(), rng);
        CHECK(write_newick(Tree::normalized(6, t.vertex_count(), edges)) == canon);
    }
}

TEST_CASE("root_at gives a pre-order with consistent parents") {
    const Tree t = parse_newick("((1,2),(3,(4,5)));");
    for (int root = 0; root < t.vertex_count(); ++root) {
        const RootedView view = root_at(t, root);
        REQUIRE(view.order.size() == static_cast<std::size_t>(t.vertex_count()));
        CHECK(view.order.front() == root);
        std::vector<int> pos(view.order.size());
        for (std::size_t i = 0; i < view.order.size(); ++i) pos[static_cast<std::size_t>(view.order[i])] = static_cast<int>(i);
        for (int v = 0; v < t.vertex_count(); ++v) {
            if (v == root) continue;
            const int p = view.parent[static_cast<std::size_t>(v)];
            CHECK(pos[static_cast<std::size_t>(p)] < pos[static_cast<std::size_t>(v)]);
            CHECK(t.find_edge(p, v) == view.parent_edge[static_cast<std::size_t>(v)]);
        }
    }
}
