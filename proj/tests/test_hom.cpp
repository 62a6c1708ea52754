#include <doctest.h>

#include <algorithm>
#include <set>

#include "support.hpp"

using namespace gentle;
using fixtures::diag;
using fixtures::load;

namespace {

Item str(const Quiver& q, const char* text) { return canonical_string(q, parse_walk(q, text)); }
Item band(const Quiver& q, const char* text) { return canonical_band(q, parse_word(q, text)); }

std::vector<long> restricted(const Quiver& q, const HVector& h, std::initializer_list<const char*> keys) {
    std::vector<long> out;
    for (const char* k : keys) out.push_back(h.at(str(q, k)));
    return out;
}

}  // namespace

TEST_CASE("hom dimensions") {
    const Quiver q = load("kronecker");
    const Item c = str(q, "b.a-.b");
    CHECK(hom_dim(q, c, 1, c, 1, false) == 2);
    CHECK(hom_dim(q, lazy_string(0), 1, lazy_string(0), 1, false) == 1);
    CHECK(hom_dim(q, lazy_string(0), 1, lazy_string(1), 1, false) == 0);

    const Item kb = band(q, "a.b-");
    CHECK(hom_dim(q, kb, 1, kb, 1, true) == 1);
    CHECK(hom_dim(q, kb, 1, kb, 1, false) == 0);
    CHECK(hom_dim(q, kb, 2, kb, 1, true) == 1);
    CHECK(hom_dim(q, kb, 2, kb, 2, true) == 2);
}

TEST_CASE("zero hom between the five-vertex bands") {
    const Quiver q = load("five_vertex");
    const Item b = band(q, "a.e-.c.b.f-.d");
    const Item b2 = band(q, "a.e-.c.d-.f.b-");
    REQUIRE(dimension_vector(q, b) == dimension_vector(q, b2));
    CHECK(hom_dim(q, b, 1, b2, 1, false) == 0);
    CHECK(hom_dim(q, b2, 1, b, 1, false) == 0);
}

TEST_CASE("h-vectors of the Kronecker (1,1) diagrammes") {
    const Quiver q = load("kronecker");
    auto h = [&](const char* d) { return restricted(q, h_vector(q, diag(q, d), 4), {"e_1", "e_2", "a", "b"}); };
    CHECK(h("{e_1, e_2}") == std::vector<long>{1, 1, 1, 1});
    CHECK(h("{a}") == std::vector<long>{0, 1, 1, 0});
    CHECK(h("{b}") == std::vector<long>{0, 1, 0, 1});
    CHECK(h("{(a.b-)}") == std::vector<long>{0, 1, 0, 0});
    CHECK(h_vector(q, Diagramme{}, 4).entries.empty());
}

TEST_CASE("h-vectors separate the glued (1,2,1) diagrammes") {
    const Quiver g = load("glued_kronecker");
    const auto nodes = enumerate_diagrammes(g, {1, 2, 1});
    std::set<std::map<Item, long>> seen;
    for (const auto& d : nodes) seen.insert(h_vector(g, d, 16).entries);
    CHECK(seen.size() == nodes.size());
}

TEST_CASE("h' entries") {
    const Quiver q = load("kronecker");
    const auto semi = h_prime_vector(q, diag(q, "{e_1, e_2}"), 4);
    CHECK(semi.at(lazy_string(0)) == 1);
    CHECK(semi.at(lazy_string(1)) == 1);
    CHECK(semi.entries.size() == 2);

    const auto hb = h_prime_vector(q, diag(q, "{(a.b-)}"), 4);
    CHECK(hb.at(lazy_string(1)) == 1);
    CHECK(hb.at(lazy_string(0)) == 0);

    const Quiver g = load("glued_kronecker");
    for (const Item& c : enumerate_strings(g, {2, 3, 2})) {
        Diagramme d;
        d.add(g, c);
        CHECK(h_prime_vector(g, d, c.length()).at(c) == 1);
    }
}

TEST_CASE("h' is additive") {
    const Quiver g = load("glued_kronecker");
    const Diagramme x = diag(g, "{b.a-, (c.d-)}"), y = diag(g, "{a, e_2, c}");
    const auto sum = h_prime_vector(g, disjoint_union(g, x, y), 9);
    const auto hx = h_prime_vector(g, x, 9), hy = h_prime_vector(g, y, 9);
    for (const auto& [c, n] : sum.entries) CHECK(n == hx.at(c) + hy.at(c));
}

TEST_CASE("h and h' roundtrip on Kronecker (2,2)") {
    const Quiver q = load("kronecker");
    for (const auto& d : enumerate_diagrammes(q, {2, 2})) {
        const auto hp = h_prime_vector(q, d, 16);
        const auto h = h_vector(q, d, 16);
        CHECK(h_from_hprime(q, hp) == h);
        CHECK(hprime_from_h(q, h) == hp);
    }
    HVector zero;
    zero.l_max = 3;
    CHECK(hprime_from_h(q, zero).entries.empty());
}

TEST_CASE("lazy entries of h and h' agree") {
    const Quiver q = load("glued_kronecker");
    for (const auto& d : enumerate_diagrammes(q, {1, 2, 1})) {
        const auto h = h_vector(q, d, 4);
        const auto hp = hprime_from_h(q, h);
        for (VertexId v = 0; v < 3; ++v) CHECK(hp.at(lazy_string(v)) == h.at(lazy_string(v)));
    }
}

TEST_CASE("inconsistent h-vectors are rejected") {
    const Quiver q = load("kronecker");
    HVector h;
    h.l_max = 1;
    h.entries[lazy_string(0)] = 1;
    h.entries[str(q, "a")] = 0;  // e_1 is a top substring of a
    CHECK_THROWS_AS((void)hprime_from_h(q, h), std::domain_error);
}

TEST_CASE("projective strings") {
    const Quiver q = load("kronecker");
    CHECK(projective_string(q, 1) == lazy_string(1));
    CHECK(projective_string(q, 0) == str(q, "a.b-"));
    const Quiver g = load("glued_kronecker");
    CHECK(projective_string(g, 1) == str(g, "c.d-"));
    CHECK(projective_string(g, 2) == lazy_string(2));
    const Quiver easy = load("easy");
    // a single outgoing arrow: the path through that arrow
    CHECK(projective_string(easy, 0) == str(easy, "c.a"));
}

TEST_CASE("rank functions") {
    const Quiver q = load("kronecker");
    CHECK(rank_function(q, diag(q, "{e_1, e_2}")) == RankFunction{0, 0});
    CHECK(rank_function(q, diag(q, "{(a.b-)}")) == RankFunction{1, 1});
    CHECK(rank_function(q, diag(q, "{a}")) == RankFunction{1, 0});
    CHECK(rank_function(q, diag(q, "{b.a-.b}")) == RankFunction{1, 2});
}

TEST_CASE("maximal rank functions") {
    const Quiver q = load("kronecker");
    const auto nodes = enumerate_diagrammes(q, {1, 1});
    const auto top = maximal_rank_functions(q, nodes);
    REQUIRE(top.size() == 1);
    CHECK(nodes[top[0]] == diag(q, "{(a.b-)}"));
    CHECK(maximal_rank_functions(q, {nodes[0]}) == std::vector<std::size_t>{0});
    const auto single = enumerate_diagrammes(q, {1, 0});
    REQUIRE(single.size() == 1);
    CHECK(maximal_rank_functions(q, single) == std::vector<std::size_t>{0});
}

TEST_CASE("h comparisons") {
    const Quiver q = load("kronecker");
    const auto hb = h_vector(q, diag(q, "{(a.b-)}"), 4);
    const auto ha = h_vector(q, diag(q, "{a}"), 4);
    const auto hbb = h_vector(q, diag(q, "{b}"), 4);
    CHECK(h_compare(hb, ha) == Comparison::LessOrEqual);
    CHECK(h_compare(ha, hb) == Comparison::GreaterOrEqual);
    CHECK(h_compare(ha, hbb) == Comparison::Incomparable);
    CHECK(h_compare(ha, ha) == Comparison::Equal);
    CHECK_THROWS_AS((void)h_compare(ha, h_vector(q, diag(q, "{a}"), 3)), std::invalid_argument);
}

TEST_CASE("default truncation") {
    CHECK(default_l_max({1, 1}) == 4);
    CHECK(default_l_max({1, 2, 1}) == 16);
    CHECK(default_l_max({0, 0}) == 0);
}

TEST_CASE("evaluator matches h_entry") {
    const Quiver g = load("glued_kronecker");
    const auto nodes = enumerate_diagrammes(g, {1, 2, 1});
    std::vector<HPrimeVector> hps;
    for (const auto& d : nodes) hps.push_back(h_prime_vector(g, d, 8));
    const HEvaluator eval(g, hps);
    CHECK(eval.width() == hps.size());
    long visited = 0;
    eval.for_each(4, [&](const Walk& c, std::span<const long> values) {
        ++visited;
        for (std::size_t k = 0; k < hps.size(); ++k) CHECK(values[k] == h_entry(g, hps[k], c));
    });
    CHECK(visited > 0);
}

TEST_CASE("h json lists entries in canonical order") {
    const Quiver q = load("kronecker");
    const auto j = to_json(q, h_vector(q, diag(q, "{a}"), 2));
    CHECK(j["L_max"] == 2);
    CHECK(j["entries"].dump() == R"({"e_2":1,"a":1,"a.b-":1})");
}

TEST_CASE("diagramme bookkeeping") {
    const Quiver q = load("kronecker");
    Diagramme d;
    d.add(q, str(q, "a"), 2);
    CHECK(d.dim() == DimVector{2, 2});
    CHECK(d.size() == 2);
    CHECK_THROWS_AS(d.remove(q, str(q, "a"), 3), std::invalid_argument);
    d.remove(q, str(q, "a"));
    CHECK(d.multiplicity(str(q, "a")) == 1);
    CHECK_THROWS_AS(d.add(q, str(q, "b"), 0), std::invalid_argument);
    const Quiver g = load("glued_kronecker");
    Diagramme nm;
    CHECK_THROWS_AS(nm.add(g, band(g, "b.a-.d-.c.b.a-.d-.c")), std::invalid_argument);
    CHECK(fixtures::fmt(q, diag(q, "{(a.b-)^x2, b.a-}")) == "{(a.b-)^x2, a.b-}");
}
