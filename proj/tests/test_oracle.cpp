#include <doctest.h>

#include <random>
#include <set>

#include "gentle/oracle.hpp"
#include "support.hpp"

using namespace gentle;
using fixtures::diag;
using fixtures::fmt;
using fixtures::load;

namespace {

Item str(const Quiver& q, const char* text) { return canonical_string(q, parse_walk(q, text)); }
Item band(const Quiver& q, const char* text) { return canonical_band(q, parse_word(q, text)); }

Matrix from_rows(std::initializer_list<std::initializer_list<int>> rows) {
    Matrix m(rows.size(), rows.begin()->size());
    std::size_t r = 0;
    for (const auto& row : rows) {
        std::size_t c = 0;
        for (int x : row) m(r, c++) = x;
        ++r;
    }
    return m;
}

std::string identify(const Quiver& q, const MatrixModule& m) { return fmt(q, identify_diagramme(q, m).diagramme); }

// Conjugates every vector space of m by a random invertible matrix.
MatrixModule change_basis(const Quiver& q, const MatrixModule& m, std::mt19937_64& rng) {
    std::uniform_int_distribution<int> entry(-3, 3);
    std::vector<Matrix> basis;
    for (int n : m.dims) {
        Matrix p;
        do {
            p = Matrix(n, n);
            for (int r = 0; r < n; ++r)
                for (int c = 0; c < n; ++c) p(r, c) = entry(rng);
        } while (rank(p) != static_cast<std::size_t>(n));
        basis.push_back(std::move(p));
    }
    MatrixModule out = m;
    for (ArrowId a = 0; a < static_cast<ArrowId>(q.arrow_count()); ++a)
        out.maps[a] = basis[q.arrow(a).target] * m.maps[a] * inverse(basis[q.arrow(a).source]);
    return out;
}

}  // namespace

TEST_CASE("exact linear algebra") {
    const Matrix m = from_rows({{1, 2}, {2, 4}});
    CHECK(rank(m) == 1);
    const auto kernel = nullspace(m);
    REQUIRE(kernel.size() == 1);
    CHECK(kernel[0][0] + 2 * kernel[0][1] == 0);
    CHECK_THROWS_AS((void)inverse(m), std::domain_error);
    const Matrix p = from_rows({{2, 1}, {1, 1}});
    CHECK(p * inverse(p) == Matrix::identity(2));
    CHECK(inverse(Matrix(0, 0)).rows() == 0);
    const Matrix j = jordan_block(2, Rational(3, 2));
    CHECK(j(0, 0) == Rational(3, 2));
    CHECK(j(0, 1) == 1);
    CHECK(j(1, 0) == 0);
}

TEST_CASE("string modules") {
    const Quiver q = load("kronecker");
    const MatrixModule ma = realize_string(q, parse_walk(q, "a"));
    CHECK(ma.dims == DimVector{1, 1});
    CHECK(ma.maps[0] == from_rows({{1}}));
    CHECK(ma.maps[1] == from_rows({{0}}));

    const MatrixModule simple = realize_string(q, parse_walk(q, "e_2"));
    CHECK(simple.dims == DimVector{0, 1});
    CHECK(simple.total_dimension() == 1);

    const MatrixModule c = realize_string(q, parse_walk(q, "b.a-.b"));
    CHECK(c.dims == DimVector{2, 2});
    CHECK(arrow_rank(c, 0) == 1);
    CHECK(arrow_rank(c, 1) == 2);
    c.validate(q);
}

TEST_CASE("band modules") {
    const Quiver q = load("kronecker");
    const Word w = parse_word(q, "b-.a");
    const MatrixModule m = realize_band(q, w, 5);
    CHECK(m.dims == DimVector{1, 1});
    std::multiset<Rational> entries{m.maps[0](0, 0), m.maps[1](0, 0)};
    CHECK(entries == std::multiset<Rational>{1, 5});

    const MatrixModule m2 = realize_band(q, w, 5, 2);
    CHECK(m2.dims == DimVector{2, 2});
    const bool jordan = m2.maps[0] == jordan_block(2, 5) || m2.maps[1] == jordan_block(2, 5);
    const bool identity = m2.maps[0] == Matrix::identity(2) || m2.maps[1] == Matrix::identity(2);
    CHECK(jordan);
    CHECK(identity);

    const MatrixModule sq = realize_band(q, parse_word(q, "b-.a.b-.a"), 5);
    CHECK(sq.dims == DimVector{2, 2});
    CHECK(arrow_rank(sq, 0) == 2);
    CHECK(arrow_rank(sq, 1) == 2);
    CHECK_THROWS_AS((void)realize_band(q, w, 0), std::invalid_argument);
    CHECK_THROWS_AS((void)realize_band(q, w, 1, 0), std::invalid_argument);
}

TEST_CASE("module validation and json") {
    const Quiver g = load("glued_kronecker");
    MatrixModule m = realize_string(g, parse_walk(g, "b.a-.d-.c"));
    m.validate(g);
    const MatrixModule back = matrix_module_from_json(g, nlohmann::json::parse(to_json(g, m).dump()));
    CHECK(back.dims == m.dims);
    CHECK(back.maps == m.maps);

    MatrixModule bad = realize_string(g, parse_walk(g, "a"));
    bad.maps[2] = Matrix(0, 2);
    CHECK_THROWS_AS(bad.validate(g), std::invalid_argument);
    // c after a must vanish
    MatrixModule path;
    path.dims = {1, 1, 1};
    for (ArrowId a = 0; a < 4; ++a) path.maps.emplace_back(1, 1);
    path.maps[0](0, 0) = 1;
    path.maps[2](0, 0) = 1;
    CHECK_THROWS_AS(path.validate(g), std::invalid_argument);

    const auto file = matrix_module_from_json(load("kronecker"), nlohmann::json::parse(fixtures::slurp(fixtures::data("kronecker_module.json"))));
    CHECK(file.maps[0](0, 0) == Rational(3, 2));
}

TEST_CASE("hom nullities") {
    const Quiver q = load("kronecker");
    const MatrixModule e1 = realize_string(q, parse_walk(q, "e_1"));
    CHECK(hom_nullity(q, e1, e1) == 1);
    const MatrixModule c = realize_string(q, parse_walk(q, "b.a-.b"));
    CHECK(hom_nullity(q, c, c) == 2);
    CHECK(hom_nullity(q, e1, realize_string(q, parse_walk(q, "e_2"))) == 0);
}

TEST_CASE("explicit hom bases between bands") {
    const Quiver g = load("glued_kronecker");
    const Item big = band(g, "b.a-.d-.c.d-.c"), small = band(g, "c.d-");
    const auto forward = check_hom_basis_formulas(g, small, 2, 1, big, 3, 1);
    const auto backward = check_hom_basis_formulas(g, big, 3, 1, small, 2, 1);
    CHECK(forward.ok());
    CHECK(backward.ok());
    CHECK(forward.nullity + backward.nullity >= 1);

    const Quiver q = load("kronecker");
    const Item kb = band(q, "a.b-");
    const auto same = check_hom_basis_formulas(q, kb, 2, 1, kb, 2, 1);
    CHECK(same.ok());
    CHECK(same.nullity == 1);
    const auto distinct = check_hom_basis_formulas(q, kb, 2, 1, kb, 3, 1);
    CHECK(distinct.ok());
    CHECK(distinct.nullity == pair_count(q, kb, kb));
    for (int qx : {1, 2})
        for (int qy : {1, 2}) {
            const auto r = check_hom_basis_formulas(q, kb, 2, qx, kb, 2, qy);
            CHECK(r.ok());
            CHECK(r.nullity == hom_dim(q, kb, qx, kb, qy, true));
        }
}

TEST_CASE("property: oracle and combinatorial counts agree") {
    for (const auto& [name, bound] : {std::pair{"kronecker", DimVector{2, 2}}, std::pair{"glued_kronecker", DimVector{1, 2, 1}}}) {
        const Quiver q = load(name);
        std::vector<Item> items = enumerate_strings(q, bound);
        for (const Item& b : enumerate_minimal_bands(q, bound)) items.push_back(b);
        for (const Item& x : items)
            for (const Item& y : items) {
                CAPTURE(format_item(q, x));
                CAPTURE(format_item(q, y));
                const MatrixModule mx = realize_item(q, x, 2), my = realize_item(q, y, 2);
                CHECK(hom_nullity(q, mx, my) == hom_dim(q, x, 1, y, 1, x.is_band() && x == y));
            }
    }
}

TEST_CASE("property: nullity is invariant under base change") {
    const Quiver g = load("glued_kronecker");
    std::mt19937_64 rng(7);
    const MatrixModule x = realize_diagramme(g, diag(g, "{b.a-.d-.c, (c.d-)}"));
    const MatrixModule y = realize_diagramme(g, diag(g, "{a.b-, c, e_2}"));
    const long before = hom_nullity(g, x, y), self = hom_nullity(g, x, x);
    for (int round = 0; round < 3; ++round) {
        const MatrixModule x2 = change_basis(g, x, rng), y2 = change_basis(g, y, rng);
        x2.validate(g);
        CHECK(hom_nullity(g, x2, y2) == before);
        CHECK(hom_nullity(g, x2, x2) == self);
    }
}

TEST_CASE("identification") {
    const Quiver q = load("kronecker");
    MatrixModule m;
    m.dims = {2, 2};
    m.maps = {from_rows({{3, 0}, {0, 1}}), from_rows({{1, 0}, {0, 0}})};
    CHECK(identify(q, m) == "{(a.b-), a}");

    const Quiver g = load("glued_kronecker");
    for (const char* c : {"b.a-.d-.c", "e_2", "c-.d.c-"}) CHECK(identify(g, realize_string(g, parse_walk(g, c))) == fmt(g, diag(g, (std::string("{") + c + "}").c_str())));

    const MatrixModule sq = realize_band(g, parse_word(g, "b.a-.d-.c.b.a-.d-.c"), 3);
    CHECK(identify(g, sq) == "{(a.b-.c-.d)^x2}");
    CHECK_THROWS_AS((void)identify_diagramme(q, m, 0), std::runtime_error);
}

TEST_CASE("property: identification inverts realization") {
    const Quiver q = load("kronecker");
    for (const Diagramme& d : enumerate_diagrammes(q, {2, 2})) CHECK(identify_diagramme(q, realize_diagramme(q, d)).diagramme == d);
    const Quiver g = load("glued_kronecker");
    for (const Diagramme& d : enumerate_diagrammes(g, {1, 2, 1})) CHECK(identify_diagramme(g, realize_diagramme(g, d)).diagramme == d);
}

TEST_CASE("property: arrow ranks follow the rank formula") {
    const Quiver g = load("glued_kronecker");
    for (const Diagramme& d : enumerate_diagrammes(g, {2, 2, 1})) {
        const MatrixModule m = realize_diagramme(g, d);
        const RankFunction r = rank_function(g, d);
        for (ArrowId a = 0; a < 4; ++a) CHECK(static_cast<int>(arrow_rank(m, a)) == r[a]);
    }
}

TEST_CASE("polynomials") {
    const Polynomial t = Polynomial::t();
    const Polynomial p = Polynomial(1) - t;
    CHECK(p.to_string() == "1 - t");
    CHECK((t * t - Polynomial(Rational(1, 2))).to_string() == "-1/2 + t^2");
    CHECK(p(Rational(1, 3)) == Rational(2, 3));
    CHECK((p - p).is_zero());
    CHECK(Polynomial(0).to_string() == "0");
}

TEST_CASE("deletion witnesses") {
    const Quiver q = load("kronecker");
    const Item kb = band(q, "a.b-");
    const WitnessFamily w = deletion_witness(q, diag(q, "{(a.b-)}"), kb, 1);
    CHECK(w.relations_hold_identically(q));
    CHECK(identify(q, w.at(0)) == fmt(q, delete_arrow(q, kb, 1)));
    CHECK(identify(q, w.at(Rational(3, 7))) == "{(a.b-)}");
    CHECK(identify(q, w.at(1)) == "{(a.b-)}");

    const Item c = str(q, "b.a-.b");
    const WitnessFamily wc = deletion_witness(q, diag(q, "{b.a-.b}"), c, 2);
    CHECK(identify(q, wc.at(0)) == "{b^x2}");
    CHECK(identify(q, wc.at(1)) == "{b.a-.b}");
    CHECK(to_json(q, wc)["matrices"].size() == 2);

    const Quiver g = load("glued_kronecker");
    const Diagramme d = diag(g, "{b.a-.d-.c, c}");
    const WitnessFamily wg = deletion_witness(g, d, str(g, "b.a-.d-.c"), 3);
    CHECK(wg.relations_hold_identically(g));
    CHECK(identify(g, wg.at(0)) == fmt(g, diag(g, "{a.b-, c^x2}")));
    CHECK(identify(g, wg.at(2)) == fmt(g, d));
}

TEST_CASE("resolution witnesses") {
    const Quiver q = load("kronecker");
    const Diagramme d = diag(q, "{b.a-, e_1}");
    const auto rs = find_reachings(q, str(q, "b.a-"), lazy_string(0), false);
    const WitnessResult r = resolution_witness(q, d, rs.at(0));
    REQUIRE(r.family);
    CHECK(r.family->relations_hold_identically(q));
    CHECK(identify(q, r.family->at(0)) == "{a.b-, e_1}");
    CHECK(identify(q, r.family->at(Rational(1, 2))) == "{a, b}");
    // at t = 0 the family is the direct sum of the two hosts
    const MatrixModule zero = r.family->at(0);
    const MatrixModule sum = direct_sum(q, {realize_string(q, {rs[0].top_host.word, rs[0].top_host.base}),
                                            realize_string(q, {rs[0].bottom_host.word, rs[0].bottom_host.base})});
    CHECK(zero.maps == sum.maps);

    const Quiver g = load("glued_kronecker");
    const Item c = str(g, "b.a-.b.a-.d-.c.d-.c");
    const auto autos = find_reachings(g, c, c, true);
    REQUIRE_FALSE(autos.empty());
    const WitnessResult unsupported = resolution_witness(g, diag(g, "{b.a-.b.a-.d-.c.d-.c}"), autos[0]);
    CHECK_FALSE(unsupported.family);
    CHECK_FALSE(unsupported.unsupported.empty());
}

TEST_CASE("property: string pair witnesses realize their resolutions") {
    const Quiver g = load("glued_kronecker");
    const auto params = seeded_parameters(11);
    int checked = 0;
    for (const Diagramme& low : enumerate_diagrammes(g, {1, 2, 1}))
        for (const Move& m : all_moves(g, low, true)) {
            if (m.descriptor.kind != "resolve-pair") continue;
            const Item x = parse_item(g, m.descriptor.items.at(0)), y = parse_item(g, m.descriptor.items.at(1));
            for (const Reaching& r : find_reachings(g, x, y, false)) {
                if (r.positions != m.descriptor.positions) continue;
                const WitnessResult w = resolution_witness(g, m.high, r);
                REQUIRE(w.family);
                CHECK(w.family->relations_hold_identically(g));
                CHECK(identify_diagramme(g, w.family->at(0)).diagramme == m.high);
                for (const Rational& t : params) CHECK(identify_diagramme(g, w.family->at(t)).diagramme == resolve_in_multiset(g, m.high, r));
                ++checked;
            }
        }
    CHECK(checked > 0);
}

TEST_CASE("seeded parameters") {
    const auto a = seeded_parameters(5), b = seeded_parameters(5);
    CHECK(a == b);
    CHECK(std::set<Rational>(a.begin(), a.end()).size() == 3);
    for (const Rational& t : a) {
        CHECK(t != 0);
        CHECK(abs(t.get_num()) <= 97);
        CHECK(t.get_den() <= 97);
    }
    CHECK(seeded_parameters(6, 5).size() == 5);
}
