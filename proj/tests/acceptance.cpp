// One PASS/FAIL line per acceptance criterion; exit status 1 when any fails.
#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <numeric>
#include <set>
#include <string>

#include "gentle/oracle.hpp"
#include "gentle/poset.hpp"

using namespace gentle;

namespace {

Quiver load(const std::string& name) { return Quiver::load(std::filesystem::path(GENTLE_DATA_DIR) / (name + ".json")); }

Item str(const Quiver& q, const char* text) { return canonical_string(q, parse_walk(q, text)); }
Item band(const Quiver& q, const char* text) { return canonical_band(q, parse_word(q, text)); }

struct Failure {
    std::string what;
};

void require(bool ok, const std::string& what) {
    if (!ok) throw Failure{what};
}

std::string items_text(const Quiver& q, std::vector<Item> items) {
    std::ranges::sort(items);
    std::string out;
    for (const Item& it : items) out += (out.empty() ? "" : ", ") + format_item(q, it);
    return "{" + out + "}";
}

// Limits in seconds.
constexpr double kLimit[11] = {0, 1, 30, 300, 1, 120, 300, 60, 120, 30, 600};

// ---- 1
std::string kronecker_11() {
    const Quiver q = load("kronecker");
    const DegPoset p = build_poset(q, {1, 1});
    require(p.labels == std::vector<std::string>{"{(a.b-)}", "{a}", "{b}", "{e_1, e_2}"}, "diagrammes");
    const std::vector<std::vector<long>> expected{{0, 1, 0, 0}, {0, 1, 1, 0}, {0, 1, 0, 1}, {1, 1, 1, 1}};
    for (std::size_t k = 0; k < p.nodes.size(); ++k) {
        const HVector h = h_vector(q, p.nodes[k], p.l_max);
        std::vector<long> got;
        for (const char* c : {"e_1", "e_2", "a", "b"}) got.push_back(h.at(str(q, c)));
        require(got == expected[k], "h-vector of " + p.labels[k]);
    }
    require(p.hasse == std::vector<NodePair>{{0, 1}, {0, 2}, {1, 3}, {2, 3}}, "diamond");
    return {};
}

// ---- 2
std::string kronecker_22() {
    const Quiver q = load("kronecker");
    const DegPoset p = build_poset(q, {2, 2});
    require(compare_orders(p.closure, p.h_order).coincide(), "orders differ");
    for (auto [lo, hi] : p.hasse) {
        const bool described = std::ranges::any_of(
            p.edges, [&](const MoveEdge& e) { return e.low == lo && e.high == hi && !e.moves.empty(); });
        require(described, "cover without a move: " + p.labels[lo] + " < " + p.labels[hi]);
    }
    return std::to_string(p.nodes.size()) + " nodes";
}

// ---- 3
std::string glued_121() {
    const Quiver g = load("glued_kronecker");
    const DegPoset p = build_poset(g, {1, 2, 1});
    require(compare_orders(p.closure, p.h_order).coincide(), "orders differ");
    const bool found = std::ranges::any_of(p.edges, [&](const MoveEdge& e) {
        return !p.is_cover(e.low, e.high) &&
               std::ranges::any_of(e.moves, [](const MoveDescriptor& m) { return m.kind == "delete"; });
    });
    require(found, "every deletion is a cover");
    return std::to_string(p.nodes.size()) + " nodes";
}

// ---- 4
std::set<std::string> resolutions_of(const Quiver& q, const Item& x, const Item& y, bool auto_reaching) {
    std::set<std::string> out;
    auto rs = find_reachings(q, x, y, auto_reaching);
    if (!auto_reaching) {
        auto back = find_reachings(q, y, x, false);
        rs.insert(rs.end(), back.begin(), back.end());
    }
    for (const Reaching& r : rs)
        for (const Resolution& res : resolutions(q, r)) out.insert(items_text(q, res.items));
    return out;
}

void timed_vector(const std::string& name, const std::function<void()>& body) {
    const auto start = std::chrono::steady_clock::now();
    body();
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    require(s < kLimit[4], name + " took " + std::to_string(s) + " s");
}

std::string resolution_vectors() {
    const Quiver k = load("kronecker");
    const Quiver g = load("glued_kronecker");
    timed_vector("string pair", [&] {
        const auto rs = find_reachings(k, str(k, "b.a-"), lazy_string(0), false);
        require(rs.size() == 1, "reaching count");
        const auto out = resolve_pair(k, rs[0]);
        require(out && items_text(k, *out) == "{a, b}", "string pair resolution");
    });
    timed_vector("string-band", [&] {
        const Item expected = str(g, "b.a-.d-.c.d-.c.d-.c");
        require(expected.length() == 8, "length");
        require(resolutions_of(g, str(g, "b.a-.d-.c.d-.c"), band(g, "d-.c"), false).contains(items_text(g, {expected})),
                "string-band resolution");
    });
    timed_vector("band-band", [&] {
        const Item big = band(g, "b.a-.d-.c.d-.c"), kb = band(g, "a.b-");
        const Item square = band(g, "b.a-.d-.c.b.a-.d-.c");
        require(!square.minimal(), "square is minimal");
        require(resolutions_of(g, big, kb, false).contains(items_text(g, {square})), "band-band resolution");
        Diagramme d;
        d.add(g, big);
        d.add(g, kb);
        bool reduced = false;
        for (const Move& m : all_moves(g, d, true))
            reduced = reduced || (m.descriptor.reduced_nonminimal && m.low.multiplicity(band(g, "b.a-.d-.c")) == 2 &&
                                  m.low.size() == 2);
        require(reduced, "reduction to multiplicity 2");
    });
    timed_vector("intersecting auto", [&] {
        const Item c = str(g, "b.a-.b.a-.d-.c.b.a-.d-.c.d-.c");
        require(resolutions_of(g, c, c, true).contains(items_text(g, {str(g, "b.a-.b.a-.d-.c.d-.c"), band(g, "b.a-.d-.c")})),
                "intersecting auto-resolution");
    });
    timed_vector("non-intersecting auto", [&] {
        const Item c = str(g, "b.a-.b.a-.d-.c.d-.c");
        require(resolutions_of(g, c, c, true).contains(items_text(g, {str(g, "b.a-.d-.c.b.a-.d-.c")})),
                "non-intersecting auto-resolution");
    });
    return {};
}

// ---- 5
std::string oracle_equivalence() {
    constexpr int budget = 6;
    long checked = 0;
    for (const char* name : {"kronecker", "glued_kronecker"}) {
        const Quiver q = load(name);
        const DimVector bound(q.vertex_count(), budget);
        struct Indecomposable {
            Item item;
            int quasi_length;
            int total;
        };
        std::vector<Indecomposable> all;
        auto total_of = [&](const Item& it) {
            const DimVector d = dimension_vector(q, it);
            return std::accumulate(d.begin(), d.end(), 0);
        };
        for (const Item& s : enumerate_strings(q, bound))
            if (total_of(s) < budget) all.push_back({s, 1, total_of(s)});
        for (const Item& b : enumerate_minimal_bands(q, bound))
            for (int ql : {1, 2})
                if (ql * total_of(b) < budget) all.push_back({b, ql, ql * total_of(b)});
        const Rational lambdas[2] = {1, Rational(5, 3)};
        for (const auto& x : all)
            for (const auto& y : all) {
                if (x.total + y.total > budget) continue;
                for (int lx = 0; lx < (x.item.is_band() ? 2 : 1); ++lx)
                    for (int ly = 0; ly < (y.item.is_band() ? 2 : 1); ++ly) {
                        const bool same = x.item.is_band() && x.item == y.item && lx == ly;
                        const long combinatorial = hom_dim(q, x.item, x.quasi_length, y.item, y.quasi_length, same);
                        const long nullity = hom_nullity(q, realize_item(q, x.item, lambdas[lx], x.quasi_length),
                                                         realize_item(q, y.item, lambdas[ly], y.quasi_length));
                        require(combinatorial == nullity, std::string(name) + ": " + format_item(q, x.item) + " -> " +
                                                              format_item(q, y.item));
                        ++checked;
                    }
            }
    }
    require(checked > 0, "nothing checked");
    return std::to_string(checked) + " pairs";
}

// ---- 6
std::string hprime_machinery() {
    for (const auto& [name, d] : {std::pair{"kronecker", DimVector{2, 2}}, std::pair{"glued_kronecker", DimVector{1, 2, 1}}}) {
        const Quiver q = load(name);
        const auto nodes = enumerate_diagrammes(q, d);
        const int l = default_l_max(d);
        for (int bound : {l, 2 * l}) {
            std::set<std::map<Item, long>> seen;
            for (const Diagramme& node : nodes) {
                const HPrimeVector hp = h_prime_vector(q, node, bound);
                const HVector h = h_vector(q, node, bound);
                require(hprime_from_h(q, h) == hp, "h -> h' at " + format_diagramme(q, node));
                require(h_from_hprime(q, hp) == h, "h' -> h at " + format_diagramme(q, node));
                seen.insert(hp.entries);
            }
            require(seen.size() == nodes.size(), std::string("h' not injective on ") + name);
        }
        const HOrders orders = h_orders(q, nodes, l, true);
        require(orders.at_double_l && *orders.at_double_l == orders.at_l, std::string("verdicts differ on ") + name);
    }
    return {};
}

// ---- 7
std::string rank_formula() {
    for (const auto& [name, d] : {std::pair{"kronecker", DimVector{2, 2}}, std::pair{"glued_kronecker", DimVector{1, 2, 1}}}) {
        const Quiver q = load(name);
        for (const Diagramme& node : enumerate_diagrammes(q, d)) {
            const MatrixModule m = realize_diagramme(q, node);
            const RankFunction r = rank_function(q, node);
            for (ArrowId a = 0; a < static_cast<ArrowId>(q.arrow_count()); ++a)
                require(static_cast<int>(arrow_rank(m, a)) == r[a], "rank at " + format_diagramme(q, node));
        }
    }
    return {};
}

// ---- 8
std::string witnesses() {
    const auto params = seeded_parameters(2024);
    const Quiver q = load("kronecker");
    long checked = 0;
    for (const DimVector& d : {DimVector{1, 1}, DimVector{2, 2}}) {
        const DegPoset p = build_poset(q, d, {.compute_h = false});
        for (const MoveEdge& e : p.edges)
            for (const MoveDescriptor& m : e.moves) {
                if (m.kind != "delete") continue;
                const WitnessFamily w = deletion_witness(q, p.nodes[e.low], parse_item(q, m.items.at(0)), m.positions[0]);
                const std::string where = p.labels[e.low] + " < " + p.labels[e.high];
                require(w.relations_hold_identically(q), "relations at " + where);
                require(identify_diagramme(q, w.at(0)).diagramme == p.nodes[e.high], "t = 0 at " + where);
                for (const Rational& t : params)
                    require(identify_diagramme(q, w.at(t)).diagramme == p.nodes[e.low], "t = " + t.get_str() + " at " + where);
                ++checked;
            }
    }
    require(checked > 0, "no deletion edges");

    Diagramme two;
    two.add(q, str(q, "b.a-"));
    two.add(q, lazy_string(0));
    const auto rs = find_reachings(q, str(q, "b.a-"), lazy_string(0), false);
    require(rs.size() == 1, "reaching count");
    const WitnessResult r = resolution_witness(q, two, rs[0]);
    require(r.family.has_value(), r.unsupported);
    require(r.family->relations_hold_identically(q), "resolution relations");
    require(identify_diagramme(q, r.family->at(0)).diagramme == two, "resolution at t = 0");
    for (const Rational& t : params)
        require(format_diagramme(q, identify_diagramme(q, r.family->at(t)).diagramme) == "{a, b}", "resolution at t = " + t.get_str());
    return std::to_string(checked) + " deletion witnesses";
}

// ---- 9
std::string zero_hom_degeneration() {
    const Quiver q = load("five_vertex");
    const Item b = band(q, "a.e-.c.b.f-.d");
    const Item b2 = band(q, "a.e-.c.d-.f.b-");
    require(resolutions_of(q, b2, b2, true).contains(items_text(q, {b})), "auto-resolution of B'");
    require(hom_dim(q, b, 1, b2, 1, false) == 0 && hom_dim(q, b2, 1, b, 1, false) == 0, "combinatorial hom");
    const MatrixModule mb = realize_item(q, b, 2), mb2 = realize_item(q, b2, 3);
    require(hom_nullity(q, mb, mb2) == 0 && hom_nullity(q, mb2, mb) == 0, "oracle hom");
    Diagramme low, high;
    low.add(q, b);
    high.add(q, b2);
    const HOrders orders = h_orders(q, {low, high}, default_l_max(low.dim()), false);
    require(orders.at_l.test(0, 1) && !orders.at_l.test(1, 0), "h(B) < h(B') fails");
    return {};
}

// ---- 10
std::string restricted_posets() {
    const Quiver g = load("glued_kronecker");
    const DegPoset small = restricted_band_poset(g, {2, 4, 2});
    const auto high = small.find("{(a.b-), (a.b-.c-.d.c-.d)}");
    const auto low = small.find("{(a.b-.c-.d)^x2}");
    require(high && low, "nodes missing");
    require(small.below(*low, *high), "relation missing");
    require(!small.is_cover(*low, *high), "relation is a cover");
    const DegPoset large = restricted_band_poset(g, {3, 6, 3});
    require(find_upward_closed_copy(g, small, large).has_value(), "no upward-closed copy");
    return std::to_string(large.nodes.size()) + " nodes at (3,6,3)";
}

}  // namespace

int main() {
    const std::pair<const char*, std::string (*)()> criteria[] = {
        {"Kronecker (1,1): diagrammes, h-vectors, diamond", kronecker_11},
        {"Kronecker (2,2): generated order equals h-order, covers are moves", kronecker_22},
        {"glued (1,2,1): generated order equals h-order, a deletion that is not a cover", glued_121},
        {"resolution golden vectors", resolution_vectors},
        {"oracle equivalence up to total dimension 6", oracle_equivalence},
        {"h' roundtrip and injectivity at L and 2L", hprime_machinery},
        {"rank formula against matrix ranks", rank_formula},
        {"deletion and resolution witnesses", witnesses},
        {"five-vertex zero-hom degeneration", zero_hom_degeneration},
        {"restricted band posets (2,4,2) and (3,6,3)", restricted_posets},
    };
    int failed = 0;
    for (int n = 1; n <= 10; ++n) {
        const auto& [name, run] = criteria[n - 1];
        const auto start = std::chrono::steady_clock::now();
        std::string error, detail;
        try {
            detail = run();
        } catch (const Failure& f) {
            error = f.what;
        } catch (const std::exception& e) {
            error = std::string("exception: ") + e.what();
        }
        const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (error.empty() && n != 4 && s >= kLimit[n]) error = "over the time limit";
        if (!error.empty()) ++failed;
        if (!detail.empty()) detail = ", " + detail;
        std::printf("%s %2d %s (%.2f s, limit %.0f s%s)%s%s\n", error.empty() ? "PASS" : "FAIL", n, name, s,
                    n == 4 ? kLimit[4] * 5 : kLimit[n], detail.c_str(), error.empty() ? "" : ": ", error.c_str());
        std::fflush(stdout);
    }
    return failed == 0 ? 0 : 1;
}
