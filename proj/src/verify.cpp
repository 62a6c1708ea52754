#include "gentle/verify.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "gentle/oracle.hpp"
#include "gentle/poset.hpp"

namespace gentle {

bool VerifyReport::passed() const {
    return std::all_of(invariants.begin(), invariants.end(), [](const auto& r) { return r.passed(); });
}

namespace {

int total(const DimVector& d) { return std::accumulate(d.begin(), d.end(), 0); }

// Every dimension vector with total at most `budget`, in lexicographic order.
std::vector<DimVector> dimension_vectors(std::size_t vertices, int budget) {
    std::vector<DimVector> out;
    DimVector d(vertices, 0);
    auto rec = [&](auto&& self, std::size_t v, int left) -> void {
        if (v == vertices) {
            out.push_back(d);
            return;
        }
        for (int x = 0; x <= left; ++x) {
            d[v] = x;
            self(self, v + 1, left - x);
        }
        d[v] = 0;
    };
    rec(rec, 0, budget);
    return out;
}

class Recorder {
  public:
    Recorder(std::string name, std::size_t cap) : cap_(cap) { result_.name = std::move(name); }
    void check(bool ok, const std::function<std::string()>& describe) {
        ++result_.checked;
        if (!ok && ++failures_ <= cap_) result_.counterexamples.push_back(describe());
        else if (!ok && failures_ == cap_ + 1) result_.counterexamples.push_back("...");
    }
    void note(std::string s) { result_.notes.push_back(std::move(s)); }
    InvariantResult take() { return std::move(result_); }

  private:
    InvariantResult result_;
    std::size_t cap_;
    std::size_t failures_ = 0;
};

Matrix random_invertible(std::size_t n, std::mt19937_64& gen) {
    std::uniform_int_distribution<int> entry(-3, 3);
    for (;;) {
        Matrix m(n, n);
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t c = 0; c < n; ++c) m(r, c) = entry(gen);
        if (rank(m) == n) return m;
    }
}

MatrixModule change_basis(const Quiver& q, const MatrixModule& m, std::mt19937_64& gen) {
    std::vector<Matrix> p, p_inv;
    for (int d : m.dims) {
        p.push_back(random_invertible(static_cast<std::size_t>(d), gen));
        p_inv.push_back(inverse(p.back()));
    }
    MatrixModule out = m;
    for (std::size_t a = 0; a < q.arrow_count(); ++a) {
        const Arrow& arrow = q.arrow(static_cast<ArrowId>(a));
        out.maps[a] = p[arrow.target] * m.maps[a] * p_inv[arrow.source];
    }
    return out;
}

std::string describe_item(const Quiver& q, const Item& x, int qx, const Rational& lambda) {
    std::string s = format_item(q, x);
    if (x.is_band()) s += "[q=" + std::to_string(qx) + ",lambda=" + lambda.get_str() + "]";
    return s;
}

bool identifies_as(const Quiver& q, const MatrixModule& m, const Diagramme& expected) {
    try {
        return identify_diagramme(q, m).diagramme == expected;
    } catch (const std::runtime_error&) {
        return false;
    }
}

}  // namespace

VerifyReport run_verify(const Quiver& q, const VerifyOptions& options) {
    const std::size_t cap = options.max_counterexamples;
    std::vector<DimVector> dims;
    DimVector item_bound(q.vertex_count(), options.budget);
    int item_total = options.budget;
    if (options.dim) {
        if (options.dim->size() != q.vertex_count()) throw std::invalid_argument("dimension vector has wrong size");
        dims.push_back(*options.dim);
        item_bound = *options.dim;
        item_total = total(*options.dim);
    } else {
        for (auto& d : dimension_vectors(q.vertex_count(), options.budget))
            if (total(d) > 0) dims.push_back(std::move(d));
    }

    std::vector<Item> items;
    if (item_total > 0) {
        for (auto& x : enumerate_strings(q, item_bound))
            if (total(dimension_vector(q, x)) <= item_total) items.push_back(std::move(x));
        for (auto& x : enumerate_minimal_bands(q, item_bound))
            if (total(dimension_vector(q, x)) <= item_total) items.push_back(std::move(x));
    }
    const std::vector<Rational> params = seeded_parameters(options.seed);
    std::mt19937_64 gen(options.seed);
    VerifyReport report;

    {
        Recorder equiv("oracle_equivalence", cap), basis("hom_basis", cap);
        const Rational lambdas[] = {1, 2};
        for (const Item& x : items)
            for (const Item& y : items) {
                const int dx = total(dimension_vector(q, x)), dy = total(dimension_vector(q, y));
                for (int qx = 1; qx <= (x.is_band() ? 2 : 1); ++qx)
                    for (int qy = 1; qy <= (y.is_band() ? 2 : 1); ++qy) {
                        if (dx * qx + dy * qy > item_total) continue;
                        for (const Rational& lx : lambdas)
                            for (const Rational& ly : lambdas) {
                                if ((x.is_string() && lx != 1) || (y.is_string() && ly != 1)) continue;
                                const long expected =
                                    hom_dim(q, x, qx, y, qy, x.is_band() && x == y && lx == ly);
                                const HomBasisCheck c = check_hom_basis_formulas(q, x, lx, qx, y, ly, qy);
                                auto what = [&] {
                                    return describe_item(q, x, qx, lx) + " -> " + describe_item(q, y, qy, ly);
                                };
                                equiv.check(c.nullity == expected, [&] {
                                    return what() + ": hom_dim " + std::to_string(expected) + ", nullity " +
                                           std::to_string(c.nullity);
                                });
                                basis.check(c.ok(), [&] {
                                    return what() + ": constructed " + std::to_string(c.constructed) +
                                           (c.intertwiners ? "" : ", not intertwining") +
                                           (c.independent ? "" : ", dependent");
                                });
                            }
                    }
            }
        report.invariants.push_back(equiv.take());
        report.invariants.push_back(basis.take());
    }

    {
        Recorder rec("base_change", cap);
        for (const Item& x : items)
            for (const Item& y : items) {
                const int dx = total(dimension_vector(q, x)), dy = total(dimension_vector(q, y));
                if (dx + dy > item_total) continue;
                const MatrixModule mx = realize_item(q, x), my = realize_item(q, y);
                const long before = hom_nullity(q, mx, my);
                const long after = hom_nullity(q, change_basis(q, mx, gen), change_basis(q, my, gen));
                rec.check(before == after, [&] {
                    return format_item(q, x) + " -> " + format_item(q, y) + ": " + std::to_string(before) +
                           " vs " + std::to_string(after);
                });
            }
        report.invariants.push_back(rec.take());
    }

    Recorder roundtrip("hprime_roundtrip", cap), injective("hprime_injective", cap), ranks("rank_formula", cap),
        ident("identify_roundtrip", cap), deletions("deletion_witnesses", cap),
        pair_witnesses("resolution_witnesses", cap), inclusion("order_inclusion", cap);
    long unsupported = 0;
    for (const DimVector& d : dims) {
        const std::vector<Diagramme> nodes = enumerate_diagrammes(q, d);
        const int l = default_l_max(d);
        std::set<std::map<Item, long>> seen;
        for (const Diagramme& node : nodes) {
            const std::string label = format_diagramme(q, node);
            const HPrimeVector hp = h_prime_vector(q, node, l);
            const HVector h = h_vector(q, node, l);
            roundtrip.check(hprime_from_h(q, h) == hp && h_from_hprime(q, hp) == h, [&] { return label; });
            injective.check(seen.insert(hp.entries).second, [&] { return label + " shares its h'-vector"; });

            const MatrixModule m = realize_diagramme(q, node);
            const RankFunction rf = rank_function(q, node);
            for (std::size_t a = 0; a < q.arrow_count(); ++a) {
                const auto r = static_cast<int>(arrow_rank(m, static_cast<ArrowId>(a)));
                ranks.check(r == rf[a], [&] {
                    return label + " at " + q.arrow(static_cast<ArrowId>(a)).name + ": formula " +
                           std::to_string(rf[a]) + ", matrix " + std::to_string(r);
                });
            }
            ident.check(identifies_as(q, m, node), [&] { return label; });

            for (const auto& [item, mult] : node.items())
                for (int k = 1; k <= item.length(); ++k) {
                    const WitnessFamily w = deletion_witness(q, node, item, k);
                    Diagramme high = node;
                    high.remove(q, item);
                    high = disjoint_union(q, high, delete_arrow(q, item, k));
                    bool ok = w.relations_hold_identically(q) && identifies_as(q, w.at(0), high);
                    for (const Rational& t : params) ok = ok && identifies_as(q, w.at(t), node);
                    deletions.check(ok, [&] {
                        return label + ": delete letter " + std::to_string(k) + " of " + format_item(q, item);
                    });
                }

            for (const auto& [x, mx] : node.items())
                for (const auto& [y, my] : node.items()) {
                    if (!x.is_string() || !y.is_string() || (x == y && mx < 2)) continue;
                    for (const Reaching& r : find_reachings(q, x, y, false)) {
                        const std::vector<Resolution> rs = resolutions(q, r);
                        if (rs.empty()) continue;
                        const WitnessResult w = resolution_witness(q, node, r);
                        if (!w.family) {
                            ++unsupported;
                            continue;
                        }
                        const Diagramme low = resolve_in_multiset(q, node, r, rs.front());
                        bool ok = w.family->relations_hold_identically(q) && identifies_as(q, w.family->at(0), node);
                        for (const Rational& t : params) ok = ok && identifies_as(q, w.family->at(t), low);
                        pair_witnesses.check(ok, [&] {
                            return label + ": " + format_item(q, x) + " reaches " + format_item(q, y);
                        });
                    }
                }
        }

        PosetOptions po;
        po.jobs = options.jobs;
        const DegPoset p = build_poset(q, d, po);
        std::ostringstream dim_text;
        for (std::size_t v = 0; v < d.size(); ++v) dim_text << (v ? "," : "") << d[v];
        inclusion.check(p.violations.empty() && p.non_strict_edges.empty() && p.antisymmetric(), [&] {
            return "d=(" + dim_text.str() + "): " + std::to_string(p.violations.size()) + " violations, " +
                   std::to_string(p.non_strict_edges.size()) + " non-strict edges";
        });
        if (!p.h_discrepancies.empty())
            inclusion.note("d=(" + dim_text.str() + "): " + std::to_string(p.h_discrepancies.size()) +
                           " h-order pairs not generated");
    }
    if (unsupported) pair_witnesses.note(std::to_string(unsupported) + " reachings outside the witness scope");
    for (Recorder* r : {&roundtrip, &injective, &ranks, &ident, &deletions, &pair_witnesses, &inclusion})
        report.invariants.push_back(r->take());

    {
        Recorder rec("band_auto_resolutions", cap);
        for (const Item& b2 : items) {
            if (!b2.is_band()) continue;
            const int l = default_l_max(dimension_vector(q, b2));
            for (const Reaching& r : find_reachings(q, b2, b2, true))
                for (const Resolution& res : resolutions(q, r)) {
                    if (res.items.size() != 1 || !res.items.front().is_band() || !res.items.front().minimal())
                        continue;
                    const Item& b = res.items.front();
                    Diagramme low, high;
                    low.add(q, b);
                    high.add(q, b2);
                    const bool strict = h_compare(h_vector(q, low, l), h_vector(q, high, l)) == Comparison::LessOrEqual;
                    const MatrixModule mb = realize_item(q, b), mb2 = realize_item(q, b2, 2);
                    const long up = hom_dim(q, b, 1, b2, 1, false), down = hom_dim(q, b2, 1, b, 1, false);
                    const bool agree = hom_nullity(q, mb, mb2) == up && hom_nullity(q, mb2, mb) == down;
                    rec.check(strict && agree, [&] {
                        return format_item(q, b2) + " -> " + format_item(q, b) + (strict ? "" : ": not h-strict") +
                               (agree ? "" : ": oracle disagrees");
                    });
                    if (up == 0 && down == 0)
                        rec.note("zero hom both ways: " + format_item(q, b) + " < " + format_item(q, b2));
                }
        }
        report.invariants.push_back(rec.take());
    }
    return report;
}

nlohmann::ordered_json to_json(const VerifyReport& r) {
    nlohmann::ordered_json j;
    j["passed"] = r.passed();
    j["invariants"] = nlohmann::ordered_json::array();
    for (const auto& inv : r.invariants) {
        nlohmann::ordered_json x;
        x["name"] = inv.name;
        x["passed"] = inv.passed();
        x["checked"] = inv.checked;
        x["counterexamples"] = inv.counterexamples;
        x["notes"] = inv.notes;
        j["invariants"].push_back(std::move(x));
    }
    return j;
}

std::string to_text(const VerifyReport& r) {
    std::ostringstream out;
    for (const auto& inv : r.invariants) {
        out << (inv.passed() ? "PASS " : "FAIL ") << inv.name << " (" << inv.checked << " checks)\n";
        for (const auto& c : inv.counterexamples) out << "  counterexample: " << c << "\n";
        for (const auto& n : inv.notes) out << "  note: " << n << "\n";
    }
    out << (r.passed() ? "all invariants hold" : "invariant violations found") << "\n";
    return out.str();
}

}  // namespace gentle
