#include "gentle/poset.hpp"

#include <algorithm>
#include <bit>
#include <functional>
#include <map>
#include <numeric>
#include <sstream>
#include <thread>
#include <unordered_map>
#include <unordered_set>

namespace gentle {

BitMatrix::BitMatrix(std::size_t n, bool value)
    : n_(n), words_((n + 63) / 64), data_(n * words_, value ? ~std::uint64_t{0} : 0) {
    if (value && n % 64)
        for (std::size_t r = 0; r < n; ++r) row(r)[words_ - 1] = (std::uint64_t{1} << (n % 64)) - 1;
}

std::size_t BitMatrix::count(std::size_t r) const {
    std::size_t c = 0;
    for (std::size_t w = 0; w < words_; ++w) c += static_cast<std::size_t>(std::popcount(row(r)[w]));
    return c;
}

namespace {

struct VectorHash {
    std::size_t operator()(const std::vector<long>& v) const {
        std::size_t h = 0xcbf29ce484222325ull;
        for (long x : v) h = (h ^ static_cast<std::size_t>(x)) * 0x100000001b3ull;
        return h;
    }
};

// Keeps only pairs (x, y) with column[x] <= column[y].
void restrict_order(BitMatrix& le, std::span<const long> column, std::vector<std::size_t>& order) {
    const std::size_t n = column.size();
    order.resize(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return column[a] > column[b]; });
    std::vector<std::uint64_t> mask(le.words(), 0);
    std::size_t k = 0;
    while (k < n) {
        std::size_t end = k;
        while (end < n && column[order[end]] == column[order[k]]) {
            mask[order[end] / 64] |= std::uint64_t{1} << (order[end] % 64);
            ++end;
        }
        for (std::size_t t = k; t < end; ++t) {
            std::uint64_t* row = le.row(order[t]);
            for (std::size_t w = 0; w < mask.size(); ++w) row[w] &= mask[w];
        }
        k = end;
    }
}

bool sorted_contains(const std::vector<NodePair>& v, NodePair p) {
    return std::binary_search(v.begin(), v.end(), p);
}

std::string dot_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out;
}

bool is_resolution(const MoveDescriptor& m) { return m.kind != "delete"; }

void build_edges(const Quiver& q, DegPoset& p, bool resolutions_only, int jobs) {
    std::unordered_map<std::string, std::size_t> index;
    for (std::size_t k = 0; k < p.labels.size(); ++k) index.emplace(p.labels[k], k);
    const std::size_t n = p.nodes.size();
    std::vector<std::vector<Move>> per_node(n);
    auto work = [&](std::size_t first) {
        for (std::size_t k = first; k < n; k += static_cast<std::size_t>(jobs))
            per_node[k] = all_moves(q, p.nodes[k], resolutions_only);
    };
    if (jobs <= 1) {
        work(0);
    } else {
        std::vector<std::jthread> pool;
        for (int t = 0; t < jobs; ++t) pool.emplace_back(work, static_cast<std::size_t>(t));
    }
    std::map<NodePair, std::vector<MoveDescriptor>> merged;
    auto lookup = [&](const Diagramme& d) {
        const auto it = index.find(format_diagramme(q, d));
        if (it == index.end())
            throw std::logic_error("move leaves the node set: " + format_diagramme(q, d));
        return it->second;
    };
    for (const auto& moves : per_node) {
        for (const Move& m : moves) {
            auto& descs = merged[{lookup(m.low), lookup(m.high)}];
            const auto same = [&](const MoveDescriptor& x) {
                return to_json(x) == to_json(m.descriptor);
            };
            if (std::none_of(descs.begin(), descs.end(), same)) descs.push_back(m.descriptor);
        }
    }
    for (auto& [pair, descs] : merged) p.edges.push_back({pair.first, pair.second, std::move(descs)});
}

void finish_structure(DegPoset& p) {
    std::vector<NodePair> pairs;
    for (const auto& e : p.edges) pairs.emplace_back(e.low, e.high);
    p.closure = reflexive_transitive_closure(p.nodes.size(), pairs);
    p.hasse = transitive_reduction(p.closure);
}

DegPoset make_poset(const Quiver& q, const DimVector& d, const PosetOptions& options, bool restricted) {
    DegPoset p;
    p.algebra = q.to_json();
    p.dim = d;
    p.restricted = restricted;
    p.l_max = options.l_max.value_or(default_l_max(d));
    p.nodes = enumerate_diagrammes(q, d, restricted, options.node_cap);
    for (const auto& node : p.nodes) p.labels.push_back(format_diagramme(q, node));
    build_edges(q, p, restricted, std::max(1, options.jobs));
    finish_structure(p);
    // resolution-only edges on band multisets are not compared with h
    if (options.compute_h && !restricted) {
        HOrders orders = h_orders(q, p.nodes, p.l_max, options.double_l);
        p.h_computed = true;
        p.h_order = std::move(orders.at_l);
        p.h_order_double = std::move(orders.at_double_l);
        const OrderComparison cmp = compare_orders(p.closure, p.h_order);
        p.h_discrepancies = cmp.missing;
        p.violations = cmp.violations;
        for (std::size_t k = 0; k < p.edges.size(); ++k) {
            const auto& e = p.edges[k];
            if (!p.h_order.test(e.low, e.high) || p.h_order.test(e.high, e.low))
                p.non_strict_edges.push_back(k);
        }
    }
    return p;
}

}  // namespace

std::optional<std::size_t> DegPoset::find(const std::string& label) const {
    const auto it = std::find(labels.begin(), labels.end(), label);
    if (it == labels.end()) return std::nullopt;
    return static_cast<std::size_t>(it - labels.begin());
}

bool DegPoset::is_cover(std::size_t low, std::size_t high) const {
    return sorted_contains(hasse, {low, high});
}

bool DegPoset::antisymmetric() const {
    for (std::size_t x = 0; x < nodes.size(); ++x)
        for (std::size_t y = x + 1; y < nodes.size(); ++y)
            if (closure.test(x, y) && closure.test(y, x)) return false;
    return true;
}

std::vector<std::size_t> DegPoset::maximal_nodes() const {
    std::vector<std::size_t> out;
    for (std::size_t x = 0; x < nodes.size(); ++x)
        if (closure.count(x) == 1) out.push_back(x);
    return out;
}

std::vector<std::size_t> DegPoset::minimal_nodes() const {
    std::vector<std::size_t> out;
    for (std::size_t y = 0; y < nodes.size(); ++y) {
        bool minimal = true;
        for (std::size_t x = 0; x < nodes.size() && minimal; ++x) minimal = x == y || !closure.test(x, y);
        if (minimal) out.push_back(y);
    }
    return out;
}

std::vector<Diagramme> enumerate_diagrammes(const Quiver& q, const DimVector& d, bool bands_only,
                                            std::size_t node_cap) {
    if (d.size() != q.vertex_count()) throw std::invalid_argument("dimension vector has wrong size");
    if (std::any_of(d.begin(), d.end(), [](int x) { return x < 0; }))
        throw std::invalid_argument("dimension vector must be non-negative");
    std::vector<Item> items = enumerate_minimal_bands(q, d);
    if (!bands_only) {
        const auto strings = enumerate_strings(q, d);
        items.insert(items.begin(), strings.begin(), strings.end());
    }
    std::vector<DimVector> dims;
    for (const auto& it : items) dims.push_back(dimension_vector(q, it));

    std::vector<Diagramme> out;
    std::vector<std::pair<std::size_t, int>> chosen;
    DimVector residual = d;
    std::function<void(std::size_t)> rec = [&](std::size_t first) {
        if (std::all_of(residual.begin(), residual.end(), [](int x) { return x == 0; })) {
            Diagramme diag;
            for (const auto& [k, mult] : chosen) diag.add(q, items[k], mult);
            out.push_back(std::move(diag));
            if (out.size() > node_cap)
                throw EnumerationLimit("more than " + std::to_string(node_cap) + " diagrammes");
            return;
        }
        for (std::size_t k = first; k < items.size(); ++k) {
            int mult = 0;
            for (;;) {
                bool fits = true;
                for (std::size_t u = 0; u < residual.size(); ++u) fits = fits && dims[k][u] <= residual[u];
                if (!fits) break;
                for (std::size_t u = 0; u < residual.size(); ++u) residual[u] -= dims[k][u];
                ++mult;
                chosen.emplace_back(k, mult);
                rec(k + 1);
                chosen.pop_back();
            }
            for (std::size_t u = 0; u < residual.size(); ++u) residual[u] += mult * dims[k][u];
        }
    };
    rec(0);
    std::vector<std::pair<std::string, std::size_t>> keyed;
    for (std::size_t k = 0; k < out.size(); ++k) keyed.emplace_back(format_diagramme(q, out[k]), k);
    std::sort(keyed.begin(), keyed.end());
    std::vector<Diagramme> sorted;
    for (const auto& [label, k] : keyed) sorted.push_back(std::move(out[k]));
    return sorted;
}

BitMatrix reflexive_transitive_closure(std::size_t n, const std::vector<NodePair>& edges) {
    std::vector<std::vector<std::size_t>> up(n);
    for (const auto& [low, high] : edges) up[low].push_back(high);
    BitMatrix out(n);
    std::vector<std::size_t> stack;
    for (std::size_t s = 0; s < n; ++s) {
        out.set(s, s);
        stack.assign(1, s);
        while (!stack.empty()) {
            const std::size_t x = stack.back();
            stack.pop_back();
            for (std::size_t y : up[x]) {
                if (out.test(s, y)) continue;
                out.set(s, y);
                stack.push_back(y);
            }
        }
    }
    return out;
}

std::vector<NodePair> transitive_reduction(const BitMatrix& closure) {
    const std::size_t n = closure.size();
    BitMatrix down(n);
    for (std::size_t x = 0; x < n; ++x)
        for (std::size_t y = 0; y < n; ++y)
            if (closure.test(x, y)) down.set(y, x);
    std::vector<NodePair> out;
    for (std::size_t x = 0; x < n; ++x) {
        for (std::size_t y = 0; y < n; ++y) {
            if (x == y || !closure.test(x, y)) continue;
            std::size_t between = 0;
            for (std::size_t w = 0; w < closure.words(); ++w)
                between += static_cast<std::size_t>(std::popcount(closure.row(x)[w] & down.row(y)[w]));
            if (between == 2) out.emplace_back(x, y);
        }
    }
    return out;
}

HOrders h_orders(const Quiver& q, const std::vector<Diagramme>& nodes, int l_max, bool double_l) {
    const int bound = double_l ? 2 * l_max : l_max;
    std::vector<HPrimeVector> hps;
    for (const auto& d : nodes) hps.push_back(h_prime_vector(q, d, bound));
    HOrders out{BitMatrix(nodes.size(), true), std::nullopt};
    if (double_l) out.at_double_l = BitMatrix(nodes.size(), true);
    std::unordered_set<std::vector<long>, VectorHash> seen_short, seen_long;
    std::vector<std::size_t> scratch;
    const HEvaluator eval(q, hps);
    eval.for_each(bound, [&](const Walk& c, std::span<const long> column) {
        std::vector<long> key(column.begin(), column.end());
        if (static_cast<int>(c.length()) <= l_max) {
            if (!seen_short.insert(key).second) return;
            restrict_order(out.at_l, column, scratch);
            if (double_l) restrict_order(*out.at_double_l, column, scratch);
            seen_long.insert(std::move(key));
        } else if (seen_long.insert(std::move(key)).second) {
            restrict_order(*out.at_double_l, column, scratch);
        }
    });
    return out;
}

OrderComparison compare_orders(const BitMatrix& generated, const BitMatrix& h_order) {
    OrderComparison out;
    for (std::size_t x = 0; x < generated.size(); ++x) {
        for (std::size_t y = 0; y < generated.size(); ++y) {
            if (x == y) continue;
            const bool g = generated.test(x, y), h = h_order.test(x, y);
            if (h && !g) out.missing.emplace_back(x, y);
            if (g && !h) out.violations.emplace_back(x, y);
        }
    }
    return out;
}

DegPoset build_poset(const Quiver& q, const DimVector& d, const PosetOptions& options) {
    return make_poset(q, d, options, options.restricted_bands);
}

DegPoset restricted_band_poset(const Quiver& q, const DimVector& d, const PosetOptions& options) {
    return make_poset(q, d, options, true);
}

nlohmann::ordered_json to_json(const DegPoset& p) {
    nlohmann::ordered_json j;
    j["algebra"] = p.algebra;
    j["dim"] = p.dim;
    j["L_max"] = p.l_max;
    j["restricted"] = p.restricted;
    j["nodes"] = p.labels;
    nlohmann::ordered_json edges = nlohmann::ordered_json::array();
    for (const auto& e : p.edges) {
        nlohmann::ordered_json row;
        row["low"] = e.low;
        row["high"] = e.high;
        row["moves"] = nlohmann::ordered_json::array();
        for (const auto& m : e.moves) row["moves"].push_back(to_json(m));
        edges.push_back(std::move(row));
    }
    j["move_edges"] = std::move(edges);
    auto pairs = [](const std::vector<NodePair>& v) {
        nlohmann::ordered_json a = nlohmann::ordered_json::array();
        for (const auto& [x, y] : v) a.push_back({x, y});
        return a;
    };
    j["hasse"] = pairs(p.hasse);
    j["h_computed"] = p.h_computed;
    j["h_discrepancies"] = pairs(p.h_discrepancies);
    j["violations"] = pairs(p.violations);
    return j;
}

DegPoset poset_from_json(const nlohmann::json& j) {
    try {
        DegPoset p;
        p.algebra = j.at("algebra");
        const Quiver q = Quiver::from_json(p.algebra);
        p.dim = j.at("dim").get<DimVector>();
        p.l_max = j.at("L_max").get<int>();
        p.restricted = j.value("restricted", false);
        for (const auto& label : j.at("nodes")) {
            p.nodes.push_back(parse_diagramme(q, label.get<std::string>()));
            p.labels.push_back(format_diagramme(q, p.nodes.back()));
            if (p.labels.back() != label.get<std::string>())
                throw std::invalid_argument("node label is not canonical: " + label.get<std::string>());
        }
        for (const auto& e : j.at("move_edges")) {
            MoveEdge edge{e.at("low").get<std::size_t>(), e.at("high").get<std::size_t>(), {}};
            if (edge.low >= p.nodes.size() || edge.high >= p.nodes.size())
                throw std::invalid_argument("edge endpoint out of range");
            for (const auto& m : e.at("moves")) edge.moves.push_back(move_descriptor_from_json(m));
            p.edges.push_back(std::move(edge));
        }
        finish_structure(p);
        auto pairs = [](const nlohmann::json& a) {
            std::vector<NodePair> out;
            for (const auto& x : a) out.emplace_back(x.at(0).get<std::size_t>(), x.at(1).get<std::size_t>());
            return out;
        };
        if (pairs(j.at("hasse")) != p.hasse) throw std::invalid_argument("hasse diagram does not match edges");
        p.h_computed = j.value("h_computed", false);
        p.h_discrepancies = pairs(j.at("h_discrepancies"));
        if (j.contains("violations")) p.violations = pairs(j.at("violations"));
        return p;
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("malformed poset JSON: ") + e.what());
    }
}

std::vector<std::string> short_h_labels(const Quiver& q, const DegPoset& p) {
    std::vector<Walk> probes;
    for (VertexId v = 0; v < static_cast<VertexId>(q.vertex_count()); ++v) probes.push_back({{}, v});
    for (ArrowId a = 0; a < static_cast<ArrowId>(q.arrow_count()); ++a)
        probes.push_back(make_walk(q, {{a, true}}));
    std::vector<std::string> out;
    for (const auto& d : p.nodes) {
        const HPrimeVector hp = h_prime_vector(q, d, 1);
        std::string label = "h=(";
        for (std::size_t k = 0; k < probes.size(); ++k)
            label += (k ? "," : "") + std::to_string(h_entry(q, hp, probes[k]));
        out.push_back(label + ")");
    }
    return out;
}

std::string to_dot(const DegPoset& p, const std::vector<std::string>* h_labels) {
    std::map<NodePair, const MoveEdge*> by_pair;
    for (const auto& e : p.edges) by_pair[{e.low, e.high}] = &e;
    std::ostringstream out;
    out << "digraph degenerations {\n  rankdir=BT;\n  node [shape=box];\n";
    for (std::size_t k = 0; k < p.nodes.size(); ++k) {
        std::string label = dot_escape(p.labels[k]);
        if (h_labels) label += "\\n" + dot_escape((*h_labels)[k]);
        out << "  n" << k << " [label=\"" << label << "\"];\n";
    }
    for (const auto& [low, high] : p.hasse) {
        out << "  n" << low << " -> n" << high;
        const auto it = by_pair.find({low, high});
        if (it != by_pair.end() &&
            std::any_of(it->second->moves.begin(), it->second->moves.end(), is_resolution))
            out << " [style=dashed]";
        out << ";\n";
    }
    out << "}\n";
    return out.str();
}

namespace {

bool embedding_valid(const DegPoset& small, const DegPoset& large, const std::vector<std::size_t>& image) {
    const std::size_t n = small.nodes.size();
    for (std::size_t x = 0; x < n; ++x)
        for (std::size_t y = 0; y < n; ++y)
            if (small.closure.test(x, y) != large.closure.test(image[x], image[y])) return false;
    std::vector<bool> in_image(large.nodes.size(), false);
    for (std::size_t u : image) {
        if (in_image[u]) return false;
        in_image[u] = true;
    }
    for (std::size_t u : image)
        for (std::size_t v = 0; v < large.nodes.size(); ++v)
            if (large.closure.test(u, v) && !in_image[v]) return false;
    return true;
}

}  // namespace

std::optional<Embedding> find_upward_closed_copy(const Quiver& q, const DegPoset& small,
                                                 const DegPoset& large) {
    const std::size_t n = small.nodes.size();
    if (n > large.nodes.size() || small.dim.size() != large.dim.size()) return std::nullopt;
    DimVector diff(small.dim.size());
    bool translatable = true;
    for (std::size_t v = 0; v < diff.size(); ++v) {
        diff[v] = large.dim[v] - small.dim[v];
        translatable = translatable && diff[v] >= 0;
    }
    if (translatable) {
        for (const Diagramme& shift : enumerate_diagrammes(q, diff, large.restricted)) {
            std::vector<std::size_t> image;
            for (const auto& node : small.nodes) {
                const auto k = large.find(format_diagramme(q, disjoint_union(q, node, shift)));
                if (!k) break;
                image.push_back(*k);
            }
            if (image.size() == n && embedding_valid(small, large, image))
                return Embedding{std::move(image), shift};
        }
    }

    // Nodes with smaller up-sets first: every node above x is placed before x.
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return small.closure.count(a) < small.closure.count(b); });
    std::vector<std::size_t> image(n, 0);
    std::vector<bool> used(large.nodes.size(), false);
    std::size_t budget = 50'000'000;
    std::function<bool(std::size_t)> place = [&](std::size_t depth) -> bool {
        if (depth == n) return true;
        const std::size_t x = order[depth];
        const std::size_t up = small.closure.count(x);
        for (std::size_t u = 0; u < large.nodes.size(); ++u) {
            if (used[u] || large.closure.count(u) != up) continue;
            if (budget-- == 0) return false;
            bool ok = true;
            for (std::size_t d = 0; d < depth && ok; ++d) {
                const std::size_t y = order[d];
                ok = small.closure.test(x, y) == large.closure.test(u, image[y]) &&
                     small.closure.test(y, x) == large.closure.test(image[y], u);
            }
            if (!ok) continue;
            image[x] = u;
            used[u] = true;
            if (place(depth + 1)) return true;
            used[u] = false;
        }
        return false;
    };
    if (place(0) && embedding_valid(small, large, image)) return Embedding{image, std::nullopt};
    return std::nullopt;
}

}  // namespace gentle
