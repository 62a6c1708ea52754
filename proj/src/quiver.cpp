#include "gentle/quiver.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <map>
#include <numeric>

namespace gentle {

Word inverse(const Word& w) {
    Word out;
    out.reserve(w.size());
    for (auto it = w.rbegin(); it != w.rend(); ++it) out.push_back(it->inverse());
    return out;
}

Quiver::Quiver(std::vector<std::string> vertices, std::vector<Arrow> arrows,
               std::vector<Relation> relations)
    : vertices_(std::move(vertices)), arrows_(std::move(arrows)) {
    std::set<std::string> seen;
    for (const auto& v : vertices_)
        if (!seen.insert(v).second) throw QuiverError("duplicate vertex '" + v + "'");
    seen.clear();
    const auto nv = static_cast<int>(vertices_.size());
    for (const auto& a : arrows_) {
        if (a.name.empty() || a.name.find_first_of(".-,(){}^ ") != std::string::npos)
            throw QuiverError("invalid arrow name '" + a.name + "'");
        if (!seen.insert(a.name).second) throw QuiverError("duplicate arrow '" + a.name + "'");
        if (a.source < 0 || a.source >= nv || a.target < 0 || a.target >= nv)
            throw QuiverError("arrow '" + a.name + "' has an unknown endpoint");
    }
    for (const auto& [second, first] : relations) {
        const auto na = static_cast<int>(arrows_.size());
        if (second < 0 || second >= na || first < 0 || first >= na)
            throw QuiverError("relation refers to an unknown arrow");
        if (arrows_[first].target != arrows_[second].source)
            throw QuiverError("relation " + arrows_[second].name + arrows_[first].name +
                              " is not composable");
        relations_.insert({second, first});
    }
    if (nv == 0) throw QuiverError("quiver has no vertices");
    // Undirected connectivity.
    std::vector<int> comp(nv);
    std::iota(comp.begin(), comp.end(), 0);
    std::function<int(int)> find = [&](int x) { return comp[x] == x ? x : comp[x] = find(comp[x]); };
    for (const auto& a : arrows_) comp[find(a.source)] = find(a.target);
    for (int v = 0; v < nv; ++v)
        if (find(v) != find(0)) throw QuiverError("quiver is not connected");
}

Quiver Quiver::from_json(const nlohmann::json& j) {
    std::vector<std::string> vertices;
    for (const auto& v : j.at("vertices"))
        vertices.push_back(v.is_string() ? v.get<std::string>() : v.dump());
    auto vertex_index = [&](const nlohmann::json& v) {
        const auto name = v.is_string() ? v.get<std::string>() : v.dump();
        const auto it = std::find(vertices.begin(), vertices.end(), name);
        if (it == vertices.end()) throw QuiverError("unknown vertex '" + name + "'");
        return static_cast<VertexId>(it - vertices.begin());
    };
    std::vector<Arrow> arrows;
    for (const auto& a : j.at("arrows"))
        arrows.push_back({a.at("name").get<std::string>(), vertex_index(a.at("from")),
                          vertex_index(a.at("to"))});
    auto arrow_index = [&](const std::string& name) {
        for (std::size_t i = 0; i < arrows.size(); ++i)
            if (arrows[i].name == name) return static_cast<ArrowId>(i);
        throw QuiverError("relation refers to unknown arrow '" + name + "'");
    };
    std::vector<Relation> relations;
    if (j.contains("relations")) {
        for (const auto& r : j.at("relations")) {
            if (!r.is_array() || r.size() != 2)
                throw QuiverError("relations must be pairs of arrow names");
            relations.emplace_back(arrow_index(r[0].get<std::string>()),
                                   arrow_index(r[1].get<std::string>()));
        }
    }
    return Quiver(std::move(vertices), std::move(arrows), std::move(relations));
}

Quiver Quiver::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw QuiverError("cannot open " + path.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw QuiverError(path.string() + ": " + e.what());
    }
    return from_json(j);
}

nlohmann::json Quiver::to_json() const {
    nlohmann::json j;
    j["vertices"] = vertices_;
    j["arrows"] = nlohmann::json::array();
    for (const auto& a : arrows_)
        j["arrows"].push_back(
            {{"name", a.name}, {"from", vertices_[a.source]}, {"to", vertices_[a.target]}});
    j["relations"] = nlohmann::json::array();
    for (const auto& [second, first] : relations_)
        j["relations"].push_back({arrows_[second].name, arrows_[first].name});
    return j;
}

std::optional<VertexId> Quiver::find_vertex(std::string_view name) const {
    for (std::size_t i = 0; i < vertices_.size(); ++i)
        if (vertices_[i] == name) return static_cast<VertexId>(i);
    return std::nullopt;
}

std::optional<ArrowId> Quiver::find_arrow(std::string_view name) const {
    for (std::size_t i = 0; i < arrows_.size(); ++i)
        if (arrows_[i].name == name) return static_cast<ArrowId>(i);
    return std::nullopt;
}

VertexId Quiver::source(Letter l) const {
    const auto& a = arrows_.at(l.arrow);
    return l.direct ? a.source : a.target;
}

VertexId Quiver::target(Letter l) const {
    const auto& a = arrows_.at(l.arrow);
    return l.direct ? a.target : a.source;
}

bool Quiver::may_follow(Letter left, Letter right) const {
    if (!composable(left, right)) return false;
    if (left.arrow == right.arrow && left.direct != right.direct) return false;
    if (left.direct && right.direct && is_relation(left.arrow, right.arrow)) return false;
    if (!left.direct && !right.direct && is_relation(right.arrow, left.arrow)) return false;
    return true;
}

std::vector<ArrowId> Quiver::outgoing(VertexId v) const {
    std::vector<ArrowId> out;
    for (std::size_t i = 0; i < arrows_.size(); ++i)
        if (arrows_[i].source == v) out.push_back(static_cast<ArrowId>(i));
    return out;
}

std::vector<ArrowId> Quiver::incoming(VertexId v) const {
    std::vector<ArrowId> out;
    for (std::size_t i = 0; i < arrows_.size(); ++i)
        if (arrows_[i].target == v) out.push_back(static_cast<ArrowId>(i));
    return out;
}

ValidationReport validate_gentle(const Quiver& q) {
    const auto fail = [](std::string axiom, std::string where, std::string msg) {
        return ValidationReport{false, std::move(axiom), std::move(where), std::move(msg)};
    };
    for (VertexId v = 0; v < static_cast<VertexId>(q.vertex_count()); ++v) {
        if (q.incoming(v).size() > 2)
            return fail("degree", q.vertex_name(v), "more than two incoming arrows");
        if (q.outgoing(v).size() > 2)
            return fail("degree", q.vertex_name(v), "more than two outgoing arrows");
    }
    // Relations are length-2 monomials by construction of Quiver.
    for (ArrowId a = 0; a < static_cast<ArrowId>(q.arrow_count()); ++a) {
        const auto& arr = q.arrow(a);
        int zero_after = 0, nonzero_after = 0;
        for (ArrowId b : q.outgoing(arr.target)) (q.is_relation(b, a) ? zero_after : nonzero_after)++;
        if (zero_after > 1)
            return fail("continuation", arr.name, "more than one arrow b with b" + arr.name + " in I");
        if (nonzero_after > 1)
            return fail("continuation", arr.name,
                        "more than one arrow b with b" + arr.name + " not in I");
        int zero_before = 0, nonzero_before = 0;
        for (ArrowId c : q.incoming(arr.source)) (q.is_relation(a, c) ? zero_before : nonzero_before)++;
        if (zero_before > 1)
            return fail("continuation", arr.name, "more than one arrow c with " + arr.name + "c in I");
        if (nonzero_before > 1)
            return fail("continuation", arr.name,
                        "more than one arrow c with " + arr.name + "c not in I");
    }
    if (!is_finite_dimensional(q)) return fail("finite-dimensional", "", "relation-free cycle");
    return {};
}

bool is_finite_dimensional(const Quiver& q) {
    // A relation-free directed cycle is a cycle in the graph a -> b (b may follow a, ba not in I).
    const auto n = q.arrow_count();
    std::vector<int> state(n, 0);
    std::function<bool(ArrowId)> has_cycle = [&](ArrowId a) {
        state[a] = 1;
        for (ArrowId b : q.outgoing(q.arrow(a).target)) {
            if (q.is_relation(b, a)) continue;
            if (state[b] == 1) return true;
            if (state[b] == 0 && has_cycle(b)) return true;
        }
        state[a] = 2;
        return false;
    };
    for (ArrowId a = 0; a < static_cast<ArrowId>(n); ++a)
        if (state[a] == 0 && has_cycle(a)) return false;
    return true;
}

std::vector<VertexId> walk_vertices(const Quiver& q, const Walk& w) {
    std::vector<VertexId> ps{w.base};
    for (std::size_t k = 0; k < w.letters.size(); ++k) {
        const Letter l = w.letters[k];
        if (q.target(l) != ps.back())
            throw CompositionError("letters do not compose at position " + std::to_string(k + 1));
        ps.push_back(q.source(l));
    }
    return ps;
}

VertexId walk_source(const Quiver& q, const Walk& w) {
    return w.empty() ? w.base : q.source(w.letters.back());
}

VertexId walk_target(const Quiver&, const Walk& w) { return w.base; }

bool is_valid_walk(const Quiver& q, const Walk& w) {
    (void)walk_vertices(q, w);
    for (std::size_t k = 0; k + 1 < w.letters.size(); ++k)
        if (!q.may_follow(w.letters[k], w.letters[k + 1])) return false;
    return true;
}

bool is_valid_word(const Quiver& q, const Word& w) {
    for (std::size_t k = 0; k + 1 < w.size(); ++k)
        if (!q.may_follow(w[k], w[k + 1])) return false;
    return true;
}

bool is_valid_cycle(const Quiver& q, const Word& w) {
    return !w.empty() && is_valid_word(q, w) && q.may_follow(w.back(), w.front());
}

Walk inverse(const Quiver& q, const Walk& w) {
    if (w.empty()) return w;
    return {inverse(w.letters), walk_source(q, w)};
}

Walk make_walk(const Quiver& q, Word letters) {
    if (letters.empty()) throw std::invalid_argument("make_walk needs letters");
    const VertexId base = q.target(letters.front());
    return {std::move(letters), base};
}

Word parse_word(const Quiver& q, std::string_view text) {
    Word out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto dot = text.find('.', pos);
        auto tok = text.substr(pos, dot == std::string_view::npos ? std::string_view::npos : dot - pos);
        while (!tok.empty() && tok.front() == ' ') tok.remove_prefix(1);
        while (!tok.empty() && tok.back() == ' ') tok.remove_suffix(1);
        bool direct = true;
        if (!tok.empty() && tok.back() == '-') {
            direct = false;
            tok.remove_suffix(1);
        }
        const auto a = q.find_arrow(tok);
        if (!a) throw QuiverError("unknown arrow '" + std::string(tok) + "'");
        out.push_back({*a, direct});
        if (dot == std::string_view::npos) break;
        pos = dot + 1;
    }
    return out;
}

Walk parse_walk(const Quiver& q, std::string_view text) {
    while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
    while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
    if (text.starts_with("e_")) {
        const auto v = q.find_vertex(text.substr(2));
        if (!v) throw QuiverError("unknown vertex in '" + std::string(text) + "'");
        return {{}, *v};
    }
    Walk w = make_walk(q, parse_word(q, text));
    (void)walk_vertices(q, w);
    return w;
}

std::string format_word(const Quiver& q, const Word& w) {
    std::string out;
    for (std::size_t k = 0; k < w.size(); ++k) {
        if (k) out += '.';
        out += q.arrow(w[k].arrow).name;
        if (!w[k].direct) out += '-';
    }
    return out;
}

std::string format_walk(const Quiver& q, const Walk& w) {
    if (w.empty()) return "e_" + q.vertex_name(w.base);
    return format_word(q, w.letters);
}

}  // namespace gentle
