#pragma once

#include <compare>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

namespace gentle {

using VertexId = int;
using ArrowId = int;

class QuiverError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Raised for letter sequences whose endpoints do not match up.
class CompositionError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct Arrow {
    std::string name;
    VertexId source = 0;
    VertexId target = 0;
    friend bool operator==(const Arrow&, const Arrow&) = default;
};

// An arrow or its formal inverse.
struct Letter {
    ArrowId arrow = 0;
    bool direct = true;

    [[nodiscard]] constexpr Letter inverse() const { return {arrow, !direct}; }
    // Total order used for canonical forms: arrow index first, direct before inverse.
    [[nodiscard]] constexpr int key() const { return arrow * 2 + (direct ? 0 : 1); }

    friend constexpr bool operator==(Letter, Letter) = default;
    friend constexpr std::strong_ordering operator<=>(Letter a, Letter b) { return a.key() <=> b.key(); }
};

using Word = std::vector<Letter>;

// Letters c_1..c_m composed as paths: target(c_{k+1}) == source(c_k).
// `base` is the leftmost vertex, i.e. target(c_1); it is the only data of an empty walk.
struct Walk {
    Word letters;
    VertexId base = 0;

    [[nodiscard]] std::size_t length() const { return letters.size(); }
    [[nodiscard]] bool empty() const { return letters.empty(); }
    friend bool operator==(const Walk&, const Walk&) = default;
};

[[nodiscard]] Word inverse(const Word& w);

// Vertex relation (second, first): the path "second after first" is zero.
using Relation = std::pair<ArrowId, ArrowId>;

class Quiver {
  public:
    // Throws QuiverError on structural problems (duplicate names, unknown vertices,
    // non-composable relations, disconnected underlying graph).
    Quiver(std::vector<std::string> vertices, std::vector<Arrow> arrows,
           std::vector<Relation> relations);

    static Quiver from_json(const nlohmann::json& j);
    static Quiver load(const std::filesystem::path& path);
    [[nodiscard]] nlohmann::json to_json() const;

    [[nodiscard]] std::size_t vertex_count() const { return vertices_.size(); }
    [[nodiscard]] std::size_t arrow_count() const { return arrows_.size(); }
    [[nodiscard]] const std::string& vertex_name(VertexId v) const { return vertices_.at(v); }
    [[nodiscard]] const Arrow& arrow(ArrowId a) const { return arrows_.at(a); }
    [[nodiscard]] const std::vector<Arrow>& arrows() const { return arrows_; }
    [[nodiscard]] const std::vector<std::string>& vertices() const { return vertices_; }
    [[nodiscard]] const std::set<Relation>& relations() const { return relations_; }
    [[nodiscard]] std::optional<VertexId> find_vertex(std::string_view name) const;
    [[nodiscard]] std::optional<ArrowId> find_arrow(std::string_view name) const;

    [[nodiscard]] VertexId source(Letter l) const;
    [[nodiscard]] VertexId target(Letter l) const;
    [[nodiscard]] bool is_relation(ArrowId second, ArrowId first) const {
        return relations_.contains({second, first});
    }

    // `right` may follow `left` in a walk (left = c_k, right = c_{k+1}):
    // composable, not an inverse pair, and not a relation in either orientation.
    [[nodiscard]] bool may_follow(Letter left, Letter right) const;
    [[nodiscard]] bool composable(Letter left, Letter right) const {
        return target(right) == source(left);
    }

    [[nodiscard]] std::vector<ArrowId> outgoing(VertexId v) const;
    [[nodiscard]] std::vector<ArrowId> incoming(VertexId v) const;

    friend bool operator==(const Quiver&, const Quiver&) = default;

  private:
    std::vector<std::string> vertices_;
    std::vector<Arrow> arrows_;
    std::set<Relation> relations_;
};

struct ValidationReport {
    bool ok = true;
    std::string axiom;     // empty when ok
    std::string location;  // vertex or arrow name
    std::string message;
};

[[nodiscard]] ValidationReport validate_gentle(const Quiver& q);
[[nodiscard]] bool is_finite_dimensional(const Quiver& q);

// Vertices visited by a walk: p_1 = base, p_{k+1} = source(c_k). Throws CompositionError.
[[nodiscard]] std::vector<VertexId> walk_vertices(const Quiver& q, const Walk& w);
[[nodiscard]] VertexId walk_source(const Quiver& q, const Walk& w);  // rightmost vertex
[[nodiscard]] VertexId walk_target(const Quiver& q, const Walk& w);  // leftmost vertex

// Throws CompositionError when consecutive letters do not compose.
[[nodiscard]] bool is_valid_walk(const Quiver& q, const Walk& w);
[[nodiscard]] bool is_valid_word(const Quiver& q, const Word& w);
// Valid including the wrap-around adjacency (last letter followed by the first).
[[nodiscard]] bool is_valid_cycle(const Quiver& q, const Word& w);

[[nodiscard]] Walk inverse(const Quiver& q, const Walk& w);
[[nodiscard]] Walk make_walk(const Quiver& q, Word letters);  // non-empty letters only

// "b.a-.b" and "e_1" grammar.
[[nodiscard]] Walk parse_walk(const Quiver& q, std::string_view text);
[[nodiscard]] Word parse_word(const Quiver& q, std::string_view text);
[[nodiscard]] std::string format_word(const Quiver& q, const Word& w);
[[nodiscard]] std::string format_walk(const Quiver& q, const Walk& w);

}  // namespace gentle
