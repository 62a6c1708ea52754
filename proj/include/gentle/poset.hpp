#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "gentle/moves.hpp"

namespace gentle {

// Square boolean matrix stored as bit rows.
class BitMatrix {
  public:
    BitMatrix() = default;
    explicit BitMatrix(std::size_t n, bool value = false);

    [[nodiscard]] std::size_t size() const { return n_; }
    [[nodiscard]] bool test(std::size_t r, std::size_t c) const {
        return (row(r)[c / 64] >> (c % 64)) & 1u;
    }
    void set(std::size_t r, std::size_t c) { row(r)[c / 64] |= std::uint64_t{1} << (c % 64); }
    void reset(std::size_t r, std::size_t c) { row(r)[c / 64] &= ~(std::uint64_t{1} << (c % 64)); }
    [[nodiscard]] std::uint64_t* row(std::size_t r) { return data_.data() + r * words_; }
    [[nodiscard]] const std::uint64_t* row(std::size_t r) const { return data_.data() + r * words_; }
    [[nodiscard]] std::size_t words() const { return words_; }
    [[nodiscard]] std::size_t count(std::size_t r) const;

    friend bool operator==(const BitMatrix&, const BitMatrix&) = default;

  private:
    std::size_t n_ = 0;
    std::size_t words_ = 0;
    std::vector<std::uint64_t> data_;
};

struct MoveEdge {
    std::size_t low = 0;
    std::size_t high = 0;
    std::vector<MoveDescriptor> moves;
};

using NodePair = std::pair<std::size_t, std::size_t>;  // (low, high)

struct PosetOptions {
    std::optional<int> l_max;      // default |d|^2
    bool compute_h = true;         // ignored for restricted posets
    bool double_l = false;         // also evaluate the h-order at 2 L_max
    bool restricted_bands = false;
    std::size_t node_cap = 100000;
    int jobs = 1;
};

struct DegPoset {
    nlohmann::json algebra;
    DimVector dim;
    int l_max = 0;
    bool restricted = false;
    std::vector<Diagramme> nodes;  // sorted by serialization
    std::vector<std::string> labels;
    std::vector<MoveEdge> edges;
    BitMatrix closure;             // closure(x, y): x below or equal to y
    std::vector<NodePair> hasse;
    bool h_computed = false;
    BitMatrix h_order;             // h_order(x, y): h(x) <= h(y)
    std::optional<BitMatrix> h_order_double;  // at 2 L_max when requested
    std::vector<NodePair> h_discrepancies;    // in the h-order only
    std::vector<NodePair> violations;         // generated pairs outside the h-order
    std::vector<std::size_t> non_strict_edges;  // move edges not strict in the h-order

    [[nodiscard]] std::optional<std::size_t> find(const std::string& label) const;
    [[nodiscard]] bool below(std::size_t x, std::size_t y) const { return closure.test(x, y); }
    [[nodiscard]] bool is_cover(std::size_t low, std::size_t high) const;
    [[nodiscard]] bool antisymmetric() const;
    [[nodiscard]] std::vector<std::size_t> maximal_nodes() const;
    [[nodiscard]] std::vector<std::size_t> minimal_nodes() const;
};

class EnumerationLimit : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

[[nodiscard]] std::vector<Diagramme> enumerate_diagrammes(const Quiver& q, const DimVector& d,
                                                          bool bands_only = false,
                                                          std::size_t node_cap = 100000);

[[nodiscard]] DegPoset build_poset(const Quiver& q, const DimVector& d, const PosetOptions& options = {});
[[nodiscard]] DegPoset restricted_band_poset(const Quiver& q, const DimVector& d,
                                             const PosetOptions& options = {});

// Closure of a relation given by edges, by reachability from each node.
[[nodiscard]] BitMatrix reflexive_transitive_closure(std::size_t n, const std::vector<NodePair>& edges);
[[nodiscard]] std::vector<NodePair> transitive_reduction(const BitMatrix& closure);

// h-order at `l_max` (and optionally 2 l_max) for a list of diagrammes.
struct HOrders {
    BitMatrix at_l;
    std::optional<BitMatrix> at_double_l;
};
[[nodiscard]] HOrders h_orders(const Quiver& q, const std::vector<Diagramme>& nodes, int l_max,
                               bool double_l);

struct OrderComparison {
    std::vector<NodePair> missing;      // in H, not generated
    std::vector<NodePair> violations;   // generated, not in H
    [[nodiscard]] bool coincide() const { return missing.empty() && violations.empty(); }
};
[[nodiscard]] OrderComparison compare_orders(const BitMatrix& generated, const BitMatrix& h_order);

[[nodiscard]] nlohmann::ordered_json to_json(const DegPoset& p);
// Throws std::invalid_argument on malformed input.
[[nodiscard]] DegPoset poset_from_json(const nlohmann::json& j);
// Selected h entries (lazy strings and single arrows) are appended to labels when
// `h_labels` is given, one vector per node.
[[nodiscard]] std::string to_dot(const DegPoset& p,
                                 const std::vector<std::string>* h_labels = nullptr);
[[nodiscard]] std::vector<std::string> short_h_labels(const Quiver& q, const DegPoset& p);

// Injective map from `small` into `large` with an upward-closed image that preserves and
// reflects the order. Translations D -> D + E are tried before a general search.
struct Embedding {
    std::vector<std::size_t> image;
    std::optional<Diagramme> translation;
};
[[nodiscard]] std::optional<Embedding> find_upward_closed_copy(const Quiver& q, const DegPoset& small,
                                                               const DegPoset& large);

}  // namespace gentle
