#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "gentle/hom.hpp"

namespace gentle {

// Raised when no rewiring of a non-intersecting auto-reaching yields a valid walk.
class NonexistentResolution : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

enum class ReachingKind : unsigned char { Pair, AutoNonIntersecting, AutoIntersecting };

// A top occurrence of E in `top_host` and a bottom occurrence of E in `bottom_host`.
// Hosts are oriented so the occurrences agree letter by letter. For auto-reachings both
// hosts are the same window; a band host is then rotated so that both occurrences lie in
// positions 1..length+1.
struct Reaching {
    ReachingKind kind = ReachingKind::Pair;
    Item top_item = lazy_string(0);
    Item bottom_item = lazy_string(0);
    Host top_host;
    Host bottom_host;
    Span top;
    Span bottom;
    Walk e;
    bool bottom_flipped = false;    // pair: bottom host is the inverse of the canonical word
    bool same_orientation = true;   // auto: both occurrences read E in the same direction
    bool orientation_ambiguous = false;  // length-0 E with both orientations valid
    std::array<int, 4> positions{};      // i, j, i', j' on the canonical representatives
};

[[nodiscard]] Diagramme delete_arrow(const Quiver& q, const Item& item, int k);

// Pair reachings from `top_item` to `bottom_item` (two copies when equal), or the
// auto-reachings of `top_item` when `auto_reaching` is set.
[[nodiscard]] std::vector<Reaching> find_reachings(const Quiver& q, const Item& top_item,
                                                   const Item& bottom_item, bool auto_reaching);

[[nodiscard]] bool intersecting(Span top, Span bottom);
// Throws std::invalid_argument for pair reachings.
[[nodiscard]] ReachingKind classify_auto(const Reaching& r);

// Items of a resolution; bands may be non-minimal and are reduced by the caller.
struct Resolution {
    std::string variant;
    std::vector<Item> items;
};

[[nodiscard]] std::optional<std::vector<Item>> resolve_pair(const Quiver& q, const Reaching& r);
[[nodiscard]] std::optional<Item> resolve_string_band(const Quiver& q, const Reaching& r);
[[nodiscard]] std::optional<Item> resolve_band_band(const Quiver& q, const Reaching& r);
// Throws std::logic_error when the host fails the periodicity consequence.
[[nodiscard]] std::vector<Item> resolve_auto_intersecting(const Quiver& q, const Reaching& r);
// Every valid rewiring: "crosswise", "reversal" and "block-swap".
// Throws NonexistentResolution when none is valid.
[[nodiscard]] std::vector<Resolution> resolve_auto_nonintersecting(const Quiver& q,
                                                                   const Reaching& r);
// Dispatch on the reaching kind; empty when the reaching does not resolve.
[[nodiscard]] std::vector<Resolution> resolutions(const Quiver& q, const Reaching& r);

// B^t with multiplicity m becomes B^{x tm}.
[[nodiscard]] Diagramme reduce_nonminimal(const Quiver& q, const Item& band, int multiplicity);

// Replaces the reaching's items in d by the resolution (first variant unless named).
// Throws std::invalid_argument on insufficient multiplicity or an unknown variant.
[[nodiscard]] Diagramme resolve_in_multiset(const Quiver& q, const Diagramme& d, const Reaching& r,
                                            const std::string& variant = {});
[[nodiscard]] Diagramme resolve_in_multiset(const Quiver& q, const Diagramme& d, const Reaching& r,
                                            const Resolution& resolution);

struct MoveDescriptor {
    std::string kind;  // delete|resolve-pair|resolve-string-band|resolve-band-band|auto-nonint|auto-int
    std::string variant;
    std::vector<std::string> items;
    std::array<int, 4> positions{};
    std::string e;
    bool reduced_nonminimal = false;
};

[[nodiscard]] nlohmann::ordered_json to_json(const MoveDescriptor& m);
[[nodiscard]] MoveDescriptor move_descriptor_from_json(const nlohmann::json& j);

struct Move {
    MoveDescriptor descriptor;
    Diagramme low;
    Diagramme high;
};

// Deletions (d is low) and resolutions (d is high), in a deterministic order.
[[nodiscard]] std::vector<Move> all_moves(const Quiver& q, const Diagramme& d,
                                          bool resolutions_only = false);

}  // namespace gentle
