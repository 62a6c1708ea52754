#pragma once

#include <compare>
#include <string>
#include <string_view>
#include <vector>

#include "gentle/quiver.hpp"

namespace gentle {

using DimVector = std::vector<int>;

enum class ItemKind : unsigned char { String, Band };

// A canonical string (min over {w, w^-}) or band (min over all rotations of w and w^-).
// Bands may be non-minimal; `minimal()` reports which.
class Item {
  public:
    [[nodiscard]] ItemKind kind() const { return kind_; }
    [[nodiscard]] bool is_band() const { return kind_ == ItemKind::Band; }
    [[nodiscard]] bool is_string() const { return kind_ == ItemKind::String; }
    [[nodiscard]] bool is_lazy() const { return kind_ == ItemKind::String && word_.empty(); }
    [[nodiscard]] const Word& word() const { return word_; }
    [[nodiscard]] VertexId base() const { return base_; }
    [[nodiscard]] int length() const { return static_cast<int>(word_.size()); }
    [[nodiscard]] bool minimal() const;
    [[nodiscard]] Walk walk() const { return {word_, base_}; }

    friend bool operator==(const Item&, const Item&) = default;
    friend std::strong_ordering operator<=>(const Item& a, const Item& b);

    friend Item canonical_string(const Quiver& q, const Walk& w);
    friend Item canonical_band(const Quiver& q, const Word& w);
    friend Item lazy_string(VertexId v);

  private:
    Item(ItemKind kind, Word word, VertexId base) : kind_(kind), word_(std::move(word)), base_(base) {}
    ItemKind kind_;
    Word word_;
    VertexId base_;
};

// Throws std::invalid_argument for invalid walks.
[[nodiscard]] Item canonical_string(const Quiver& q, const Walk& w);
// Throws std::invalid_argument unless w has length >= 2 and is valid including the wrap.
[[nodiscard]] Item canonical_band(const Quiver& q, const Word& w);
[[nodiscard]] Item lazy_string(VertexId v);

// Shortest root R and exponent t with w equal to R^t as a cyclic word.
struct BandRoot {
    Word root;
    int power = 1;
};
[[nodiscard]] BandRoot band_root(const Word& w);

[[nodiscard]] DimVector dimension_vector(const Quiver& q, const Item& item);
[[nodiscard]] DimVector dimension_vector(const Quiver& q, const Walk& w);

// "(w)" for bands, walk grammar for strings.
[[nodiscard]] std::string format_item(const Quiver& q, const Item& item);
[[nodiscard]] Item parse_item(const Quiver& q, std::string_view text);

// Letter lists without inversion marks, e.g. {"b","a","d","c"}: the unique inversion
// assignment that yields a valid string (or band). Throws std::invalid_argument with a
// diagnostic when no assignment or several inequivalent ones exist.
[[nodiscard]] Item resolve_letter_list(const Quiver& q, const std::vector<std::string>& arrows,
                                       ItemKind kind);

// An oriented representative of a string or band used as the host of substrings.
// Band positions are read in the unraveled walk, modulo the period.
struct Host {
    ItemKind kind = ItemKind::String;
    Word word;
    VertexId base = 0;

    [[nodiscard]] bool is_band() const { return kind == ItemKind::Band; }
    [[nodiscard]] int length() const { return static_cast<int>(word.size()); }
};

[[nodiscard]] Host host_of(const Quiver& q, const Item& item, bool flipped = false);
[[nodiscard]] Host rotated(const Quiver& q, const Host& band, int start);

// Cut positions between letters, 1-based: the substring c_i..c_{j-1}.
struct Span {
    int i = 1;
    int j = 1;
    [[nodiscard]] int length() const { return j - i; }
    friend auto operator<=>(const Span&, const Span&) = default;
};

[[nodiscard]] Letter host_letter(const Host& h, int k);                   // c_k, cyclic for bands
[[nodiscard]] VertexId host_vertex(const Quiver& q, const Host& h, int p);  // p_p, cyclic for bands
[[nodiscard]] Walk substring(const Quiver& q, const Host& h, Span s);
[[nodiscard]] Word band_slice(const Host& h, int from, int to);  // letters c_from..c_{to-1}

// Top: left neighbour direct (or none) and right neighbour inverse (or none).
// Bottom: the dual. Band spans start in 1..length and are listed once per shift class.
[[nodiscard]] std::vector<Span> top_spans(const Host& h, int max_len);
[[nodiscard]] std::vector<Span> bottom_spans(const Host& h, int max_len);
[[nodiscard]] bool is_top(const Host& h, Span s);
[[nodiscard]] bool is_bottom(const Host& h, Span s);

// The substring of one period associated with a substring of the unraveled band:
// rho = reduced . (k periods), with `band` a rotation where reduced = band[span].
struct ReducedSubstring {
    Host band;
    Span span;
    int periods = 0;
};
[[nodiscard]] ReducedSubstring substring_red(const Quiver& q, const Host& band, Span s);

[[nodiscard]] std::vector<Item> enumerate_strings(const Quiver& q, const DimVector& bound);
[[nodiscard]] std::vector<Item> enumerate_minimal_bands(const Quiver& q, const DimVector& bound);

// An m such that no representative of b^n with n >= m is a bottom substring of b2's
// unraveling. Throws std::invalid_argument when the bands coincide or are not minimal.
[[nodiscard]] int distinct_band_power_bound(const Quiver& q, const Item& b, const Item& b2);

}  // namespace gentle
