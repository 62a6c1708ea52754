#pragma once

#include <functional>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "gentle/words.hpp"

namespace gentle {

// Multi-set of strings and minimal bands.
class Diagramme {
  public:
    Diagramme() = default;

    // Throws std::invalid_argument for non-minimal bands or non-positive multiplicities.
    void add(const Quiver& q, const Item& item, int multiplicity = 1);
    // Throws std::invalid_argument if fewer copies are present.
    void remove(const Quiver& q, const Item& item, int multiplicity = 1);

    [[nodiscard]] int multiplicity(const Item& item) const;
    [[nodiscard]] const std::map<Item, int>& items() const { return items_; }
    [[nodiscard]] const DimVector& dim() const { return dim_; }
    [[nodiscard]] bool empty() const { return items_.empty(); }
    [[nodiscard]] int size() const;  // with multiplicity
    [[nodiscard]] bool all_bands() const;

    friend bool operator==(const Diagramme& a, const Diagramme& b) { return a.items_ == b.items_; }

  private:
    std::map<Item, int> items_;
    DimVector dim_;
};

[[nodiscard]] Diagramme disjoint_union(const Quiver& q, const Diagramme& a, const Diagramme& b);
// "{b.a-, (a.b-)^x2}", items sorted by their serialization.
[[nodiscard]] std::string format_diagramme(const Quiver& q, const Diagramme& d);
[[nodiscard]] Diagramme parse_diagramme(const Quiver& q, std::string_view text);

// Number of pairs (top substring of x or its unraveling, bottom substring of y or its
// unraveling) that agree as strings, scaled by quasi-lengths, plus min(qx, qy) extra
// endomorphisms for the same band with the same parameter. A non-minimal band B^t counts
// as t copies of B.
[[nodiscard]] long hom_dim(const Quiver& q, const Item& x, int qx, const Item& y, int qy,
                           bool same_parameter);
[[nodiscard]] long pair_count(const Quiver& q, const Item& x, const Item& y);

// Sparse maps from canonical strings (length <= l_max) to counts; absent keys are zero.
struct StringCounts {
    int l_max = 0;
    std::map<Item, long> entries;
    [[nodiscard]] long at(const Item& c) const;
    friend bool operator==(const StringCounts&, const StringCounts&) = default;
};
struct HVector : StringCounts {};
struct HPrimeVector : StringCounts {};

[[nodiscard]] HPrimeVector h_prime_vector(const Quiver& q, const Diagramme& d, int l_max);
[[nodiscard]] HVector h_vector(const Quiver& q, const Diagramme& d, int l_max);
[[nodiscard]] HVector h_from_hprime(const Quiver& q, const HPrimeVector& hp);
// Throws std::domain_error when an intermediate entry becomes negative. Only entries
// present in h are checked; absent keys are read as zero.
[[nodiscard]] HPrimeVector hprime_from_h(const Quiver& q, const HVector& h);
// h_C for a single string from an h'-vector.
[[nodiscard]] long h_entry(const Quiver& q, const HPrimeVector& hp, const Walk& c);

// Evaluates h over every string up to a length bound for several h'-vectors at once.
class HEvaluator {
  public:
    HEvaluator(const Quiver& q, const std::vector<HPrimeVector>& hps);
    ~HEvaluator();
    HEvaluator(const HEvaluator&) = delete;
    HEvaluator& operator=(const HEvaluator&) = delete;

    using Visitor = std::function<void(const Walk&, std::span<const long>)>;
    // Visits each string once, in its canonical orientation.
    void for_each(int max_len, const Visitor& visit) const;
    [[nodiscard]] std::size_t width() const;

  private:
    struct Impl;
    const Quiver& q_;
    std::unique_ptr<Impl> impl_;
};

[[nodiscard]] nlohmann::ordered_json to_json(const Quiver& q, const StringCounts& v);

enum class Comparison { Equal, LessOrEqual, GreaterOrEqual, Incomparable };
[[nodiscard]] std::string_view to_string(Comparison c);
// Throws std::invalid_argument on mismatched truncation bounds.
[[nodiscard]] Comparison h_compare(const StringCounts& a, const StringCounts& b);

[[nodiscard]] int default_l_max(const DimVector& d);

// Longest path of the quiver starting at source(a) that avoids a.
[[nodiscard]] Walk arrow_projective_walk(const Quiver& q, ArrowId a);
[[nodiscard]] Item projective_string(const Quiver& q, VertexId v);

using RankFunction = std::vector<int>;  // indexed by arrow
[[nodiscard]] RankFunction rank_function(const Quiver& q, const Diagramme& d);
// Indices of the diagrammes whose rank function is maximal in the entrywise order.
[[nodiscard]] std::vector<std::size_t> maximal_rank_functions(const Quiver& q,
                                                              const std::vector<Diagramme>& ds);

}  // namespace gentle
