#pragma once

#include <vector>

#include "gentle/quiver.hpp"

namespace gentle::detail {

// Strings stored right to left, rooted at their rightmost vertex, each node carrying one
// count per column. Walking a word leftwards from a cut position visits every substring
// ending there.
class SuffixTrie {
  public:
    SuffixTrie(std::size_t vertex_count, std::size_t width) : width_(width) {
        for (std::size_t v = 0; v < vertex_count; ++v) new_node();
    }

    [[nodiscard]] int root(VertexId v) const { return v; }
    [[nodiscard]] std::size_t width() const { return width_; }

    [[nodiscard]] int child(int node, Letter l) const {
        for (const auto& [key, next] : nodes_[node]) if (key == l.key()) return next;
        return -1;
    }

    [[nodiscard]] const long* values(int node) const {
        return values_.data() + static_cast<std::size_t>(node) * width_;
    }

    // Adds `value` to the node of w and, when non-empty, of its inverse.
    void add(const Quiver& q, const Walk& w, std::size_t column, long value) {
        if (w.empty()) {
            values_[static_cast<std::size_t>(w.base) * width_ + column] += value;
            return;
        }
        insert_reversed(q.source(w.letters.back()), w.letters.rbegin(), w.letters.rend(), column,
                        value, false);
        insert_reversed(w.base, w.letters.begin(), w.letters.end(), column, value, true);
    }

  private:
    int new_node() {
        nodes_.emplace_back();
        values_.resize(values_.size() + width_, 0);
        return static_cast<int>(nodes_.size()) - 1;
    }

    // Letters are consumed from the right end of the stored word; for the inverse
    // orientation they are the forward letters inverted.
    template <class It>
    void insert_reversed(VertexId start, It first, It last, std::size_t column, long value,
                         bool invert) {
        int node = root(start);
        for (It it = first; it != last; ++it) {
            const Letter l = invert ? it->inverse() : *it;
            int next = child(node, l);
            if (next < 0) {
                next = new_node();
                nodes_[node].emplace_back(l.key(), next);
            }
            node = next;
        }
        values_[static_cast<std::size_t>(node) * width_ + column] += value;
    }

    std::size_t width_;
    std::vector<std::vector<std::pair<int, int>>> nodes_;
    std::vector<long> values_;
};

}  // namespace gentle::detail
