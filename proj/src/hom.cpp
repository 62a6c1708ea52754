#include "gentle/hom.hpp"

#include <algorithm>
#include <numeric>
#include <optional>
#include <tuple>
#include <stdexcept>

#include "suffix_trie.hpp"

namespace gentle {

namespace {

bool word_less(const Word& a, const Word& b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

struct Occurrences {
    std::map<Item, long> counts;
};

Occurrences count_spans(const Quiver& q, const Host& h, int max_len, bool top) {
    Occurrences out;
    for (Span s : top ? top_spans(h, max_len) : bottom_spans(h, max_len))
        ++out.counts[canonical_string(q, substring(q, h, s))];
    return out;
}

// Longest path starting with `first`.
Word maximal_path(const Quiver& q, ArrowId first) {
    std::vector<ArrowId> applied{first};
    for (;;) {
        const ArrowId last = applied.back();
        std::optional<ArrowId> next;
        for (ArrowId b : q.outgoing(q.arrow(last).target))
            if (!q.is_relation(b, last)) next = b;
        if (!next) break;
        if (applied.size() > q.arrow_count() * q.vertex_count())
            throw std::logic_error("unbounded path in a finite-dimensional algebra");
        applied.push_back(*next);
    }
    Word w;
    for (auto it = applied.rbegin(); it != applied.rend(); ++it) w.push_back({*it, true});
    return w;
}

}  // namespace

long pair_count(const Quiver& q, const Item& x, const Item& y) {
    int bound = 0;
    if (x.is_string() && y.is_string()) bound = std::min(x.length(), y.length());
    else if (x.is_string()) bound = x.length();
    else if (y.is_string()) bound = y.length();
    else bound = x.length() * y.length() + x.length() + y.length();
    const Occurrences tops = count_spans(q, host_of(q, x), bound, true);
    const Occurrences bottoms = count_spans(q, host_of(q, y), bound, false);
    long total = 0;
    for (const auto& [e, n] : tops.counts)
        if (auto it = bottoms.counts.find(e); it != bottoms.counts.end()) total += n * it->second;
    return total;
}

long hom_dim(const Quiver& q, const Item& x, int qx, const Item& y, int qy, bool same_parameter) {
    if (qx < 1 || qy < 1) throw std::invalid_argument("quasi-length must be positive");
    if ((x.is_string() && qx != 1) || (y.is_string() && qy != 1))
        throw std::invalid_argument("strings have quasi-length 1");
    long copies_x = 1, copies_y = 1;
    Item root_x = x, root_y = y;
    if (x.is_band() && !x.minimal()) {
        const BandRoot r = band_root(x.word());
        root_x = canonical_band(q, r.root);
        copies_x = r.power;
    }
    if (y.is_band() && !y.minimal()) {
        const BandRoot r = band_root(y.word());
        root_y = canonical_band(q, r.root);
        copies_y = r.power;
    }
    long total = pair_count(q, root_x, root_y) * qx * qy * copies_x * copies_y;
    if (same_parameter && root_x.is_band() && root_x == root_y && copies_x == 1 && copies_y == 1)
        total += std::min(qx, qy);
    return total;
}

long StringCounts::at(const Item& c) const {
    const auto it = entries.find(c);
    return it == entries.end() ? 0 : it->second;
}

HPrimeVector h_prime_vector(const Quiver& q, const Diagramme& d, int l_max) {
    HPrimeVector out;
    out.l_max = l_max;
    for (const auto& [item, mult] : d.items()) {
        const Host h = host_of(q, item);
        for (Span s : bottom_spans(h, l_max)) out.entries[canonical_string(q, substring(q, h, s))] += mult;
    }
    return out;
}

struct HEvaluator::Impl {
    detail::SuffixTrie trie;
};

HEvaluator::HEvaluator(const Quiver& q, const std::vector<HPrimeVector>& hps)
    : q_(q), impl_(std::make_unique<Impl>(Impl{detail::SuffixTrie(q.vertex_count(), hps.size())})) {
    for (std::size_t col = 0; col < hps.size(); ++col)
        for (const auto& [c, v] : hps[col].entries) impl_->trie.add(q, c.walk(), col, v);
}

HEvaluator::~HEvaluator() = default;

std::size_t HEvaluator::width() const { return impl_->trie.width(); }

void HEvaluator::for_each(int max_len, const Visitor& visit) const {
    const auto& trie = impl_->trie;
    const std::size_t n_cols = trie.width();
    const auto depth = static_cast<std::size_t>(max_len) + 1;
    std::vector<std::vector<long>> acc(depth, std::vector<long>(n_cols, 0));
    std::vector<std::vector<long>> suffix(depth, std::vector<long>(n_cols, 0));
    std::vector<long> h(n_cols);
    Walk w;

    // Sum of h' over substrings c_i..c_n that are top at their left end.
    auto suffix_sum = [&](std::size_t n, VertexId end, std::vector<long>& out) {
        std::fill(out.begin(), out.end(), 0);
        int node = trie.root(end);
        for (std::size_t i = n + 1;; --i) {
            if (i == 1 || w.letters[i - 2].direct) {
                const long* vals = trie.values(node);
                for (std::size_t c = 0; c < n_cols; ++c) out[c] += vals[c];
            }
            if (i == 1) break;
            node = trie.child(node, w.letters[i - 2]);
            if (node < 0) break;
        }
    };

    auto dfs = [&](auto& self, std::size_t n, VertexId end) -> void {
        suffix_sum(n, end, suffix[n]);
        if (n == 0 || !word_less(inverse(w.letters), w.letters)) {
            for (std::size_t c = 0; c < n_cols; ++c) h[c] = acc[n][c] + suffix[n][c];
            visit(w, h);
        }
        if (n == static_cast<std::size_t>(max_len)) return;
        for (ArrowId a = 0; a < static_cast<ArrowId>(q_.arrow_count()); ++a) {
            for (bool direct : {true, false}) {
                const Letter x{a, direct};
                if (q_.target(x) != end || (n > 0 && !q_.may_follow(w.letters.back(), x))) continue;
                for (std::size_t c = 0; c < n_cols; ++c)
                    acc[n + 1][c] = acc[n][c] + (direct ? 0 : suffix[n][c]);
                w.letters.push_back(x);
                self(self, n + 1, q_.source(x));
                w.letters.pop_back();
            }
        }
    };

    for (VertexId v = 0; v < static_cast<VertexId>(q_.vertex_count()); ++v) {
        w = Walk{{}, v};
        dfs(dfs, 0, v);
    }
}

HVector h_from_hprime(const Quiver& q, const HPrimeVector& hp) {
    HVector out;
    out.l_max = hp.l_max;
    HEvaluator eval(q, {hp});
    eval.for_each(hp.l_max, [&](const Walk& c, std::span<const long> h) {
        if (h[0] != 0) out.entries.emplace(canonical_string(q, c), h[0]);
    });
    return out;
}

HVector h_vector(const Quiver& q, const Diagramme& d, int l_max) {
    return h_from_hprime(q, h_prime_vector(q, d, l_max));
}

HPrimeVector hprime_from_h(const Quiver& q, const HVector& h) {
    HPrimeVector out;
    out.l_max = h.l_max;
    detail::SuffixTrie trie(q.vertex_count(), 1);
    // Entries are ordered by length, so every proper substring is settled first.
    for (const auto& [c, value] : h.entries) {
        const Host host = host_of(q, c);
        const int m = c.length();
        long covered = 0;
        for (int j = 1; j <= m + 1; ++j) {
            if (j <= m && host.word[j - 1].direct) continue;
            int node = trie.root(host_vertex(q, host, j));
            for (int i = j;; --i) {
                if ((i == 1 || host.word[i - 2].direct) && !(i == 1 && j == m + 1))
                    covered += trie.values(node)[0];
                if (i == 1) break;
                node = trie.child(node, host.word[i - 2]);
                if (node < 0) break;
            }
        }
        const long prime = value - covered;
        if (prime < 0)
            throw std::domain_error("h-vector is not realizable: negative entry at " + format_item(q, c));
        if (prime > 0) {
            out.entries.emplace(c, prime);
            trie.add(q, c.walk(), 0, prime);
        }
    }
    return out;
}

long h_entry(const Quiver& q, const HPrimeVector& hp, const Walk& c) {
    const Host host{ItemKind::String, c.letters, c.base};
    long total = 0;
    for (Span s : top_spans(host, static_cast<int>(c.length())))
        total += hp.at(canonical_string(q, substring(q, host, s)));
    return total;
}

nlohmann::ordered_json to_json(const Quiver& q, const StringCounts& v) {
    struct Row {
        int length;
        std::string key;
        long count;
    };
    std::vector<Row> rows;
    for (const auto& [c, n] : v.entries) rows.push_back({c.length(), format_item(q, c), n});
    std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
        return std::tie(a.length, a.key) < std::tie(b.length, b.key);
    });
    nlohmann::ordered_json entries = nlohmann::ordered_json::object();
    for (const Row& r : rows) entries[r.key] = r.count;
    nlohmann::ordered_json out;
    out["L_max"] = v.l_max;
    out["entries"] = std::move(entries);
    return out;
}

std::string_view to_string(Comparison c) {
    switch (c) {
        case Comparison::Equal: return "equal";
        case Comparison::LessOrEqual: return "less_or_equal";
        case Comparison::GreaterOrEqual: return "greater_or_equal";
        case Comparison::Incomparable: return "incomparable";
    }
    return "incomparable";
}

Comparison h_compare(const StringCounts& a, const StringCounts& b) {
    if (a.l_max != b.l_max) throw std::invalid_argument("h-vectors truncated at different lengths");
    bool le = true, ge = true;
    auto ia = a.entries.begin(), ib = b.entries.begin();
    while (ia != a.entries.end() || ib != b.entries.end()) {
        long va = 0, vb = 0;
        if (ib == b.entries.end() || (ia != a.entries.end() && ia->first < ib->first)) {
            va = (ia++)->second;
        } else if (ia == a.entries.end() || ib->first < ia->first) {
            vb = (ib++)->second;
        } else {
            va = (ia++)->second;
            vb = (ib++)->second;
        }
        le = le && va <= vb;
        ge = ge && va >= vb;
    }
    if (le && ge) return Comparison::Equal;
    if (le) return Comparison::LessOrEqual;
    if (ge) return Comparison::GreaterOrEqual;
    return Comparison::Incomparable;
}

int default_l_max(const DimVector& d) {
    const int total = std::accumulate(d.begin(), d.end(), 0);
    return total * total;
}

Walk arrow_projective_walk(const Quiver& q, ArrowId a) {
    const VertexId start = q.arrow(a).source;
    for (ArrowId b : q.outgoing(start))
        if (b != a) return make_walk(q, maximal_path(q, b));
    return {{}, start};
}

Item projective_string(const Quiver& q, VertexId v) {
    const std::vector<ArrowId> out = q.outgoing(v);
    if (out.empty()) return lazy_string(v);
    if (out.size() == 1) return canonical_string(q, make_walk(q, maximal_path(q, out[0])));
    Word w = maximal_path(q, out[0]);
    const Word tail = inverse(maximal_path(q, out[1]));
    w.insert(w.end(), tail.begin(), tail.end());
    return canonical_string(q, make_walk(q, std::move(w)));
}

RankFunction rank_function(const Quiver& q, const Diagramme& d) {
    std::vector<Walk> vertex_walks, arrow_walks;
    int bound = 0;
    for (VertexId v = 0; v < static_cast<VertexId>(q.vertex_count()); ++v) {
        vertex_walks.push_back(projective_string(q, v).walk());
        bound = std::max(bound, static_cast<int>(vertex_walks.back().length()));
    }
    for (ArrowId a = 0; a < static_cast<ArrowId>(q.arrow_count()); ++a) {
        arrow_walks.push_back(arrow_projective_walk(q, a));
        bound = std::max(bound, static_cast<int>(arrow_walks.back().length()));
    }
    const HPrimeVector hp = h_prime_vector(q, d, bound);
    RankFunction out;
    for (ArrowId a = 0; a < static_cast<ArrowId>(q.arrow_count()); ++a)
        out.push_back(static_cast<int>(h_entry(q, hp, vertex_walks[q.arrow(a).source]) -
                                       h_entry(q, hp, arrow_walks[a])));
    return out;
}

std::vector<std::size_t> maximal_rank_functions(const Quiver& q, const std::vector<Diagramme>& ds) {
    std::vector<RankFunction> ranks;
    for (const auto& d : ds) ranks.push_back(rank_function(q, d));
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < ranks.size(); ++i) {
        bool dominated = false;
        for (std::size_t j = 0; j < ranks.size() && !dominated; ++j) {
            if (ranks[j] == ranks[i]) continue;
            dominated = std::equal(ranks[i].begin(), ranks[i].end(), ranks[j].begin(),
                                   [](int lo, int hi) { return lo <= hi; });
        }
        if (!dominated) out.push_back(i);
    }
    return out;
}

}  // namespace gentle
