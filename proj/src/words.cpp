#include "gentle/words.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>
#include <stdexcept>

namespace gentle {

namespace {

bool key_less(const Word& a, const Word& b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

bool composes(const Quiver& q, const Word& w) {
    for (std::size_t k = 0; k + 1 < w.size(); ++k)
        if (!q.composable(w[k], w[k + 1])) return false;
    return true;
}

std::string trim(std::string_view s) {
    while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
    while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
    return std::string(s);
}

int mod(int a, int m) { return ((a % m) + m) % m; }

}  // namespace

bool Item::minimal() const { return kind_ == ItemKind::String || band_root(word_).power == 1; }

std::strong_ordering operator<=>(const Item& a, const Item& b) {
    if (auto c = a.kind_ <=> b.kind_; c != 0) return c;
    if (auto c = a.word_.size() <=> b.word_.size(); c != 0) return c;
    if (auto c = std::lexicographical_compare_three_way(a.word_.begin(), a.word_.end(),
                                                       b.word_.begin(), b.word_.end());
        c != 0)
        return c;
    return a.base_ <=> b.base_;
}

Item canonical_string(const Quiver& q, const Walk& w) {
    bool ok = false;
    try {
        ok = is_valid_walk(q, w);
    } catch (const CompositionError& e) {
        throw std::invalid_argument(std::string("not a string: ") + e.what());
    }
    if (!ok) throw std::invalid_argument("not a string: " + format_walk(q, w));
    if (w.empty()) return Item(ItemKind::String, {}, w.base);
    Word inv = inverse(w.letters);
    if (key_less(inv, w.letters)) return Item(ItemKind::String, inv, q.target(inv.front()));
    return Item(ItemKind::String, w.letters, w.base);
}

Item lazy_string(VertexId v) { return Item(ItemKind::String, {}, v); }

Item canonical_band(const Quiver& q, const Word& w) {
    if (w.size() < 2) throw std::invalid_argument("a band needs at least two letters");
    if (!composes(q, w) || !q.composable(w.back(), w.front()))
        throw std::invalid_argument("band letters do not close up: " + format_word(q, w));
    if (!is_valid_cycle(q, w)) throw std::invalid_argument("not a band: " + format_word(q, w));
    Word best = w;
    for (const Word& x : {w, inverse(w)}) {
        for (std::size_t r = 0; r < x.size(); ++r) {
            Word rot(x.begin() + static_cast<std::ptrdiff_t>(r), x.end());
            rot.insert(rot.end(), x.begin(), x.begin() + static_cast<std::ptrdiff_t>(r));
            if (key_less(rot, best)) best = std::move(rot);
        }
    }
    const VertexId base = q.target(best.front());
    return Item(ItemKind::Band, std::move(best), base);
}

BandRoot band_root(const Word& w) {
    const auto m = w.size();
    for (std::size_t p = 1; p < m; ++p) {
        if (m % p) continue;
        bool periodic = true;
        for (std::size_t k = p; k < m && periodic; ++k) periodic = w[k] == w[k - p];
        if (periodic) return {Word(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(p)),
                              static_cast<int>(m / p)};
    }
    return {w, 1};
}

DimVector dimension_vector(const Quiver& q, const Walk& w) {
    DimVector d(q.vertex_count(), 0);
    for (VertexId v : walk_vertices(q, w)) ++d[v];
    return d;
}

DimVector dimension_vector(const Quiver& q, const Item& item) {
    if (item.is_string()) return dimension_vector(q, item.walk());
    DimVector d(q.vertex_count(), 0);
    for (Letter l : item.word()) ++d[q.target(l)];
    return d;
}

std::string format_item(const Quiver& q, const Item& item) {
    if (item.is_band()) return "(" + format_word(q, item.word()) + ")";
    return format_walk(q, item.walk());
}

Item parse_item(const Quiver& q, std::string_view text) {
    const std::string t = trim(text);
    if (t.size() >= 2 && t.front() == '(' && t.back() == ')')
        return canonical_band(q, parse_word(q, std::string_view(t).substr(1, t.size() - 2)));
    Walk w;
    try {
        w = parse_walk(q, t);
    } catch (const CompositionError& e) {
        throw std::invalid_argument("'" + t + "': " + e.what());
    }
    return canonical_string(q, w);
}

Item resolve_letter_list(const Quiver& q, const std::vector<std::string>& arrows, ItemKind kind) {
    if (arrows.empty()) throw std::invalid_argument("empty letter list");
    if (arrows.size() > 24) throw std::invalid_argument("letter list too long");
    Word base;
    for (const auto& name : arrows) {
        const auto a = q.find_arrow(name);
        if (!a) throw std::invalid_argument("unknown arrow '" + name + "'");
        base.push_back({*a, true});
    }
    std::set<Item> found;
    for (unsigned mask = 0; mask < (1u << base.size()); ++mask) {
        Word w = base;
        for (std::size_t k = 0; k < w.size(); ++k) w[k].direct = !((mask >> k) & 1u);
        if (!composes(q, w)) continue;
        if (kind == ItemKind::String) {
            if (is_valid_word(q, w)) found.insert(canonical_string(q, make_walk(q, w)));
        } else if (w.size() >= 2 && q.composable(w.back(), w.front()) && is_valid_cycle(q, w)) {
            found.insert(canonical_band(q, w));
        }
    }
    std::string list;
    for (const auto& n : arrows) list += (list.empty() ? "" : ",") + n;
    if (found.empty())
        throw std::invalid_argument("no inversion assignment of [" + list + "] gives a valid " +
                                    (kind == ItemKind::String ? "string" : "band"));
    if (found.size() > 1) {
        std::string alts;
        for (const auto& it : found) alts += (alts.empty() ? "" : " | ") + format_item(q, it);
        throw std::invalid_argument("ambiguous letter list [" + list + "]: " + alts);
    }
    return *found.begin();
}

Host host_of(const Quiver& q, const Item& item, bool flipped) {
    if (!flipped || item.is_lazy()) return {item.kind(), item.word(), item.base()};
    Word w = inverse(item.word());
    const VertexId base = q.target(w.front());
    return {item.kind(), std::move(w), base};
}

Host rotated(const Quiver& q, const Host& band, int start) {
    Word w = band_slice(band, start, start + band.length());
    const VertexId base = q.target(w.front());
    return {ItemKind::Band, std::move(w), base};
}

Letter host_letter(const Host& h, int k) {
    if (h.is_band()) return h.word[static_cast<std::size_t>(mod(k - 1, h.length()))];
    if (k < 1 || k > h.length()) throw std::out_of_range("letter position outside string");
    return h.word[static_cast<std::size_t>(k - 1)];
}

VertexId host_vertex(const Quiver& q, const Host& h, int p) {
    if (h.word.empty()) return h.base;
    if (h.is_band()) return q.target(host_letter(h, p));
    if (p == h.length() + 1) return q.source(h.word.back());
    return q.target(host_letter(h, p));
}

Word band_slice(const Host& h, int from, int to) {
    Word out;
    out.reserve(static_cast<std::size_t>(std::max(0, to - from)));
    for (int k = from; k < to; ++k) out.push_back(host_letter(h, k));
    return out;
}

Walk substring(const Quiver& q, const Host& h, Span s) {
    if (!h.is_band() && (s.i < 1 || s.j > h.length() + 1 || s.i > s.j))
        throw std::out_of_range("span outside string");
    return {band_slice(h, s.i, s.j), host_vertex(q, h, s.i)};
}

bool is_top(const Host& h, Span s) {
    const int m = h.length();
    const bool left = (!h.is_band() && s.i == 1) || host_letter(h, s.i - 1).direct;
    const bool right = (!h.is_band() && s.j == m + 1) || !host_letter(h, s.j).direct;
    return left && right;
}

bool is_bottom(const Host& h, Span s) {
    const int m = h.length();
    const bool left = (!h.is_band() && s.i == 1) || !host_letter(h, s.i - 1).direct;
    const bool right = (!h.is_band() && s.j == m + 1) || host_letter(h, s.j).direct;
    return left && right;
}

namespace {
std::vector<Span> spans_where(const Host& h, int max_len, bool top) {
    std::vector<Span> out;
    const int m = h.length();
    if (!h.is_band()) {
        for (int i = 1; i <= m + 1; ++i)
            for (int j = i; j <= std::min(m + 1, i + max_len); ++j)
                if (top ? is_top(h, {i, j}) : is_bottom(h, {i, j})) out.push_back({i, j});
        return out;
    }
    for (int i = 1; i <= m; ++i)
        for (int j = i; j <= i + max_len; ++j)
            if (top ? is_top(h, {i, j}) : is_bottom(h, {i, j})) out.push_back({i, j});
    return out;
}
}  // namespace

std::vector<Span> top_spans(const Host& h, int max_len) { return spans_where(h, max_len, true); }
std::vector<Span> bottom_spans(const Host& h, int max_len) { return spans_where(h, max_len, false); }

ReducedSubstring substring_red(const Quiver& q, const Host& band, Span s) {
    if (!band.is_band()) throw std::invalid_argument("substring_red needs a band host");
    const int m = band.length();
    const int len = s.length();
    const int periods = len / m;
    const int red = len % m;
    const int start = mod(s.i - 1, m) + 1;
    if (start + red <= m + 1) return {band, {start, start + red}, periods};
    return {rotated(q, band, start), {1, 1 + red}, periods};
}

std::vector<Item> enumerate_strings(const Quiver& q, const DimVector& bound) {
    std::set<Item> out;
    const auto n = q.vertex_count();
    if (bound.size() != n) throw std::invalid_argument("dimension bound has wrong size");
    for (VertexId v = 0; v < static_cast<VertexId>(n); ++v)
        if (bound[v] >= 1) out.insert(canonical_string(q, Walk{{}, v}));
    DimVector dims(n, 0);
    Word w;
    std::function<void()> extend = [&] {
        out.insert(canonical_string(q, make_walk(q, w)));
        for (ArrowId a = 0; a < static_cast<ArrowId>(q.arrow_count()); ++a) {
            for (bool direct : {true, false}) {
                const Letter x{a, direct};
                if (!q.may_follow(w.back(), x)) continue;
                const VertexId v = q.source(x);
                if (dims[v] + 1 > bound[v]) continue;
                ++dims[v];
                w.push_back(x);
                extend();
                w.pop_back();
                --dims[v];
            }
        }
    };
    for (ArrowId a = 0; a < static_cast<ArrowId>(q.arrow_count()); ++a) {
        for (bool direct : {true, false}) {
            const Letter x{a, direct};
            std::fill(dims.begin(), dims.end(), 0);
            ++dims[q.target(x)];
            ++dims[q.source(x)];
            if (dims[q.target(x)] > bound[q.target(x)] || dims[q.source(x)] > bound[q.source(x)])
                continue;
            w = {x};
            extend();
        }
    }
    return {out.begin(), out.end()};
}

std::vector<Item> enumerate_minimal_bands(const Quiver& q, const DimVector& bound) {
    std::set<Item> out;
    const auto n = q.vertex_count();
    if (bound.size() != n) throw std::invalid_argument("dimension bound has wrong size");
    const int max_len = std::accumulate(bound.begin(), bound.end(), 0);
    DimVector prefix(n, 0);  // visits of p_1..p_k for a walk of length k
    Word w;
    std::function<void()> extend = [&] {
        const VertexId end = q.source(w.back());
        if (w.size() >= 2 && end == q.target(w.front()) && q.may_follow(w.back(), w.front())) {
            Item b = canonical_band(q, w);
            if (b.minimal()) out.insert(std::move(b));
        }
        if (static_cast<int>(w.size()) >= max_len || prefix[end] + 1 > bound[end]) return;
        ++prefix[end];
        for (ArrowId a = 0; a < static_cast<ArrowId>(q.arrow_count()); ++a) {
            for (bool direct : {true, false}) {
                const Letter x{a, direct};
                if (!q.may_follow(w.back(), x)) continue;
                w.push_back(x);
                extend();
                w.pop_back();
            }
        }
        --prefix[end];
    };
    for (ArrowId a = 0; a < static_cast<ArrowId>(q.arrow_count()); ++a) {
        for (bool direct : {true, false}) {
            const Letter x{a, direct};
            std::fill(prefix.begin(), prefix.end(), 0);
            if (bound[q.target(x)] < 1) continue;
            ++prefix[q.target(x)];
            w = {x};
            extend();
        }
    }
    return {out.begin(), out.end()};
}

int distinct_band_power_bound(const Quiver& q, const Item& b, const Item& b2) {
    if (!b.is_band() || !b2.is_band() || !b.minimal() || !b2.minimal())
        throw std::invalid_argument("distinct_band_power_bound needs minimal bands");
    if (b == b2) throw std::invalid_argument("distinct_band_power_bound needs distinct bands");
    const DimVector d1 = dimension_vector(q, b), d2 = dimension_vector(q, b2);
    bool shared = false;
    for (std::size_t v = 0; v < d1.size(); ++v) shared = shared || (d1[v] && d2[v]);
    if (!shared) return 1;
    const int m = b2.length();
    // Verify that no rotation of b^m (either orientation) is a factor of b2's unraveling;
    // containment of b^n for n > m would contain b^m.
    const int len = m * b.length();
    const Host h2 = host_of(q, b2);
    for (bool flip : {false, true}) {
        const Host h1 = host_of(q, b, flip);
        for (int r = 1; r <= h1.length(); ++r) {
            const Word power = band_slice(h1, r, r + len);
            for (int i = 1; i <= m; ++i)
                if (band_slice(h2, i, i + len) == power)
                    throw std::logic_error("band power bound failed verification");
        }
    }
    return m;
}

}  // namespace gentle
