#include "gentle/moves.hpp"

#include <algorithm>
#include <map>

namespace gentle {

namespace {

int mod(int a, int m) { return ((a % m) + m) % m; }

Word slice(const Word& w, int from, int to) {  // 0-based [from, to)
    return {w.begin() + from, w.begin() + to};
}

Word concat(Word a, const Word& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

std::optional<Item> string_item(const Quiver& q, const Word& w, VertexId base_if_empty) {
    if (w.empty()) return lazy_string(base_if_empty);
    try {
        if (!is_valid_word(q, w)) return std::nullopt;
    } catch (const CompositionError&) {
        return std::nullopt;
    }
    return canonical_string(q, make_walk(q, w));
}

std::optional<Item> band_item(const Quiver& q, const Word& w) {
    if (w.size() < 2) return std::nullopt;
    try {
        if (!is_valid_word(q, w) || !q.composable(w.back(), w.front()) || !is_valid_cycle(q, w))
            return std::nullopt;
    } catch (const CompositionError&) {
        return std::nullopt;
    }
    return canonical_band(q, w);
}

int pair_bound(const Item& x, const Item& y) {
    if (x.is_string() && y.is_string()) return std::min(x.length(), y.length());
    if (x.is_string()) return x.length();
    if (y.is_string()) return y.length();
    return x.length() * y.length() + x.length() + y.length();
}

bool same_class(const Walk& a, const Walk& b) {
    if (a.length() != b.length()) return false;
    if (a.empty()) return a.base == b.base;
    return a.letters == b.letters || a.letters == inverse(b.letters);
}

void check_dim(const Diagramme& low, const Diagramme& high) {
    if (low.dim() != high.dim()) throw std::logic_error("move changed the dimension vector");
}

std::string kind_name(const Reaching& r) {
    switch (r.kind) {
        case ReachingKind::AutoIntersecting: return "auto-int";
        case ReachingKind::AutoNonIntersecting: return "auto-nonint";
        case ReachingKind::Pair: break;
    }
    if (r.top_item.is_string() && r.bottom_item.is_string()) return "resolve-pair";
    if (r.top_item.is_band() && r.bottom_item.is_band()) return "resolve-band-band";
    return "resolve-string-band";
}

void find_pair(const Quiver& q, const Item& x, const Item& y, std::vector<Reaching>& out) {
    const int bound = pair_bound(x, y);
    const Host hx = host_of(q, x);
    const std::vector<Span> tops = top_spans(hx, bound);
    for (bool flip : {false, true}) {
        if (flip && y.is_lazy()) continue;
        const Host hy = host_of(q, y, flip);
        const int mx = hx.length(), my = hy.length();
        for (Span t : tops) {
            const Walk e = substring(q, hx, t);
            for (Span b : bottom_spans(hy, bound)) {
                if (b.length() != t.length()) continue;
                const Walk e2 = substring(q, hy, b);
                if (e.letters != e2.letters || (e.empty() && e.base != e2.base)) continue;
                if (x.is_string() && y.is_string()) {
                    if (b.i == 1 && t.i == 1) continue;
                    if (b.j == my + 1 && t.j == mx + 1) continue;
                }
                Reaching r;
                r.kind = ReachingKind::Pair;
                r.top_item = x;
                r.bottom_item = y;
                r.top_host = hx;
                r.bottom_host = hy;
                r.top = t;
                r.bottom = b;
                r.e = e;
                r.bottom_flipped = flip;
                r.positions = {t.i, t.j, b.i, b.j};
                if (resolutions(q, r).empty()) {
                    if (!e.empty())
                        throw std::logic_error("reaching along " + format_walk(q, e) +
                                               " does not resolve");
                    continue;
                }
                out.push_back(std::move(r));
            }
        }
    }
    // Length-0 reachings should resolve in exactly one orientation; flag the others.
    std::map<std::pair<int, int>, int> seen;
    auto key = [&](const Reaching& r) {
        const int my = r.bottom_host.length();
        int p = r.bottom.i;
        if (r.bottom_flipped) p = y.is_band() ? mod(my + 1 - p, my) + 1 : my + 2 - p;
        return std::pair{r.top.i, p};
    };
    for (const auto& r : out) if (r.e.empty()) ++seen[key(r)];
    for (auto& r : out) if (r.e.empty() && seen[key(r)] > 1) r.orientation_ambiguous = true;
}

void find_auto(const Quiver& q, const Item& x, std::vector<Reaching>& out) {
    if (x.is_lazy()) return;
    const Host h = host_of(q, x);
    const int m = h.length();
    const int bound = x.is_band() ? m - 2 : m;
    if (bound < 0) return;
    const auto tops = top_spans(h, bound);
    const auto bottoms = bottom_spans(h, bound);
    for (Span t : tops) {
        const Walk e = substring(q, h, t);
        for (Span b : bottoms) {
            if (b == t || b.length() != t.length()) continue;
            const Walk e2 = substring(q, h, b);
            if (!same_class(e, e2)) continue;
            Reaching r;
            r.top_item = r.bottom_item = x;
            r.e = e;
            r.same_orientation = e.letters == e2.letters;
            r.positions = {t.i, t.j, b.i, b.j};
            if (x.is_string()) {
                if (b.i == 1 && t.i == 1) continue;
                if (b.j == m + 1 && t.j == m + 1) continue;
                r.top_host = r.bottom_host = h;
                r.top = t;
                r.bottom = b;
            } else {
                if (mod(b.i - t.i, m) == 0) continue;
                bool placed = false;
                for (int start : {t.i, b.i}) {
                    const int ti = mod(t.i - start, m) + 1, bi = mod(b.i - start, m) + 1;
                    const Span tw{ti, ti + t.length()}, bw{bi, bi + b.length()};
                    if (tw.j > m + 1 || bw.j > m + 1) continue;
                    r.top_host = r.bottom_host = rotated(q, h, start);
                    r.top = tw;
                    r.bottom = bw;
                    placed = true;
                    break;
                }
                if (!placed) continue;
            }
            r.kind = intersecting(r.top, r.bottom) ? ReachingKind::AutoIntersecting
                                                   : ReachingKind::AutoNonIntersecting;
            out.push_back(std::move(r));
        }
    }
}

struct Layout {
    Span first, second;
    Word w;
    bool band = false;
};

Layout layout(const Reaching& r) {
    Layout out;
    out.first = r.top.i < r.bottom.i ? r.top : r.bottom;
    out.second = r.top.i < r.bottom.i ? r.bottom : r.top;
    out.w = r.top_host.word;
    out.band = r.top_host.is_band();
    return out;
}

void add_reduced(const Quiver& q, Diagramme& d, const Item& item, int mult = 1) {
    if (item.is_band() && !item.minimal()) {
        const Diagramme reduced = reduce_nonminimal(q, item, mult);
        for (const auto& [it, n] : reduced.items()) d.add(q, it, n);
    } else {
        d.add(q, item, mult);
    }
}

}  // namespace

Diagramme delete_arrow(const Quiver& q, const Item& item, int k) {
    if (k < 1 || k > item.length()) throw std::out_of_range("arrow position out of range");
    const Host h = host_of(q, item);
    const Word& w = h.word;
    Diagramme out;
    if (item.is_string()) {
        out.add(q, *string_item(q, slice(w, 0, k - 1), h.base));
        out.add(q, *string_item(q, slice(w, k, item.length()), host_vertex(q, h, k + 1)));
    } else {
        const Word cut = concat(slice(w, k, item.length()), slice(w, 0, k - 1));
        out.add(q, *string_item(q, cut, host_vertex(q, h, k + 1)));
    }
    return out;
}

std::vector<Reaching> find_reachings(const Quiver& q, const Item& top_item,
                                     const Item& bottom_item, bool auto_reaching) {
    std::vector<Reaching> out;
    if (auto_reaching) {
        if (top_item != bottom_item) throw std::invalid_argument("auto-reaching needs one item");
        find_auto(q, top_item, out);
    } else {
        find_pair(q, top_item, bottom_item, out);
    }
    return out;
}

bool intersecting(Span top, Span bottom) {
    return (top.i < bottom.i && bottom.i <= top.j && top.j < bottom.j) ||
           (bottom.i < top.i && top.i <= bottom.j && bottom.j < top.j);
}

ReachingKind classify_auto(const Reaching& r) {
    if (r.kind == ReachingKind::Pair) throw std::invalid_argument("not an auto-reaching");
    return intersecting(r.top, r.bottom) ? ReachingKind::AutoIntersecting
                                         : ReachingKind::AutoNonIntersecting;
}

std::optional<std::vector<Item>> resolve_pair(const Quiver& q, const Reaching& r) {
    const Word& x = r.top_host.word;
    const Word& y = r.bottom_host.word;
    const int j = r.top.j, b = r.bottom.j;
    const VertexId join = host_vertex(q, r.top_host, j);
    auto r1 = string_item(q, concat(slice(x, 0, j - 1), slice(y, b - 1, r.bottom_host.length())), join);
    auto r2 = string_item(q, concat(slice(y, 0, b - 1), slice(x, j - 1, r.top_host.length())), join);
    if (!r1 || !r2) return std::nullopt;
    return std::vector<Item>{*r1, *r2};
}

std::optional<Item> resolve_string_band(const Quiver& q, const Reaching& r) {
    if (r.top_host.is_band()) {
        const Word& y = r.bottom_host.word;
        const int b = r.bottom.j, m = r.top_host.length();
        const Word spliced = concat(concat(slice(y, 0, b - 1), band_slice(r.top_host, r.top.j, r.top.j + m)),
                                    slice(y, b - 1, r.bottom_host.length()));
        return string_item(q, spliced, 0);
    }
    const Word& x = r.top_host.word;
    const int j = r.top.j, m = r.bottom_host.length();
    const Word spliced = concat(concat(slice(x, 0, j - 1), band_slice(r.bottom_host, r.bottom.j, r.bottom.j + m)),
                                slice(x, j - 1, r.top_host.length()));
    return string_item(q, spliced, 0);
}

std::optional<Item> resolve_band_band(const Quiver& q, const Reaching& r) {
    const Word cycle = concat(band_slice(r.top_host, r.top.i, r.top.i + r.top_host.length()),
                              band_slice(r.bottom_host, r.bottom.i, r.bottom.i + r.bottom_host.length()));
    return band_item(q, cycle);
}

std::vector<Item> resolve_auto_intersecting(const Quiver& q, const Reaching& r) {
    const Layout lay = layout(r);
    const Word& w = lay.w;
    const int m = static_cast<int>(w.size());
    const Span f = lay.first, s = lay.second;
    if (!r.same_orientation)
        throw std::logic_error("intersecting auto-reaching with opposite orientations");
    const int shift = s.i - f.i;
    for (int k = s.i; k < f.j; ++k)
        if (w[k - 1] != w[k - 1 - shift])
            throw std::logic_error("intersecting auto-reaching is not periodic");
    const auto extracted = band_item(q, slice(w, f.j - 1, s.j - 1));
    std::optional<Item> rest;
    if (lay.band) rest = band_item(q, band_slice(r.top_host, s.j, f.j + m));
    else rest = string_item(q, concat(slice(w, 0, f.j - 1), slice(w, s.j - 1, m)), r.top_host.base);
    if (!extracted || !rest) throw std::logic_error("intersecting auto-reaching does not resolve");
    return {*rest, *extracted};
}

std::vector<Resolution> resolve_auto_nonintersecting(const Quiver& q, const Reaching& r) {
    const Layout lay = layout(r);
    const Word& w = lay.w;
    const int m = static_cast<int>(w.size());
    const Span f = lay.first, s = lay.second;
    const int e_len = f.length();
    const Word x = slice(w, 0, f.j - 1);
    const Word mid = slice(w, f.j - 1, s.i - 1);
    const Word z = slice(w, s.i - 1, m);
    const Word e = slice(w, f.i - 1, f.j - 1);
    auto single = [&](const Word& word) -> std::optional<std::vector<Item>> {
        auto item = lay.band ? band_item(q, word) : string_item(q, word, r.top_host.base);
        if (!item) return std::nullopt;
        return std::vector<Item>{*item};
    };

    std::vector<Resolution> out;
    auto push = [&](std::string variant, std::optional<std::vector<Item>> items) {
        if (!items) return;
        std::sort(items->begin(), items->end());
        for (const auto& prev : out)
            if (prev.items == *items) return;
        out.push_back({std::move(variant), std::move(*items)});
    };

    if (e_len == 0 || r.same_orientation) {
        const Word joined = concat(x, slice(z, e_len, static_cast<int>(z.size())));
        const auto loop = band_item(q, concat(mid, e));
        const auto rest = lay.band ? band_item(q, joined) : string_item(q, joined, r.top_host.base);
        if (loop && rest) push("crosswise", std::vector<Item>{*rest, *loop});
    }
    if (e_len == 0 || !r.same_orientation) push("reversal", single(concat(concat(x, inverse(mid)), z)));
    // On strings both outer arms must be present; otherwise the swap only rotates a closed walk.
    const bool arms = lay.band || (f.i > 1 && s.j < m + 1);
    if (r.same_orientation && arms) {
        const int len = static_cast<int>(mid.size());
        if (e_len == 0) {
            const VertexId at = host_vertex(q, r.top_host, f.j);
            for (int k = 1; k < len; ++k)
                if (host_vertex(q, r.top_host, f.j + k) == at)
                    push("block-swap",
                         single(concat(concat(concat(x, slice(mid, k, len)), slice(mid, 0, k)), z)));
        } else {
            for (int k = 1; k + e_len < len; ++k) {
                if (slice(mid, k, k + e_len) != e) continue;
                const Word swapped = concat(concat(concat(x, slice(mid, k + e_len, len)), e), slice(mid, 0, k));
                push("block-swap", single(concat(swapped, z)));
            }
        }
    }
    if (out.empty())
        throw NonexistentResolution("no rewiring of the auto-reaching along " + format_walk(q, r.e) +
                                    " is a valid walk");
    return out;
}

std::vector<Resolution> resolutions(const Quiver& q, const Reaching& r) {
    switch (r.kind) {
        case ReachingKind::AutoIntersecting: return {{"intersecting", resolve_auto_intersecting(q, r)}};
        case ReachingKind::AutoNonIntersecting: return resolve_auto_nonintersecting(q, r);
        case ReachingKind::Pair: break;
    }
    const bool top_band = r.top_host.is_band(), bottom_band = r.bottom_host.is_band();
    if (!top_band && !bottom_band) {
        if (auto items = resolve_pair(q, r)) return {{"splice", std::move(*items)}};
    } else if (top_band && bottom_band) {
        if (auto item = resolve_band_band(q, r)) return {{"splice", {*item}}};
    } else if (auto item = resolve_string_band(q, r)) {
        return {{"splice", {*item}}};
    }
    return {};
}

Diagramme reduce_nonminimal(const Quiver& q, const Item& band, int multiplicity) {
    if (!band.is_band()) throw std::invalid_argument("reduce_nonminimal needs a band");
    const BandRoot root = band_root(band.word());
    Diagramme out;
    out.add(q, canonical_band(q, root.root), root.power * multiplicity);
    return out;
}

Diagramme resolve_in_multiset(const Quiver& q, const Diagramme& d, const Reaching& r,
                              const Resolution& resolution) {
    Diagramme out = d;
    out.remove(q, r.top_item);
    if (r.kind == ReachingKind::Pair) out.remove(q, r.bottom_item);
    for (const Item& item : resolution.items) add_reduced(q, out, item);
    return out;
}

Diagramme resolve_in_multiset(const Quiver& q, const Diagramme& d, const Reaching& r,
                              const std::string& variant) {
    const auto all = resolutions(q, r);
    auto chosen = all.begin();
    if (!variant.empty())
        chosen = std::find_if(all.begin(), all.end(), [&](const Resolution& x) { return x.variant == variant; });
    if (chosen == all.end()) throw std::invalid_argument("reaching has no resolution '" + variant + "'");
    return resolve_in_multiset(q, d, r, *chosen);
}

nlohmann::ordered_json to_json(const MoveDescriptor& m) {
    nlohmann::ordered_json j;
    j["kind"] = m.kind;
    if (!m.variant.empty()) j["variant"] = m.variant;
    j["item"] = m.items;
    j["positions"] = m.positions;
    j["E"] = m.e;
    if (m.reduced_nonminimal) j["reduced"] = true;
    return j;
}

MoveDescriptor move_descriptor_from_json(const nlohmann::json& j) {
    MoveDescriptor m;
    m.kind = j.at("kind").get<std::string>();
    m.variant = j.value("variant", std::string{});
    m.items = j.at("item").get<std::vector<std::string>>();
    m.positions = j.at("positions").get<std::array<int, 4>>();
    m.e = j.at("E").get<std::string>();
    m.reduced_nonminimal = j.value("reduced", false);
    return m;
}

std::vector<Move> all_moves(const Quiver& q, const Diagramme& d, bool resolutions_only) {
    std::vector<Move> out;
    std::vector<Item> items;
    for (const auto& [item, mult] : d.items()) items.push_back(item);

    if (!resolutions_only) {
        for (const Item& x : items) {
            for (int k = 1; k <= x.length(); ++k) {
                Diagramme high = d;
                high.remove(q, x);
                const Diagramme pieces = delete_arrow(q, x, k);
                for (const auto& [it, n] : pieces.items()) high.add(q, it, n);
                check_dim(d, high);
                out.push_back({{"delete", "", {format_item(q, x)}, {k, 0, 0, 0}, "", false}, d, std::move(high)});
            }
        }
    }

    auto emit = [&](const Reaching& r) {
        for (const Resolution& res : resolutions(q, r)) {
            Diagramme low = resolve_in_multiset(q, d, r, res);
            check_dim(low, d);
            if (low == d) continue;
            MoveDescriptor desc;
            desc.kind = kind_name(r);
            desc.variant = res.variant;
            desc.items = {format_item(q, r.top_item)};
            if (r.kind == ReachingKind::Pair) desc.items.push_back(format_item(q, r.bottom_item));
            desc.positions = r.positions;
            desc.e = format_item(q, canonical_string(q, r.e));
            desc.reduced_nonminimal = std::any_of(res.items.begin(), res.items.end(),
                                                  [](const Item& it) { return !it.minimal(); });
            out.push_back({std::move(desc), std::move(low), d});
        }
    };

    for (const Item& x : items) {
        for (const Item& y : items) {
            if (x == y && d.multiplicity(x) < 2) continue;
            for (const Reaching& r : find_reachings(q, x, y, false)) emit(r);
        }
        for (const Reaching& r : find_reachings(q, x, x, true)) emit(r);
    }
    return out;
}

}  // namespace gentle
