#include <algorithm>
#include <stdexcept>

#include "gentle/hom.hpp"

namespace gentle {

namespace {

std::string trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\n' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\n' || s.back() == '\t')) s.remove_suffix(1);
    return std::string(s);
}

}  // namespace

void Diagramme::add(const Quiver& q, const Item& item, int multiplicity) {
    if (multiplicity <= 0) throw std::invalid_argument("multiplicity must be positive");
    if (!item.minimal())
        throw std::invalid_argument("non-minimal band " + format_item(q, item) +
                                    " is not a diagramme item");
    if (dim_.empty()) dim_.assign(q.vertex_count(), 0);
    const DimVector d = dimension_vector(q, item);
    for (std::size_t v = 0; v < d.size(); ++v) dim_[v] += multiplicity * d[v];
    items_[item] += multiplicity;
}

void Diagramme::remove(const Quiver& q, const Item& item, int multiplicity) {
    auto it = items_.find(item);
    if (multiplicity <= 0 || it == items_.end() || it->second < multiplicity)
        throw std::invalid_argument("cannot remove " + format_item(q, item));
    const DimVector d = dimension_vector(q, item);
    for (std::size_t v = 0; v < d.size(); ++v) dim_[v] -= multiplicity * d[v];
    if ((it->second -= multiplicity) == 0) items_.erase(it);
}

int Diagramme::multiplicity(const Item& item) const {
    const auto it = items_.find(item);
    return it == items_.end() ? 0 : it->second;
}

int Diagramme::size() const {
    int n = 0;
    for (const auto& [item, mult] : items_) n += mult;
    return n;
}

bool Diagramme::all_bands() const {
    return std::all_of(items_.begin(), items_.end(), [](const auto& e) { return e.first.is_band(); });
}

Diagramme disjoint_union(const Quiver& q, const Diagramme& a, const Diagramme& b) {
    Diagramme out = a;
    for (const auto& [item, mult] : b.items()) out.add(q, item, mult);
    return out;
}

std::string format_diagramme(const Quiver& q, const Diagramme& d) {
    std::vector<std::string> parts;
    for (const auto& [item, mult] : d.items())
        parts.push_back(format_item(q, item) + (mult > 1 ? "^x" + std::to_string(mult) : ""));
    std::sort(parts.begin(), parts.end());
    std::string out = "{";
    for (std::size_t k = 0; k < parts.size(); ++k) out += (k ? ", " : "") + parts[k];
    return out + "}";
}

Diagramme parse_diagramme(const Quiver& q, std::string_view text) {
    std::string t = trim(text);
    if (t.size() >= 2 && t.front() == '{' && t.back() == '}') t = trim(std::string_view(t).substr(1, t.size() - 2));
    Diagramme d;
    if (t.empty()) return d;
    std::size_t pos = 0;
    while (pos <= t.size()) {
        const std::size_t comma = std::min(t.find(',', pos), t.size());
        std::string token = trim(std::string_view(t).substr(pos, comma - pos));
        if (token.empty()) throw std::invalid_argument("empty item in diagramme '" + std::string(text) + "'");
        int mult = 1;
        if (const auto hat = token.rfind("^x"); hat != std::string::npos) {
            try {
                std::size_t used = 0;
                mult = std::stoi(token.substr(hat + 2), &used);
                if (used != token.size() - hat - 2) throw std::invalid_argument("");
            } catch (const std::exception&) {
                throw std::invalid_argument("bad multiplicity in '" + token + "'");
            }
            token = trim(std::string_view(token).substr(0, hat));
        }
        d.add(q, parse_item(q, token), mult);
        pos = comma + 1;
    }
    return d;
}

}  // namespace gentle
