#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "gentle/poset.hpp"

namespace fixtures {

inline std::filesystem::path data(const std::string& name) { return std::filesystem::path(GENTLE_DATA_DIR) / name; }

inline gentle::Quiver load(const std::string& name) { return gentle::Quiver::load(data(name + ".json")); }

inline std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

inline gentle::Diagramme diag(const gentle::Quiver& q, const char* text) { return gentle::parse_diagramme(q, text); }
inline gentle::Item item(const gentle::Quiver& q, const char* text) { return gentle::parse_item(q, text); }
inline std::string fmt(const gentle::Quiver& q, const gentle::Diagramme& d) { return gentle::format_diagramme(q, d); }

}  // namespace fixtures
