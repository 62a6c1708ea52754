#include "gentle/cli.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <CLI11.hpp>

#include "gentle/oracle.hpp"
#include "gentle/poset.hpp"
#include "gentle/verify.hpp"

namespace gentle {

namespace {

struct RunConfig {
    std::string algebra;
    std::string dim;
    std::optional<int> l_max;
    std::string format = "text";
    std::uint64_t seed = 0;
    int jobs = 1;
    bool restricted = false;
    bool show_h = false;
};

class UsageError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

DimVector parse_dim(const Quiver& q, const std::string& text) {
    DimVector d;
    std::stringstream in(text);
    std::string part;
    while (std::getline(in, part, ',')) {
        try {
            std::size_t used = 0;
            const int x = std::stoi(part, &used);
            if (used != part.size() || x < 0) throw std::invalid_argument(part);
            d.push_back(x);
        } catch (const std::logic_error&) {
            throw UsageError("bad dimension vector entry '" + part + "'");
        }
    }
    if (d.size() != q.vertex_count())
        throw UsageError("dimension vector needs " + std::to_string(q.vertex_count()) + " entries");
    return d;
}

Quiver load_gentle(const std::string& path) {
    Quiver q = Quiver::load(path);
    const ValidationReport r = validate_gentle(q);
    if (!r.ok) throw UsageError("not a gentle algebra: " + r.message);
    return q;
}

nlohmann::json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open " + path);
    return nlohmann::json::parse(in);
}

void require_format(const RunConfig& c, std::initializer_list<const char*> allowed) {
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* f) { return c.format == f; }))
        throw UsageError("format " + c.format + " is not supported here");
}

std::string join_positions(const std::array<int, 4>& p) {
    return std::to_string(p[0]) + "," + std::to_string(p[1]) + "," + std::to_string(p[2]) + "," +
           std::to_string(p[3]);
}

int cmd_validate(const RunConfig& c, std::ostream& out) {
    const Quiver q = Quiver::load(c.algebra);
    const ValidationReport r = validate_gentle(q);
    if (c.format == "json") {
        nlohmann::ordered_json j;
        j["gentle"] = r.ok;
        j["axiom"] = r.axiom;
        j["location"] = r.location;
        j["message"] = r.message;
        out << j.dump(2) << "\n";
    } else if (r.ok) {
        out << "gentle, finite-dimensional\n";
    } else {
        out << "not gentle: " << r.message;
        if (!r.location.empty()) out << " at " << r.location;
        out << " (" << r.axiom << ")\n";
    }
    return r.ok ? 0 : 1;
}

int cmd_items(const RunConfig& c, std::ostream& out, bool bands) {
    require_format(c, {"text", "json"});
    const Quiver q = load_gentle(c.algebra);
    const DimVector d = parse_dim(q, c.dim);
    std::vector<Item> items = bands ? enumerate_minimal_bands(q, d) : enumerate_strings(q, d);
    std::vector<std::string> labels;
    for (const Item& x : items) labels.push_back(format_item(q, x));
    std::vector<std::size_t> order(items.size());
    for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return std::pair(items[a].length(), labels[a]) < std::pair(items[b].length(), labels[b]);
    });
    if (c.format == "json") {
        nlohmann::ordered_json j = nlohmann::ordered_json::array();
        for (std::size_t k : order) j.push_back(labels[k]);
        out << j.dump(2) << "\n";
    } else {
        for (std::size_t k : order) out << labels[k] << "\n";
    }
    return 0;
}

int cmd_diagrammes(const RunConfig& c, std::ostream& out) {
    require_format(c, {"text", "json"});
    const Quiver q = load_gentle(c.algebra);
    const DimVector d = parse_dim(q, c.dim);
    const auto nodes = enumerate_diagrammes(q, d, c.restricted);
    nlohmann::ordered_json j = nlohmann::ordered_json::array();
    for (const auto& node : nodes) {
        if (c.format == "json") j.push_back(format_diagramme(q, node));
        else out << format_diagramme(q, node) << "\n";
    }
    if (c.format == "json") out << j.dump(2) << "\n";
    return 0;
}

struct HomArgs {
    std::string x, y;
    int qx = 1, qy = 1;
    bool same_parameter = false;
    bool oracle = false;
};

int cmd_hom(const RunConfig& c, const HomArgs& a, std::ostream& out) {
    require_format(c, {"text", "json"});
    const Quiver q = load_gentle(c.algebra);
    const Item x = parse_item(q, a.x);
    const Item y = parse_item(q, a.y);
    const long value = hom_dim(q, x, a.qx, y, a.qy, a.same_parameter);
    std::optional<long> nullity;
    if (a.oracle) {
        const Rational lx = 1, ly = a.same_parameter ? 1 : 2;
        nullity = hom_nullity(q, realize_item(q, x, lx, a.qx), realize_item(q, y, ly, a.qy));
    }
    if (c.format == "json") {
        nlohmann::ordered_json j;
        j["x"] = format_item(q, x);
        j["y"] = format_item(q, y);
        j["qx"] = a.qx;
        j["qy"] = a.qy;
        j["same_parameter"] = a.same_parameter;
        j["hom"] = value;
        if (nullity) j["nullity"] = *nullity;
        out << j.dump(2) << "\n";
    } else {
        out << value;
        if (nullity) out << " (oracle " << *nullity << ")";
        out << "\n";
    }
    return nullity && *nullity != value ? 1 : 0;
}

int cmd_hvec(const RunConfig& c, const std::string& text, bool prime, std::ostream& out) {
    require_format(c, {"text", "json"});
    const Quiver q = load_gentle(c.algebra);
    const Diagramme d = parse_diagramme(q, text);
    const int l = c.l_max.value_or(default_l_max(d.dim().empty() ? DimVector(q.vertex_count(), 0) : d.dim()));
    const nlohmann::ordered_json j = prime ? to_json(q, h_prime_vector(q, d, l)) : to_json(q, h_vector(q, d, l));
    if (c.format == "json") {
        out << j.dump(2) << "\n";
    } else {
        out << "L_max " << l << "\n";
        for (const auto& [key, value] : j["entries"].items()) out << key << " " << value.get<long>() << "\n";
    }
    return 0;
}

int cmd_moves(const RunConfig& c, const std::string& text, std::ostream& out) {
    require_format(c, {"text", "json"});
    const Quiver q = load_gentle(c.algebra);
    const Diagramme d = parse_diagramme(q, text);
    const std::vector<Move> moves = all_moves(q, d, c.restricted);
    if (c.format == "json") {
        nlohmann::ordered_json j = nlohmann::ordered_json::array();
        for (const Move& m : moves) {
            nlohmann::ordered_json row;
            row["low"] = format_diagramme(q, m.low);
            row["high"] = format_diagramme(q, m.high);
            row["move"] = to_json(m.descriptor);
            j.push_back(std::move(row));
        }
        out << j.dump(2) << "\n";
        return 0;
    }
    for (const Move& m : moves) {
        const MoveDescriptor& md = m.descriptor;
        out << md.kind;
        if (!md.variant.empty()) out << " " << md.variant;
        out << ": " << format_diagramme(q, m.low) << " < " << format_diagramme(q, m.high) << "  items=";
        for (std::size_t k = 0; k < md.items.size(); ++k) out << (k ? "," : "") << md.items[k];
        out << " positions=" << join_positions(md.positions);
        if (!md.e.empty()) out << " E=" << md.e;
        if (md.reduced_nonminimal) out << " reduced";
        out << "\n";
    }
    return 0;
}

int cmd_poset(const RunConfig& c, std::ostream& out) {
    require_format(c, {"text", "json", "dot"});
    const Quiver q = load_gentle(c.algebra);
    PosetOptions options;
    options.l_max = c.l_max;
    options.restricted_bands = c.restricted;
    options.jobs = c.jobs;
    const DegPoset p = build_poset(q, parse_dim(q, c.dim), options);
    if (c.format == "json") {
        out << to_json(p).dump(2) << "\n";
    } else if (c.format == "dot") {
        const std::vector<std::string> labels = c.show_h ? short_h_labels(q, p) : std::vector<std::string>{};
        out << to_dot(p, c.show_h ? &labels : nullptr);
    } else {
        const std::vector<std::string> labels = c.show_h ? short_h_labels(q, p) : std::vector<std::string>{};
        out << "nodes " << p.nodes.size() << ", move edges " << p.edges.size() << ", covers " << p.hasse.size()
            << (p.restricted ? ", restricted to bands" : "") << "\n";
        for (std::size_t k = 0; k < p.nodes.size(); ++k) {
            out << k << " " << p.labels[k];
            if (c.show_h) out << " " << labels[k];
            out << "\n";
        }
        for (const auto& [low, high] : p.hasse) out << low << " < " << high << "\n";
        if (p.h_computed) {
            out << "h-order at L_max " << p.l_max << ": ";
            if (p.h_discrepancies.empty() && p.violations.empty()) out << "coincides with the generated order\n";
            else out << p.violations.size() << " violations, " << p.h_discrepancies.size() << " pairs not generated\n";
        }
    }
    return p.violations.empty() && p.non_strict_edges.empty() && p.antisymmetric() ? 0 : 1;
}

int cmd_identify(const RunConfig& c, const std::string& module_path, std::ostream& out) {
    require_format(c, {"text", "json"});
    const Quiver q = load_gentle(c.algebra);
    const MatrixModule m = matrix_module_from_json(q, read_json(module_path));
    const Identification id = identify_diagramme(q, m, c.l_max);
    if (c.format == "json") {
        nlohmann::ordered_json j;
        j["diagramme"] = format_diagramme(q, id.diagramme);
        j["L_max"] = id.l_max;
        out << j.dump(2) << "\n";
    } else {
        out << format_diagramme(q, id.diagramme) << "\n";
    }
    return 0;
}

int cmd_verify(const RunConfig& c, int budget, std::ostream& out) {
    require_format(c, {"text", "json"});
    const Quiver q = load_gentle(c.algebra);
    VerifyOptions options;
    options.budget = budget;
    options.seed = c.seed;
    options.jobs = c.jobs;
    if (!c.dim.empty()) options.dim = parse_dim(q, c.dim);
    const VerifyReport r = run_verify(q, options);
    if (c.format == "json") out << to_json(r).dump(2) << "\n";
    else out << to_text(r);
    return r.passed() ? 0 : 1;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Degenerations of modules over gentle algebras"};
    app.name("gentle");
    app.require_subcommand(1);
    RunConfig c;
    HomArgs hom;
    std::string diagramme, module_path;
    bool prime = false;
    int budget = 4;

    auto algebra = [&](CLI::App* sub) { sub->add_option("algebra", c.algebra, "Algebra JSON file")->required(); };
    auto format = [&](CLI::App* sub, const std::vector<std::string>& allowed) {
        sub->add_option("--format", c.format, "Output format")->check(CLI::IsMember(allowed));
    };
    auto dim = [&](CLI::App* sub, bool required) {
        auto* o = sub->add_option("--dim", c.dim, "Dimension vector, e.g. 1,2,1");
        if (required) o->required();
    };

    auto* validate = app.add_subcommand("validate", "Check the gentle axioms and finite dimension");
    algebra(validate);
    format(validate, {"text", "json"});

    auto* strings = app.add_subcommand("strings", "Strings with dimension vector bounded by --dim");
    algebra(strings);
    dim(strings, true);
    format(strings, {"text", "json"});

    auto* bands = app.add_subcommand("bands", "Minimal bands with dimension vector bounded by --dim");
    algebra(bands);
    dim(bands, true);
    format(bands, {"text", "json"});

    auto* diagrammes = app.add_subcommand("diagrammes", "Diagrammes of dimension vector --dim");
    algebra(diagrammes);
    dim(diagrammes, true);
    format(diagrammes, {"text", "json"});
    diagrammes->add_flag("--restricted-bands", c.restricted, "Only multisets of bands");

    auto* homc = app.add_subcommand("hom", "Dimension of Hom(M(x), M(y))");
    algebra(homc);
    homc->add_option("x", hom.x, "String or band")->required();
    homc->add_option("y", hom.y, "String or band")->required();
    homc->add_option("--qx", hom.qx, "Quasi-length of x")->check(CLI::PositiveNumber);
    homc->add_option("--qy", hom.qy, "Quasi-length of y")->check(CLI::PositiveNumber);
    homc->add_flag("--same-parameter", hom.same_parameter, "Bands share their parameter");
    homc->add_flag("--oracle", hom.oracle, "Also solve the intertwiner equations");
    format(homc, {"text", "json"});

    auto* hvec = app.add_subcommand("hvec", "Truncated h-vector of a diagramme");
    algebra(hvec);
    hvec->add_option("diagramme", diagramme, "Diagramme, e.g. \"{b.a-, (a.b-)}\"")->required();
    hvec->add_option("--lmax", c.l_max, "Length bound (default |d|^2)");
    hvec->add_flag("--prime", prime, "Print h' instead of h");
    format(hvec, {"text", "json"});

    auto* moves = app.add_subcommand("moves", "Deletions and resolutions at a diagramme");
    algebra(moves);
    moves->add_option("diagramme", diagramme, "Diagramme")->required();
    moves->add_flag("--restricted-bands", c.restricted, "Resolutions only");
    format(moves, {"text", "json"});

    auto* poset = app.add_subcommand("poset", "Degeneration poset of a dimension vector");
    algebra(poset);
    dim(poset, true);
    poset->add_option("--lmax", c.l_max, "Length bound of the h-order (default |d|^2)");
    poset->add_option("--jobs", c.jobs, "Worker threads")->check(CLI::PositiveNumber);
    poset->add_flag("--restricted-bands", c.restricted, "Multisets of bands under resolutions only");
    poset->add_flag("--show-h", c.show_h, "Append h at lazy strings and arrows to labels");
    c.format = "dot";
    format(poset, {"text", "json", "dot"});

    auto* identify = app.add_subcommand("identify", "Diagramme of a matrix module");
    algebra(identify);
    identify->add_option("module", module_path, "Module JSON file")->required();
    identify->add_option("--lmax", c.l_max, "Length bound of h'");
    format(identify, {"text", "json"});

    auto* verify = app.add_subcommand("verify", "Run the invariant suite");
    algebra(verify);
    verify->add_option("--budget", budget, "Bound on total dimension")->check(CLI::NonNegativeNumber);
    dim(verify, false);
    verify->add_option("--seed", c.seed, "Seed for witness parameters");
    verify->add_option("--jobs", c.jobs, "Worker threads")->check(CLI::PositiveNumber);
    format(verify, {"text", "json"});

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        // --help exits 0; every other parse failure is a usage error
        return app.exit(e, out, err) == 0 ? 0 : 2;
    }
    if (!poset->parsed() && c.format == "dot") c.format = "text";

    try {
        if (validate->parsed()) return cmd_validate(c, out);
        if (strings->parsed()) return cmd_items(c, out, false);
        if (bands->parsed()) return cmd_items(c, out, true);
        if (diagrammes->parsed()) return cmd_diagrammes(c, out);
        if (homc->parsed()) return cmd_hom(c, hom, out);
        if (hvec->parsed()) return cmd_hvec(c, diagramme, prime, out);
        if (moves->parsed()) return cmd_moves(c, diagramme, out);
        if (poset->parsed()) return cmd_poset(c, out);
        if (identify->parsed()) return cmd_identify(c, module_path, out);
        if (verify->parsed()) return cmd_verify(c, budget, out);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}

}  // namespace gentle
