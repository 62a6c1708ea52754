#include <doctest.h>

#include <sstream>

#include "gentle/cli.hpp"
#include "support.hpp"

namespace {

struct Run {
    int status = 0;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args) {
    args.insert(args.begin(), "gentle");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int status = gentle::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {status, out.str(), err.str()};
}

std::string algebra(const char* name) { return fixtures::data(std::string(name) + ".json").string(); }

}  // namespace

TEST_CASE("validate") {
    CHECK(run({"validate", algebra("kronecker")}).status == 0);
    CHECK(run({"validate", algebra("glued_kronecker")}).status == 0);
    const Run loop = run({"validate", algebra("loop")});
    CHECK(loop.status == 1);
    CHECK(loop.out.find("relation-free cycle") != std::string::npos);
    const Run json = run({"validate", algebra("easy_no_relation"), "--format", "json"});
    CHECK(json.status == 1);
    CHECK(nlohmann::json::parse(json.out)["gentle"] == false);
}

TEST_CASE("listing") {
    CHECK(run({"strings", algebra("kronecker"), "--dim", "1,1"}).out == "e_1\ne_2\na\nb\n");
    CHECK(run({"bands", algebra("kronecker"), "--dim", "1,1"}).out == "(a.b-)\n");
    CHECK(run({"diagrammes", algebra("kronecker"), "--dim", "1,1"}).out == "{(a.b-)}\n{a}\n{b}\n{e_1, e_2}\n");
    const Run bands_only = run({"diagrammes", algebra("glued_kronecker"), "--dim", "2,4,2", "--restricted-bands"});
    CHECK(std::ranges::count(bands_only.out, '\n') == 6);
}

TEST_CASE("hom") {
    CHECK(run({"hom", algebra("kronecker"), "b.a-.b", "b.a-.b"}).out == "2\n");
    CHECK(run({"hom", algebra("kronecker"), "b.a-.b", "b.a-.b", "--oracle"}).out == "2 (oracle 2)\n");
    CHECK(run({"hom", algebra("kronecker"), "(a.b-)", "(a.b-)", "--same-parameter", "--qx", "2", "--qy", "2"}).out == "2\n");
    CHECK(run({"hom", algebra("kronecker"), "a.a-", "a"}).status == 1);
}

TEST_CASE("hvec") {
    CHECK(run({"hvec", algebra("kronecker"), "{a}", "--lmax", "2"}).out == "L_max 2\ne_2 1\na 1\na.b- 1\n");
    CHECK(run({"hvec", algebra("kronecker"), "{a}", "--lmax", "2", "--prime"}).out == "L_max 2\ne_2 1\na 1\n");
    const Run json = run({"hvec", algebra("kronecker"), "{(a.b-)}", "--format", "json"});
    CHECK(nlohmann::json::parse(json.out)["L_max"] == 4);
}

TEST_CASE("moves") {
    const Run r = run({"moves", algebra("glued_kronecker"), "{(a.b-), (a.b-.c-.d.c-.d)}", "--restricted-bands"});
    CHECK(r.status == 0);
    CHECK(r.out.find("{(a.b-.c-.d)^x2}") != std::string::npos);
    CHECK(r.out.find("reduced") != std::string::npos);
}

TEST_CASE("poset") {
    const Run dot = run({"poset", algebra("kronecker"), "--dim", "1,1"});
    CHECK(dot.status == 0);
    CHECK(dot.out.find("n0 -> n1;") != std::string::npos);
    CHECK(std::ranges::count(dot.out, '>') == 4);
    const Run zero = run({"poset", algebra("kronecker"), "--dim", "0,0"});
    CHECK(zero.out.find("n0 [label=\"{}\"]") != std::string::npos);
    CHECK(zero.out.find("n1") == std::string::npos);

    const Run text = run({"poset", algebra("glued_kronecker"), "--dim", "2,4,2", "--restricted-bands", "--format", "text"});
    CHECK(text.out.starts_with("nodes 6,"));

    const Run one = run({"poset", algebra("glued_kronecker"), "--dim", "1,2,1", "--format", "json", "--jobs", "1"});
    const Run four = run({"poset", algebra("glued_kronecker"), "--dim", "1,2,1", "--format", "json", "--jobs", "4"});
    CHECK(one.status == 0);
    CHECK(one.out == four.out);
    CHECK(one.out == fixtures::slurp(std::filesystem::path(GENTLE_GOLDEN_DIR) / "glued_121.json"));

    const Run shown = run({"poset", algebra("kronecker"), "--dim", "1,1", "--show-h"});
    CHECK(shown.out.find("\\n") != std::string::npos);
}

TEST_CASE("identify") {
    const Run r = run({"identify", algebra("kronecker"), fixtures::data("kronecker_module.json").string()});
    CHECK(r.status == 0);
    CHECK(r.out == "{(a.b-), a}\n");
}

TEST_CASE("verify") {
    const Run r = run({"verify", algebra("kronecker"), "--budget", "4"});
    CHECK(r.status == 0);
    CHECK(r.out.ends_with("all invariants hold\n"));
    const Run empty = run({"verify", algebra("kronecker"), "--budget", "0"});
    CHECK(empty.status == 0);
    const Run a = run({"verify", algebra("kronecker"), "--budget", "3", "--seed", "9", "--format", "json"});
    const Run b = run({"verify", algebra("kronecker"), "--budget", "3", "--seed", "9", "--format", "json", "--jobs", "3"});
    CHECK(a.out == b.out);
    CHECK(nlohmann::json::parse(a.out).is_object());
}

TEST_CASE("usage errors") {
    CHECK(run({"poset", algebra("kronecker"), "--dim", "x"}).status == 2);
    CHECK(run({"poset", algebra("kronecker"), "--dim", "1,1,1"}).status == 2);
    CHECK(run({"frobnicate"}).status == 2);
    CHECK(run({}).status == 2);
    CHECK(run({"--help"}).status == 0);
    CHECK(run({"validate", "/nonexistent.json"}).status != 0);
}
