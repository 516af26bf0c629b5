// End-to-end runs of the command-line binary against the shipped data files.
// CONECALC_BIN and CONECALC_DATA are injected by the build.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "conecalc/io.hpp"

using namespace conecalc;

namespace {

struct RunResult {
    int rc = -1;
    std::string out;
};

RunResult run(const std::string& args) {
    const std::string cmd = std::string(CONECALC_BIN) + " " + args + " 2>&1";
    FILE* p = popen(cmd.c_str(), "r");
    REQUIRE(p != nullptr);
    RunResult r;
    char buf[4096];
    std::size_t got;
    while ((got = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, got);
    int status = pclose(p);
    r.rc = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string data(const std::string& name) {
    return std::string(CONECALC_DATA) + "/" + name;
}

struct TempDir {
    std::filesystem::path path;
    TempDir() {
        path = std::filesystem::temp_directory_path() / "conecalc-cli-test";
        std::filesystem::remove_all(path);
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
    std::string put(const std::string& name, const std::string& text) const {
        std::ofstream out(path / name, std::ios::binary);
        out << text;
        return (path / name).string();
    }
    std::string at(const std::string& name) const { return (path / name).string(); }
};

}  // namespace

TEST_CASE("the documented example commands") {
    CHECK(run("balance " + data("p2-rays-11.json")).rc == 0);

    RunResult w3 = run("witness " + data("p2.json") + " " + data("psi-1-neg1.json") + " " +
                       data("ones.json"));
    CHECK(w3.rc == 0);
    CHECK(w3.out == "identity holds: true\n");
    RunResult w2 = run("witness " + data("psi-1-neg1.json") + " " + data("ones.json"));
    CHECK(w2.rc == 0);
    CHECK(w2.out == "identity holds: true\n");

    RunResult d = run("descendant 5 1 1 0 0 0");
    CHECK(d.rc == 0);
    CHECK(d.out == "2\n");

    RunResult gw = run("gw " + data("plane.json") + " " + data("lines-deg.json") + " " +
                       data("two-points.json"));
    CHECK(gw.rc == 0);
    CHECK(gw.out == "1\n");
}

TEST_CASE("validation and exit codes") {
    CHECK(run("validate " + data("plane.json")).rc == 0);
    CHECK(run("validate " + data("p2.json")).rc == 0);

    TempDir tmp;
    // lattice (1/2) makes the embedding non-integral on the intrinsic lattice
    std::string bad = tmp.put("bad.json", R"({
      "ambient_rank": 1,
      "rays": [{"id": "a", "embed": ["1"]}],
      "cones": [{"rays": ["a"], "lattice": [["1/2"]]}]
    })");
    RunResult v = run("validate " + bad);
    CHECK(v.rc == 1);
    CHECK(v.out.find("\"ok\": false") != std::string::npos);

    CHECK(run("validate " + tmp.at("missing.json")).rc == 2);
    CHECK(run("descendant 5 1 1 1 0 0").rc == 2);  // exponent sum mismatch

    std::string ncp =
        tmp.put("ncp.json", "{\"complex\": \"" + data("p2.json") + "\", \"values\": {\"e1\": \"1\"}}");
    RunResult cp = run("cp " + ncp);
    CHECK(cp.rc == 1);
    CHECK(cp.out.find("no linear functional matches the divisor on [e1&e2]") != std::string::npos);

    std::string unb = tmp.put("unbalanced.json",
                              "{\"complex\": \"" + data("plane.json") +
                                  "\", \"dim\": 1, \"weights\": {\"e1\": \"2\", \"e2\": \"1\", \"f\": \"1\"}}");
    CHECK(run("balance " + unb).rc == 1);
}

TEST_CASE("weight tables and the cup/dot/degree pipeline") {
    TempDir tmp;
    std::string h =
        tmp.put("h.json", "{\"complex\": \"" + data("plane.json") + "\", \"values\": {\"e1\": \"1\"}}");
    std::string curve = tmp.put("curve.json",
                                "{\"complex\": \"" + data("plane.json") +
                                    "\", \"dim\": 1, \"weights\": {\"e1\": \"1\", \"e2\": \"1\", \"f\": \"1\"}}");
    std::string fund = tmp.put(
        "fund.json", "{\"complex\": \"" + data("plane.json") +
                         "\", \"dim\": 2, \"weights\": {\"e1&e2\": \"1\", \"e1&f\": \"1\", \"e2&f\": \"1\"}}");

    RunResult cup = run("cup " + h + " " + fund + " --format tsv");
    CHECK(cup.rc == 0);
    CHECK(cup.out == "cone\tweight\ne1\t1\ne2\t1\nf\t1\n");

    CHECK(run("dot " + h + " " + curve + " --out " + tmp.at("pt.json")).rc == 0);
    RunResult deg = run("degree " + tmp.at("pt.json"));
    CHECK(deg.rc == 0);
    CHECK(deg.out == "1\n");
    CHECK(run("degree " + curve).out == "0\n");  // positive-dimensional weight

    RunResult basis = run("mink-basis " + data("plane.json") + " -k 1");
    CHECK(basis.rc == 0);
    CHECK(basis.out.find("\"rank\": 1") != std::string::npos);
    RunResult basis_tsv = run("mink-basis " + data("plane.json") + " -k 1 --format tsv");
    CHECK(basis_tsv.out == "cone\tb1\ne1\t1\ne2\t1\nf\t1\n");
}

TEST_CASE("generated complexes validate and round-trip") {
    TempDir tmp;
    CHECK(run("m0n 5 --out " + tmp.at("m05.json")).rc == 0);
    CHECK(run("validate " + tmp.at("m05.json")).rc == 0);

    CHECK(run("psi 4 1 --out " + tmp.at("psi.json")).rc == 0);
    RunResult cp = run("cp " + tmp.at("psi.json"));
    CHECK(cp.rc == 0);
    CHECK(cp.out.find("\"integral\": false") != std::string::npos);  // values are 1/3

    CHECK(run("star " + data("plane.json") + " e1 --out " + tmp.at("star.json")).rc == 0);
    CHECK(run("validate " + tmp.at("star.json")).rc == 0);
    CHECK(run("subdivide " + data("plane.json") + " 'e1&e2' 1,1 --out " + tmp.at("sub.json")).rc == 0);
    CHECK(run("validate " + tmp.at("sub.json")).rc == 0);
    ConeComplex sub = parse_complex(read_text_file(tmp.at("sub.json")));
    CHECK(sub.rays.size() == 4);

    CHECK(run("product " + data("p2.json") + " " + data("p2.json") + " --out " +
              tmp.at("prod.json")).rc == 0);
    CHECK(run("validate " + tmp.at("prod.json")).rc == 0);
    ConeComplex prod = parse_complex(read_text_file(tmp.at("prod.json")));
    CHECK(prod.ambient_rank == 2);
    CHECK(prod.rays.size() == 4);

    // boundary representative of psi is integral, and the two representations
    // are linearly equivalent on the nose only after the m0n quotient
    CHECK(run("psi 5 1 --boundary 2 3 --out " + tmp.at("psib.json")).rc == 0);
    RunResult cpb = run("cp " + tmp.at("psib.json"));
    CHECK(cpb.rc == 0);
    CHECK(cpb.out.find("\"integral\": true") != std::string::npos);
}

TEST_CASE("push along a covering map") {
    TempDir tmp;
    std::string line = tmp.put("line.json",
                               R"({"ambient_rank": 1,
                                   "rays": [{"id": "+", "embed": ["1"]}, {"id": "-", "embed": ["-1"]}],
                                   "cones": [{"rays": ["+"]}, {"rays": ["-"]}]})");
    std::string triple = tmp.put("triple.json",
                                 R"({"source": "line.json", "target": "line.json",
                                     "lattice_map": [["3"]], "conewise_onto": true,
                                     "cone_images": {"+": "+", "-": "-"}})");
    std::string w = tmp.put(
        "w.json", R"({"complex": "line.json", "dim": 1, "weights": {"+": "1", "-": "1"}})");
    RunResult r = run("push " + triple + " " + w + " --format tsv");
    CHECK(r.rc == 0);
    CHECK(r.out == "cone\tweight\n+\t3\n-\t3\n");
}
