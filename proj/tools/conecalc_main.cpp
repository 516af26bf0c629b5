// Command-line surface: every library operation on the JSON file formats.
// Exit codes: 0 = success and, for check commands, the property holds;
// 1 = the property fails; 2 = any error (parse, validation, precondition).

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "conecalc/io.hpp"
#include "conecalc/moduli.hpp"

using namespace conecalc;
using nlohmann::json;

namespace {

struct Session {
    std::string out;             // --out: write the main payload here
    std::string format = "json"; // --format for weight tables
    int jobs = 1;                // reserved; all commands run single-threaded
    IoContext io;

    void emit(const std::string& payload) const {
        if (out.empty()) {
            std::cout << payload;
            return;
        }
        std::ofstream f(out, std::ios::binary);
        if (!f) throw ParseError("cannot write '" + out + "'");
        f << payload;
    }

    bool tsv() const {
        if (format == "json") return false;
        if (format == "tsv") return true;
        throw InvalidArgument("unknown format '" + format + "'");
    }

    ComplexPtr complex(const std::string& path) { return io.load_complex(path); }
    MinkowskiWeight weight(const std::string& path) {
        return parse_weight(read_text_file(path), dir_of(path), io);
    }
    Divisor divisor(const std::string& path) {
        return parse_divisor(read_text_file(path), dir_of(path), io);
    }
    ComplexMorphism morphism(const std::string& path) {
        return parse_morphism(read_text_file(path), dir_of(path), io);
    }
};

// Re-base an object onto an already-loaded instance of the same complex.
template <class T>
void pin(T& obj, ComplexPtr C) {
    if (obj.complex == C) return;
    if (!complex_struct_equal(*obj.complex, *C))
        throw InvalidArgument("objects live on different complexes");
    obj.complex = C;
}

RatVec parse_rat_list(const std::string& s) {
    RatVec v;
    std::stringstream in(s);
    std::string tok;
    while (std::getline(in, tok, ',')) v.push_back(parse_rat(tok));
    return v;
}

std::string weight_tsv(const MinkowskiWeight& w) {
    std::string t = "cone\tweight\n";
    for (const auto& [key, value] : w.weights) t += cone_id(key) + "\t" + rat_string(value) + "\n";
    return t;
}

std::string divisor_tsv(const Divisor& d) {
    std::string t = "ray\tvalue\n";
    for (const auto& [id, value] : d.values) t += id + "\t" + rat_string(value) + "\n";
    return t;
}

std::string extended_tsv(const ExtendedCycle& E) {
    std::string t = "component\tcone\tweight\n";
    for (const auto& [tau, piece] : E.components)
        for (const auto& [key, value] : piece.cycle.weight.weights)
            t += cone_id(tau) + "\t" + cone_id(key) + "\t" + rat_string(value) + "\n";
    return t;
}

std::string report_json(const ValidationReport& rep) {
    json j;
    j["ok"] = rep.ok();
    json issues = json::array();
    for (const auto& i : rep.issues)
        issues.push_back({{"detail", i.detail}, {"kind", i.kind}, {"where", i.where}});
    j["issues"] = std::move(issues);
    return j.dump(2) + "\n";
}

Int parse_int_arg(const std::string& s) {
    Rat q = parse_rat(s);
    return rat_to_int(q);  // throws when fractional
}

int run_validate(Session& s, const std::string& path) {
    ConeComplex S = parse_complex(read_text_file(path));
    ValidationReport rep = validate(S);
    s.emit(report_json(rep));
    return rep.ok() ? 0 : 1;
}

int run_balance(Session& s, const std::string& path) {
    MinkowskiWeight w = s.weight(path);
    BalanceReport rep = check_balanced(w);
    json j;
    j["ok"] = rep.ok();
    json v = json::array();
    for (const auto& viol : rep.violations) {
        json d = json::array();
        for (const Rat& x : viol.defect) d.push_back(rat_string(x));
        v.push_back({{"cone", cone_id(viol.tau)}, {"defect", std::move(d)}});
    }
    j["violations"] = std::move(v);
    s.emit(j.dump(2) + "\n");
    return rep.ok() ? 0 : 1;
}

int run_mink_basis(Session& s, const std::string& path, int k) {
    ComplexPtr S = s.complex(path);
    std::vector<MinkowskiWeight> basis = mink_basis(S, k);
    if (s.tsv()) {
        std::string t = "cone";
        for (std::size_t i = 0; i < basis.size(); ++i) t += "\tb" + std::to_string(i + 1);
        t += "\n";
        for (const ConeKey& key : S->cones_of_dim(k)) {
            t += cone_id(key);
            for (const auto& b : basis) t += "\t" + rat_string(b.weight(key));
            t += "\n";
        }
        s.emit(t);
    } else {
        json j;
        j["dim"] = k;
        j["rank"] = basis.size();
        json arr = json::array();
        for (const auto& b : basis) arr.push_back(json::parse(write_weight(b, path)));
        j["basis"] = std::move(arr);
        s.emit(j.dump(2) + "\n");
    }
    return 0;
}

int run_star(Session& s, const std::string& path, const std::string& cone) {
    ComplexPtr S = s.complex(path);
    StarContext ctx = star(S, parse_cone_key(cone));
    s.emit(write_complex(*ctx.star));
    return 0;
}

int run_subdivide(Session& s, const std::string& path, const std::string& cone,
                  const std::string& vec) {
    ComplexPtr S = s.complex(path);
    StellarResult r = stellar_subdivide(identity_subdivision(S), parse_cone_key(cone),
                                        parse_rat_list(vec));
    s.emit(write_complex(*r.sub.complex));
    return 0;
}

int run_product(Session& s, const std::string& a, const std::string& b) {
    ComplexPtr A = s.complex(a), B = s.complex(b);
    s.emit(write_complex(product_with_maps(*A, *B).complex));
    return 0;
}

int run_cp(Session& s, const std::string& path) {
    Divisor d = s.divisor(path);
    try {
        CpCertificate cert = cp_certificate(d);
        json j;
        j["cp"] = true;
        j["integral"] = cert.integral;
        json m = json::object();
        for (const auto& [key, mv] : cert.m) {
            json row = json::array();
            for (const Rat& x : mv) row.push_back(rat_string(x));
            m[cone_id(key)] = std::move(row);
        }
        j["m"] = std::move(m);
        s.emit(j.dump(2) + "\n");
        return 0;
    } catch (const NotCp& e) {
        json j;
        j["cp"] = false;
        j["reason"] = e.what();
        s.emit(j.dump(2) + "\n");
        return 1;
    }
}

int run_linequiv(Session& s, const std::string& p1, const std::string& p2) {
    Divisor d1 = s.divisor(p1), d2 = s.divisor(p2);
    pin(d2, d1.complex);
    std::optional<RatVec> m = lin_equiv(d1, d2);
    json j;
    j["equivalent"] = bool(m);
    if (m) {
        json f = json::array();
        for (const Rat& x : *m) f.push_back(rat_string(x));
        j["functional"] = std::move(f);
    }
    s.emit(j.dump(2) + "\n");
    return m ? 0 : 1;
}

int run_cup(Session& s, const std::string& dpath, const std::string& wpath) {
    Divisor d = s.divisor(dpath);
    MinkowskiWeight w = s.weight(wpath);
    pin(d, w.complex);
    MinkowskiWeight r = cup(d, w);
    s.emit(s.tsv() ? weight_tsv(r) : write_weight(r));
    return 0;
}

int run_dot(Session& s, const std::string& dpath, const std::string& wpath) {
    Divisor d = s.divisor(dpath);
    MinkowskiWeight w = s.weight(wpath);
    ComplexPtr base = w.complex;
    pin(d, base);
    ExtendedCycle r = dot(d, cycle_on(base, std::move(w)));
    s.emit(s.tsv() ? extended_tsv(r) : write_extended(r));
    return 0;
}

int run_push(Session& s, const std::string& fpath, const std::string& wpath) {
    ComplexMorphism f = s.morphism(fpath);
    validate_morphism(f).require();
    MinkowskiWeight w = s.weight(wpath);
    pin(w, f.source);
    MinkowskiWeight r = pushforward(f, w);
    s.emit(s.tsv() ? weight_tsv(r) : write_weight(r));
    return 0;
}

int run_degree(Session& s, const std::string& path) {
    const std::string text = read_text_file(path);
    const json j = json::parse(text);
    Rat deg = j.count("components") ? degree(parse_extended(text, dir_of(path), s.io))
                                    : degree(parse_weight(text, dir_of(path), s.io));
    s.emit(rat_string(deg) + "\n");
    return 0;
}

int run_witness(Session& s, const std::vector<std::string>& files) {
    Divisor d;
    MinkowskiWeight w;
    if (files.size() == 3) {
        ComplexPtr C = s.complex(files[0]);
        d = s.divisor(files[1]);
        w = s.weight(files[2]);
        pin(d, C);
        pin(w, C);
    } else {
        d = s.divisor(files[0]);
        w = s.weight(files[1]);
        pin(d, w.complex);
    }
    WitnessResult r = graph_witness(d, w);
    std::cout << "identity holds: " << (r.check ? "true" : "false") << "\n";
    if (!s.out.empty()) {
        json j = json::parse(write_weight(r.gamma.weight));
        j["scale"] = r.scale.str();
        s.emit(j.dump(2) + "\n");
    }
    return r.check ? 0 : 1;
}

int run_m0n(Session& s, int n) {
    s.emit(write_complex(*build_m0n(n).complex));
    return 0;
}

int run_psi(Session& s, int n, int k, const std::vector<int>& boundary) {
    ModuliComplex M = build_m0n(n);
    Divisor d = boundary.empty() ? psi_divisor(M, k)
                                 : psi_boundary_rep(M, k, boundary[0], boundary[1]);
    s.emit(s.tsv() ? divisor_tsv(d) : write_divisor(d));
    return 0;
}

int run_descendant(Session& s, int n, const std::vector<std::string>& exps) {
    std::vector<int> a;
    for (const auto& e : exps) a.push_back(static_cast<int>(parse_int_arg(e)));
    s.emit(rat_string(descendant(n, a)) + "\n");
    return 0;
}

int run_gw(Session& s, const std::string& fan_path, const std::string& degree_path,
           const std::string& cond_path) {
    ComplexPtr target = s.complex(fan_path);

    const json dj = json::parse(read_text_file(degree_path));
    const int n = dj.at("n").get<int>();
    std::vector<IntVec> delta;
    for (const json& row : dj.at("delta")) {
        IntVec v;
        for (const json& e : row) v.push_back(parse_int_arg(e.get<std::string>()));
        delta.push_back(std::move(v));
    }
    LabeledModuli L = build_labeled_moduli(n, delta, target);

    const json cj = json::parse(read_text_file(cond_path));
    const json& list = cj.is_array() ? cj : cj.at("conditions");
    std::vector<GwCondition> conds;
    for (const json& entry : list) {
        GwCondition c;
        c.mark = entry.at("mark").get<int>();
        c.power = entry.value("power", 1);
        const json& dref = entry.at("divisor");
        if (dref.is_string()) {
            std::filesystem::path p = dref.get<std::string>();
            if (p.is_relative()) p = std::filesystem::path(dir_of(cond_path)) / p;
            c.divisor = s.divisor(p.string());
        } else {
            c.divisor = parse_divisor(dref.dump(), dir_of(cond_path), s.io);
        }
        pin(c.divisor, target);
        conds.push_back(std::move(c));
    }
    s.emit(rat_string(gw_count(L, conds)) + "\n");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    Session s;
    CLI::App app{"exact tropical intersection calculus on weakly embedded cone complexes"};
    app.require_subcommand(1);
    app.fallthrough();
    app.add_option("--out", s.out, "write the result to this file instead of stdout");
    app.add_option("--format", s.format, "output format for weight tables: json (default) or tsv");
    app.add_option("--jobs", s.jobs, "reserved; commands currently run single-threaded");

    std::string arg1, arg2, arg3;
    int n = 0, k = 0;
    std::vector<std::string> files;
    std::vector<int> boundary;

    int rc = 0;
    auto* c_validate = app.add_subcommand("validate", "check a complex file");
    c_validate->add_option("complex", arg1)->required();
    c_validate->callback([&] { rc = run_validate(s, arg1); });

    auto* c_balance = app.add_subcommand("balance", "check a weight file for balancing");
    c_balance->add_option("weight", arg1)->required();
    c_balance->callback([&] { rc = run_balance(s, arg1); });

    auto* c_basis = app.add_subcommand("mink-basis", "basis of balanced weights in dimension k");
    c_basis->add_option("complex", arg1)->required();
    c_basis->add_option("-k,--dim", k)->required();
    c_basis->callback([&] { rc = run_mink_basis(s, arg1, k); });

    auto* c_star = app.add_subcommand("star", "star of a cone ('' for the apex)");
    c_star->add_option("complex", arg1)->required();
    c_star->add_option("cone", arg2)->required();
    c_star->callback([&] { rc = run_star(s, arg1, arg2); });

    auto* c_sub = app.add_subcommand("subdivide", "stellar subdivision at a chart point");
    c_sub->add_option("complex", arg1)->required();
    c_sub->add_option("cone", arg2)->required();
    c_sub->add_option("vector", arg3, "comma-separated chart coordinates")->required();
    c_sub->callback([&] { rc = run_subdivide(s, arg1, arg2, arg3); });

    auto* c_prod = app.add_subcommand("product", "product of two complexes");
    c_prod->add_option("a", arg1)->required();
    c_prod->add_option("b", arg2)->required();
    c_prod->callback([&] { rc = run_product(s, arg1, arg2); });

    auto* c_cp = app.add_subcommand("cp", "conewise-principal certificate of a divisor");
    c_cp->add_option("divisor", arg1)->required();
    c_cp->callback([&] { rc = run_cp(s, arg1); });

    auto* c_lin = app.add_subcommand("linequiv", "linear equivalence of two divisors");
    c_lin->add_option("d1", arg1)->required();
    c_lin->add_option("d2", arg2)->required();
    c_lin->callback([&] { rc = run_linequiv(s, arg1, arg2); });

    auto* c_cup = app.add_subcommand("cup", "cup product of a divisor with a weight");
    c_cup->add_option("divisor", arg1)->required();
    c_cup->add_option("weight", arg2)->required();
    c_cup->callback([&] { rc = run_cup(s, arg1, arg2); });

    auto* c_dot = app.add_subcommand("dot", "boundary intersection product");
    c_dot->add_option("divisor", arg1)->required();
    c_dot->add_option("cycle", arg2)->required();
    c_dot->callback([&] { rc = run_dot(s, arg1, arg2); });

    auto* c_push = app.add_subcommand("push", "push a weight forward along a morphism");
    c_push->add_option("morphism", arg1)->required();
    c_push->add_option("cycle", arg2)->required();
    c_push->callback([&] { rc = run_push(s, arg1, arg2); });

    auto* c_deg = app.add_subcommand("degree", "degree of a weight or extended cycle file");
    c_deg->add_option("cycle", arg1)->required();
    c_deg->callback([&] { rc = run_degree(s, arg1); });

    auto* c_wit = app.add_subcommand("witness", "rational-equivalence graph witness");
    c_wit->add_option("files", files, "[complex] divisor weight")->expected(2, 3);
    c_wit->callback([&] { rc = run_witness(s, files); });

    auto* c_m0n = app.add_subcommand("m0n", "moduli fan of n-marked rational curves");
    c_m0n->add_option("n", n)->required();
    c_m0n->callback([&] { rc = run_m0n(s, n); });

    auto* c_psi = app.add_subcommand("psi", "psi divisor of the k-th mark on the moduli fan");
    c_psi->add_option("n", n)->required();
    c_psi->add_option("k", k)->required();
    c_psi->add_option("--boundary", boundary, "boundary representative avoiding marks a b")
        ->expected(2);
    c_psi->callback([&] { rc = run_psi(s, n, k, boundary); });

    auto* c_desc = app.add_subcommand("descendant", "descendant invariant of psi powers");
    c_desc->add_option("n", n)->required();
    c_desc->add_option("exponents", files)->required();
    c_desc->callback([&] { rc = run_descendant(s, n, files); });

    auto* c_gw = app.add_subcommand("gw", "rational curve count in a target fan");
    c_gw->add_option("target-fan", arg1)->required();
    c_gw->add_option("degree-file", arg2)->required();
    c_gw->add_option("conditions-file", arg3)->required();
    c_gw->callback([&] { rc = run_gw(s, arg1, arg2, arg3); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const json::exception& e) {
        std::cerr << "error: ParseError: " << e.what() << "\n";
        return 2;
    }
    return rc;
}
