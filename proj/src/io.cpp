#include "conecalc/io.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace conecalc {

using nlohmann::json;  // object_t is std::map, so keys serialize sorted

namespace {

std::string dump(const json& j) { return j.dump(2) + "\n"; }

Int parse_int_token(const std::string& s) {
    if (s.empty()) throw ParseError("empty number");
    std::size_t start = s[0] == '-' || s[0] == '+' ? 1 : 0;
    if (start == s.size()) throw ParseError("bad number '" + s + "'");
    for (std::size_t i = start; i < s.size(); ++i)
        if (s[i] < '0' || s[i] > '9') throw ParseError("bad number '" + s + "'");
    Int v(s.substr(start));
    return s[0] == '-' ? Int(-v) : v;
}

json rat_json(const Rat& q) { return rat_string(q); }

Rat rat_from_json(const json& j) {
    if (!j.is_string()) throw ParseError("numbers must be exact strings like \"3\" or \"-1/2\"");
    return parse_rat(j.get<std::string>());
}

json vec_json(const IntVec& v) {
    json a = json::array();
    for (const Int& x : v) a.push_back(x.str());
    return a;
}

json vec_json(const RatVec& v) {
    json a = json::array();
    for (const Rat& x : v) a.push_back(rat_json(x));
    return a;
}

json mat_json(const RatMat& m) {
    json rows = json::array();
    for (int i = 0; i < m.rows(); ++i) rows.push_back(vec_json(m.row(i)));
    return rows;
}

json mat_json(const IntMat& m) {
    json rows = json::array();
    for (int i = 0; i < m.rows(); ++i) rows.push_back(vec_json(m.row(i)));
    return rows;
}

IntVec int_vec_from_json(const json& j) {
    if (!j.is_array()) throw ParseError("expected an array of integer strings");
    IntVec v;
    for (const json& e : j) {
        if (!e.is_string()) throw ParseError("coordinates must be integer strings");
        v.push_back(parse_int_token(e.get<std::string>()));
    }
    return v;
}

RatVec rat_vec_from_json(const json& j) {
    if (!j.is_array()) throw ParseError("expected an array of rational strings");
    RatVec v;
    for (const json& e : j) v.push_back(rat_from_json(e));
    return v;
}

RatMat rat_mat_from_json(const json& j) {
    if (!j.is_array()) throw ParseError("expected a matrix as an array of rows");
    std::vector<RatVec> rows;
    for (const json& r : j) rows.push_back(rat_vec_from_json(r));
    return RatMat::from_rows(rows);
}

IntMat int_mat_from_json(const json& j) {
    if (!j.is_array()) throw ParseError("expected a matrix as an array of rows");
    std::vector<IntVec> rows;
    for (const json& r : j) rows.push_back(int_vec_from_json(r));
    return IntMat::from_rows(rows);
}

bool is_identity(const RatMat& m) {
    if (m.rows() != m.cols()) return false;
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j)
            if (m(i, j) != (i == j ? Rat(1) : Rat(0))) return false;
    return true;
}

json complex_json(const ConeComplex& S) {
    json j;
    j["ambient_rank"] = S.ambient_rank;
    json rays = json::array();
    for (const auto& [id, ray] : S.rays) rays.push_back({{"embed", vec_json(ray.embed)}, {"id", id}});
    j["rays"] = std::move(rays);
    json cones = json::array();
    for (const auto& [key, cone] : S.cones) {
        json c;
        c["rays"] = key;
        if (!is_identity(cone.lattice)) c["lattice"] = mat_json(cone.lattice);
        cones.push_back(std::move(c));
    }
    j["cones"] = std::move(cones);
    return j;
}

ConeComplex complex_from_json(const json& j) {
    if (!j.is_object()) throw ParseError("a complex must be a JSON object");
    ConeComplex S;
    S.ambient_rank = j.at("ambient_rank").get<int>();
    if (S.ambient_rank < 0) throw ParseError("ambient_rank must be nonnegative");
    for (const json& r : j.at("rays")) {
        Ray ray;
        ray.id = r.at("id").get<std::string>();
        ray.embed = int_vec_from_json(r.at("embed"));
        if (static_cast<int>(ray.embed.size()) != S.ambient_rank)
            throw ParseError("ray '" + ray.id + "' embed length does not match ambient_rank");
        if (!S.rays.emplace(ray.id, ray).second)
            throw ParseError("duplicate ray id '" + ray.id + "'");
    }
    for (const json& c : j.at("cones")) {
        ConeKey key = make_key(c.at("rays").get<std::vector<std::string>>());
        for (const RayId& r : key)
            if (!S.rays.count(r)) throw ParseError("cone uses unknown ray '" + r + "'");
        Cone cone;
        cone.rays = key;
        const int d = cone.dim();
        cone.lattice = c.count("lattice") ? rat_mat_from_json(c.at("lattice"))
                                          : RatMat::identity(d);
        if (cone.lattice.rows() != d || cone.lattice.cols() != d)
            throw ParseError("lattice of [" + cone_id(key) + "] must be " + std::to_string(d) +
                             "x" + std::to_string(d));
        if (!S.cones.emplace(key, std::move(cone)).second)
            throw ParseError("duplicate cone [" + cone_id(key) + "]");
    }
    // face closure with induced lattices; files may list only generators
    std::vector<ConeKey> listed;
    for (const auto& [key, cone] : S.cones) listed.push_back(key);
    for (const ConeKey& key : listed) {
        const Cone top = S.cones.at(key);  // copy: the map grows below
        const int d = static_cast<int>(key.size());
        for (unsigned mask = 0; mask + 1 < (1u << d); ++mask) {
            ConeKey face;
            std::vector<int> keep;
            for (int i = 0; i < d; ++i)
                if (mask & (1u << i)) {
                    face.push_back(key[static_cast<std::size_t>(i)]);
                    keep.push_back(i);
                }
            if (S.cones.count(face)) continue;
            Cone f;
            f.rays = face;
            f.lattice = induced_face_lattice(top.lattice, keep);
            S.cones.emplace(std::move(face), std::move(f));
        }
    }
    if (!S.cones.count(ConeKey{})) S.cones.emplace(ConeKey{}, Cone{{}, RatMat::identity(0)});
    for (const auto& [id, ray] : S.rays) {
        ConeKey k{id};
        if (!S.cones.count(k)) S.cones.emplace(k, Cone{{id}, RatMat::identity(1)});
    }
    return S;
}

json complex_ref_json(ComplexPtr S, const std::string& ref) {
    if (!ref.empty()) return ref;
    return complex_json(*S);
}

ComplexPtr resolve_ref(const json& ref, const std::string& dir, IoContext& ctx) {
    if (ref.is_string()) {
        std::filesystem::path p(ref.get<std::string>());
        if (p.is_relative() && !dir.empty()) p = std::filesystem::path(dir) / p;
        return ctx.load_complex(p.string());
    }
    ConeComplex S = complex_from_json(ref);
    validate(S).require();
    return ctx.intern(std::move(S));
}

json weight_json(const MinkowskiWeight& w, const std::string& ref) {
    json j;
    j["complex"] = complex_ref_json(w.complex, ref);
    j["dim"] = w.dim;
    json entries = json::object();
    for (const auto& [key, value] : w.weights) entries[cone_id(key)] = rat_json(value);
    j["weights"] = std::move(entries);
    return j;
}

MinkowskiWeight weight_from_json(const json& j, const std::string& dir, IoContext& ctx) {
    if (!j.is_object()) throw ParseError("a weight must be a JSON object");
    MinkowskiWeight w;
    w.complex = resolve_ref(j.at("complex"), dir, ctx);
    w.dim = j.at("dim").get<int>();
    for (const auto& [id, value] : j.at("weights").items()) {
        ConeKey key = parse_cone_key(id);
        if (!w.complex->has_cone(key)) throw ParseError("weight on unknown cone [" + id + "]");
        if (static_cast<int>(key.size()) != w.dim)
            throw ParseError("weight on [" + id + "] does not have dimension " +
                             std::to_string(w.dim));
        w.weights[key] = rat_from_json(value);
    }
    return w;
}

}  // namespace

std::string rat_string(const Rat& q) {
    std::string s = rat_num(q).str();
    if (rat_den(q) != 1) s += "/" + rat_den(q).str();
    return s;
}

Rat parse_rat(const std::string& s) {
    std::size_t slash = s.find('/');
    if (slash == std::string::npos) return Rat(parse_int_token(s));
    Int num = parse_int_token(s.substr(0, slash));
    Int den = parse_int_token(s.substr(slash + 1));
    if (den == 0) throw ParseError("zero denominator in '" + s + "'");
    return Rat(num, den);
}

std::string write_complex(const ConeComplex& S) { return dump(complex_json(S)); }

ConeComplex parse_complex(const std::string& text) {
    try {
        return complex_from_json(json::parse(text));
    } catch (const json::exception& e) {
        throw ParseError(e.what());
    }
}

ComplexPtr IoContext::load_complex(const std::string& path) {
    const std::string key = "p:" + std::filesystem::absolute(path).lexically_normal().string();
    auto it = pool.find(key);
    if (it != pool.end()) return it->second;
    ConeComplex S = parse_complex(read_text_file(path));
    validate(S).require();
    ComplexPtr ptr = intern(std::move(S));
    pool.emplace(key, ptr);
    return ptr;
}

ComplexPtr IoContext::intern(ConeComplex S) {
    const std::string key = "i:" + write_complex(S);
    auto it = pool.find(key);
    if (it != pool.end()) return it->second;
    ComplexPtr ptr = std::make_shared<ConeComplex>(std::move(S));
    pool.emplace(key, ptr);
    return ptr;
}

MinkowskiWeight parse_weight(const std::string& text, const std::string& dir, IoContext& ctx) {
    try {
        return weight_from_json(json::parse(text), dir, ctx);
    } catch (const json::exception& e) {
        throw ParseError(e.what());
    }
}

Divisor parse_divisor(const std::string& text, const std::string& dir, IoContext& ctx) {
    try {
        const json j = json::parse(text);
        if (!j.is_object()) throw ParseError("a divisor must be a JSON object");
        Divisor psi;
        psi.complex = resolve_ref(j.at("complex"), dir, ctx);
        for (const auto& [id, value] : j.at("values").items()) {
            if (!psi.complex->rays.count(id)) throw ParseError("value on unknown ray '" + id + "'");
            psi.values[id] = rat_from_json(value);
        }
        return psi;
    } catch (const json::exception& e) {
        throw ParseError(e.what());
    }
}

ComplexMorphism parse_morphism(const std::string& text, const std::string& dir, IoContext& ctx) {
    try {
        const json j = json::parse(text);
        if (!j.is_object()) throw ParseError("a morphism must be a JSON object");
        ComplexMorphism f;
        f.source = resolve_ref(j.at("source"), dir, ctx);
        f.target = resolve_ref(j.at("target"), dir, ctx);
        f.lattice_map = int_mat_from_json(j.at("lattice_map"));
        if (f.lattice_map.rows() != f.target->ambient_rank ||
            f.lattice_map.cols() != f.source->ambient_rank)
            throw ParseError("lattice_map must be target ambient x source ambient");
        f.conewise_onto = j.value("conewise_onto", false);
        for (const auto& [id, img] : j.at("cone_images").items()) {
            ConeKey key = parse_cone_key(id);
            ConeKey image = parse_cone_key(img.get<std::string>());
            if (!f.source->has_cone(key)) throw ParseError("image of unknown cone [" + id + "]");
            if (!f.target->has_cone(image))
                throw ParseError("cone [" + id + "] maps to unknown cone [" +
                                 img.get<std::string>() + "]");
            f.cone_image[key] = image;
        }
        for (const auto& [key, cone] : f.source->cones)
            if (!f.cone_image.count(key)) {
                if (!key.empty())
                    throw ParseError("cone_images is missing [" + cone_id(key) + "]");
                f.cone_image[key] = {};
            }
        if (j.count("cone_matrices"))
            for (const auto& [id, m] : j.at("cone_matrices").items())
                f.cone_matrix[parse_cone_key(id)] = rat_mat_from_json(m);
        // matrices not supplied: solve them from the lattice map
        const RatMat lat = to_rat(f.lattice_map);
        for (const auto& [key, image] : f.cone_image) {
            if (f.cone_matrix.count(key)) continue;
            const RatMat src = to_rat(f.source->chart_embed(key));
            const RatMat tgt = to_rat(f.target->chart_embed(image));
            RatMat M(static_cast<int>(image.size()), static_cast<int>(key.size()));
            for (int c = 0; c < M.cols(); ++c) {
                auto x = solve_linear(tgt, lat.apply(src.col(c)), SolveMode::Rational);
                if (!x)
                    throw ParseError("lattice map does not take [" + cone_id(key) +
                                     "] into [" + cone_id(image) + "]");
                for (const Rat& e : *x)
                    if (e < 0)
                        throw ParseError("lattice map does not take [" + cone_id(key) +
                                         "] into [" + cone_id(image) + "]");
                M.set_col(c, *x);
            }
            f.cone_matrix[key] = std::move(M);
        }
        return f;
    } catch (const json::exception& e) {
        throw ParseError(e.what());
    }
}

ExtendedCycle parse_extended(const std::string& text, const std::string& dir, IoContext& ctx) {
    try {
        const json j = json::parse(text);
        if (!j.is_object()) throw ParseError("an extended cycle must be a JSON object");
        ExtendedCycle E;
        E.dim = j.at("dim").get<int>();
        for (const auto& [id, comp] : j.at("components").items()) {
            ConeKey tau = parse_cone_key(id);
            MinkowskiWeight w = weight_from_json(comp, dir, ctx);
            ComplexPtr star_complex = w.complex;
            StarContext ctxs;
            ctxs.tau = tau;
            ctxs.star = star_complex;
            StarPiece piece{std::move(ctxs), cycle_on(star_complex, std::move(w))};
            E.components.emplace(std::move(tau), std::move(piece));
        }
        return E;
    } catch (const json::exception& e) {
        throw ParseError(e.what());
    }
}

std::string write_weight(const MinkowskiWeight& w, const std::string& complex_ref) {
    return dump(weight_json(w, complex_ref));
}

std::string write_divisor(const Divisor& psi, const std::string& complex_ref) {
    json j;
    j["complex"] = complex_ref_json(psi.complex, complex_ref);
    json values = json::object();
    for (const auto& [id, value] : psi.values) values[id] = rat_json(value);
    j["values"] = std::move(values);
    return dump(j);
}

std::string write_morphism(const ComplexMorphism& f, const std::string& source_ref,
                           const std::string& target_ref) {
    json j;
    j["source"] = complex_ref_json(f.source, source_ref);
    j["target"] = complex_ref_json(f.target, target_ref);
    j["lattice_map"] = mat_json(f.lattice_map);
    j["conewise_onto"] = f.conewise_onto;
    json images = json::object();
    for (const auto& [key, image] : f.cone_image) images[cone_id(key)] = cone_id(image);
    j["cone_images"] = std::move(images);
    json mats = json::object();
    for (const auto& [key, m] : f.cone_matrix) mats[cone_id(key)] = mat_json(m);
    j["cone_matrices"] = std::move(mats);
    return dump(j);
}

std::string write_extended(const ExtendedCycle& E) {
    json j;
    j["dim"] = E.dim;
    json comps = json::object();
    for (const auto& [tau, piece] : E.components)
        comps[cone_id(tau)] = weight_json(piece.cycle.weight, "");
    j["components"] = std::move(comps);
    return dump(j);
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot read '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::string dir_of(const std::string& path) {
    return std::filesystem::path(path).parent_path().string();
}

}  // namespace conecalc
