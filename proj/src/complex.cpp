#include "conecalc/complex.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

namespace conecalc {

std::string cone_id(const ConeKey& key) {
    std::string out;
    for (std::size_t i = 0; i < key.size(); ++i) {
        if (i) out += '&';
        out += key[i];
    }
    return out;
}

ConeKey parse_cone_key(const std::string& id) {
    ConeKey key;
    if (id.empty()) return key;
    std::size_t pos = 0;
    for (;;) {
        std::size_t amp = id.find('&', pos);
        if (amp == std::string::npos) {
            key.push_back(id.substr(pos));
            break;
        }
        key.push_back(id.substr(pos, amp - pos));
        pos = amp + 1;
    }
    return make_key(std::move(key));
}

ConeKey make_key(std::vector<RayId> ids) {
    std::sort(ids.begin(), ids.end());
    for (std::size_t i = 0; i + 1 < ids.size(); ++i)
        if (ids[i] == ids[i + 1])
            throw NonSimplicial("duplicate ray '" + ids[i] + "' in cone");
    return ids;
}

std::string ValidationReport::to_string() const {
    std::ostringstream os;
    for (const auto& is : issues)
        os << is.kind << " at [" << is.where << "]: " << is.detail << "\n";
    return os.str();
}

void ValidationReport::require() const {
    if (!ok()) throw Error(issues[0].kind, "[" + issues[0].where + "] " + issues[0].detail);
}

// ---------------------------------------------------------------------------

struct ConeComplex::Caches {
    std::mutex mu;
    std::map<ConeKey, TauQuotient> tau;
    std::map<std::pair<ConeKey, ConeKey>, LatticeNormal> normal;
};

ConeComplex::ConeComplex() : caches_(std::make_shared<Caches>()) {}
ConeComplex::ConeComplex(const ConeComplex& o)
    : ambient_rank(o.ambient_rank), rays(o.rays), cones(o.cones),
      caches_(std::make_shared<Caches>()) {}
ConeComplex& ConeComplex::operator=(const ConeComplex& o) {
    ambient_rank = o.ambient_rank;
    rays = o.rays;
    cones = o.cones;
    caches_ = std::make_shared<Caches>();
    return *this;
}

const Cone& ConeComplex::cone(const ConeKey& key) const {
    auto it = cones.find(key);
    if (it == cones.end()) throw ConeNotInComplex("no cone '" + cone_id(key) + "'");
    return it->second;
}

const Ray& ConeComplex::ray(const RayId& id) const {
    auto it = rays.find(id);
    if (it == rays.end()) throw ConeNotInComplex("no ray '" + id + "'");
    return it->second;
}

int ConeComplex::dim() const {
    int d = 0;
    for (const auto& [k, c] : cones) d = std::max(d, c.dim());
    return d;
}

std::vector<ConeKey> ConeComplex::cones_of_dim(int k) const {
    std::vector<ConeKey> out;
    for (const auto& [key, c] : cones)
        if (c.dim() == k) out.push_back(key);
    return out;
}

std::vector<ConeKey> ConeComplex::maximal_cones() const {
    std::vector<ConeKey> out;
    for (const auto& [key, c] : cones) {
        bool maximal = true;
        for (const auto& [key2, c2] : cones) {
            if (key2.size() <= key.size() || key2 == key) continue;
            if (std::includes(key2.begin(), key2.end(), key.begin(), key.end())) {
                maximal = false;
                break;
            }
        }
        if (maximal) out.push_back(key);
    }
    return out;
}

IntMat ConeComplex::chart_embed(const ConeKey& key) const {
    IntMat E(ambient_rank, static_cast<int>(key.size()));
    for (int j = 0; j < static_cast<int>(key.size()); ++j) {
        const Ray& r = ray(key[j]);
        for (int i = 0; i < ambient_rank; ++i) E(i, j) = r.embed[i];
    }
    return E;
}

RatVec ConeComplex::embed_point(const ConeKey& key, const RatVec& chart_point) const {
    if (chart_point.size() != key.size())
        throw InvalidArgument("embed_point: chart point size mismatch");
    RatVec out(ambient_rank, Rat(0));
    for (std::size_t j = 0; j < key.size(); ++j) {
        const Ray& r = ray(key[j]);
        for (int i = 0; i < ambient_rank; ++i) out[i] += Rat(r.embed[i]) * chart_point[j];
    }
    return out;
}

std::vector<ConeKey> ConeComplex::covers(const ConeKey& tau) const {
    std::vector<ConeKey> out;
    for (const auto& [key, c] : cones) {
        if (key.size() != tau.size() + 1) continue;
        if (std::includes(key.begin(), key.end(), tau.begin(), tau.end())) out.push_back(key);
    }
    return out;
}

std::vector<ConeKey> ConeComplex::cones_containing(const ConeKey& tau) const {
    std::vector<ConeKey> out;
    for (const auto& [key, c] : cones)
        if (std::includes(key.begin(), key.end(), tau.begin(), tau.end())) out.push_back(key);
    return out;
}

const TauQuotient& ConeComplex::tau_quotient(const ConeKey& tau) const {
    {
        std::lock_guard<std::mutex> lock(caches_->mu);
        auto it = caches_->tau.find(tau);
        if (it != caches_->tau.end()) return it->second;
    }
    const Cone& t = cone(tau);
    TauQuotient q;
    if (t.dim() == 0) {
        q.sat_basis = IntMat(ambient_rank, 0);
    } else {
        // generators of phi(L_tau): E * B, scaled to integers
        RatMat gens = to_rat(chart_embed(tau)) * t.lattice;
        Int m = denominator_lcm(gens);
        IntMat scaled(gens.rows(), gens.cols());
        for (int i = 0; i < gens.rows(); ++i)
            for (int j = 0; j < gens.cols(); ++j) scaled(i, j) = rat_to_int(gens(i, j) * Rat(m));
        q.sat_basis = saturation(scaled);
    }
    QuotientProjection qp = quotient_projection(ambient_rank, q.sat_basis);
    q.proj = qp.proj;
    q.lift = qp.lift;
    q.quotient_rank = qp.quotient_rank;
    std::lock_guard<std::mutex> lock(caches_->mu);
    return caches_->tau.emplace(tau, std::move(q)).first->second;
}

const LatticeNormal& ConeComplex::lattice_normal(const ConeKey& tau, const ConeKey& sigma) const {
    auto cache_key = std::make_pair(tau, sigma);
    {
        std::lock_guard<std::mutex> lock(caches_->mu);
        auto it = caches_->normal.find(cache_key);
        if (it != caches_->normal.end()) return it->second;
    }
    const Cone& s = cone(sigma);
    (void)cone(tau);
    if (sigma.size() != tau.size() + 1 ||
        !std::includes(sigma.begin(), sigma.end(), tau.begin(), tau.end()))
        throw NotCodimOneFace("'" + cone_id(tau) + "' is not a facet of '" + cone_id(sigma) + "'");
    int j = -1;
    for (std::size_t i = 0; i < sigma.size(); ++i)
        if (!std::binary_search(tau.begin(), tau.end(), sigma[i])) j = static_cast<int>(i);
    const RatMat& B = s.lattice;
    const int d = s.dim();
    // L_tau in the basis coordinates of L_sigma is the saturated kernel of the
    // j-th chart coordinate functional.
    RatMat row(1, d);
    for (int c = 0; c < d; ++c) row(0, c) = B(j, c);
    Int m = denominator_lcm(row);
    IntMat row_i(1, d);
    for (int c = 0; c < d; ++c) row_i(0, c) = rat_to_int(row(0, c) * Rat(m));
    IntMat K = kernel(row_i);
    QuotientProjection qp = quotient_projection(d, K);
    // generator representative on the sigma-side (positive j-th chart coord)
    RatVec t_star(d);
    for (int i = 0; i < d; ++i) t_star[i] = Rat(qp.lift(i, 0));
    RatVec x_star = B.apply(t_star);
    if (x_star[j] == 0) throw Error("Internal", "degenerate lattice normal representative");
    if (x_star[j] < 0)
        for (int i = 0; i < d; ++i) x_star[i] = -x_star[i];
    RatVec w = embed_point(sigma, x_star);
    LatticeNormal out;
    out.rep_chart = x_star;
    out.ambient_lift = IntVec(ambient_rank);
    for (int i = 0; i < ambient_rank; ++i) out.ambient_lift[i] = rat_to_int(w[i]);
    const TauQuotient& tq = tau_quotient(tau);
    out.projected = IntVec(tq.quotient_rank, Int(0));
    for (int i = 0; i < tq.quotient_rank; ++i)
        for (int c = 0; c < ambient_rank; ++c)
            out.projected[i] += tq.proj(i, c) * out.ambient_lift[c];
    std::lock_guard<std::mutex> lock(caches_->mu);
    return caches_->normal.emplace(cache_key, std::move(out)).first->second;
}

// ---------------------------------------------------------------------------
// Validation

ValidationReport validate(const ConeComplex& S) {
    ValidationReport rep;
    auto issue = [&](const std::string& kind, const std::string& where, const std::string& what) {
        rep.issues.push_back({kind, where, what});
    };

    for (const auto& [id, r] : S.rays) {
        if (id.empty() || id.find('&') != std::string::npos ||
            id.find_first_of(" \t\n") != std::string::npos)
            issue("InvalidArgument", id, "ray id must be nonempty and avoid '&' and whitespace");
        if (id != r.id) issue("InvalidArgument", id, "ray id key mismatch");
        if (static_cast<int>(r.embed.size()) != S.ambient_rank)
            issue("InvalidArgument", id, "embed vector has wrong length");
    }
    if (!S.has_cone({})) issue("NotFaceClosed", "", "apex cone is missing");

    for (const auto& [key, c] : S.cones) {
        const std::string where = cone_id(key);
        if (key != c.rays) {
            issue("InvalidArgument", where, "cone key/ray list mismatch");
            continue;
        }
        bool rays_ok = true;
        for (const auto& rid : key)
            if (!S.rays.count(rid)) {
                issue("ConeNotInComplex", where, "unknown ray '" + rid + "'");
                rays_ok = false;
            }
        for (std::size_t i = 0; i + 1 < key.size(); ++i)
            if (key[i] == key[i + 1]) {
                issue("NonSimplicial", where, "duplicate ray");
                rays_ok = false;
            }
        if (!rays_ok) continue;
        const int d = c.dim();
        const RatMat& B = c.lattice;
        if (B.rows() != d || B.cols() != d) {
            issue("NonSimplicial", where, "lattice basis is not square of the cone dimension");
            continue;
        }
        if (d > 0) {
            Rat dt = det(B);
            if (dt == 0) {
                issue("NonSimplicial", where, "lattice basis is singular");
                continue;
            }
            if (!(B == lattice_basis(B)))
                issue("FaceLatticeMismatch", where, "lattice basis is not in canonical form");
            // Z^d <= L iff B^{-1} is integral
            RatMat Binv = inverse(B);
            bool contains_unit = true;
            for (int i = 0; i < d && contains_unit; ++i)
                for (int j = 0; j < d; ++j)
                    if (rat_den(Binv(i, j)) != 1) {
                        contains_unit = false;
                        break;
                    }
            if (!contains_unit)
                issue("FaceLatticeMismatch", where,
                      "chart unit vectors are not contained in the lattice");
            if (d == 1 && !(B(0, 0) == 1))
                issue("FaceLatticeMismatch", where, "ray lattice must be Z (primitive generator)");
            // embedding integrality on L
            RatMat EB = to_rat(S.chart_embed(key)) * B;
            for (int i = 0; i < EB.rows(); ++i)
                for (int j = 0; j < EB.cols(); ++j)
                    if (rat_den(EB(i, j)) != 1) {
                        issue("EmbeddingNotIntegral", where,
                              "weak embedding is not integral on the intrinsic lattice");
                        i = EB.rows();
                        break;
                    }
        }
        // facets present with matching induced lattices
        for (int drop = 0; drop < d; ++drop) {
            ConeKey facet;
            std::vector<int> keep;
            for (int i = 0; i < d; ++i)
                if (i != drop) {
                    facet.push_back(key[i]);
                    keep.push_back(i);
                }
            if (!S.has_cone(facet)) {
                issue("NotFaceClosed", where, "missing face '" + cone_id(facet) + "'");
                continue;
            }
            RatMat induced = induced_face_lattice(B, keep);
            if (!(induced == S.cone(facet).lattice))
                issue("FaceLatticeMismatch", where,
                      "induced lattice on face '" + cone_id(facet) +
                          "' differs from the recorded one");
        }
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Lattice helpers in charts

RatMat induced_face_lattice(const RatMat& B, const std::vector<int>& keep) {
    const int d = B.rows();
    std::vector<int> drop;
    std::vector<bool> keep_mask(d, false);
    for (int i : keep) keep_mask[i] = true;
    for (int i = 0; i < d; ++i)
        if (!keep_mask[i]) drop.push_back(i);
    // face condition: dropped chart coordinates vanish
    RatMat rows(static_cast<int>(drop.size()), B.cols());
    for (int i = 0; i < static_cast<int>(drop.size()); ++i)
        for (int j = 0; j < B.cols(); ++j) rows(i, j) = B(drop[i], j);
    Int m = denominator_lcm(rows);
    IntMat rows_i(rows.rows(), rows.cols());
    for (int i = 0; i < rows.rows(); ++i)
        for (int j = 0; j < rows.cols(); ++j) rows_i(i, j) = rat_to_int(rows(i, j) * Rat(m));
    IntMat K = kernel(rows_i);
    RatMat gens(static_cast<int>(keep.size()), K.cols());
    for (int j = 0; j < K.cols(); ++j) {
        RatVec t(B.cols());
        for (int i = 0; i < B.cols(); ++i) t[i] = Rat(K(i, j));
        RatVec x = B.apply(t);
        for (int i = 0; i < static_cast<int>(keep.size()); ++i) gens(i, j) = x[keep[i]];
    }
    return lattice_basis(gens);
}

RatMat lattice_intersect_span(const RatMat& B, const RatMat& T) {
    // annihilator of span(T)
    Int mt = denominator_lcm(T);
    IntMat Ti(T.rows(), T.cols());
    for (int i = 0; i < T.rows(); ++i)
        for (int j = 0; j < T.cols(); ++j) Ti(i, j) = rat_to_int(T(i, j) * Rat(mt));
    IntMat ann = kernel(Ti.transpose());  // columns f with f^T T = 0
    // condition on lattice coordinates: ann^T * B * t = 0
    RatMat M = to_rat(ann.transpose()) * B;
    Int m = denominator_lcm(M);
    IntMat Mi(M.rows(), M.cols());
    for (int i = 0; i < M.rows(); ++i)
        for (int j = 0; j < M.cols(); ++j) Mi(i, j) = rat_to_int(M(i, j) * Rat(m));
    IntMat K = kernel(Mi);
    RatMat gens(B.rows(), K.cols());
    for (int j = 0; j < K.cols(); ++j) {
        RatVec t(B.cols());
        for (int i = 0; i < B.cols(); ++i) t[i] = Rat(K(i, j));
        RatVec x = B.apply(t);
        for (int i = 0; i < B.rows(); ++i) gens(i, j) = x[i];
    }
    return lattice_basis(gens);
}

bool in_cone(const RatMat& gens, const RatVec& point) {
    if (static_cast<int>(point.size()) != gens.rows())
        throw InvalidArgument("in_cone: dimension mismatch");
    if (is_zero(point)) return true;
    const int k = gens.cols();
    const int r = std::min(rank(gens), static_cast<int>(point.size()));
    std::vector<int> subset;
    std::function<bool(int, int)> search = [&](int start, int need) -> bool {
        if (need == 0) {
            RatMat sub(gens.rows(), static_cast<int>(subset.size()));
            for (int j = 0; j < sub.cols(); ++j)
                for (int i = 0; i < sub.rows(); ++i) sub(i, j) = gens(i, subset[j]);
            auto sol = solve_linear(sub, point, SolveMode::Rational);
            if (!sol) return false;
            for (const Rat& l : *sol)
                if (l < 0) return false;
            return true;
        }
        for (int c = start; c + need <= k; ++c) {
            subset.push_back(c);
            if (search(c + 1, need - 1)) return true;
            subset.pop_back();
        }
        return false;
    };
    for (int s = 1; s <= r; ++s)
        if (search(0, s)) return true;
    return false;
}

// ---------------------------------------------------------------------------
// Product and builders

ConeComplex point_complex() {
    ConeComplex S;
    S.ambient_rank = 0;
    Cone apex;
    apex.lattice = RatMat(0, 0);
    S.cones[{}] = apex;
    return S;
}

ConeComplex line_fan() {
    ConeComplex S;
    S.ambient_rank = 1;
    S.rays["+"] = {"+", {Int(1)}};
    S.rays["-"] = {"-", {Int(-1)}};
    Cone apex;
    apex.lattice = RatMat(0, 0);
    S.cones[{}] = apex;
    for (const char* id : {"+", "-"}) {
        Cone c;
        c.rays = {id};
        c.lattice = RatMat::identity(1);
        S.cones[c.rays] = c;
    }
    return S;
}

ConeComplex orthant_complex(int d) {
    ConeComplex S;
    S.ambient_rank = d;
    std::vector<RayId> ids;
    for (int i = 0; i < d; ++i) {
        RayId id = "e" + std::to_string(i + 1);
        IntVec e(d, Int(0));
        e[i] = 1;
        S.rays[id] = {id, e};
        ids.push_back(id);
    }
    // all subsets as faces
    const int total = 1 << d;
    for (int mask = 0; mask < total; ++mask) {
        std::vector<RayId> sel;
        for (int i = 0; i < d; ++i)
            if (mask & (1 << i)) sel.push_back(ids[i]);
        Cone c;
        c.rays = make_key(sel);
        c.lattice = RatMat::identity(static_cast<int>(sel.size()));
        S.cones[c.rays] = c;
    }
    return S;
}

ConeComplex projective_fan(int r) {
    ConeComplex S;
    S.ambient_rank = r;
    std::vector<RayId> ids;
    for (int i = 0; i < r; ++i) {
        RayId id = "e" + std::to_string(i + 1);
        IntVec e(r, Int(0));
        e[i] = 1;
        S.rays[id] = {id, e};
        ids.push_back(id);
    }
    {
        RayId id = "f";  // -e1-...-er
        IntVec e(r, Int(-1));
        S.rays[id] = {id, e};
        ids.push_back(id);
    }
    // cones: all proper subsets of the r+1 rays
    const int total = 1 << (r + 1);
    for (int mask = 0; mask < total; ++mask) {
        if (mask == total - 1) continue;  // all rays together are not a cone
        std::vector<RayId> sel;
        for (int i = 0; i <= r; ++i)
            if (mask & (1 << i)) sel.push_back(ids[i]);
        Cone c;
        c.rays = make_key(sel);
        c.lattice = RatMat::identity(static_cast<int>(sel.size()));
        S.cones[c.rays] = c;
    }
    return S;
}

ConeComplex ray_complex(const IntVec& direction) {
    ConeComplex S;
    S.ambient_rank = static_cast<int>(direction.size());
    S.rays["r"] = {"r", direction};
    Cone apex;
    apex.lattice = RatMat(0, 0);
    S.cones[{}] = apex;
    Cone c;
    c.rays = {"r"};
    c.lattice = RatMat::identity(1);
    S.cones[c.rays] = c;
    return S;
}

}  // namespace conecalc
