#include "conecalc/subdivide.hpp"

#include <algorithm>
#include <cstdlib>
#include <set>
#include <sstream>

namespace conecalc {

ConeKey SubdivisionRecord::parent(const ConeKey& sub_cone) const {
    std::set<RayId> ids;
    for (const RayId& r : sub_cone) {
        const RayLocus& l = locus.at(r);
        ids.insert(l.cone.begin(), l.cone.end());
    }
    ConeKey key(ids.begin(), ids.end());
    if (!base->has_cone(key))
        throw AssemblyNotComplex("loci of '" + cone_id(sub_cone) +
                                 "' do not span a cone of the base complex");
    return key;
}

RatVec SubdivisionRecord::point_in(const ConeKey& base_cone, const RayId& sub_ray) const {
    const RayLocus& l = locus.at(sub_ray);
    RatVec out(base_cone.size(), Rat(0));
    for (std::size_t i = 0; i < l.cone.size(); ++i) {
        auto pos = std::find(base_cone.begin(), base_cone.end(), l.cone[i]);
        if (pos == base_cone.end())
            throw InvalidArgument("locus cone of '" + sub_ray + "' is not a face of '" +
                                  cone_id(base_cone) + "'");
        out[static_cast<std::size_t>(pos - base_cone.begin())] = l.point[i];
    }
    return out;
}

Subdivision identity_subdivision(ComplexPtr S) {
    Subdivision out;
    out.complex = S;
    out.record.base = S;
    for (const auto& [id, r] : S->rays) out.record.locus[id] = {ConeKey{id}, RatVec{Rat(1)}};
    return out;
}

std::size_t cone_cap() {
    if (const char* env = std::getenv("CONECALC_CONE_CAP")) {
        char* end = nullptr;
        unsigned long long v = std::strtoull(env, &end, 10);
        if (end && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
    }
    return 100000;
}

static std::string rat_str(const Rat& q) {
    std::ostringstream os;
    os << numerator(q);
    if (denominator(q) != 1) os << "/" << denominator(q);
    return os.str();
}

StellarResult stellar_subdivide(const Subdivision& S, const ConeKey& cone0, const RatVec& v_chart) {
    const ConeComplex& C = *S.complex;
    const Cone& c0 = C.cone(cone0);
    const int d0 = c0.dim();
    if (d0 == 0) throw InvalidArgument("cannot subdivide the apex");
    if (static_cast<int>(v_chart.size()) != d0)
        throw InvalidArgument("subdivision point has wrong chart dimension");
    for (const Rat& x : v_chart)
        if (x <= 0)
            throw NotInRelativeInterior(
                "point is not in the relative interior of '" + cone_id(cone0) + "'");
    if (d0 == 1) return {S, std::nullopt};  // the ray itself: nothing to do

    // primitive lattice point on the ray through v_chart
    auto t = solve_linear(c0.lattice, v_chart, SolveMode::Rational);
    if (!t) throw Error("Internal", "lattice basis failed to span its chart");
    IntVec t_star = primitive_direction(*t);
    RatVec v_star(d0, Rat(0));
    for (int i = 0; i < d0; ++i)
        for (int j = 0; j < d0; ++j) v_star[i] += c0.lattice(i, j) * Rat(t_star[j]);

    std::string rid = "s(";
    for (std::size_t i = 0; i < cone0.size(); ++i) rid += (i ? "+" : "") + cone0[i];
    rid += ";";
    for (int i = 0; i < d0; ++i) rid += (i ? "," : "") + rat_str(v_star[i]);
    rid += ")";
    if (C.rays.count(rid)) throw Error("Internal", "subdivision ray id collision at " + rid);

    auto next = std::make_shared<ConeComplex>();
    next->ambient_rank = C.ambient_rank;
    next->rays = C.rays;
    Ray nu;
    nu.id = rid;
    RatVec emb = C.embed_point(cone0, v_star);
    nu.embed = IntVec(C.ambient_rank);
    for (int i = 0; i < C.ambient_rank; ++i) nu.embed[i] = rat_to_int(emb[i]);
    next->rays[rid] = nu;

    std::vector<ConeKey> removed;
    for (const auto& [key, c] : C.cones) {
        if (std::includes(key.begin(), key.end(), cone0.begin(), cone0.end()))
            removed.push_back(key);
        else
            next->cones[key] = c;
    }

    for (const ConeKey& sigma : removed) {
        const Cone& sc = C.cone(sigma);
        const int d = sc.dim();
        // positions of cone0's rays inside sigma's chart
        std::vector<int> c0_pos(cone0.size());
        for (std::size_t i = 0; i < cone0.size(); ++i)
            c0_pos[i] = static_cast<int>(
                std::find(sigma.begin(), sigma.end(), cone0[i]) - sigma.begin());
        RatVec v_in_sigma(d, Rat(0));
        for (std::size_t i = 0; i < cone0.size(); ++i) v_in_sigma[c0_pos[i]] = v_star[i];

        for (int mask = 0; mask < (1 << d); ++mask) {
            // F must not contain all of cone0's rays
            bool contains_all = true;
            for (int p : c0_pos)
                if (!(mask & (1 << p))) {
                    contains_all = false;
                    break;
                }
            if (contains_all) continue;
            std::vector<RayId> ids{rid};
            std::vector<int> members;
            for (int i = 0; i < d; ++i)
                if (mask & (1 << i)) {
                    ids.push_back(sigma[i]);
                    members.push_back(i);
                }
            ConeKey key = make_key(ids);
            if (next->cones.count(key)) continue;
            // chart points of the new cone's rays inside sigma's chart, in key order
            RatMat T(d, static_cast<int>(key.size()));
            for (std::size_t kk = 0; kk < key.size(); ++kk) {
                if (key[kk] == rid) {
                    for (int i = 0; i < d; ++i) T(i, static_cast<int>(kk)) = v_in_sigma[i];
                } else {
                    int p = static_cast<int>(
                        std::find(sigma.begin(), sigma.end(), key[kk]) - sigma.begin());
                    T(p, static_cast<int>(kk)) = 1;
                }
            }
            RatMat L = lattice_intersect_span(sc.lattice, T);
            // re-express the intersection basis in the new chart (T coordinates)
            RatMat chart_basis(static_cast<int>(key.size()), L.cols());
            for (int j = 0; j < L.cols(); ++j) {
                auto y = solve_linear(T, L.col(j), SolveMode::Rational);
                if (!y) throw Error("Internal", "dependent rays in stellar piece");
                for (std::size_t i = 0; i < key.size(); ++i)
                    chart_basis(static_cast<int>(i), j) = (*y)[i];
            }
            Cone nc;
            nc.rays = key;
            nc.lattice = lattice_basis(chart_basis);
            next->cones[key] = nc;
        }
    }

    if (next->cones.size() > cone_cap())
        throw RefinementExplosion("cone count " + std::to_string(next->cones.size()) +
                                  " exceeds the cap");

    StellarResult out;
    out.sub.complex = next;
    out.sub.record.base = S.record.base;
    out.sub.record.locus = S.record.locus;
    // locus of the new ray in the base complex
    ConeKey delta0 = S.record.parent(cone0);
    RatVec p0(delta0.size(), Rat(0));
    for (std::size_t j = 0; j < cone0.size(); ++j) {
        RatVec pj = S.record.point_in(delta0, cone0[j]);
        for (std::size_t i = 0; i < p0.size(); ++i) p0[i] += v_star[j] * pj[i];
    }
    ConeKey support;
    RatVec restricted;
    for (std::size_t i = 0; i < delta0.size(); ++i)
        if (p0[i] != 0) {
            support.push_back(delta0[i]);
            restricted.push_back(p0[i]);
        }
    out.sub.record.locus[rid] = {support, restricted};
    out.new_ray = rid;
    return out;
}

Subdivision slice_by_hyperplane(Subdivision S, const IntVec& h, std::size_t cap) {
    if (static_cast<int>(h.size()) != S.complex->ambient_rank)
        throw InvalidArgument("hyperplane functional has wrong dimension");
    for (;;) {
        const ConeComplex& C = *S.complex;
        std::map<RayId, Int> val;
        for (const auto& [id, r] : C.rays) {
            Int v = 0;
            for (std::size_t i = 0; i < h.size(); ++i) v += h[i] * r.embed[i];
            val[id] = v;
        }
        // first cone (in key order) with a strictly mixed ray pair
        RayId a, b;
        bool found = false;
        for (const auto& [key, c] : C.cones) {
            if (found) break;
            for (std::size_t i = 0; i < key.size() && !found; ++i)
                for (std::size_t j = i + 1; j < key.size(); ++j) {
                    const Int &vi = val[key[i]], &vj = val[key[j]];
                    if ((vi > 0 && vj < 0) || (vi < 0 && vj > 0)) {
                        a = key[i];
                        b = key[j];
                        found = true;
                        break;
                    }
                }
        }
        if (!found) return S;
        ConeKey face = make_key({a, b});
        // crossing point |val(b)| * gen(a) + |val(a)| * gen(b) lies on the hyperplane
        RatVec v(2);
        Rat ca = Rat(abs(val[b])), cb = Rat(abs(val[a]));
        v[0] = (face[0] == a) ? ca : cb;
        v[1] = (face[1] == b) ? cb : ca;
        StellarResult st = stellar_subdivide(S, face, v);
        if (st.sub.complex->cones.size() > cap)
            throw RefinementExplosion("cone count exceeds the cap while slicing");
        S = std::move(st.sub);
    }
}

RefineResult refine_along_map(Subdivision S, const IntMat& G, ComplexPtr target_fan,
                              std::size_t cap) {
    const int m = target_fan->ambient_rank;
    if (G.rows() != m || G.cols() != S.complex->ambient_rank)
        throw InvalidArgument("refine_along_map: matrix shape mismatch");
    if (target_fan->dim() != m)
        throw InvalidArgument("target fan is not full-dimensional (not complete)");

    // wall normals of the target fan, deduped up to sign
    std::set<IntVec> normals;
    for (const ConeKey& w : target_fan->cones_of_dim(m - 1)) {
        IntMat E = target_fan->chart_embed(w);
        IntMat ann = kernel(E.transpose());
        if (ann.cols() != 1)
            throw InvalidArgument("wall '" + cone_id(w) + "' does not span a hyperplane");
        IntVec n = primitive(ann.col(0));
        for (const Int& x : n) {
            if (x > 0) break;
            if (x < 0) {
                for (Int& y : n) y = -y;
                break;
            }
        }
        normals.insert(n);
    }
    for (const IntVec& nrm : normals) {
        IntVec hG(S.complex->ambient_rank, Int(0));
        for (int j = 0; j < S.complex->ambient_rank; ++j)
            for (int i = 0; i < m; ++i) hG[j] += nrm[i] * G(i, j);
        S = slice_by_hyperplane(std::move(S), hG, cap);
    }

    // minimal target cone containing the image of every refined cone
    std::vector<ConeKey> fan_cones;
    for (const auto& [key, c] : target_fan->cones) fan_cones.push_back(key);
    std::stable_sort(fan_cones.begin(), fan_cones.end(),
                     [](const ConeKey& x, const ConeKey& y) { return x.size() < y.size(); });

    RefineResult out;
    out.witness.source = S.complex;
    out.witness.target = target_fan;
    out.witness.lattice_map = G;
    for (const auto& [key, c] : S.complex->cones) {
        std::vector<RatVec> pts;
        for (const RayId& rid : key) {
            const Ray& r = S.complex->ray(rid);
            RatVec p(m, Rat(0));
            for (int i = 0; i < m; ++i)
                for (int j = 0; j < G.cols(); ++j) p[i] += Rat(G(i, j)) * Rat(r.embed[j]);
            pts.push_back(p);
        }
        const ConeKey* best = nullptr;
        for (const ConeKey& fk : fan_cones) {
            RatMat E = to_rat(target_fan->chart_embed(fk));
            bool all = true;
            for (const RatVec& p : pts)
                if (!in_cone(E, p)) {
                    all = false;
                    break;
                }
            if (all) {
                best = &fk;
                break;
            }
        }
        if (!best)
            throw InvalidArgument("image of cone '" + cone_id(key) +
                                  "' is not covered by the target fan");
        out.assignment[key] = *best;
        // chart matrix: express each ray image in the target cone's chart
        RatMat E = to_rat(target_fan->chart_embed(*best));
        RatMat M(static_cast<int>(best->size()), c.dim());
        for (int j = 0; j < c.dim(); ++j) {
            auto y = solve_linear(E, pts[static_cast<std::size_t>(j)], SolveMode::Rational);
            if (!y) throw Error("Internal", "membership certified but not solvable");
            for (int i = 0; i < M.rows(); ++i) M(i, j) = (*y)[i];
        }
        out.witness.cone_image[key] = *best;
        out.witness.cone_matrix[key] = M;
    }
    out.sub = std::move(S);
    return out;
}

ComplexMorphism subdivision_morphism(const Subdivision& S) {
    ComplexMorphism f;
    f.source = S.complex;
    f.target = S.record.base;
    f.lattice_map = IntMat::identity(S.complex->ambient_rank);
    for (const auto& [key, c] : S.complex->cones) {
        ConeKey delta = S.record.parent(key);
        RatMat M(static_cast<int>(delta.size()), c.dim());
        for (int j = 0; j < c.dim(); ++j) {
            RatVec p = S.record.point_in(delta, key[j]);
            for (int i = 0; i < M.rows(); ++i) M(i, j) = p[i];
        }
        f.cone_image[key] = delta;
        f.cone_matrix[key] = M;
    }
    return f;
}

}  // namespace conecalc
