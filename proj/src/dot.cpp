#include <algorithm>
#include <set>
#include <sstream>

#include "conecalc/cycles.hpp"

namespace conecalc {

namespace {

ConeKey key_union(const ConeKey& a, const ConeKey& b) {
    std::vector<RayId> ids;
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(ids));
    return ids;  // still sorted and duplicate-free
}

std::string assembled_ray_id(const ConeKey& star_locus, const IntVec& tdir) {
    std::string label = cone_id(star_locus);
    for (char& ch : label)
        if (ch == '&') ch = '+';
    std::ostringstream os;
    os << "d(" << label << ';';
    for (std::size_t i = 0; i < tdir.size(); ++i) {
        if (i) os << ',';
        os << tdir[i];
    }
    os << ')';
    return os.str();
}

}  // namespace

TropicalCycle assemble_star_cycle(ComplexPtr S, const ConeKey& tau, const StarContext& ctx,
                                  const std::vector<StarContribution>& contribs, int dim) {
    const ConeComplex& star_cx = *ctx.star;
    const std::string where = "star of [" + cone_id(tau) + "]";

    struct ARay {
        ConeKey star_locus;  // minimal star cone whose relative interior meets the ray
        RatVec vpoint;       // primitive lattice point, in that cone's chart
        RayId id;
        IntVec embed;
    };
    std::map<std::pair<ConeKey, IntVec>, int> ray_index;
    std::vector<ARay> arays;

    // Locus of a contribution ray inside the star, as (minimal star cone,
    // primitive chart point); input is its locus in the source complex.
    auto star_locus = [&](const ConeKey& gamma, const RatVec& point)
        -> std::pair<ConeKey, RatVec> {
        ConeKey sigma = key_union(gamma, tau);
        if (!S->has_cone(sigma))
            throw AssemblyNotComplex(where + ": contribution locus [" + cone_id(gamma) +
                                     "] does not join the subdivided cone");
        RatVec q(sigma.size(), Rat(0));
        for (std::size_t i = 0; i < gamma.size(); ++i) {
            auto it = std::lower_bound(sigma.begin(), sigma.end(), gamma[i]);
            q[static_cast<std::size_t>(it - sigma.begin())] = point[i];
        }
        const ConeKey& star_key = ctx.source_star.at(sigma);
        RatVec sp = ctx.to_star_chart(sigma, q);
        ConeKey minimal;
        RatVec mp;
        for (std::size_t i = 0; i < star_key.size(); ++i) {
            if (sp[i] == 0) continue;
            minimal.push_back(star_key[i]);
            mp.push_back(sp[i]);
        }
        if (minimal.empty())
            throw InvalidArgument(where + ": contribution ray lies in the subdivided cone");
        return {minimal, mp};
    };

    auto intern_ray = [&](const ConeKey& gamma, const RatVec& point) -> int {
        auto [minimal, mp] = star_locus(gamma, point);
        const RatMat& B = star_cx.cone(minimal).lattice;
        RatVec t = inverse(B).apply(mp);
        IntVec tdir = primitive_direction(t);
        auto key = std::make_pair(minimal, tdir);
        auto it = ray_index.find(key);
        if (it != ray_index.end()) return it->second;
        RatVec vp(tdir.size());
        {
            RatVec td(tdir.size());
            for (std::size_t i = 0; i < tdir.size(); ++i) td[i] = Rat(tdir[i]);
            vp = B.apply(td);
        }
        ARay ar{minimal, vp, assembled_ray_id(minimal, tdir), {}};
        RatVec emb = star_cx.embed_point(minimal, vp);
        ar.embed.resize(emb.size());
        for (std::size_t i = 0; i < emb.size(); ++i) ar.embed[i] = rat_to_int(emb[i]);
        int idx = static_cast<int>(arays.size());
        ray_index.emplace(std::move(key), idx);
        arays.push_back(std::move(ar));
        return idx;
    };

    // Intern all rays and aggregate weights per contributed cone.
    std::map<ConeKey, Rat> weights;
    std::set<ConeKey> contributed;
    for (const StarContribution& sc : contribs) {
        std::vector<RayId> ids;
        for (const auto& [gamma, point] : sc.ray_loci)
            ids.push_back(arays[static_cast<std::size_t>(intern_ray(gamma, point))].id);
        ConeKey cone;
        try {
            cone = make_key(std::move(ids));
        } catch (const Error&) {
            throw AssemblyNotComplex(where + ": contributed cone has coinciding rays");
        }
        if (static_cast<int>(cone.size()) != dim)
            throw AssemblyNotComplex(where + ": contributed cone of wrong dimension");
        weights[cone] += sc.weight;
        contributed.insert(std::move(cone));
    }
    for (auto it = weights.begin(); it != weights.end();)
        it = (it->second == 0) ? weights.erase(it) : std::next(it);

    // Face closure, with induced lattices computed inside the spanning star
    // cone of each face's ray loci.
    auto cx = std::make_shared<ConeComplex>();
    cx->ambient_rank = star_cx.ambient_rank;
    std::map<RayId, int> by_id;
    for (int i = 0; i < static_cast<int>(arays.size()); ++i) by_id[arays[i].id] = i;

    auto add_cone = [&](const ConeKey& key) {
        if (cx->cones.count(key)) return;
        ConeKey source_union;  // source cone spanned by the member loci
        for (const RayId& id : key)
            source_union = key_union(source_union,
                                     ctx.cone_source.at(arays[by_id.at(id)].star_locus));
        source_union = key_union(source_union, tau);
        if (!S->has_cone(source_union))
            throw AssemblyNotComplex(where + ": ray loci of [" + cone_id(key) +
                                     "] do not span a cone");
        const ConeKey& chart = ctx.source_star.at(source_union);
        RatMat T(static_cast<int>(chart.size()), static_cast<int>(key.size()));
        for (std::size_t j = 0; j < key.size(); ++j) {
            const ARay& ar = arays[by_id.at(key[j])];
            for (std::size_t i = 0; i < ar.star_locus.size(); ++i) {
                auto it = std::lower_bound(chart.begin(), chart.end(), ar.star_locus[i]);
                T(static_cast<int>(it - chart.begin()), static_cast<int>(j)) = ar.vpoint[i];
            }
        }
        if (rank(T) != static_cast<int>(key.size()))
            throw AssemblyNotComplex(where + ": contributed cone [" + cone_id(key) +
                                     "] is degenerate");
        RatMat L = lattice_intersect_span(star_cx.cone(chart).lattice, T);
        RatMat X(static_cast<int>(key.size()), L.cols());
        for (int j = 0; j < L.cols(); ++j) {
            auto x = solve_linear(T, L.col(j), SolveMode::Rational);
            if (!x) throw AssemblyNotComplex(where + ": induced lattice escapes its span");
            X.set_col(j, *x);
        }
        cx->cones[key] = Cone{key, lattice_basis(X)};
    };

    cx->cones[ConeKey{}] = Cone{{}, RatMat(0, 0)};
    for (const ARay& ar : arays) cx->rays[ar.id] = Ray{ar.id, ar.embed};
    for (const ConeKey& cone : contributed) {
        const auto n = cone.size();
        for (std::size_t mask = 1; mask < (std::size_t(1) << n); ++mask) {
            ConeKey face;
            for (std::size_t i = 0; i < n; ++i)
                if (mask & (std::size_t(1) << i)) face.push_back(cone[i]);
            add_cone(face);
        }
    }

    ValidationReport rep = validate(*cx);
    if (!rep.ok())
        throw AssemblyNotComplex(where + ": contributed cones do not form a complex\n" +
                                 rep.to_string());

    SubdivisionRecord record{ctx.star, {}};
    for (const ARay& ar : arays) record.locus[ar.id] = RayLocus{ar.star_locus, ar.vpoint};

    ComplexPtr cptr = cx;
    MinkowskiWeight w{cptr, dim, std::move(weights)};
    BalanceReport bal = check_balanced(w);
    if (!bal.ok())
        throw AssemblyNotComplex(where + ": assembled weight is not balanced\n" +
                                 bal.to_string());
    return TropicalCycle{ctx.star, Subdivision{cptr, std::move(record)}, std::move(w)};
}

std::map<ConeKey, std::vector<StarContribution>> dot_contributions(const Divisor& psi,
                                                                   const TropicalCycle& A) {
    if (psi.complex != A.base)
        throw InvalidArgument("dot: divisor and cycle on different complexes");
    const int k = A.dim();
    if (k == 0) throw InvalidArgument("dot with a zero-dimensional cycle");
    const ConeComplex& S = *A.base;
    const ConeComplex& rep = *A.rep.complex;
    const SubdivisionRecord& rec = A.rep.record;

    std::map<ConeKey, std::vector<StarContribution>> out;
    for (const auto& [skey, w] : A.weight.weights) {
        if (w == 0) continue;
        const Cone& sub_cone = rep.cone(skey);
        if (sub_cone.dim() != k)
            throw MixedDimensions("weight on [" + cone_id(skey) + "] of dimension " +
                                  std::to_string(sub_cone.dim()) + " in a weight of dimension " +
                                  std::to_string(k));
        const ConeKey delta = rec.parent(skey);
        const Cone& parent = S.cone(delta);
        const int d = parent.dim();
        const RatMat Binv = inverse(parent.lattice);

        // Chart points of the sub-cone's rays in the parent chart, and the
        // sub-cone's lattice generators, both in parent-lattice coordinates.
        RatMat T(d, k);
        std::vector<IntVec> tcols(static_cast<std::size_t>(k));
        for (int j = 0; j < k; ++j) {
            RatVec p = rec.point_in(delta, skey[static_cast<std::size_t>(j)]);
            T.set_col(j, p);
            RatVec t = Binv.apply(p);
            IntVec ti(t.size());
            for (std::size_t i = 0; i < t.size(); ++i) ti[i] = rat_to_int(t[i]);
            tcols[static_cast<std::size_t>(j)] = std::move(ti);
        }
        RatMat NSr(d, k);
        {
            RatMat tc(d, k);
            for (int j = 0; j < k; ++j)
                for (int i = 0; i < d; ++i) tc(i, j) = Rat(tcols[static_cast<std::size_t>(j)][i]);
            NSr = tc * sub_cone.lattice;
        }
        IntMat NS = to_int(NSr);

        for (int j = 0; j < k; ++j) {
            const RayId& rho = skey[static_cast<std::size_t>(j)];
            const RayLocus& loc = rec.locus.at(rho);
            Rat psi_u = psi.value_at(loc.cone, loc.point);
            if (psi_u == 0) continue;

            // Lattice of the locus span inside the parent, in the same
            // coordinates: kernel of the parent-chart rows away from tau.
            std::vector<int> away;
            for (int i = 0; i < d; ++i)
                if (!std::binary_search(loc.cone.begin(), loc.cone.end(),
                                        delta[static_cast<std::size_t>(i)]))
                    away.push_back(i);
            IntMat R(static_cast<int>(away.size()), d);
            for (int r = 0; r < R.rows(); ++r) {
                RatVec row = parent.lattice.row(away[static_cast<std::size_t>(r)]);
                Int l = denominator_lcm(row);
                for (int cidx = 0; cidx < d; ++cidx)
                    R(r, cidx) = rat_to_int(row[static_cast<std::size_t>(cidx)] * Rat(l));
            }
            IntMat Ktau = kernel(R);

            IntMat comb(d, Ktau.cols() + k);
            for (int cidx = 0; cidx < Ktau.cols(); ++cidx)
                for (int i = 0; i < d; ++i) comb(i, cidx) = Ktau(i, cidx);
            for (int cidx = 0; cidx < k; ++cidx)
                for (int i = 0; i < d; ++i) comb(i, Ktau.cols() + cidx) = NS(i, cidx);
            if (Ktau.cols() + k - rank(comb) != 1) continue;  // spans overlap too much

            Int ind = index_in_saturation(comb);
            StarContribution sc;
            sc.weight = psi_u * Rat(ind) * w;
            for (int jj = 0; jj < k; ++jj) {
                if (jj == j) continue;
                const RayLocus& rl = rec.locus.at(skey[static_cast<std::size_t>(jj)]);
                sc.ray_loci.emplace_back(rl.cone, rl.point);
            }
            out[loc.cone].push_back(std::move(sc));
        }
    }
    return out;
}

ExtendedCycle dot(const Divisor& psi, const TropicalCycle& A) {
    auto groups = dot_contributions(psi, A);
    ExtendedCycle out{A.base, A.dim() - 1, {}};
    for (auto& [tau, list] : groups) {
        StarContext ctx = star(A.base, tau);
        TropicalCycle comp = assemble_star_cycle(A.base, tau, ctx, list, A.dim() - 1);
        if (comp.weight.weights.empty()) continue;
        out.components.emplace(tau, StarPiece{std::move(ctx), std::move(comp)});
    }
    return out;
}

}  // namespace conecalc
