#include "conecalc/cycles.hpp"

namespace conecalc {

Rat Divisor::value_at(const ConeKey& cone, const RatVec& chart_point) const {
    if (chart_point.size() != cone.size())
        throw InvalidArgument("divisor evaluation: chart point size mismatch");
    Rat acc(0);
    for (std::size_t i = 0; i < cone.size(); ++i) acc += value(cone[i]) * chart_point[i];
    return acc;
}

bool divisor_integral(const Divisor& psi) {
    const ConeComplex& S = *psi.complex;
    for (const auto& [key, cone] : S.cones) {
        const int d = cone.dim();
        for (int j = 0; j < d; ++j) {
            Rat acc(0);
            for (int i = 0; i < d; ++i) acc += psi.value(key[i]) * cone.lattice(i, j);
            if (rat_den(acc) != 1) return false;
        }
    }
    return true;
}

CpCertificate cp_certificate(const Divisor& psi) {
    const ConeComplex& S = *psi.complex;
    CpCertificate cert;
    for (const auto& [key, cone] : S.cones) {
        const int d = cone.dim();
        RatMat A(d, S.ambient_rank);
        RatVec b(d);
        for (int i = 0; i < d; ++i) {
            const IntVec& e = S.ray(key[i]).embed;
            for (int j = 0; j < S.ambient_rank; ++j) A(i, j) = Rat(e[j]);
            b[i] = psi.value(key[i]);
        }
        auto m = solve_linear(A, b, SolveMode::Rational);
        if (!m) throw NotCp("no linear functional matches the divisor on [" + cone_id(key) + "]");
        cert.m[key] = std::move(*m);
    }
    cert.integral = divisor_integral(psi);
    return cert;
}

std::optional<RatVec> lin_equiv(const Divisor& psi, const Divisor& chi) {
    if (psi.complex != chi.complex)
        throw InvalidArgument("lin_equiv: divisors on different complexes");
    const ConeComplex& S = *psi.complex;
    RatMat A(static_cast<int>(S.rays.size()), S.ambient_rank);
    RatVec b(static_cast<int>(S.rays.size()));
    int i = 0;
    for (const auto& [id, ray] : S.rays) {
        for (int j = 0; j < S.ambient_rank; ++j) A(i, j) = Rat(ray.embed[j]);
        b[i] = psi.value(id) - chi.value(id);
        ++i;
    }
    return solve_linear(A, b, SolveMode::Rational);
}

Divisor restrict_divisor_to_star(const Divisor& psi, const StarContext& ctx, const RatVec& m_tau) {
    if (psi.complex != ctx.source)
        throw InvalidArgument("restrict_divisor_to_star: divisor not on the star's source");
    Divisor out{ctx.star, {}};
    for (const auto& [star_ray, cover] : ctx.ray_source) {
        const RatVec& rep = ctx.ray_rep.at(star_ray);
        const LatticeNormal& n = ctx.source->lattice_normal(ctx.tau, cover);
        Rat val = psi.value_at(cover, rep);
        for (std::size_t j = 0; j < n.ambient_lift.size(); ++j)
            val -= m_tau[j] * Rat(n.ambient_lift[j]);
        out.values[star_ray] = val;
    }
    return out;
}

Divisor restrict_divisor_to_star(const Divisor& psi, const StarContext& ctx) {
    const ConeComplex& S = *ctx.source;
    const int d = static_cast<int>(ctx.tau.size());
    RatMat A(d, S.ambient_rank);
    RatVec b(d);
    for (int i = 0; i < d; ++i) {
        const IntVec& e = S.ray(ctx.tau[i]).embed;
        for (int j = 0; j < S.ambient_rank; ++j) A(i, j) = Rat(e[j]);
        b[i] = psi.value(ctx.tau[i]);
    }
    auto m = solve_linear(A, b, SolveMode::Rational);
    if (!m)
        throw NotCp("no linear functional matches the divisor on [" + cone_id(ctx.tau) + "]");
    return restrict_divisor_to_star(psi, ctx, *m);
}

Divisor divisor_on_subdivision(const Divisor& psi, const Subdivision& sub) {
    if (psi.complex != sub.record.base)
        throw InvalidArgument("divisor_on_subdivision: divisor not on the base");
    Divisor out{sub.complex, {}};
    for (const auto& [id, ray] : sub.complex->rays) {
        const RayLocus& loc = sub.record.locus.at(id);
        out.values[id] = psi.value_at(loc.cone, loc.point);
    }
    return out;
}

MinkowskiWeight cup_with(const CpCertificate& cert, const MinkowskiWeight& c) {
    if (c.dim == 0) throw InvalidArgument("cup of a zero-dimensional weight");
    const ConeComplex& S = *c.complex;
    MinkowskiWeight out{c.complex, c.dim - 1, {}};
    for (const ConeKey& tau : S.cones_of_dim(c.dim - 1)) {
        const RatVec& m_tau = cert.m.at(tau);
        Rat acc(0);
        for (const ConeKey& sigma : S.covers(tau)) {
            Rat w = c.weight(sigma);
            if (w == 0) continue;
            const RatVec& m_sigma = cert.m.at(sigma);
            const LatticeNormal& n = S.lattice_normal(tau, sigma);
            Rat lin(0);
            for (std::size_t j = 0; j < n.ambient_lift.size(); ++j)
                lin += (m_sigma[j] - m_tau[j]) * Rat(n.ambient_lift[j]);
            acc += w * lin;
        }
        if (acc != 0) out.weights[tau] = acc;
    }
    return out;
}

MinkowskiWeight cup(const Divisor& psi, const MinkowskiWeight& c) {
    if (psi.complex != c.complex)
        throw InvalidArgument("cup: divisor and weight on different complexes");
    return cup_with(cp_certificate(psi), c);
}

TropicalCycle cup(const Divisor& psi, const TropicalCycle& A) {
    if (psi.complex != A.base)
        throw InvalidArgument("cup: divisor and cycle on different complexes");
    Divisor on_rep = divisor_on_subdivision(psi, A.rep);
    MinkowskiWeight cupped = cup_with(cp_certificate(on_rep), A.weight);
    return TropicalCycle{A.base, A.rep, std::move(cupped)};
}

ExtendedCycle cup(const Divisor& psi, const ExtendedCycle& A) {
    if (psi.complex != A.complex)
        throw InvalidArgument("cup: divisor and cycle on different complexes");
    if (A.dim == 0) throw InvalidArgument("cup of a zero-dimensional cycle");
    ExtendedCycle out{A.complex, A.dim - 1, {}};
    for (const auto& [gamma, piece] : A.components) {
        Divisor on_star = restrict_divisor_to_star(psi, piece.ctx);
        Divisor on_rep = divisor_on_subdivision(on_star, piece.cycle.rep);
        MinkowskiWeight cupped = cup_with(cp_certificate(on_rep), piece.cycle.weight);
        if (cupped.weights.empty()) continue;
        out.components.emplace(
            gamma, StarPiece{piece.ctx, TropicalCycle{piece.cycle.base, piece.cycle.rep,
                                                      std::move(cupped)}});
    }
    return out;
}

ExtendedCycle iterated(const std::vector<Divisor>& psis, const ExtendedCycle& A) {
    ExtendedCycle out = A;
    for (const Divisor& psi : psis) out = cup(psi, out);
    return out;
}

}  // namespace conecalc
