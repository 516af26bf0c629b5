#include "conecalc/cycles.hpp"

#include <sstream>

namespace conecalc {

std::string BalanceReport::to_string() const {
    std::ostringstream os;
    for (const auto& v : violations) {
        os << "unbalanced at [" << cone_id(v.tau) << "]:";
        for (const Rat& d : v.defect) os << ' ' << d;
        os << '\n';
    }
    return os.str();
}

void BalanceReport::require() const {
    if (!ok()) throw Unbalanced(to_string());
}

BalanceReport check_balanced(const MinkowskiWeight& c) {
    const ConeComplex& S = *c.complex;
    for (const auto& [key, w] : c.weights) {
        if (w == 0) continue;
        const Cone& sigma = S.cone(key);  // throws ConeNotInComplex
        if (sigma.dim() != c.dim)
            throw MixedDimensions("weight on [" + cone_id(key) + "] of dimension " +
                                  std::to_string(sigma.dim()) + " in a weight of dimension " +
                                  std::to_string(c.dim));
    }
    BalanceReport report;
    if (c.dim == 0) return report;
    for (const ConeKey& tau : S.cones_of_dim(c.dim - 1)) {
        const TauQuotient& q = S.tau_quotient(tau);
        RatVec defect(q.quotient_rank, Rat(0));
        for (const ConeKey& sigma : S.covers(tau)) {
            Rat w = c.weight(sigma);
            if (w == 0) continue;
            const LatticeNormal& n = S.lattice_normal(tau, sigma);
            for (int i = 0; i < q.quotient_rank; ++i) defect[i] += w * Rat(n.projected[i]);
        }
        if (!is_zero(defect)) report.violations.push_back({tau, defect});
    }
    return report;
}

std::vector<MinkowskiWeight> mink_basis(ComplexPtr S, int k) {
    std::vector<ConeKey> unknowns = S->cones_of_dim(k);
    if (unknowns.empty()) return {};
    const int n = static_cast<int>(unknowns.size());
    std::map<ConeKey, int> index;
    for (int j = 0; j < n; ++j) index[unknowns[j]] = j;

    std::vector<IntVec> rows;
    if (k > 0) {
        for (const ConeKey& tau : S->cones_of_dim(k - 1)) {
            const TauQuotient& q = S->tau_quotient(tau);
            std::vector<IntVec> block(q.quotient_rank, IntVec(n, Int(0)));
            for (const ConeKey& sigma : S->covers(tau)) {
                const LatticeNormal& nrm = S->lattice_normal(tau, sigma);
                int j = index.at(sigma);
                for (int i = 0; i < q.quotient_rank; ++i) block[i][j] = nrm.projected[i];
            }
            for (auto& r : block) rows.push_back(std::move(r));
        }
    }
    IntMat M(static_cast<int>(rows.size()), n);
    for (int i = 0; i < M.rows(); ++i) M.set_row(i, rows[i]);
    IntMat K = kernel(M);

    std::vector<MinkowskiWeight> basis;
    for (int j = 0; j < K.cols(); ++j) {
        MinkowskiWeight w{S, k, {}};
        for (int i = 0; i < n; ++i)
            if (K(i, j) != 0) w.weights[unknowns[i]] = Rat(K(i, j));
        basis.push_back(std::move(w));
    }
    return basis;
}

MinkowskiWeight pullback_weight(const StarContext& ctx, const MinkowskiWeight& c) {
    const int dt = static_cast<int>(ctx.tau.size());
    if (c.dim < dt) return MinkowskiWeight{ctx.star, 0, {}};
    MinkowskiWeight out{ctx.star, c.dim - dt, {}};
    for (const ConeKey& key : ctx.star->cones_of_dim(c.dim - dt)) {
        Rat w = c.weight(ctx.cone_source.at(key));
        if (w != 0) out.weights[key] = w;
    }
    return out;
}

Rat degree(const MinkowskiWeight& c) {
    if (c.dim != 0) return Rat(0);
    return c.weight(ConeKey{});
}

TropicalCycle cycle_on(ComplexPtr S, MinkowskiWeight w) {
    if (w.complex != S) throw InvalidArgument("cycle_on: weight lives on a different complex");
    return TropicalCycle{S, identity_subdivision(S), std::move(w)};
}

TropicalCycle cycle_on_subdivision(const MinkowskiWeight& c, const Subdivision& sub) {
    if (c.complex != sub.record.base)
        throw InvalidArgument("cycle_on_subdivision: weight does not live on the base");
    MinkowskiWeight w{sub.complex, c.dim, {}};
    for (const ConeKey& kappa : sub.complex->cones_of_dim(c.dim)) {
        ConeKey parent = sub.record.parent(kappa);
        if (static_cast<int>(parent.size()) != c.dim) continue;
        Rat v = c.weight(parent);
        if (v != 0) w.weights[kappa] = v;
    }
    return TropicalCycle{sub.record.base, sub, std::move(w)};
}

ExtendedCycle extend(const TropicalCycle& A) {
    ExtendedCycle out{A.base, A.dim(), {}};
    if (A.weight.weights.empty()) return out;
    StarContext ctx = star(A.base, ConeKey{});
    // The star at the apex reproduces the complex with identical ids, embeds
    // and lattices; keep the original instance so pointers stay comparable.
    ctx.star = A.base;
    out.components.emplace(ConeKey{}, StarPiece{std::move(ctx), A});
    return out;
}

}  // namespace conecalc
