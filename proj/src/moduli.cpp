#include "conecalc/moduli.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

#include "conecalc/star.hpp"

namespace conecalc {

namespace {

// pairs {i,j}, 1 <= i < j <= n, ordered (1,2),(1,3),...,(2,3),...
int pair_index(int n, int i, int j) {
    return (i - 1) * n - i * (i + 1) / 2 + j - 1;
}

std::vector<int> complement_side(int n, const SplitSide& side) {
    std::vector<int> out;
    std::size_t p = 0;
    for (int v = 1; v <= n; ++v) {
        if (p < side.size() && side[p] == v)
            ++p;
        else
            out.push_back(v);
    }
    return out;
}

bool contains(const SplitSide& side, int v) {
    return std::binary_search(side.begin(), side.end(), v);
}

}  // namespace

RayId split_ray_id(const SplitSide& side) {
    std::string s = "I={";
    for (std::size_t i = 0; i < side.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(side[i]);
    }
    return s + "}";
}

bool splits_compatible(int n, const SplitSide& a, const SplitSide& b) {
    if (std::includes(b.begin(), b.end(), a.begin(), a.end())) return true;
    if (std::includes(a.begin(), a.end(), b.begin(), b.end())) return true;
    std::vector<int> tmp;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(tmp));
    if (tmp.empty()) return true;
    return a.size() + b.size() - tmp.size() == static_cast<std::size_t>(n);
}

ModuliComplex build_m0n(int n) {
    if (n < 4) throw InvalidArgument("build_m0n needs at least four marks");
    const int np = n * (n - 1) / 2;

    IntMat phi(np, n);
    for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= n; ++j)
            if (i != j) phi(pair_index(n, std::min(i, j), std::max(i, j)), i - 1) = 1;
    auto Q = quotient_projection(np, saturation(phi));

    // canonical sides: subsets of {1..n-1} of size 2..n-2
    std::vector<SplitSide> sides;
    for (unsigned mask = 0; mask < (1u << (n - 1)); ++mask) {
        int pc = __builtin_popcount(mask);
        if (pc < 2 || pc > n - 2) continue;
        SplitSide s;
        for (int v = 1; v < n; ++v)
            if (mask & (1u << (v - 1))) s.push_back(v);
        sides.push_back(std::move(s));
    }
    std::sort(sides.begin(), sides.end(), [](const SplitSide& a, const SplitSide& b) {
        return split_ray_id(a) < split_ray_id(b);
    });

    ConeComplex S;
    S.ambient_rank = Q.quotient_rank;
    std::map<RayId, SplitSide> side_of;
    for (const SplitSide& s : sides) {
        IntVec pairs(np, Int(0));
        for (std::size_t i = 0; i < s.size(); ++i)
            for (std::size_t j = i + 1; j < s.size(); ++j)
                pairs[pair_index(n, s[i], s[j])] = 1;
        IntVec embed(Q.quotient_rank, Int(0));
        for (int r = 0; r < Q.quotient_rank; ++r)
            for (int c = 0; c < np; ++c) embed[r] += Q.proj(r, c) * pairs[c];
        RatVec emb_rat(embed.begin(), embed.end());
        RayId id = split_ray_id(s);
        if (primitive_direction(emb_rat) != embed)
            throw NotPrimitiveDirection("moduli ray embed of " + id + " is not primitive");
        S.rays[id] = {id, embed};
        side_of[id] = s;
    }

    // cones = sets of pairwise compatible splits (cliques); faces are
    // automatically included
    const int R = static_cast<int>(sides.size());
    std::vector<std::vector<char>> adj(R, std::vector<char>(R, 0));
    for (int i = 0; i < R; ++i)
        for (int j = i + 1; j < R; ++j)
            adj[i][j] = adj[j][i] = splits_compatible(n, sides[i], sides[j]) ? 1 : 0;

    std::vector<int> current;
    auto add_cone = [&](const std::vector<int>& members) {
        Cone c;
        for (int idx : members) c.rays.push_back(split_ray_id(sides[idx]));
        const int d = static_cast<int>(members.size());
        RatMat L(d, d);
        for (int i = 0; i < d; ++i) L(i, i) = 1;
        c.lattice = L;
        ConeKey key = c.rays;
        S.cones[key] = std::move(c);
    };
    const int maxdim = n - 3;
    std::function<void(int)> rec = [&](int start) {
        add_cone(current);
        if (static_cast<int>(current.size()) == maxdim) return;
        for (int i = start; i < R; ++i) {
            bool ok = true;
            for (int j : current) ok = ok && adj[j][i];
            if (!ok) continue;
            current.push_back(i);
            rec(i + 1);
            current.pop_back();
        }
    };
    rec(0);

    validate(S).require();
    ModuliComplex M;
    M.n = n;
    M.complex = std::make_shared<ConeComplex>(std::move(S));
    M.side = std::move(side_of);
    return M;
}

Divisor psi_divisor(const ModuliComplex& M, int k) {
    if (k < 1 || k > M.n) throw InvalidArgument("psi_divisor: mark out of range");
    Divisor psi{M.complex, {}};
    const int n = M.n;
    for (const auto& [id, s] : M.side) {
        std::size_t away = contains(s, k) ? n - s.size() : s.size();
        psi.values[id] = Rat(Int(away) * Int(away - 1), Int(n - 1) * Int(n - 2));
    }
    return psi;
}

Divisor psi_boundary_rep(const ModuliComplex& M, int k, int a, int b) {
    if (k == a || k == b || a == b) throw MarksNotDistinct("psi_boundary_rep needs three distinct marks");
    for (int v : {k, a, b})
        if (v < 1 || v > M.n) throw InvalidArgument("psi_boundary_rep: mark out of range");
    Divisor psi{M.complex, {}};
    for (const auto& [id, s] : M.side) {
        SplitSide I = contains(s, k) ? s : complement_side(M.n, s);
        if (!contains(I, a) && !contains(I, b)) psi.values[id] = 1;
    }
    return psi;
}

namespace {

MinkowskiWeight fundamental_weight(ComplexPtr S) {
    std::size_t top = 0;
    for (const auto& [key, c] : S->cones) top = std::max(top, key.size());
    MinkowskiWeight w{S, static_cast<int>(top), {}};
    for (const auto& [key, c] : S->cones)
        if (key.size() == top) w.weights[key] = 1;
    return w;
}

}  // namespace

Rat descendant(int n, const std::vector<int>& exponents) {
    if (static_cast<int>(exponents.size()) != n)
        throw InvalidArgument("descendant needs one exponent per mark");
    int total = 0;
    for (int a : exponents) {
        if (a < 0) throw InvalidArgument("descendant: negative exponent");
        total += a;
    }
    if (total != n - 3)
        throw DimensionMismatch("psi exponents must sum to the moduli dimension");

    ModuliComplex M = build_m0n(n);
    MinkowskiWeight fund = fundamental_weight(M.complex);

    auto run = [&](bool boundary) {
        MinkowskiWeight w = fund;
        for (int k = 1; k <= n; ++k) {
            if (exponents[k - 1] == 0) continue;
            Divisor psi;
            if (boundary) {
                int a = 0, b = 0;
                for (int v = 1; v <= n && !b; ++v)
                    if (v != k) (a ? b : a) = v;
                psi = psi_boundary_rep(M, k, a, b);
            } else {
                psi = psi_divisor(M, k);
            }
            for (int t = 0; t < exponents[k - 1]; ++t) w = cup(psi, w);
        }
        return w.weight({});
    };
    Rat via_psi = run(false);
    Rat via_boundary = run(true);
    if (via_psi != via_boundary)
        throw Error("Internal", "descendant representatives disagree");
    return via_psi;
}

LabeledModuli build_labeled_moduli(int n, const std::vector<IntVec>& delta, ComplexPtr target) {
    const int m = static_cast<int>(delta.size());
    const int r = target->ambient_rank;
    for (const IntVec& d : delta)
        if (static_cast<int>(d.size()) != r)
            throw InvalidArgument("build_labeled_moduli: direction of wrong rank");
    for (int t = 0; t < r; ++t) {
        Int s = 0;
        for (const IntVec& d : delta) s += d[t];
        if (s != 0) throw DegreeNotBalanced("end directions do not sum to zero");
    }
    if (n < 1) throw InvalidArgument("build_labeled_moduli needs a marked point");
    const int N = n + m;
    if (N < 4) throw InvalidArgument("build_labeled_moduli needs at least four ends");

    LabeledModuli L;
    L.n = n;
    L.m = m;
    L.r = r;
    L.moduli = build_m0n(N);
    L.target = target;
    auto info = product_with_maps(*L.moduli.complex, *target);
    L.complex = std::make_shared<ConeComplex>(info.complex);

    const int q = L.moduli.complex->ambient_rank;
    const int R = static_cast<int>(L.moduli.complex->rays.size());

    // direction of the i-side of a split: sum of the end directions on it
    auto side_direction = [&](const SplitSide& sideI) {
        RatVec d(r, Rat(0));
        for (int v : sideI)
            if (v > n)
                for (int t = 0; t < r; ++t) d[t] += Rat(delta[v - n - 1][t]);
        return d;
    };

    RatMat rays_t(R, q);  // ray embeds as rows
    {
        int row = 0;
        for (const auto& [id, ray] : L.moduli.complex->rays) {
            for (int c = 0; c < q; ++c) rays_t(row, c) = Rat(ray.embed[c]);
            ++row;
        }
    }

    for (int i = 1; i <= n; ++i) {
        // per-ray value: the displacement of mark i relative to mark 1
        RatMat vals(r, R);
        int col = 0;
        for (const auto& [id, ray] : L.moduli.complex->rays) {
            const SplitSide& s = L.moduli.side.at(id);
            bool one_in = contains(s, 1), i_in = contains(s, i);
            if (one_in != i_in) {
                SplitSide far = i_in ? s : complement_side(N, s);
                RatVec d = side_direction(far);
                for (int t = 0; t < r; ++t) vals(t, col) = d[t];
            }
            ++col;
        }
        // one global matrix restricting to those values; solvability encodes
        // the linearity of the evaluation across the split relations
        RatMat Ei(r, q + r);
        for (int t = 0; t < r; ++t) {
            RatVec rhs(R);
            for (int c = 0; c < R; ++c) rhs[c] = vals(t, c);
            auto row = solve_linear(rays_t, rhs, SolveMode::Rational);
            if (!row) throw Error("Internal", "evaluation map is not linear on the split fan");
            for (int c = 0; c < q; ++c) Ei(t, c) = (*row)[c];
            Ei(t, q + t) = 1;
        }
        L.ev.push_back(std::move(Ei));
    }
    return L;
}

Rat gw_count(const LabeledModuli& L, const std::vector<GwCondition>& conditions) {
    int dim = (L.n + L.m - 3) + L.r;
    int total = 0;
    for (const auto& c : conditions) {
        if (c.mark < 1 || c.mark > L.n) throw InvalidArgument("gw_count: condition on unknown mark");
        if (c.power < 1) throw InvalidArgument("gw_count: condition power must be positive");
        if (c.divisor.complex != L.target)
            throw InvalidArgument("gw_count: condition divisor not on the target fan");
        total += c.power;
    }
    if (total != dim)
        throw DimensionMismatch("condition codimensions do not add up to the moduli dimension");

    // integer-cleared evaluation matrices of the marks that occur
    std::map<int, std::pair<IntMat, Int>> cleared;
    for (const auto& c : conditions) {
        if (cleared.count(c.mark)) continue;
        const RatMat& E = L.ev[c.mark - 1];
        Int t = 1;
        for (int i = 0; i < E.rows(); ++i)
            for (int j = 0; j < E.cols(); ++j) t = lcm(t, denominator(E(i, j)));
        IntMat G(E.rows(), E.cols());
        for (int i = 0; i < E.rows(); ++i)
            for (int j = 0; j < E.cols(); ++j) G(i, j) = numerator(E(i, j)) * (t / denominator(E(i, j)));
        cleared[c.mark] = {std::move(G), t};
    }

    Subdivision sub = identity_subdivision(L.complex);
    for (const auto& [mark, gt] : cleared) sub = refine_along_map(sub, gt.first, L.target).sub;

    // the refinement is now stable; recover a witness morphism per mark and
    // pull the condition divisors back through it
    MinkowskiWeight w = fundamental_weight(sub.complex);
    for (const auto& c : conditions) {
        const auto& [G, t] = cleared.at(c.mark);
        auto res = refine_along_map(sub, G, L.target);
        Divisor up = pullback_divisor(res.witness, c.divisor);
        for (auto& [id, v] : up.values) v /= Rat(t);
        up.complex = sub.complex;
        for (int p = 0; p < c.power; ++p) w = cup(up, w);
    }
    return w.weight({});
}

}  // namespace conecalc
