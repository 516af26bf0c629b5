#include <algorithm>
#include <set>

#include "conecalc/cycles.hpp"

namespace conecalc {

WitnessResult graph_witness(const Divisor& psi, const MinkowskiWeight& c) {
    ComplexPtr S = psi.complex;
    if (c.complex != S)
        throw InvalidArgument("graph_witness: divisor and weight on different complexes");
    const int k = c.dim;
    if (k == 0) throw InvalidArgument("graph_witness needs a positive-dimensional weight");
    check_balanced(c).require();

    // Purity is needed exactly where graph cones are built: on the support
    // of c (faces inherit it).  Elsewhere the divisor may cross zero freely.
    for (const auto& [key, w] : c.weights) {
        bool pos = false, neg = false;
        for (const RayId& r : key) {
            Rat v = psi.value(r);
            if (v > 0) pos = true;
            if (v < 0) neg = true;
        }
        if (pos && neg)
            throw SignChangeOnCone("divisor changes sign on [" + cone_id(key) + "]");
    }

    // Scale so the divisor is integral on every intrinsic lattice.
    Int t = 1;
    for (const auto& [key, cone] : S->cones) {
        const int d = cone.dim();
        for (int j = 0; j < d; ++j) {
            Rat acc(0);
            for (int i = 0; i < d; ++i) acc += psi.value(key[i]) * cone.lattice(i, j);
            t = lcm(t, rat_den(acc));
        }
    }
    Divisor psi_t{S, {}};
    for (const auto& [id, ray] : S->rays) psi_t.values[id] = psi.value(id) * Rat(t);
    CpCertificate cert = cp_certificate(psi_t);  // throws NotCp

    ProductResult pr = product_with_maps(*S, line_fan());
    ComplexPtr P = std::make_shared<ConeComplex>(std::move(pr.complex));
    RayId plus_id, minus_id;
    std::map<RayId, RayId> to_orig;  // product ray -> left-factor ray
    for (const auto& [pid, org] : pr.ray_origin) {
        if (org.first == 1) {
            (org.second == "+" ? plus_id : minus_id) = pid;
        } else {
            to_orig[pid] = org.second;
        }
    }
    const int n = S->ambient_rank;

    // Refine the product until every cone lies on one side of each graph
    // hyperplane y = m_sigma(x) of the support.
    std::set<IntVec> funcs;
    for (const auto& [sigma, w] : c.weights) {
        if (w == 0) continue;
        const RatVec& m = cert.m.at(sigma);
        RatVec h(static_cast<std::size_t>(n) + 1);
        for (int i = 0; i < n; ++i) h[static_cast<std::size_t>(i)] = -m[static_cast<std::size_t>(i)];
        h[static_cast<std::size_t>(n)] = Rat(1);
        funcs.insert(primitive_direction(h));
    }
    Subdivision sub = identity_subdivision(P);
    for (const IntVec& h : funcs) sub = slice_by_hyperplane(std::move(sub), h);

    // Graph pieces carry the cycle weight; pieces of the downward wall over a
    // facet carry the cup weight there.
    MinkowskiWeight cupw = cup_with(cert, c);  // t * (psi cup c)
    std::map<ConeKey, Rat> wt;
    for (const ConeKey& kappa : sub.complex->cones_of_dim(k)) {
        ConeKey parent = sub.record.parent(kappa);
        ConeKey left;
        for (const RayId& r : parent) {
            auto it = to_orig.find(r);
            if (it != to_orig.end()) left.push_back(it->second);
        }
        left = make_key(std::move(left));
        const int dl = static_cast<int>(left.size());
        if (dl != k && dl != k - 1) continue;
        const RatVec& m = cert.m.at(left);
        bool on_graph = true, below = true;
        for (const RayId& r : kappa) {
            const IntVec& e = sub.complex->ray(r).embed;
            Rat mx(0);
            for (int i = 0; i < n; ++i) mx += m[static_cast<std::size_t>(i)] * Rat(e[i]);
            Rat y(e[static_cast<std::size_t>(n)]);
            if (y != mx) on_graph = false;
            if (y > mx) below = false;
        }
        if (dl == k) {
            if (on_graph) {
                Rat w = c.weight(left);
                if (w != 0) wt[kappa] = w;
            }
        } else if (below) {
            Rat w = cupw.weight(left);
            if (w != 0) wt[kappa] = w;
        }
    }
    MinkowskiWeight gw{sub.complex, k, std::move(wt)};
    TropicalCycle Gamma{P, sub, gw};
    bool check = check_balanced(gw).ok();

    // The identity: push-forward of (pulled-back line divisor . Gamma) equals
    // t * (psi . c) minus t * (psi cup c) sitting at the apex.  Contributions
    // on the product transport to source stars through the vertical quotient.
    Divisor qpsi{P, {{plus_id, Rat(1)}, {minus_id, Rat(-1)}}};
    auto groups = dot_contributions(qpsi, Gamma);
    std::map<ConeKey, std::vector<StarContribution>> lhs;
    for (auto& [tauP, list] : groups) {
        ConeKey gamma;
        for (const RayId& r : tauP) {
            auto it = to_orig.find(r);
            if (it != to_orig.end()) gamma.push_back(it->second);
        }
        gamma = make_key(std::move(gamma));
        for (StarContribution& sc : list) {
            StarContribution mapped;
            mapped.weight = sc.weight;
            for (const auto& [gcone, gpt] : sc.ray_loci) {
                std::vector<std::pair<RayId, Rat>> entries;
                for (std::size_t i = 0; i < gcone.size(); ++i) {
                    auto it = to_orig.find(gcone[i]);
                    if (it != to_orig.end()) entries.emplace_back(it->second, gpt[i]);
                }
                if (entries.empty())
                    throw Error("Internal", "vertical ray among witness contribution rays");
                std::sort(entries.begin(), entries.end());
                ConeKey lc;
                RatVec lp;
                for (auto& [id, v] : entries) {
                    lc.push_back(id);
                    lp.push_back(v);
                }
                mapped.ray_loci.emplace_back(std::move(lc), std::move(lp));
            }
            lhs[gamma].push_back(std::move(mapped));
        }
    }

    ExtendedCycle rhs = dot(psi_t, cycle_on(S, c));
    TropicalCycle cupcyc = cycle_on(S, cupw);
    std::set<ConeKey> allkeys;
    for (const auto& [g, l] : lhs) allkeys.insert(g);
    for (const auto& [g, p] : rhs.components) allkeys.insert(g);
    if (!cupw.weights.empty()) allkeys.insert(ConeKey{});
    for (const ConeKey& g : allkeys) {
        if (!check) break;
        CycleSum L, R;
        auto li = lhs.find(g);
        if (li != lhs.end()) {
            StarContext ctx = star(S, g);
            TropicalCycle lcyc = assemble_star_cycle(S, g, ctx, li->second, k - 1);
            if (!lcyc.weight.weights.empty()) L.emplace_back(Rat(1), std::move(lcyc));
        }
        auto ri = rhs.components.find(g);
        if (ri != rhs.components.end()) R.emplace_back(Rat(1), ri->second.cycle);
        if (g.empty() && !cupw.weights.empty()) R.emplace_back(Rat(-1), cupcyc);
        if (!sum_equal(L, R)) check = false;
    }

    MinkowskiWeight scaled{sub.complex, k, {}};
    for (const auto& [key, w] : gw.weights) scaled.weights[key] = w / Rat(t);
    return WitnessResult{TropicalCycle{P, sub, std::move(scaled)}, t, check};
}

}  // namespace conecalc
