#include "conecalc/star.hpp"

#include <algorithm>

namespace conecalc {

RayId star_ray_id(const ConeKey& cover) {
    std::string id = cone_id(cover);
    for (char& ch : id)
        if (ch == '&') ch = '+';
    return id;
}

RatVec StarContext::to_star_chart(const ConeKey& sigma, const RatVec& chart_point) const {
    auto it = source_star.find(sigma);
    if (it == source_star.end())
        throw ConeNotInComplex("cone '" + cone_id(sigma) + "' does not contain the star apex");
    const ConeKey& star_key = it->second;
    RatVec out(star_key.size(), Rat(0));
    for (std::size_t p = 0; p < star_key.size(); ++p) {
        const ConeKey& rho = ray_source.at(star_key[p]);
        // the unique ray of rho outside tau
        RayId extra;
        for (const RayId& rid : rho)
            if (!std::binary_search(tau.begin(), tau.end(), rid)) extra = rid;
        auto pos = std::find(sigma.begin(), sigma.end(), extra);
        if (pos == sigma.end())
            throw InvalidArgument("to_star_chart: cone does not match star cone");
        int idx = static_cast<int>(pos - sigma.begin());
        // chart scaling: the star ray's unit vector corresponds to the
        // representative, whose coordinate at `extra` is c > 0
        const RatVec& rep = ray_rep.at(star_key[p]);
        auto rpos = std::find(rho.begin(), rho.end(), extra);
        Rat c = rep[static_cast<std::size_t>(rpos - rho.begin())];
        out[p] = chart_point[idx] / c;
    }
    return out;
}

StarContext star(ComplexPtr S, const ConeKey& tau) {
    const ConeComplex& src = *S;
    (void)src.cone(tau);
    StarContext ctx;
    ctx.tau = tau;
    ctx.source = S;
    const TauQuotient& tq = src.tau_quotient(tau);
    ctx.proj = tq.proj;
    ctx.lift = tq.lift;

    auto star_complex = std::make_shared<ConeComplex>();
    star_complex->ambient_rank = tq.quotient_rank;

    // star rays from covers of tau
    std::vector<ConeKey> covers = src.covers(tau);
    std::map<RayId, Rat> scaling;         // star ray -> positive chart scale c
    std::map<RayId, RayId> extra_of_ray;  // star ray -> the cover's extra source ray
    for (const ConeKey& rho : covers) {
        const LatticeNormal& ln = src.lattice_normal(tau, rho);
        RayId sid = star_ray_id(rho);
        if (star_complex->rays.count(sid))
            throw InvalidArgument("star ray id collision at '" + sid + "'");
        Ray r;
        r.id = sid;
        r.embed = ln.projected;
        star_complex->rays[sid] = r;
        ctx.ray_source[sid] = rho;
        ctx.ray_rep[sid] = ln.rep_chart;
        RayId extra;
        for (const RayId& rid : rho)
            if (!std::binary_search(tau.begin(), tau.end(), rid)) extra = rid;
        extra_of_ray[sid] = extra;
        auto rpos = std::find(rho.begin(), rho.end(), extra);
        scaling[sid] = ln.rep_chart[static_cast<std::size_t>(rpos - rho.begin())];
    }

    // star cones from cones containing tau
    for (const ConeKey& sigma : src.cones_containing(tau)) {
        const Cone& sc = src.cone(sigma);
        std::vector<RayId> star_ids;
        std::vector<RayId> extras;
        for (const RayId& rid : sigma)
            if (!std::binary_search(tau.begin(), tau.end(), rid)) extras.push_back(rid);
        for (const RayId& rid : extras) {
            ConeKey rho = tau;
            rho.push_back(rid);
            rho = make_key(rho);
            star_ids.push_back(star_ray_id(rho));
        }
        ConeKey star_key = make_key(star_ids);
        const int sd = static_cast<int>(star_key.size());

        // lattice: project L_sigma to the non-tau chart coordinates, then
        // rescale so the star rays' representatives become unit vectors
        std::vector<int> rest_pos;  // positions in sigma's chart of the extras, star order
        for (const RayId& sid : star_key) {
            const RayId& extra = extra_of_ray[sid];
            auto pos = std::find(sigma.begin(), sigma.end(), extra);
            rest_pos.push_back(static_cast<int>(pos - sigma.begin()));
        }
        RatMat gens(sd, sc.lattice.cols());
        for (int i = 0; i < sd; ++i)
            for (int j = 0; j < sc.lattice.cols(); ++j)
                gens(i, j) = sc.lattice(rest_pos[i], j) / scaling[star_key[i]];
        Cone c;
        c.rays = star_key;
        c.lattice = lattice_basis(gens);
        star_complex->cones[star_key] = c;
        ctx.cone_source[star_key] = sigma;
        ctx.source_star[sigma] = star_key;
    }
    ctx.star = star_complex;
    return ctx;
}

}  // namespace conecalc
