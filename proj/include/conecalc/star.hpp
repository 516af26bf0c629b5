#pragma once

// Star of a cone: the germ of the complex around tau, with ambient lattice the
// quotient by the saturated image of L_tau.  Star rays correspond to the
// covers of tau; star cones to the cones containing tau.  The context records
// the projection and the correspondence so that weights, divisors and cycles
// can be transported between the complex and its stars.

#include "conecalc/complex.hpp"

namespace conecalc {

struct StarContext {
    ConeKey tau;
    ComplexPtr source;
    ComplexPtr star;
    IntMat proj;  // ambient(source) -> ambient(star)
    IntMat lift;  // right inverse
    std::map<RayId, ConeKey> ray_source;    // star ray -> cover cone of tau
    std::map<RayId, RatVec> ray_rep;        // star ray -> representative in the cover's chart
    std::map<ConeKey, ConeKey> cone_source; // star cone -> source cone (bijection)
    std::map<ConeKey, ConeKey> source_star; // inverse of cone_source

    // Chart point transport: a point in the chart of source cone sigma
    // (containing tau) maps to a point in the chart of the corresponding star
    // cone.  Used by subdivision records and pullbacks.
    RatVec to_star_chart(const ConeKey& sigma, const RatVec& chart_point) const;
};

// Star ray ids replace '&' by '+' in the cover's cone id, so that star
// complexes have legal ray ids; star(S, apex) reproduces S with its own ids.
RayId star_ray_id(const ConeKey& cover);

StarContext star(ComplexPtr S, const ConeKey& tau);

}  // namespace conecalc
