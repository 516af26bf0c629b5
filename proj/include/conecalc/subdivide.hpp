#pragma once

// Proper subdivisions: stellar subdivision, hyperplane slicing (built from
// stellar steps), and refinement of a complex until a conewise linear map
// into a complete fan maps every cone into a single cone of the fan.
//
// A Subdivision bundles a refined complex with the locus record of its rays
// in a fixed base complex, so chains of refinements stay comparable.

#include <cstddef>
#include <optional>

#include "conecalc/complex.hpp"
#include "conecalc/morphism.hpp"

namespace conecalc {

struct RayLocus {
    ConeKey cone;   // minimal base cone whose relative interior meets the ray
    RatVec point;   // image of the ray's primitive generator, in that cone's chart
};

struct SubdivisionRecord {
    ComplexPtr base;
    std::map<RayId, RayLocus> locus;

    // minimal base cone containing a cone of the refinement
    ConeKey parent(const ConeKey& sub_cone) const;
    // locus point of a sub ray written in the chart of a base cone containing it
    RatVec point_in(const ConeKey& base_cone, const RayId& sub_ray) const;
};

struct Subdivision {
    ComplexPtr complex;
    SubdivisionRecord record;
};

Subdivision identity_subdivision(ComplexPtr S);

// Number of cones above which refinement operations abort.  Reads the
// CONECALC_CONE_CAP environment variable, defaulting to 100000.
std::size_t cone_cap();

struct StellarResult {
    Subdivision sub;
    std::optional<RayId> new_ray;  // unset when the subdivided cone was a ray
};

// Stellar subdivision at the primitive lattice point on the ray through
// v_chart (a point of the relative interior of cone0, in cone0's chart).
StellarResult stellar_subdivide(const Subdivision& S, const ConeKey& cone0, const RatVec& v_chart);

// Refine until every cone is sign-pure for the ambient functional h (applied
// through the weak embedding).  h must be integral on the ambient lattice.
Subdivision slice_by_hyperplane(Subdivision S, const IntVec& h, std::size_t cap = cone_cap());

struct RefineResult {
    Subdivision sub;
    // every refined cone -> minimal target-fan cone containing its image
    std::map<ConeKey, ConeKey> assignment;
    ComplexMorphism witness;  // refined -> target fan
};

// Refine S until the map x -> G * phi(x) sends every cone into a single cone
// of target_fan (a complete fan with injective embedding).  G is a global
// matrix on the ambient lattice.
RefineResult refine_along_map(Subdivision S, const IntMat& G, ComplexPtr target_fan,
                              std::size_t cap = cone_cap());

// Collapse morphism of a subdivision: refined complex -> base, identity on
// the ambient lattice, each cone into its parent.
ComplexMorphism subdivision_morphism(const Subdivision& S);

}  // namespace conecalc
