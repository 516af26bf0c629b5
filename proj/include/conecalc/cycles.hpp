#pragma once

// Minkowski weights, tropical cycles and the divisor calculus on weakly
// embedded cone complexes: balancing, cup products with conewise linear
// divisors, boundary intersection products valued in stars, push-forwards,
// degrees, cycle comparison and rational-equivalence witnesses.

#include <optional>
#include <utility>
#include <vector>

#include "conecalc/complex.hpp"
#include "conecalc/morphism.hpp"
#include "conecalc/star.hpp"
#include "conecalc/subdivide.hpp"

namespace conecalc {

// ---------------------------------------------------------------------------
// Weights

// Rational weight on the k-cones of a complex; cones absent from the map
// carry weight 0.
struct MinkowskiWeight {
    ComplexPtr complex;
    int dim = 0;
    std::map<ConeKey, Rat> weights;

    Rat weight(const ConeKey& key) const {
        auto it = weights.find(key);
        return it == weights.end() ? Rat(0) : it->second;
    }
    bool integral() const {
        for (const auto& [k, w] : weights)
            if (rat_den(w) != 1) return false;
        return true;
    }
};

struct BalanceViolation {
    ConeKey tau;
    RatVec defect;  // in the quotient coordinates at tau
};

struct BalanceReport {
    std::vector<BalanceViolation> violations;
    bool ok() const { return violations.empty(); }
    std::string to_string() const;
    void require() const;  // throws Unbalanced
};

// Balancing at every (dim-1)-cone: sum of weight * lattice normal vanishes in
// the quotient by the saturated embedded face lattice.
BalanceReport check_balanced(const MinkowskiWeight& c);

// Basis of the lattice of integral balanced weights in dimension k.
std::vector<MinkowskiWeight> mink_basis(ComplexPtr S, int k);

// Weight transported to a star: weight(sigma/tau) = weight(sigma); zero when
// the star dimension k - dim tau would be negative.
MinkowskiWeight pullback_weight(const StarContext& ctx, const MinkowskiWeight& c);

// Apex weight of a 0-dimensional weight (0 for positive dimensions).
Rat degree(const MinkowskiWeight& c);

// ---------------------------------------------------------------------------
// Cycles

// A weight on a recorded proper subdivision of a base complex.
struct TropicalCycle {
    ComplexPtr base;
    Subdivision rep;        // rep.record.base == base
    MinkowskiWeight weight; // on rep.complex
    int dim() const { return weight.dim; }
};

// Cycle represented on the complex itself (identity subdivision).
TropicalCycle cycle_on(ComplexPtr S, MinkowskiWeight w);

// The same cycle on a finer representation: a top-cone of the subdivision
// inherits the weight of its (equidimensional) parent.
TropicalCycle cycle_on_subdivision(const MinkowskiWeight& c, const Subdivision& sub);

struct StarPiece {
    StarContext ctx;      // star of the component's cone
    TropicalCycle cycle;  // based on ctx.star
};

// Finite sum of cycles, one on the star of each listed cone.  Components with
// identically zero weight are omitted.
struct ExtendedCycle {
    ComplexPtr complex;
    int dim = 0;
    std::map<ConeKey, StarPiece> components;
};

// The cycle viewed as the apex component of an extended cycle.
ExtendedCycle extend(const TropicalCycle& A);

// ---------------------------------------------------------------------------
// Divisors

// Conewise linear function given by its values at the primitive ray
// generators; missing rays have value 0.
struct Divisor {
    ComplexPtr complex;
    std::map<RayId, Rat> values;

    Rat value(const RayId& id) const {
        auto it = values.find(id);
        return it == values.end() ? Rat(0) : it->second;
    }
    // value at a chart point of a cone
    Rat value_at(const ConeKey& cone, const RatVec& chart_point) const;
};

// True iff the induced function is integral on every cone's intrinsic lattice.
bool divisor_integral(const Divisor& psi);

// Per-cone ambient functionals m with m * embed = values on each cone
// (canonical solutions).  Exists iff the divisor is conewise principal.
struct CpCertificate {
    std::map<ConeKey, RatVec> m;
    bool integral = false;  // functionals integral on intrinsic lattices
};
CpCertificate cp_certificate(const Divisor& psi);  // throws NotCp

// Global ambient functional m with m * embed(r) = psi(r) - chi(r) for all
// rays, if one exists.
std::optional<RatVec> lin_equiv(const Divisor& psi, const Divisor& chi);

// Representative of the divisor on a star: subtract m_tau (a functional
// vanishing strategy) and push to the star rays through their
// representatives.  The canonical overload solves for m_tau itself.
Divisor restrict_divisor_to_star(const Divisor& psi, const StarContext& ctx, const RatVec& m_tau);
Divisor restrict_divisor_to_star(const Divisor& psi, const StarContext& ctx);

// Divisor transported to a subdivision: value at a subdivision ray is the
// conewise evaluation at its locus.
Divisor divisor_on_subdivision(const Divisor& psi, const Subdivision& sub);

// Cup product: weight at tau is sum over covers sigma of
// c(sigma) * (m_sigma - m_tau) applied to the ambient lift of the lattice
// normal.  The certificate overload allows alternative (offset) functionals.
MinkowskiWeight cup(const Divisor& psi, const MinkowskiWeight& c);
MinkowskiWeight cup_with(const CpCertificate& cert, const MinkowskiWeight& c);

// Cup on a represented cycle: the divisor is transported to the representing
// subdivision and cupped there, keeping the representation.
TropicalCycle cup(const Divisor& psi, const TropicalCycle& A);

// Componentwise cup on an extended cycle via star restriction of the divisor.
ExtendedCycle cup(const Divisor& psi, const ExtendedCycle& A);

// Left fold of the extended cup.
ExtendedCycle iterated(const std::vector<Divisor>& psis, const ExtendedCycle& A);

// ---------------------------------------------------------------------------
// Boundary intersection product

// One (dim-1)-cone contributed to the star of some cone, described through
// base-complex loci of its rays.
struct StarContribution {
    std::vector<std::pair<ConeKey, RatVec>> ray_loci;  // base cone + relint chart point
    Rat weight;
};

// Assemble contributions into an honest weighted subdivision of star(S, tau).
// Throws AssemblyNotComplex when the contributed cones do not validate as a
// complex or the summed weight is unbalanced.
TropicalCycle assemble_star_cycle(ComplexPtr S, const ConeKey& tau, const StarContext& ctx,
                                  const std::vector<StarContribution>& contribs, int dim);

// Contribution layer of the intersection product: for each weighted k-cone
// of the representing subdivision and each of its rays whose span meets the
// span of the ray's base locus in rank exactly 1, one (k-1)-cone weighted by
// psi(u_ray) * [saturation index of the joined span lattices] * weight,
// grouped by the base locus.
std::map<ConeKey, std::vector<StarContribution>> dot_contributions(const Divisor& psi,
                                                                   const TropicalCycle& A);

// Intersection product of a divisor with a cycle, valued in stars: the
// contributions assembled per base locus.
ExtendedCycle dot(const Divisor& psi, const TropicalCycle& A);

// ---------------------------------------------------------------------------
// Push-forward and degree

// Push-forward along a conewise-onto morphism: target weight is the sum of
// lattice indices times source weights over dimension-preserving cones.
MinkowskiWeight pushforward(const ComplexMorphism& f, const MinkowskiWeight& c);

// Divisor pulled back along a morphism: value at a source ray is the target
// divisor evaluated at the image chart point.
Divisor pullback_divisor(const ComplexMorphism& f, const Divisor& psi);

// Sum of apex weights of the components of a 0-dimensional extended cycle.
Rat degree(const ExtendedCycle& E);

// ---------------------------------------------------------------------------
// Comparison

bool complex_struct_equal(const ConeComplex& A, const ConeComplex& B);

// Formal sum of coefficient * cycle, all based on structurally equal
// complexes.
using CycleSum = std::vector<std::pair<Rat, TropicalCycle>>;

// Exact equality of formal sums as cycles: pieces are grouped per base cone
// and span, sliced to a common arrangement and compared at interior probe
// points.  Throws IncomparableAtlases when bases differ.
bool sum_equal(const CycleSum& A, const CycleSum& B);

bool cycle_equal(const TropicalCycle& A, const TropicalCycle& B);
bool cycle_equal(const ExtendedCycle& A, const ExtendedCycle& B);

// ---------------------------------------------------------------------------
// Rational equivalence witness

// Full graph of psi over c in Sigma x (complete line fan), with the cup
// weights on the downward walls; checks the defining identity
//   p_*( q^* psi_line . Gamma ) = t * (psi . c) - t * (psi cup c at the apex)
// exactly (t clears the divisor's denominators; gamma is reported scaled back
// by 1/t).
struct WitnessResult {
    TropicalCycle gamma;  // on product(Sigma, line fan)
    Int scale = 1;        // t
    bool check = false;
};
WitnessResult graph_witness(const Divisor& psi, const MinkowskiWeight& c);

}  // namespace conecalc
