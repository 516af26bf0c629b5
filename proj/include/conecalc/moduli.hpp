#pragma once

// Tropical moduli of rational curves: the split fan of n-marked trees with
// its quotient embedding, psi divisors and their boundary representatives,
// descendant products, and labeled maps to a complete target fan with
// evaluation maps and incidence counts.

#include <vector>

#include "conecalc/cycles.hpp"
#include "conecalc/morphism.hpp"
#include "conecalc/subdivide.hpp"

namespace conecalc {

// A split of the marks {1..n} stored by its canonical side: the side not
// containing n, ascending, with 2 <= size <= n-2.
using SplitSide = std::vector<int>;

RayId split_ray_id(const SplitSide& side);

// Two splits bound a common tree iff one side contains the other, or they
// are disjoint, or they cover all marks.
bool splits_compatible(int n, const SplitSide& a, const SplitSide& b);

struct ModuliComplex {
    int n = 0;
    ComplexPtr complex;
    std::map<RayId, SplitSide> side;
};

// Rays are the splits embedded through the pair-coordinate quotient; cones
// are the pairwise-compatible split sets with unit lattices.
ModuliComplex build_m0n(int n);

// The symmetric representative of the k-th psi class: on the side I with
// k not in I the value is |I|(|I|-1) / ((n-1)(n-2)).
Divisor psi_divisor(const ModuliComplex& M, int k);

// Integral boundary representative: value 1 exactly on the splits whose
// k-side avoids both a and b.
Divisor psi_boundary_rep(const ModuliComplex& M, int k, int a, int b);

// Apex degree of prod_k psi_k^{a_k} against the fundamental weight.  The
// product is computed with both psi representatives and cross-checked.
Rat descendant(int n, const std::vector<int>& exponents);

// Moduli of maps to the support of a complete simplicial fan on Z^r: n
// contracted marks, m directed ends with fixed directions delta summing to
// zero.  The complex is the product of the (n+m)-mark moduli fan with the
// target fan; curves are identified by their tree and the position of the
// first mark.
struct LabeledModuli {
    int n = 0;
    int m = 0;
    int r = 0;
    ModuliComplex moduli;
    ComplexPtr target;
    ComplexPtr complex;  // moduli x target
    // Global evaluation matrices r x (ambient of the product): position of
    // mark i as a function of a point of the product.  Rational entries;
    // integral on every cone lattice.
    std::vector<RatMat> ev;
};

LabeledModuli build_labeled_moduli(int n, const std::vector<IntVec>& delta, ComplexPtr target);

// Incidence condition: the class of `divisor` (on the target fan) pulled
// back along the evaluation at `mark`, imposed `power` times.
struct GwCondition {
    int mark = 1;
    Divisor divisor;
    int power = 1;
};

// Count of rational curves of degree delta meeting all conditions: refine
// the product along each used evaluation map, pull the condition divisors
// back, cup them into the fundamental weight and take the apex degree.
Rat gw_count(const LabeledModuli& L, const std::vector<GwCondition>& conditions);

}  // namespace conecalc
