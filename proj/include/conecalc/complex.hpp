#pragma once

// Weakly embedded simplicial cone complexes.
//
// A cone with rays r_1 < ... < r_d (ids sorted lexicographically) carries an
// abstract chart Q^d whose coordinates are indexed by the rays in sorted
// order; the cone itself is the nonnegative orthant of the chart.  The
// intrinsic lattice L of the cone is stored as a canonical basis matrix B
// (columns) with Z^d <= L = B * Z^d; the index [L : Z^d] = 1/det(B) is a
// positive integer and each chart unit vector is primitive in L.  The weak
// embedding sends a chart point x to E * x where E's columns are the ambient
// embedding vectors of the rays; E * B must be integral.
//
// Faces of a cone are exactly the coordinate subcones given by ray subsets,
// with the induced lattice L ∩ (coordinate subspace).

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "conecalc/exactlin.hpp"

namespace conecalc {

using RayId = std::string;
using ConeKey = std::vector<RayId>;  // sorted, duplicate-free

// Cone ids join the sorted ray ids with '&'; the apex is "".  Ray ids must
// therefore avoid '&' (and whitespace), which validation enforces.
std::string cone_id(const ConeKey& key);
ConeKey parse_cone_key(const std::string& id);
ConeKey make_key(std::vector<RayId> ids);  // sorts, rejects duplicates

struct Ray {
    RayId id;
    IntVec embed;  // length == ambient_rank of the complex
};

struct Cone {
    ConeKey rays;
    RatMat lattice;  // canonical basis of L in chart coordinates (d x d columns)
    int dim() const { return static_cast<int>(rays.size()); }
};

struct ValidationIssue {
    std::string kind;
    std::string where;
    std::string detail;
};

struct ValidationReport {
    std::vector<ValidationIssue> issues;
    bool ok() const { return issues.empty(); }
    std::string to_string() const;
    // Throws Error with the first issue's kind when not ok.
    void require() const;
};

struct LatticeNormal {
    IntVec ambient_lift;  // phi(generator representative), in Z^ambient
    IntVec projected;     // class modulo the saturated face lattice
    RatVec rep_chart;     // the representative itself, in sigma's chart
};

struct TauQuotient {
    IntMat sat_basis;  // saturation of phi(L_tau), columns
    IntMat proj;       // Z^ambient -> Z^quotient_rank
    IntMat lift;       // right inverse of proj
    int quotient_rank = 0;
};

class ConeComplex {
public:
    int ambient_rank = 0;
    std::map<RayId, Ray> rays;
    std::map<ConeKey, Cone> cones;

    ConeComplex();
    ConeComplex(const ConeComplex& o);
    ConeComplex& operator=(const ConeComplex& o);

    bool has_cone(const ConeKey& key) const { return cones.count(key) > 0; }
    const Cone& cone(const ConeKey& key) const;  // throws ConeNotInComplex
    const Ray& ray(const RayId& id) const;
    int dim() const;
    std::vector<ConeKey> cones_of_dim(int k) const;
    std::vector<ConeKey> maximal_cones() const;

    // ambient_rank x d matrix of ray embeds in chart order
    IntMat chart_embed(const ConeKey& key) const;
    // phi of a chart point (rational output; integral on L)
    RatVec embed_point(const ConeKey& key, const RatVec& chart_point) const;

    // cones sigma with tau <= sigma and dim sigma = dim tau + 1
    std::vector<ConeKey> covers(const ConeKey& tau) const;
    std::vector<ConeKey> cones_containing(const ConeKey& tau) const;

    // Cached derived data (thread safe; caches are per instance).
    const TauQuotient& tau_quotient(const ConeKey& tau) const;
    const LatticeNormal& lattice_normal(const ConeKey& tau, const ConeKey& sigma) const;

private:
    struct Caches;
    std::shared_ptr<Caches> caches_;
};

using ComplexPtr = std::shared_ptr<const ConeComplex>;

ValidationReport validate(const ConeComplex& S);

// Induced lattice on the face of a cone given by chart coordinate subset
// `keep` (indices into the chart order); returns the canonical basis in the
// face's own chart.
RatMat induced_face_lattice(const RatMat& B, const std::vector<int>& keep);

// Canonical basis of L ∩ span(T): both B (chart lattice) and T (span
// generators) are column matrices in the same chart.
RatMat lattice_intersect_span(const RatMat& B, const RatMat& T);

// Is `point` in the cone nonnegatively spanned by the columns of `gens`?
// Exact test by basic-solution enumeration (Caratheodory).
bool in_cone(const RatMat& gens, const RatVec& point);

// Product complex.  Ray ids are kept; on collision the left/right copies are
// prefixed "a." / "b.".
ConeComplex product(const ConeComplex& A, const ConeComplex& B);

// Builders for the standard small complexes.
ConeComplex point_complex();                 // single apex, ambient rank 0
ConeComplex line_fan();                      // complete fan in Z^1, rays "+", "-"
ConeComplex orthant_complex(int d);          // single d-dim cone, identity embedding
ConeComplex projective_fan(int r);           // complete fan of projective r-space in Z^r
// Halfline with embedding phi(e1) = direction (used in tests).
ConeComplex ray_complex(const IntVec& direction);

}  // namespace conecalc
