#pragma once

// Morphisms of weakly embedded cone complexes: a lattice map between the
// ambient lattices plus, for every source cone, a target cone and the chart
// matrix of the restriction.  The chart matrices must be compatible with face
// inclusions, integral on intrinsic lattices, and commute with the weak
// embeddings through the lattice map.

#include "conecalc/complex.hpp"

namespace conecalc {

struct ComplexMorphism {
    ComplexPtr source;
    ComplexPtr target;
    IntMat lattice_map;                    // ambient(source) -> ambient(target)
    std::map<ConeKey, ConeKey> cone_image; // source cone -> target cone containing its image
    std::map<ConeKey, RatMat> cone_matrix; // source chart -> image cone chart
    bool conewise_onto = false;            // every cone maps onto its assigned target cone
};

ValidationReport validate_morphism(const ComplexMorphism& f);

// g after f; requires f.target == g.source (pointer identity).
ComplexMorphism compose(const ComplexMorphism& g, const ComplexMorphism& f);

struct ProductResult {
    ConeComplex complex;
    // product ray -> (0 = left factor, 1 = right factor) and the original id
    std::map<RayId, std::pair<int, RayId>> ray_origin;
};
ProductResult product_with_maps(const ConeComplex& A, const ConeComplex& B);

// Projection of a product complex onto one factor (conewise onto).
ComplexMorphism product_projection(ComplexPtr prod, const ProductResult& info, ComplexPtr A,
                                   ComplexPtr B, int which);

}  // namespace conecalc
