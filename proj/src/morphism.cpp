#include "conecalc/morphism.hpp"

#include <algorithm>

namespace conecalc {

ValidationReport validate_morphism(const ComplexMorphism& f) {
    ValidationReport rep;
    auto issue = [&](const std::string& kind, const std::string& where, const std::string& what) {
        rep.issues.push_back({kind, where, what});
    };
    if (!f.source || !f.target) {
        issue("InvalidArgument", "", "morphism missing source or target");
        return rep;
    }
    const ConeComplex& S = *f.source;
    const ConeComplex& T = *f.target;
    if (f.lattice_map.rows() != T.ambient_rank || f.lattice_map.cols() != S.ambient_rank)
        issue("InvalidArgument", "", "lattice map has wrong shape");

    for (const auto& [key, c] : S.cones) {
        const std::string where = cone_id(key);
        auto im = f.cone_image.find(key);
        auto mx = f.cone_matrix.find(key);
        if (im == f.cone_image.end() || mx == f.cone_matrix.end()) {
            issue("MapFaceIncompatible", where, "cone has no assigned image");
            continue;
        }
        if (!T.has_cone(im->second)) {
            issue("ConeNotInComplex", where, "assigned image cone does not exist");
            continue;
        }
        const Cone& tc = T.cone(im->second);
        const RatMat& M = mx->second;
        if (M.rows() != tc.dim() || M.cols() != c.dim()) {
            issue("InvalidArgument", where, "chart matrix has wrong shape");
            continue;
        }
        // image stays inside the target cone's orthant
        for (int i = 0; i < M.rows(); ++i)
            for (int j = 0; j < M.cols(); ++j)
                if (M(i, j) < 0)
                    issue("MapFaceIncompatible", where, "chart matrix leaves the target cone");
        // weak embeddings commute through the lattice map
        RatMat lhs = to_rat(T.chart_embed(im->second)) * M;
        RatMat rhs = to_rat(f.lattice_map) * to_rat(S.chart_embed(key));
        if (!(lhs == rhs))
            issue("MapFaceIncompatible", where, "weak embeddings do not commute");
        // integrality on intrinsic lattices: B_delta^{-1} M B_sigma integral
        if (c.dim() > 0 && tc.dim() > 0) {
            RatMat X = inverse(tc.lattice) * M * c.lattice;
            for (int i = 0; i < X.rows(); ++i)
                for (int j = 0; j < X.cols(); ++j)
                    if (rat_den(X(i, j)) != 1) {
                        issue("MapFaceIncompatible", where,
                              "intrinsic lattice is not mapped into the target lattice");
                        i = X.rows();
                        break;
                    }
        } else if (c.dim() > 0 && tc.dim() == 0) {
            if (!M.is_zero())
                issue("MapFaceIncompatible", where, "nonzero map into the apex");
        }
        // restriction to facets matches the facets' own data
        for (int drop = 0; drop < c.dim(); ++drop) {
            ConeKey facet;
            for (int i = 0; i < c.dim(); ++i)
                if (i != drop) facet.push_back(key[i]);
            auto fim = f.cone_image.find(facet);
            auto fmx = f.cone_matrix.find(facet);
            if (fim == f.cone_image.end() || fmx == f.cone_matrix.end()) continue;  // reported there
            if (!std::includes(im->second.begin(), im->second.end(), fim->second.begin(),
                               fim->second.end())) {
                issue("MapFaceIncompatible", where,
                      "image of face '" + cone_id(facet) + "' is not a face of the image");
                continue;
            }
            // columns of M at the facet's positions, re-expressed in the
            // facet image's chart, must equal the facet's matrix
            for (int i = 0, fi = 0; i < c.dim(); ++i) {
                if (i == drop) continue;
                // column i of M lives in im->second's chart; restrict to rows of fim->second
                for (int tr = 0; tr < tc.dim(); ++tr) {
                    const RayId& target_ray = im->second[tr];
                    auto pos = std::find(fim->second.begin(), fim->second.end(), target_ray);
                    Rat expect = (pos == fim->second.end())
                                     ? Rat(0)
                                     : (*fmx).second(static_cast<int>(pos - fim->second.begin()), fi);
                    if (M(tr, i) != expect) {
                        issue("MapFaceIncompatible", where,
                              "chart matrix does not restrict to face '" + cone_id(facet) + "'");
                        tr = tc.dim();
                        i = c.dim();
                    }
                }
                ++fi;
            }
        }
        // onto check
        if (f.conewise_onto) {
            bool onto = true;
            for (int j = 0; j < tc.dim() && onto; ++j) {
                RatVec e(tc.dim(), Rat(0));
                e[j] = 1;
                if (!in_cone(M, e)) onto = false;
            }
            if (!onto)
                issue("NotConewiseOnto", where, "cone does not map onto its assigned image");
        }
    }
    return rep;
}

ComplexMorphism compose(const ComplexMorphism& g, const ComplexMorphism& f) {
    if (f.target != g.source)
        throw InvalidArgument("compose: middle complexes differ");
    ComplexMorphism h;
    h.source = f.source;
    h.target = g.target;
    h.lattice_map = g.lattice_map * f.lattice_map;
    h.conewise_onto = f.conewise_onto && g.conewise_onto;
    for (const auto& [key, img] : f.cone_image) {
        const ConeKey& mid = img;
        h.cone_image[key] = g.cone_image.at(mid);
        h.cone_matrix[key] = g.cone_matrix.at(mid) * f.cone_matrix.at(key);
    }
    return h;
}

ProductResult product_with_maps(const ConeComplex& A, const ConeComplex& B) {
    bool collision = false;
    for (const auto& [id, r] : A.rays)
        if (B.rays.count(id)) collision = true;
    auto rename_a = [&](const RayId& id) { return collision ? "a." + id : id; };
    auto rename_b = [&](const RayId& id) { return collision ? "b." + id : id; };

    ProductResult out;
    ConeComplex& P = out.complex;
    P.ambient_rank = A.ambient_rank + B.ambient_rank;
    for (const auto& [id, r] : A.rays) {
        Ray nr;
        nr.id = rename_a(id);
        nr.embed = r.embed;
        nr.embed.resize(P.ambient_rank, Int(0));
        P.rays[nr.id] = nr;
        out.ray_origin[nr.id] = {0, id};
    }
    for (const auto& [id, r] : B.rays) {
        Ray nr;
        nr.id = rename_b(id);
        nr.embed.assign(P.ambient_rank, Int(0));
        for (int i = 0; i < B.ambient_rank; ++i) nr.embed[A.ambient_rank + i] = r.embed[i];
        P.rays[nr.id] = nr;
        out.ray_origin[nr.id] = {1, id};
    }
    for (const auto& [ka, ca] : A.cones)
        for (const auto& [kb, cb] : B.cones) {
            std::vector<RayId> ids;
            std::map<RayId, std::pair<int, int>> src;  // id -> (factor, factor chart index)
            for (std::size_t i = 0; i < ka.size(); ++i) {
                ids.push_back(rename_a(ka[i]));
                src[ids.back()] = {0, static_cast<int>(i)};
            }
            for (std::size_t i = 0; i < kb.size(); ++i) {
                ids.push_back(rename_b(kb[i]));
                src[ids.back()] = {1, static_cast<int>(i)};
            }
            ConeKey key = make_key(ids);
            const int d = static_cast<int>(key.size());
            const int da = ca.dim();
            RatMat L(d, d);
            // block-diagonal lattice permuted into the product chart order
            for (int col = 0; col < d; ++col)
                for (int rw = 0; rw < d; ++rw) {
                    auto [factor, idx] = src[key[rw]];
                    if (col < da)
                        L(rw, col) = (factor == 0) ? ca.lattice(idx, col) : Rat(0);
                    else
                        L(rw, col) = (factor == 1) ? cb.lattice(idx, col - da) : Rat(0);
                }
            Cone c;
            c.rays = key;
            c.lattice = lattice_basis(L);
            P.cones[key] = c;
        }
    return out;
}

ConeComplex product(const ConeComplex& A, const ConeComplex& B) {
    return product_with_maps(A, B).complex;
}

ComplexMorphism product_projection(ComplexPtr prod, const ProductResult& info, ComplexPtr A,
                                   ComplexPtr B, int which) {
    ComplexMorphism f;
    f.source = prod;
    f.target = (which == 0) ? A : B;
    const int na = A->ambient_rank, nb = B->ambient_rank;
    f.lattice_map = IntMat(f.target->ambient_rank, na + nb);
    for (int i = 0; i < f.target->ambient_rank; ++i)
        f.lattice_map(i, (which == 0) ? i : na + i) = 1;
    f.conewise_onto = true;
    for (const auto& [key, c] : prod->cones) {
        ConeKey img;
        std::vector<int> positions;  // chart positions of the kept factor's rays
        for (std::size_t i = 0; i < key.size(); ++i) {
            const auto& [factor, orig] = info.ray_origin.at(key[i]);
            if (factor == which) {
                img.push_back(orig);
                positions.push_back(static_cast<int>(i));
            }
        }
        ConeKey img_key = make_key(img);
        // factor ray ids keep their relative order under renaming, so img is sorted
        RatMat M(static_cast<int>(img_key.size()), c.dim());
        for (std::size_t t = 0; t < img_key.size(); ++t) {
            // position in img (sorted) of the ray that sits at positions[t']
            for (std::size_t p = 0; p < positions.size(); ++p) {
                const auto& [factor, orig] = info.ray_origin.at(key[positions[p]]);
                if (orig == img_key[t]) M(static_cast<int>(t), positions[p]) = 1;
            }
        }
        f.cone_image[key] = img_key;
        f.cone_matrix[key] = M;
    }
    return f;
}

}  // namespace conecalc
