#include <algorithm>
#include <set>
#include <sstream>

#include "conecalc/cycles.hpp"

namespace conecalc {

bool complex_struct_equal(const ConeComplex& A, const ConeComplex& B) {
    if (A.ambient_rank != B.ambient_rank) return false;
    if (A.rays.size() != B.rays.size() || A.cones.size() != B.cones.size()) return false;
    for (const auto& [id, ray] : A.rays) {
        auto it = B.rays.find(id);
        if (it == B.rays.end() || it->second.embed != ray.embed) return false;
    }
    for (const auto& [key, cone] : A.cones) {
        auto it = B.cones.find(key);
        if (it == B.cones.end() || !(it->second.lattice == cone.lattice)) return false;
    }
    return true;
}

namespace {

// One weighted top-cone of some summand, written in the chart of its minimal
// base cone.
struct Piece {
    Rat weight;
    RatMat gens;  // chart points of the rays, columns
};

std::vector<Int> flatten(const IntMat& m) {
    std::vector<Int> out;
    out.push_back(m.rows());
    out.push_back(m.cols());
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) out.push_back(m(i, j));
    return out;
}

RayId cell_ray_id(int i) {
    std::ostringstream os;
    os << 'q' << (i < 10 ? "0" : "") << i;
    return os.str();
}

// Do the pieces (all k-cones spanning the same k-subspace of a common chart)
// cancel exactly?  Slices every piece by every facet hyperplane of every
// piece and sums the weights at an interior probe point of each cell.
bool span_group_cancels(const std::vector<Piece>& pieces, const IntMat& span_basis) {
    const int k = span_basis.cols();
    if (k == 0) {
        Rat acc(0);
        for (const Piece& p : pieces) acc += p.weight;
        return acc == 0;
    }
    // Coordinates inside the span.
    RatMat Sb = to_rat(span_basis);
    std::vector<IntMat> coords;  // integer-scaled generator columns per piece
    for (const Piece& p : pieces) {
        IntMat Y(k, k);
        for (int j = 0; j < k; ++j) {
            auto y = solve_linear(Sb, p.gens.col(j), SolveMode::Rational);
            if (!y) throw Error("Internal", "piece escapes its span group");
            Y.set_col(j, primitive_direction(*y));
        }
        coords.push_back(std::move(Y));
    }
    // Facet normals of all pieces.
    std::set<IntVec> normals;
    for (const IntMat& Y : coords) {
        for (int omit = 0; omit < k; ++omit) {
            IntMat F(k, k - 1);
            int cc = 0;
            for (int j = 0; j < k; ++j)
                if (j != omit) F.set_col(cc++, Y.col(j));
            IntMat K = kernel(F.transpose());
            if (K.cols() != 1) continue;  // degenerate facet
            IntVec n = K.col(0);
            for (const Int& v : n) {
                if (v == 0) continue;
                if (v < 0)
                    for (Int& x : n) x = -x;
                break;
            }
            normals.insert(std::move(n));
        }
    }
    // Slice each piece and probe its cells.
    for (std::size_t pi = 0; pi < pieces.size(); ++pi) {
        auto cx = std::make_shared<ConeComplex>();
        cx->ambient_rank = k;
        ConeKey full;
        for (int j = 0; j < k; ++j) {
            RayId id = cell_ray_id(j);
            cx->rays[id] = Ray{id, coords[pi].col(j)};
            full.push_back(id);
        }
        std::sort(full.begin(), full.end());
        for (std::size_t mask = 0; mask < (std::size_t(1) << k); ++mask) {
            ConeKey face;
            for (int j = 0; j < k; ++j)
                if (mask & (std::size_t(1) << j)) face.push_back(full[static_cast<std::size_t>(j)]);
            cx->cones[face] = Cone{face, RatMat::identity(static_cast<int>(face.size()))};
        }
        Subdivision sub = identity_subdivision(cx);
        for (const IntVec& h : normals) sub = slice_by_hyperplane(std::move(sub), h);
        for (const ConeKey& cell : sub.complex->cones_of_dim(k)) {
            RatVec probe(static_cast<std::size_t>(k), Rat(0));
            for (const RayId& r : cell) {
                const IntVec& e = sub.complex->ray(r).embed;
                for (int i = 0; i < k; ++i) probe[static_cast<std::size_t>(i)] += Rat(e[i]);
            }
            Rat acc(0);
            for (std::size_t qi = 0; qi < pieces.size(); ++qi)
                if (in_cone(to_rat(coords[qi]), probe)) acc += pieces[qi].weight;
            if (acc != 0) return false;
        }
    }
    return true;
}

}  // namespace

bool sum_equal(const CycleSum& A, const CycleSum& B) {
    std::vector<std::pair<Rat, const TropicalCycle*>> terms;
    for (const auto& [c, cyc] : A)
        if (c != 0) terms.emplace_back(c, &cyc);
    for (const auto& [c, cyc] : B)
        if (c != 0) terms.emplace_back(-c, &cyc);
    if (terms.empty()) return true;

    const ConeComplex& ref = *terms.front().second->base;
    for (const auto& [c, cyc] : terms) {
        if (cyc->base.get() != &ref && !complex_struct_equal(*cyc->base, ref))
            throw IncomparableAtlases("cycles live over different base complexes");
        if (cyc->rep.record.base != cyc->base)
            throw IncomparableAtlases("cycle representation is not recorded over its base");
    }

    // Pieces grouped by (minimal base cone, span inside its chart).
    std::map<std::pair<ConeKey, std::vector<Int>>, std::pair<IntMat, std::vector<Piece>>> groups;
    for (const auto& [coeff, cyc] : terms) {
        for (const auto& [key, w] : cyc->weight.weights) {
            if (w == 0) continue;
            ConeKey parent = cyc->rep.record.parent(key);
            const int d = static_cast<int>(parent.size());
            const int k = static_cast<int>(key.size());
            RatMat gens(d, k);
            for (int j = 0; j < k; ++j)
                gens.set_col(j, cyc->rep.record.point_in(parent, key[static_cast<std::size_t>(j)]));
            IntMat scaled(d, k);
            for (int j = 0; j < k; ++j) {
                RatVec col = gens.col(j);
                scaled.set_col(j, primitive_direction(col));
            }
            IntMat span = saturation(scaled);
            auto gk = std::make_pair(parent, flatten(span));
            auto& slot = groups[gk];
            if (slot.second.empty()) slot.first = span;
            slot.second.push_back(Piece{coeff * w, std::move(gens)});
        }
    }
    for (const auto& [gk, slot] : groups)
        if (!span_group_cancels(slot.second, slot.first)) return false;
    return true;
}

bool cycle_equal(const TropicalCycle& A, const TropicalCycle& B) {
    return sum_equal(CycleSum{{Rat(1), A}}, CycleSum{{Rat(1), B}});
}

bool cycle_equal(const ExtendedCycle& A, const ExtendedCycle& B) {
    if (A.complex.get() != B.complex.get() && !complex_struct_equal(*A.complex, *B.complex))
        throw IncomparableAtlases("extended cycles live over different complexes");
    std::set<ConeKey> keys;
    for (const auto& [g, p] : A.components) keys.insert(g);
    for (const auto& [g, p] : B.components) keys.insert(g);
    for (const ConeKey& g : keys) {
        CycleSum sa, sb;
        auto ia = A.components.find(g);
        if (ia != A.components.end()) sa.emplace_back(Rat(1), ia->second.cycle);
        auto ib = B.components.find(g);
        if (ib != B.components.end()) sb.emplace_back(Rat(1), ib->second.cycle);
        if (!sum_equal(sa, sb)) return false;
    }
    return true;
}

}  // namespace conecalc
