#pragma once

// Randomized instance families for the property suites: a rotation of small
// complete fans and products, random balanced weights drawn from the balanced
// basis, random conewise linear divisors, and random stellar refinements.
// Everything is driven by an explicit seed so failures reproduce exactly.

#include <memory>
#include <optional>
#include <random>

#include "conecalc/cycles.hpp"
#include "conecalc/star.hpp"
#include "conecalc/subdivide.hpp"

namespace gen {

using namespace conecalc;

inline Int rnd_int(std::mt19937_64& rng, int lo, int hi) {
    return Int(std::uniform_int_distribution<int>(lo, hi)(rng));
}

template <class T>
const T& pick(std::mt19937_64& rng, const std::vector<T>& v) {
    return v[std::uniform_int_distribution<std::size_t>(0, v.size() - 1)(rng)];
}

// All divisors on these bases admit certificates: the maximal cones are
// simplicial with linearly independent rays, so any ray values extend.
inline ComplexPtr base_complex(int which) {
    switch (which % 5) {
        case 0: return std::make_shared<ConeComplex>(projective_fan(2));
        case 1: return std::make_shared<ConeComplex>(projective_fan(3));
        case 2: return std::make_shared<ConeComplex>(product(line_fan(), line_fan()));
        case 3: return std::make_shared<ConeComplex>(product(projective_fan(2), line_fan()));
        default: return std::make_shared<ConeComplex>(line_fan());
    }
}

// Random integer combination of the balanced basis in dimension k; nullopt
// when the combination degenerates to zero or no balanced weights exist.
inline std::optional<MinkowskiWeight> random_weight(ComplexPtr S, int k, std::mt19937_64& rng,
                                                    int lo = -3, int hi = 3) {
    auto basis = mink_basis(S, k);
    if (basis.empty()) return std::nullopt;
    MinkowskiWeight w{S, k, {}};
    for (const auto& b : basis) {
        Int coef = rnd_int(rng, lo, hi);
        if (coef == 0) continue;
        for (const auto& [key, v] : b.weights) w.weights[key] += Rat(coef) * v;
    }
    for (auto it = w.weights.begin(); it != w.weights.end();)
        it = (it->second == 0) ? w.weights.erase(it) : std::next(it);
    if (w.weights.empty()) return std::nullopt;
    return w;
}

inline Divisor random_divisor(ComplexPtr S, std::mt19937_64& rng, int lo = -4, int hi = 4) {
    Divisor psi{S, {}};
    for (const auto& [id, ray] : S->rays) psi.values[id] = Rat(rnd_int(rng, lo, hi));
    return psi;
}

inline Divisor random_nonneg_divisor(ComplexPtr S, std::mt19937_64& rng, int hi = 4) {
    return random_divisor(S, rng, 0, hi);
}

// A few random stellar refinements at interior points of random cones of
// dimension >= 2.
inline Subdivision random_refinement(ComplexPtr S, std::mt19937_64& rng, int steps) {
    Subdivision sub = identity_subdivision(S);
    for (int s = 0; s < steps; ++s) {
        std::vector<ConeKey> cands;
        for (const auto& [key, c] : sub.complex->cones)
            if (key.size() >= 2) cands.push_back(key);
        if (cands.empty()) break;
        const ConeKey& cone0 = pick(rng, cands);
        RatVec v(cone0.size());
        for (auto& x : v) x = Rat(rnd_int(rng, 1, 3));
        sub = stellar_subdivide(sub, cone0, v).sub;
    }
    return sub;
}

// Offsets every certificate entry by a random functional vanishing on the
// cone's embedded span; the result is a different but equally valid
// certificate for the same divisor.
inline CpCertificate jitter_certificate(ComplexPtr S, CpCertificate cert, std::mt19937_64& rng) {
    for (auto& [key, m] : cert.m) {
        IntMat E = S->chart_embed(key);
        IntMat K = kernel(E.transpose());
        for (int j = 0; j < K.cols(); ++j) {
            Int t = rnd_int(rng, -2, 2);
            if (t == 0) continue;
            for (int i = 0; i < K.rows(); ++i) m[i] += Rat(t * K(i, j));
        }
    }
    return cert;
}

inline bool weights_equal(const MinkowskiWeight& a, const MinkowskiWeight& b) {
    if (a.dim != b.dim) return false;
    auto norm = [](const MinkowskiWeight& w) {
        std::map<ConeKey, Rat> m;
        for (const auto& [k, v] : w.weights)
            if (v != 0) m[k] = v;
        return m;
    };
    return norm(a) == norm(b);
}

}  // namespace gen
