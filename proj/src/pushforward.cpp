#include "conecalc/cycles.hpp"

namespace conecalc {

MinkowskiWeight pushforward(const ComplexMorphism& f, const MinkowskiWeight& c) {
    if (c.complex != f.source)
        throw InvalidArgument("pushforward: weight does not live on the morphism's source");
    if (!f.conewise_onto)
        throw NotConewiseOnto("pushforward needs a conewise-onto morphism");
    const int k = c.dim;
    MinkowskiWeight out{f.target, k, {}};
    for (const auto& [sigma, w] : c.weights) {
        if (w == 0) continue;
        const Cone& sc = c.complex->cone(sigma);
        if (sc.dim() != k)
            throw MixedDimensions("weight on [" + cone_id(sigma) + "] of dimension " +
                                  std::to_string(sc.dim()) + " in a weight of dimension " +
                                  std::to_string(k));
        const ConeKey& delta = f.cone_image.at(sigma);
        if (static_cast<int>(delta.size()) != k) continue;  // dimension collapse: zero
        RatMat img = f.cone_matrix.at(sigma) * sc.lattice;
        auto idx = sublattice_index(img, f.target->cone(delta).lattice);
        if (!idx) continue;  // rank drop onto a smaller sublattice: zero
        out.weights[delta] += w * Rat(*idx);
    }
    for (auto it = out.weights.begin(); it != out.weights.end();)
        it = (it->second == 0) ? out.weights.erase(it) : std::next(it);
    return out;
}

Divisor pullback_divisor(const ComplexMorphism& f, const Divisor& psi) {
    if (psi.complex != f.target)
        throw InvalidArgument("pullback_divisor: divisor does not live on the morphism's target");
    Divisor out{f.source, {}};
    for (const auto& [id, ray] : f.source->rays) {
        ConeKey rc{id};
        const ConeKey& delta = f.cone_image.at(rc);
        const RatMat& M = f.cone_matrix.at(rc);
        out.values[id] = psi.value_at(delta, M.col(0));
    }
    return out;
}

Rat degree(const ExtendedCycle& E) {
    if (E.dim != 0) return Rat(0);
    Rat acc(0);
    for (const auto& [gamma, piece] : E.components) acc += degree(piece.cycle.weight);
    return acc;
}

}  // namespace conecalc
