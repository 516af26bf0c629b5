#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "conecalc/moduli.hpp"
#include "conecalc/star.hpp"

using namespace conecalc;

namespace {

MinkowskiWeight fundamental(ComplexPtr S) {
    std::size_t top = 0;
    for (const auto& [key, c] : S->cones) top = std::max(top, key.size());
    MinkowskiWeight w{S, static_cast<int>(top), {}};
    for (const auto& [key, c] : S->cones)
        if (key.size() == top) w.weights[key] = 1;
    return w;
}

std::size_t count_cones(ComplexPtr S, std::size_t dim) {
    std::size_t c = 0;
    for (const auto& [key, cone] : S->cones) c += key.size() == dim;
    return c;
}

// one-point correlators of psi powers via the string equation, independent
// of the cup machinery
Rat string_oracle(std::vector<int> a) {
    const int n = static_cast<int>(a.size());
    if (n == 3) return 1;
    std::size_t z = std::find(a.begin(), a.end(), 0) - a.begin();
    REQUIRE(z < a.size());
    std::vector<int> rest;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (i != z) rest.push_back(a[i]);
    Rat total = 0;
    for (std::size_t i = 0; i < rest.size(); ++i) {
        if (rest[i] == 0) continue;
        std::vector<int> next = rest;
        --next[i];
        total += string_oracle(next);
    }
    return total;
}

Rat factorial(int k) {
    Rat f = 1;
    for (int i = 2; i <= k; ++i) f *= i;
    return f;
}

}  // namespace

TEST_CASE("split compatibility and ray ids") {
    CHECK(split_ray_id({2, 3}) == "I={2,3}");
    CHECK(split_ray_id({1, 4, 5}) == "I={1,4,5}");

    // nested, disjoint and covering pairs are compatible; crossing pairs not
    CHECK(splits_compatible(6, {1, 2}, {1, 2, 3}));
    CHECK(splits_compatible(6, {1, 2}, {3, 4}));
    CHECK(splits_compatible(6, {1, 2, 3}, {3, 4, 5, 6}));
    CHECK(!splits_compatible(6, {1, 2}, {2, 3}));
    CHECK(!splits_compatible(4, {1, 2}, {1, 3}));
}

TEST_CASE("moduli fan counts and validity") {
    struct Expect {
        int n;
        std::size_t rays, top;
    };
    for (Expect e : {Expect{4, 3, 3}, Expect{5, 10, 15}, Expect{6, 25, 105}, Expect{7, 56, 945}}) {
        CAPTURE(e.n);
        ModuliComplex M = build_m0n(e.n);
        CHECK(M.complex->rays.size() == e.rays);
        CHECK(M.complex->rays.size() == (1u << (e.n - 1)) - e.n - 1);
        CHECK(count_cones(M.complex, e.n - 3) == e.top);
        CHECK(M.complex->ambient_rank == e.n * (e.n - 1) / 2 - e.n);
        CHECK(validate(*M.complex).ok());
    }
    CHECK_THROWS_AS(build_m0n(3), InvalidArgument);
}

TEST_CASE("fundamental weights are balanced") {
    for (int n = 4; n <= 6; ++n) {
        CAPTURE(n);
        ModuliComplex M = build_m0n(n);
        CHECK(check_balanced(fundamental(M.complex)).ok());
    }
}

TEST_CASE("psi divisor values") {
    ModuliComplex M4 = build_m0n(4);
    Divisor p41 = psi_divisor(M4, 1);
    for (const auto& [id, ray] : M4.complex->rays) CHECK(p41.value(id) == Rat(1, 3));

    ModuliComplex M5 = build_m0n(5);
    Divisor p51 = psi_divisor(M5, 1);
    CHECK(p51.value("I={2,3}") == Rat(1, 6));
    CHECK(p51.value("I={2,3,4}") == Rat(1, 2));
    CHECK(p51.value("I={1,2}") == Rat(1, 2));  // 1 in the side, so |I| = 3
    CHECK_THROWS_AS(psi_divisor(M5, 6), InvalidArgument);
}

TEST_CASE("boundary representatives of psi") {
    ModuliComplex M4 = build_m0n(4);
    Divisor b = psi_boundary_rep(M4, 1, 2, 3);
    for (const auto& [id, ray] : M4.complex->rays)
        CHECK(b.value(id) == (id == "I={2,3}" ? Rat(1) : Rat(0)));

    ModuliComplex M5 = build_m0n(5);
    Divisor b5 = psi_boundary_rep(M5, 1, 2, 3);
    std::size_t hits = 0;
    for (const auto& [id, ray] : M5.complex->rays) hits += b5.value(id) == 1;
    CHECK(hits == 3);
    CHECK(b5.value("I={1,4}") == 1);
    CHECK(b5.value("I={2,3}") == 1);    // the 1-side is {1,4,5}
    CHECK(b5.value("I={2,3,4}") == 1);  // the 1-side is {1,5}

    CHECK_THROWS_AS(psi_boundary_rep(M5, 1, 1, 3), MarksNotDistinct);
    CHECK_THROWS_AS(psi_boundary_rep(M5, 2, 3, 3), MarksNotDistinct);

    // all representatives of one psi class are linearly equivalent, and
    // equivalent to the symmetric representative
    for (int n : {4, 5, 6}) {
        CAPTURE(n);
        ModuliComplex M = build_m0n(n);
        Divisor sym = psi_divisor(M, 1);
        Divisor r23 = psi_boundary_rep(M, 1, 2, 3);
        CHECK(lin_equiv(r23, sym).has_value());
        CHECK(lin_equiv(r23, psi_boundary_rep(M, 1, 2, 4)).has_value());
        CHECK(lin_equiv(r23, psi_boundary_rep(M, 1, 3, 4)).has_value());
    }
}

TEST_CASE("descendant values match the string equation") {
    CHECK(descendant(4, {1, 0, 0, 0}) == 1);
    CHECK(descendant(5, {1, 1, 0, 0, 0}) == 2);
    CHECK(descendant(5, {2, 0, 0, 0, 0}) == 1);
    CHECK(descendant(6, {1, 1, 1, 0, 0, 0}) == 6);
    CHECK(descendant(6, {2, 1, 0, 0, 0, 0}) == 3);
    CHECK(descendant(6, {3, 0, 0, 0, 0, 0}) == 1);

    // every exponent vector for five marks, against the recursion and the
    // closed multinomial form
    std::vector<int> a(5, 0);
    for (a[0] = 0; a[0] <= 2; ++a[0])
        for (a[1] = 0; a[1] + a[0] <= 2; ++a[1])
            for (a[2] = 0; a[2] + a[1] + a[0] <= 2; ++a[2])
                for (a[3] = 0; a[3] + a[2] + a[1] + a[0] <= 2; ++a[3]) {
                    a[4] = 2 - a[0] - a[1] - a[2] - a[3];
                    INFO("exponents ", a[0], a[1], a[2], a[3], a[4]);
                    Rat got = descendant(5, a);
                    CHECK(got == string_oracle(a));
                    Rat closed = factorial(2);
                    for (int e : a) closed /= factorial(e);
                    CHECK(got == closed);
                }

    // symmetry under permuting marks
    CHECK(descendant(5, {0, 1, 0, 1, 0}) == descendant(5, {1, 1, 0, 0, 0}));
    CHECK(descendant(6, {0, 0, 2, 0, 1, 0}) == descendant(6, {2, 1, 0, 0, 0, 0}));

    CHECK_THROWS_AS(descendant(5, {1, 0, 0, 0, 0}), DimensionMismatch);
    CHECK_THROWS_AS(descendant(4, {1, 0, 0}), InvalidArgument);
}

TEST_CASE("labeled moduli and evaluation maps") {
    auto P2 = std::make_shared<ConeComplex>(projective_fan(2));
    std::vector<IntVec> delta = {{Int(1), Int(0)}, {Int(0), Int(1)}, {Int(-1), Int(-1)}};
    LabeledModuli L = build_labeled_moduli(2, delta, P2);
    CHECK(L.n == 2);
    CHECK(L.m == 3);
    CHECK(L.moduli.n == 5);
    // dim = dim of the five-mark moduli plus the plane
    std::size_t top = 0;
    for (const auto& [key, c] : L.complex->cones) top = std::max(top, key.size());
    CHECK(top == 4);
    CHECK(validate(*L.complex).ok());

    // the first mark evaluates to the recorded position
    const RatMat& e1 = L.ev[0];
    const int q = L.moduli.complex->ambient_rank;
    for (int i = 0; i < e1.rows(); ++i)
        for (int j = 0; j < e1.cols(); ++j)
            CHECK(e1(i, j) == ((j >= q && j - q == i) ? Rat(1) : Rat(0)));

    // the second mark moves by the directions of the separating splits
    const RatMat& e2 = L.ev[1];
    for (const auto& [id, ray] : L.moduli.complex->rays) {
        const SplitSide& s = L.moduli.side.at(id);
        bool one_in = std::binary_search(s.begin(), s.end(), 1);
        bool two_in = std::binary_search(s.begin(), s.end(), 2);
        RatVec expect(2, Rat(0));
        if (one_in != two_in) {
            for (int v = 1; v <= 5; ++v) {
                bool in_side = std::binary_search(s.begin(), s.end(), v);
                if (v > 2 && in_side == two_in)
                    for (int t = 0; t < 2; ++t) expect[t] += Rat(delta[v - 3][t]);
            }
        }
        for (int t = 0; t < 2; ++t) {
            Rat got = 0;
            for (int c = 0; c < q; ++c) got += e2(t, c) * Rat(ray.embed[c]);
            CHECK(got == expect[t]);
        }
    }

    std::vector<IntVec> lopsided = {{Int(1), Int(0)}, {Int(0), Int(1)}};
    CHECK_THROWS_AS(build_labeled_moduli(2, lopsided, P2), DegreeNotBalanced);
}

TEST_CASE("graph witness for psi on the four-marked moduli fan") {
    ModuliComplex M = build_m0n(4);
    Divisor psi = psi_divisor(M, 1);
    MinkowskiWeight fund = fundamental(M.complex);

    WitnessResult w = graph_witness(psi, fund);
    CHECK(w.check);
    CHECK(w.scale == 3);  // clears the 1/3 values
    CHECK(!w.gamma.weight.integral());

    // the identity the witness certifies, by hand: one point of weight 1/3 in
    // each of the three ray stars, total degree one
    ExtendedCycle cut = dot(psi, cycle_on(M.complex, fund));
    CHECK(cut.components.size() == 3);
    for (const auto& [tau, piece] : cut.components)
        CHECK(piece.cycle.weight.weight({}) == Rat(1, 3));
    CHECK(degree(cut) == 1);
    CHECK(degree(cup(psi, fund)) == 1);
}

TEST_CASE("incidence counts") {
    auto P2 = std::make_shared<ConeComplex>(projective_fan(2));
    std::vector<IntVec> delta = {{Int(1), Int(0)}, {Int(0), Int(1)}, {Int(-1), Int(-1)}};
    LabeledModuli L = build_labeled_moduli(2, delta, P2);

    // the point class: a divisor of degree one (the all-ones divisor is the
    // anticanonical class and scales the answer by 3 per factor)
    Divisor H{P2, {{"e1", 1}}};
    // a line through two general points of the plane
    CHECK(gw_count(L, {{1, H, 2}, {2, H, 2}}) == 1);
    Divisor K{P2, {{"e1", 1}, {"e2", 1}, {"f", 1}}};
    CHECK(gw_count(L, {{1, K, 2}, {2, K, 2}}) == 81);

    CHECK_THROWS_AS(gw_count(L, {}), DimensionMismatch);
    CHECK_THROWS_AS(gw_count(L, {{1, H, 3}}), DimensionMismatch);
    CHECK_THROWS_AS(gw_count(L, {{3, H, 4}}), InvalidArgument);

    // two point conditions on a degree-one cover of the line
    auto L1 = std::make_shared<ConeComplex>(line_fan());
    std::vector<IntVec> updown = {{Int(1)}, {Int(-1)}};
    LabeledModuli LL = build_labeled_moduli(2, updown, L1);
    Divisor pt{L1, {{"+", 1}}};
    CHECK(gw_count(LL, {{1, pt, 1}, {2, pt, 1}}) == 1);
}
