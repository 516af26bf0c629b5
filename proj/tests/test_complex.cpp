#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "conecalc/complex.hpp"
#include "conecalc/morphism.hpp"
#include "conecalc/star.hpp"
#include "conecalc/subdivide.hpp"

using namespace conecalc;

namespace {

// two rays mapping to +1 and -1 in Z^1 spanning a 2-cone: the embedding
// collapses the diagonal of the cone
ConeComplex folded_plane() {
    ConeComplex S;
    S.ambient_rank = 1;
    S.rays["e1"] = {"e1", {Int(1)}};
    S.rays["e2"] = {"e2", {Int(-1)}};
    Cone apex;
    apex.lattice = RatMat(0, 0);
    S.cones[{}] = apex;
    for (const char* id : {"e1", "e2"}) {
        Cone c;
        c.rays = {id};
        c.lattice = RatMat::identity(1);
        S.cones[c.rays] = c;
    }
    Cone top;
    top.rays = {"e1", "e2"};
    top.lattice = RatMat::identity(2);
    S.cones[top.rays] = top;
    return S;
}

// 2-cone whose intrinsic lattice is Z^2 + Z*(1/2,1/2); the embedding is
// chosen integral on that lattice
ConeComplex half_integral_cone() {
    ConeComplex S;
    S.ambient_rank = 2;
    S.rays["a"] = {"a", {Int(1), Int(1)}};
    S.rays["b"] = {"b", {Int(1), Int(-1)}};
    Cone apex;
    apex.lattice = RatMat(0, 0);
    S.cones[{}] = apex;
    for (const char* id : {"a", "b"}) {
        Cone c;
        c.rays = {id};
        c.lattice = RatMat::identity(1);
        S.cones[c.rays] = c;
    }
    RatMat gens(2, 3);
    gens(0, 0) = 1;
    gens(1, 1) = 1;
    gens(0, 2) = Rat(1, 2);
    gens(1, 2) = Rat(1, 2);
    Cone top;
    top.rays = {"a", "b"};
    top.lattice = lattice_basis(gens);
    S.cones[top.rays] = top;
    return S;
}

Int eval_ray(const ConeComplex& C, const IntVec& h, const RayId& id) {
    Int v = 0;
    const Ray& r = C.ray(id);
    for (std::size_t i = 0; i < h.size(); ++i) v += h[i] * r.embed[i];
    return v;
}

bool sign_pure(const ConeComplex& C, const IntVec& h) {
    for (const auto& [key, c] : C.cones) {
        bool pos = false, neg = false;
        for (const RayId& rid : key) {
            Int v = eval_ray(C, h, rid);
            if (v > 0) pos = true;
            if (v < 0) neg = true;
        }
        if (pos && neg) return false;
    }
    return true;
}

bool has_issue(const ValidationReport& rep, const std::string& kind) {
    for (const auto& is : rep.issues)
        if (is.kind == kind) return true;
    return false;
}

}  // namespace

TEST_CASE("cone ids and keys") {
    CHECK(cone_id({}) == "");
    CHECK(cone_id({"a", "b"}) == "a&b");
    CHECK(parse_cone_key("a&b") == ConeKey{"a", "b"});
    CHECK(parse_cone_key("b&a") == ConeKey{"a", "b"});
    CHECK(parse_cone_key("") == ConeKey{});
    CHECK_THROWS_AS(make_key({"a", "a"}), NonSimplicial);
}

TEST_CASE("builders validate") {
    for (const ConeComplex& S :
         {point_complex(), line_fan(), orthant_complex(1), orthant_complex(2), orthant_complex(3),
          projective_fan(1), projective_fan(2), projective_fan(3), folded_plane(),
          half_integral_cone(), ray_complex({Int(2), Int(-3)})}) {
        ValidationReport rep = validate(S);
        CHECK_MESSAGE(rep.ok(), rep.to_string());
    }
    CHECK(projective_fan(2).cones.size() == 7);
    CHECK(projective_fan(3).cones.size() == 15);
    CHECK(projective_fan(2).dim() == 2);
    CHECK(line_fan().maximal_cones().size() == 2);
    CHECK(orthant_complex(3).cones_of_dim(2).size() == 3);
}

TEST_CASE("validation failures") {
    {  // missing face
        ConeComplex S = projective_fan(2);
        S.cones.erase(ConeKey{"e1"});
        ValidationReport rep = validate(S);
        CHECK_FALSE(rep.ok());
        CHECK(has_issue(rep, "NotFaceClosed"));
        CHECK_THROWS_AS(rep.require(), Error);
    }
    {  // missing apex
        ConeComplex S = line_fan();
        S.cones.erase(ConeKey{});
        CHECK(has_issue(validate(S), "NotFaceClosed"));
    }
    {  // lattice basis not canonical
        ConeComplex S = orthant_complex(2);
        RatMat B = RatMat::identity(2);
        B(0, 1) = -1;  // unimodular but not the canonical representative
        S.cones[ConeKey{"e1", "e2"}].lattice = B;
        CHECK(has_issue(validate(S), "FaceLatticeMismatch"));
    }
    {  // chart units not in the lattice
        ConeComplex S = orthant_complex(2);
        RatMat B = RatMat::identity(2);
        B(0, 0) = 2;
        S.cones[ConeKey{"e1", "e2"}].lattice = B;
        CHECK(has_issue(validate(S), "FaceLatticeMismatch"));
    }
    {  // embedding not integral on the intrinsic lattice
        ConeComplex S = half_integral_cone();
        S.rays["a"].embed = {Int(1), Int(0)};  // phi(1/2,1/2) = (1/2,...) now
        CHECK(has_issue(validate(S), "EmbeddingNotIntegral"));
    }
    {  // recorded face lattice differs from the induced one
        ConeComplex S = half_integral_cone();
        RatMat B(1, 1);
        B(0, 0) = 2;
        S.cones[ConeKey{"a"}].lattice = B;
        CHECK(has_issue(validate(S), "FaceLatticeMismatch"));
    }
    {  // illegal ray id
        ConeComplex S;
        S.ambient_rank = 1;
        S.rays["x&y"] = {"x&y", {Int(1)}};
        Cone apex;
        apex.lattice = RatMat(0, 0);
        S.cones[{}] = apex;
        Cone c;
        c.rays = {"x&y"};
        c.lattice = RatMat::identity(1);
        S.cones[c.rays] = c;
        CHECK(has_issue(validate(S), "InvalidArgument"));
    }
    {  // unknown ray in a cone
        ConeComplex S = line_fan();
        Cone c;
        c.rays = {"ghost"};
        c.lattice = RatMat::identity(1);
        S.cones[c.rays] = c;
        CHECK(has_issue(validate(S), "ConeNotInComplex"));
    }
    {  // non-square lattice
        ConeComplex S = line_fan();
        S.cones[ConeKey{"+"}].lattice = RatMat(1, 2);
        CHECK(has_issue(validate(S), "NonSimplicial"));
    }
    CHECK_THROWS_AS(line_fan().cone(ConeKey{"nope"}), ConeNotInComplex);
}

TEST_CASE("lattice normals of the complete line fan") {
    auto S = std::make_shared<ConeComplex>(line_fan());
    const TauQuotient& tq = S->tau_quotient({});
    CHECK(tq.quotient_rank == 1);
    const LatticeNormal& np = S->lattice_normal({}, {"+"});
    const LatticeNormal& nm = S->lattice_normal({}, {"-"});
    CHECK(np.ambient_lift == IntVec{Int(1)});
    CHECK(nm.ambient_lift == IntVec{Int(-1)});
    CHECK(np.projected[0] + nm.projected[0] == 0);
    CHECK_THROWS_AS(S->lattice_normal({"+"}, {"-"}), NotCodimOneFace);
}

TEST_CASE("lattice normals with a noninjective embedding") {
    auto S = std::make_shared<ConeComplex>(folded_plane());
    // the 2-cone embeds onto the whole line, so both ray stars have rank-0
    // quotients and the normals vanish there
    CHECK(S->tau_quotient({"e1"}).quotient_rank == 0);
    CHECK(S->tau_quotient({"e2"}).quotient_rank == 0);
    const LatticeNormal& n1 = S->lattice_normal({"e1"}, {"e1", "e2"});
    CHECK(n1.projected.empty());
    CHECK(n1.ambient_lift == IntVec{Int(-1)});  // phi of the e2 generator
    const LatticeNormal& n2 = S->lattice_normal({"e2"}, {"e1", "e2"});
    CHECK(n2.ambient_lift == IntVec{Int(1)});
    // at the apex the two rays are opposite primitive vectors
    const LatticeNormal& a1 = S->lattice_normal({}, {"e1"});
    const LatticeNormal& a2 = S->lattice_normal({}, {"e2"});
    CHECK(a1.ambient_lift == IntVec{Int(1)});
    CHECK(a2.ambient_lift == IntVec{Int(-1)});
}

TEST_CASE("lattice normals of the projective plane fan") {
    auto S = std::make_shared<ConeComplex>(projective_fan(2));
    // apex: normals are the primitive ray generators and sum to zero
    IntVec sum(2, Int(0));
    for (const ConeKey& rho : S->covers({})) {
        const LatticeNormal& n = S->lattice_normal({}, rho);
        CHECK(n.ambient_lift == S->ray(rho[0]).embed);
        for (int i = 0; i < 2; ++i) sum[i] += n.projected[i];
    }
    CHECK(is_zero(sum));
    // each ray: two covers with opposite unit normals in the rank-1 quotient
    for (const ConeKey& tau : S->cones_of_dim(1)) {
        CHECK(S->tau_quotient(tau).quotient_rank == 1);
        Int s = 0, absum = 0;
        for (const ConeKey& sigma : S->covers(tau)) {
            const LatticeNormal& n = S->lattice_normal(tau, sigma);
            s += n.projected[0];
            absum += abs(n.projected[0]);
        }
        CHECK(s == 0);
        CHECK(absum == 2);
    }
}

TEST_CASE("half-integral lattice data") {
    ConeComplex S = half_integral_cone();
    const RatMat& L = S.cones.at(ConeKey{"a", "b"}).lattice;
    auto idx = sublattice_index(RatMat::identity(2), L);
    REQUIRE(idx.has_value());
    CHECK(*idx == 2);
    Rat d = det(L);
    CHECK((d == Rat(1, 2) || d == Rat(-1, 2)));
}

TEST_CASE("star at the apex reproduces the complex") {
    auto S = std::make_shared<ConeComplex>(projective_fan(2));
    StarContext ctx = star(S, {});
    CHECK(validate(*ctx.star).ok());
    CHECK(ctx.star->cones.size() == S->cones.size());
    CHECK(ctx.star->rays.size() == S->rays.size());
    for (const auto& [id, r] : S->rays) {
        REQUIRE(ctx.star->rays.count(id) == 1);
        CHECK(ctx.star->ray(id).embed == r.embed);
    }
    for (const auto& [key, c] : S->cones) {
        REQUIRE(ctx.star->has_cone(key));
        CHECK(ctx.star->cone(key).lattice == c.lattice);
    }
}

TEST_CASE("star of a ray in the projective plane fan") {
    auto S = std::make_shared<ConeComplex>(projective_fan(2));
    StarContext ctx = star(S, {"e1"});
    CHECK(validate(*ctx.star).ok());
    CHECK(ctx.star->ambient_rank == 1);
    REQUIRE(ctx.star->rays.size() == 2);
    REQUIRE(ctx.star->rays.count("e1+e2") == 1);
    REQUIRE(ctx.star->rays.count("e1+f") == 1);
    Int a = ctx.star->ray("e1+e2").embed[0];
    Int b = ctx.star->ray("e1+f").embed[0];
    CHECK(a + b == 0);
    CHECK(abs(a) == 1);
    CHECK(ctx.star->cones.size() == 3);  // apex and the two rays
    CHECK(ctx.cone_source.at(ConeKey{"e1+e2"}) == ConeKey{"e1", "e2"});
}

TEST_CASE("star of an orthant face") {
    auto S = std::make_shared<ConeComplex>(orthant_complex(3));
    StarContext ctx = star(S, {"e1"});
    CHECK(validate(*ctx.star).ok());
    CHECK(ctx.star->ambient_rank == 2);
    CHECK(ctx.star->rays.size() == 2);
    CHECK(ctx.star->cones.size() == 4);
    CHECK(ctx.star->dim() == 2);
}

TEST_CASE("star chart transport commutes with embeddings") {
    auto check_complex = [](ComplexPtr S, const ConeKey& tau) {
        StarContext ctx = star(S, tau);
        for (const auto& [sigma, star_key] : ctx.source_star) {
            const Cone& sc = S->cone(sigma);
            RatVec x(static_cast<std::size_t>(sc.dim()), Rat(1));
            RatVec lhs = S->embed_point(sigma, x);
            RatVec plhs(ctx.proj.rows(), Rat(0));
            for (int i = 0; i < ctx.proj.rows(); ++i)
                for (int j = 0; j < ctx.proj.cols(); ++j) plhs[i] += Rat(ctx.proj(i, j)) * lhs[j];
            RatVec rhs = ctx.star->embed_point(star_key, ctx.to_star_chart(sigma, x));
            CHECK(plhs == rhs);
        }
    };
    check_complex(std::make_shared<ConeComplex>(projective_fan(2)), {"e1"});
    check_complex(std::make_shared<ConeComplex>(projective_fan(3)), {"e2", "f"});
    check_complex(std::make_shared<ConeComplex>(orthant_complex(3)), {"e1", "e3"});
    check_complex(std::make_shared<ConeComplex>(half_integral_cone()), {"a"});
    check_complex(std::make_shared<ConeComplex>(folded_plane()), {"e2"});
}

TEST_CASE("products") {
    ConeComplex A = line_fan();
    ProductResult pr = product_with_maps(A, A);
    const ConeComplex& P = pr.complex;
    CHECK(validate(P).ok());
    CHECK(P.ambient_rank == 2);
    CHECK(P.rays.size() == 4);
    CHECK(P.cones.size() == 9);
    REQUIRE(P.rays.count("a.+") == 1);  // collision forces prefixes
    REQUIRE(P.rays.count("b.-") == 1);
    CHECK(P.rays.at("a.+").embed == IntVec{Int(1), Int(0)});
    CHECK(P.rays.at("b.-").embed == IntVec{Int(0), Int(-1)});

    ConeComplex Q = product(projective_fan(2), point_complex());
    CHECK(validate(Q).ok());
    CHECK(Q.cones.size() == 7);
    CHECK(Q.rays.count("e1") == 1);  // no collision, ids kept

    auto Pp = std::make_shared<ConeComplex>(P);
    auto Ap = std::make_shared<ConeComplex>(A);
    for (int which : {0, 1}) {
        ComplexMorphism f = product_projection(Pp, pr, Ap, Ap, which);
        ValidationReport rep = validate_morphism(f);
        CHECK_MESSAGE(rep.ok(), rep.to_string());
    }
}

TEST_CASE("product of half-integral cones multiplies the index") {
    ConeComplex H = half_integral_cone();
    ConeComplex P = product(H, H);
    CHECK(validate(P).ok());
    const Cone& top = P.cone(make_key({"a.a", "a.b", "b.a", "b.b"}));
    auto idx = sublattice_index(RatMat::identity(4), top.lattice);
    REQUIRE(idx.has_value());
    CHECK(*idx == 4);
}

TEST_CASE("stellar subdivision at an interior lattice point") {
    auto S = std::make_shared<ConeComplex>(projective_fan(2));
    Subdivision base = identity_subdivision(S);
    StellarResult st = stellar_subdivide(base, {"e1", "e2"}, {Rat(1), Rat(1)});
    REQUIRE(st.new_ray.has_value());
    CHECK(*st.new_ray == "s(e1+e2;1,1)");
    const ConeComplex& C = *st.sub.complex;
    CHECK(validate(C).ok());
    CHECK(C.rays.size() == 4);
    CHECK(C.cones.size() == 9);
    CHECK(C.ray(*st.new_ray).embed == IntVec{Int(1), Int(1)});
    CHECK_FALSE(C.has_cone(make_key({"e1", "e2"})));
    for (const char* other : {"e1", "e2"}) {
        const Cone& c = C.cone(make_key({other, *st.new_ray}));
        CHECK(c.lattice == RatMat::identity(2));
    }
    // locus of the new ray in the base complex
    const RayLocus& loc = st.sub.record.locus.at(*st.new_ray);
    CHECK(loc.cone == ConeKey{"e1", "e2"});
    CHECK(loc.point == RatVec{Rat(1), Rat(1)});
    CHECK(st.sub.record.parent(make_key({"e1", *st.new_ray})) == ConeKey{"e1", "e2"});
    CHECK(st.sub.record.parent(make_key({"e1", "f"})) == ConeKey{"e1", "f"});
    ComplexMorphism collapse = subdivision_morphism(st.sub);
    ValidationReport rep = validate_morphism(collapse);
    CHECK_MESSAGE(rep.ok(), rep.to_string());
}

TEST_CASE("stellar subdivision picks the primitive point of the finer lattice") {
    auto S = std::make_shared<ConeComplex>(half_integral_cone());
    Subdivision base = identity_subdivision(S);
    // chart point (1,1) lies on the ray through the half-integral point
    StellarResult st = stellar_subdivide(base, {"a", "b"}, {Rat(1), Rat(1)});
    REQUIRE(st.new_ray.has_value());
    CHECK(*st.new_ray == "s(a+b;1/2,1/2)");
    const ConeComplex& C = *st.sub.complex;
    CHECK(validate(C).ok());
    CHECK(C.ray(*st.new_ray).embed == IntVec{Int(1), Int(0)});
    // both halves have index-1 lattices: the subdivision splits the index 2
    for (const char* other : {"a", "b"}) {
        const Cone& c = C.cone(make_key({other, *st.new_ray}));
        CHECK(c.lattice == RatMat::identity(2));
    }
    CHECK(st.sub.record.locus.at(*st.new_ray).point == RatVec{Rat(1, 2), Rat(1, 2)});
    CHECK(validate_morphism(subdivision_morphism(st.sub)).ok());
}

TEST_CASE("stellar subdivision with a collapsing embedding") {
    auto S = std::make_shared<ConeComplex>(folded_plane());
    Subdivision base = identity_subdivision(S);
    StellarResult st = stellar_subdivide(base, {"e1", "e2"}, {Rat(2), Rat(2)});
    REQUIRE(st.new_ray.has_value());
    CHECK(*st.new_ray == "s(e1+e2;1,1)");  // scaled back to the primitive point
    const ConeComplex& C = *st.sub.complex;
    CHECK(validate(C).ok());
    CHECK(C.ray(*st.new_ray).embed == IntVec{Int(0)});  // the diagonal collapses
    CHECK(C.cones.size() == 6);
}

TEST_CASE("stellar subdivision input validation") {
    auto S = std::make_shared<ConeComplex>(projective_fan(2));
    Subdivision base = identity_subdivision(S);
    CHECK_THROWS_AS(stellar_subdivide(base, {"e1", "e2"}, {Rat(1), Rat(0)}),
                    NotInRelativeInterior);
    CHECK_THROWS_AS(stellar_subdivide(base, {"e1", "e2"}, {Rat(-1), Rat(1)}),
                    NotInRelativeInterior);
    CHECK_THROWS_AS(stellar_subdivide(base, {}, {}), InvalidArgument);
    CHECK_THROWS_AS(stellar_subdivide(base, {"e1", "e2"}, {Rat(1)}), InvalidArgument);
    CHECK_THROWS_AS(stellar_subdivide(base, {"e1", "ghost"}, {Rat(1), Rat(1)}),
                    Error);
    // subdividing a ray at an interior point changes nothing
    StellarResult st = stellar_subdivide(base, {"e1"}, {Rat(7)});
    CHECK_FALSE(st.new_ray.has_value());
    CHECK(st.sub.complex == base.complex);
}

TEST_CASE("hyperplane slicing") {
    auto S = std::make_shared<ConeComplex>(orthant_complex(2));
    {
        Subdivision out = slice_by_hyperplane(identity_subdivision(S), {Int(1), Int(-1)});
        CHECK(validate(*out.complex).ok());
        CHECK(out.complex->cones.size() == 6);
        CHECK(out.complex->rays.size() == 3);
        CHECK(sign_pure(*out.complex, {Int(1), Int(-1)}));
        bool found = false;
        for (const auto& [id, r] : out.complex->rays)
            if (r.embed == IntVec{Int(1), Int(1)}) found = true;
        CHECK(found);
        CHECK(validate_morphism(subdivision_morphism(out)).ok());
    }
    {  // already pure: nothing happens
        Subdivision out = slice_by_hyperplane(identity_subdivision(S), {Int(1), Int(1)});
        CHECK(out.complex->cones.size() == 4);
    }
    {  // boundary values are pure too
        Subdivision out = slice_by_hyperplane(identity_subdivision(S), {Int(1), Int(0)});
        CHECK(out.complex->cones.size() == 4);
    }
    {  // cap triggers
        CHECK_THROWS_AS(slice_by_hyperplane(identity_subdivision(S), {Int(1), Int(-1)}, 1),
                        RefinementExplosion);
    }
    {  // collapsing embedding: the cut ray embeds to zero
        auto F = std::make_shared<ConeComplex>(folded_plane());
        Subdivision out = slice_by_hyperplane(identity_subdivision(F), {Int(1)});
        CHECK(validate(*out.complex).ok());
        CHECK(out.complex->cones.size() == 6);
        CHECK(sign_pure(*out.complex, {Int(1)}));
    }
}

TEST_CASE("repeated slicing keeps earlier purity") {
    auto S = std::make_shared<ConeComplex>(orthant_complex(3));
    Subdivision sub = identity_subdivision(S);
    std::vector<IntVec> planes = {{Int(1), Int(-1), Int(0)},
                                  {Int(0), Int(1), Int(-1)},
                                  {Int(1), Int(0), Int(-1)}};
    for (const IntVec& h : planes) sub = slice_by_hyperplane(std::move(sub), h);
    CHECK(validate(*sub.complex).ok());
    for (const IntVec& h : planes) CHECK(sign_pure(*sub.complex, h));
    CHECK(validate_morphism(subdivision_morphism(sub)).ok());
    // the three planes cut the orthant into the 3! chambers of orderings
    CHECK(sub.complex->maximal_cones().size() == 6);
}

TEST_CASE("refinement along a map to the line") {
    auto target = std::make_shared<ConeComplex>(line_fan());
    {
        auto S = std::make_shared<ConeComplex>(orthant_complex(2));
        IntMat G(1, 2);
        G(0, 0) = 1;
        G(0, 1) = -1;  // (x, y) -> x - y
        RefineResult out = refine_along_map(identity_subdivision(S), G, target);
        CHECK(validate(*out.sub.complex).ok());
        CHECK(out.sub.complex->cones.size() == 6);
        RayId mid = "s(e1+e2;1,1)";
        CHECK(out.assignment.at(make_key({"e1", mid})) == ConeKey{"+"});
        CHECK(out.assignment.at(make_key({"e2", mid})) == ConeKey{"-"});
        CHECK(out.assignment.at(ConeKey{mid}) == ConeKey{});  // embeds to zero
        ValidationReport rep = validate_morphism(out.witness);
        CHECK_MESSAGE(rep.ok(), rep.to_string());
    }
    {  // a single ray needs no refinement
        auto S = std::make_shared<ConeComplex>(ray_complex({Int(3)}));
        RefineResult out = refine_along_map(identity_subdivision(S), IntMat::identity(1), target);
        CHECK(out.sub.complex->cones.size() == 2);
        CHECK(out.assignment.at(ConeKey{"r"}) == ConeKey{"+"});
        CHECK(out.witness.cone_matrix.at(ConeKey{"r"})(0, 0) == 3);
        CHECK(validate_morphism(out.witness).ok());
    }
}

TEST_CASE("refinement of a product along the sum map") {
    ConeComplex A = line_fan();
    ProductResult pr = product_with_maps(A, A);
    auto P = std::make_shared<ConeComplex>(pr.complex);
    auto target = std::make_shared<ConeComplex>(line_fan());
    IntMat G(1, 2);
    G(0, 0) = 1;
    G(0, 1) = 1;  // (x, y) -> x + y
    RefineResult out = refine_along_map(identity_subdivision(P), G, target);
    CHECK(validate(*out.sub.complex).ok());
    // the antidiagonal is cut: two new rays
    CHECK(out.sub.complex->rays.size() == 6);
    bool d1 = false, d2 = false;
    for (const auto& [id, r] : out.sub.complex->rays) {
        if (r.embed == IntVec{Int(1), Int(-1)}) d1 = true;
        if (r.embed == IntVec{Int(-1), Int(1)}) d2 = true;
    }
    CHECK(d1);
    CHECK(d2);
    ValidationReport rep = validate_morphism(out.witness);
    CHECK_MESSAGE(rep.ok(), rep.to_string());
    // composing the collapse with a factor projection is again a morphism
    auto Ap = std::make_shared<ConeComplex>(A);
    ComplexMorphism proj0 = product_projection(P, pr, Ap, Ap, 0);
    ComplexMorphism collapse = subdivision_morphism(out.sub);
    ComplexMorphism comp = compose(proj0, collapse);
    ValidationReport rep2 = validate_morphism(comp);
    CHECK_MESSAGE(rep2.ok(), rep2.to_string());
}

TEST_CASE("morphism validation rejects incompatibilities") {
    auto S = std::make_shared<ConeComplex>(orthant_complex(2));
    ComplexMorphism f;
    f.source = S;
    f.target = S;
    f.lattice_map = IntMat::identity(2);
    for (const auto& [key, c] : S->cones) {
        f.cone_image[key] = key;
        f.cone_matrix[key] = RatMat::identity(c.dim());
    }
    CHECK(validate_morphism(f).ok());
    ComplexMorphism bad = f;
    bad.cone_matrix[make_key({"e1", "e2"})](0, 0) = -1;
    CHECK(has_issue(validate_morphism(bad), "MapFaceIncompatible"));
    ComplexMorphism missing = f;
    missing.cone_image.erase(make_key({"e1"}));
    CHECK(has_issue(validate_morphism(missing), "MapFaceIncompatible"));
    ComplexMorphism shape = f;
    shape.cone_matrix[make_key({"e1"})] = RatMat(2, 2);
    CHECK(has_issue(validate_morphism(shape), "InvalidArgument"));
}
