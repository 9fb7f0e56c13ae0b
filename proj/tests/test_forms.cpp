#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "galcur/error.hpp"
#include "galcur/forms.hpp"

using namespace galcur;

namespace {

ExtensionSpec kummer22() {
    return ExtensionSpec(2, {2, 2}, {CycNum(-1), CycNum(-1)});
}

ExtensionSpec trivial_ext(int nvars) {
    return ExtensionSpec(nvars, std::vector<int>(nvars, 1),
                         std::vector<CycNum>(nvars, CycNum(1)));
}

CycMatrix diag_sign() { // diag(1,-1)
    CycMatrix m(2, 2);
    m.at(0, 0) = CycNum(1);
    m.at(1, 1) = CycNum(-1);
    return m;
}

CycMatrix antidiag() { // [[0,1],[1,0]]
    CycMatrix m(2, 2);
    m.at(0, 1) = CycNum(1);
    m.at(1, 0) = CycNum(1);
    return m;
}

// sl2 with commuting conjugation automorphisms of order 2: the running
// rank-two example (first automorphism conjugates by diag(1,-1), second by
// the antidiagonal).
struct RankTwoExample {
    StructureAlgebra sl2 = make_sl(2);
    ExtensionSpec ext = kummer22();
    std::vector<AlgebraAuto> autos;

    RankTwoExample() {
        auto mats = sl_basis_matrices(2);
        autos.push_back(check_auto(sl2, conjugation_matrix(mats, diag_sign())));
        autos.push_back(check_auto(sl2, conjugation_matrix(mats, antidiag())));
    }

    FormWindow window(int D) const { return multiloop_window(sl2, autos, ext, D); }
};

std::vector<CycNum> unit_vec(int dim, int i) {
    std::vector<CycNum> v(dim);
    v[static_cast<size_t>(i)] = CycNum(1);
    return v;
}

TorusPoint pt(std::vector<CycNum> coords) { return TorusPoint(std::move(coords)); }

bool all_zero(const std::vector<CycNum>& v) {
    for (const auto& c : v)
        if (!c.is_zero()) return false;
    return true;
}

// Independent eigenspace dimension at one degree: nullity of the stacked
// eigenvalue conditions, computed straight from rank_of.
int eigenspace_dim_at(const std::vector<AlgebraAuto>& autos, const std::vector<CycNum>& roots,
                      const std::vector<int>& e) {
    const int d = autos[0].matrix.rows();
    CycMatrix stacked(static_cast<int>(autos.size()) * d, d);
    for (size_t i = 0; i < autos.size(); ++i) {
        CycNum lambda = roots[i].pow(e[i]);
        for (int r = 0; r < d; ++r)
            for (int c = 0; c < d; ++c) {
                CycNum v = autos[i].matrix.at(r, c);
                if (r == c) v -= lambda;
                stacked.at(static_cast<int>(i) * d + r, c) = v;
            }
    }
    return d - rank_of(stacked);
}

// Embed an sl2-coordinate current (basis e, f, h) into matrix-unit
// coordinates of M_2 (basis E11, E12, E21, E22).
CurrentElem embed_sl2_in_m2(const CurrentElem& z) {
    CurrentElem out(4, z.num_vars());
    for (const auto& [deg, v] : z.terms()) {
        std::vector<CycNum> w(4);
        w[0] = v[2];
        w[1] = v[0];
        w[2] = v[1];
        w[3] = -v[2];
        out.set_coeff(deg, w);
    }
    return out;
}

} // namespace

TEST_CASE("current elements: arithmetic, products, Galois action, evaluation") {
    StructureAlgebra sl2 = make_sl(2);
    ExtensionSpec ext = kummer22();

    CurrentElem e_t1 = CurrentElem::term(2, {1, 0}, unit_vec(3, 0));
    CurrentElem f_t2 = CurrentElem::term(2, {0, 1}, unit_vec(3, 1));

    SUBCASE("termwise bracket lands at the summed degree") {
        CurrentElem br = current_product(sl2, e_t1, f_t2);
        CHECK(br == CurrentElem::term(2, {1, 1}, unit_vec(3, 2))); // [e,f] = h
        CHECK(current_commutator(sl2, e_t1, f_t2) == br);
    }

    SUBCASE("associative product on matrix units") {
        StructureAlgebra m2 = make_matrix_algebra(2);
        CurrentElem a = CurrentElem::term(2, {1, 0}, unit_vec(4, 1)); // E12 t1
        CurrentElem b = CurrentElem::term(2, {0, 0}, unit_vec(4, 2)); // E21
        CHECK(current_product(m2, a, b) == CurrentElem::term(2, {1, 0}, unit_vec(4, 0)));
        CurrentElem comm = current_commutator(m2, a, b); // E11 t1 - E22 t1
        std::vector<CycNum> tr{CycNum(1), CycNum(0), CycNum(0), CycNum(-1)};
        CHECK(comm == CurrentElem::term(2, {1, 0}, tr));
    }

    SUBCASE("linear structure and S-action") {
        CurrentElem sum = e_t1 + f_t2;
        CHECK(sum.coeff({1, 0})[0] == CycNum(1));
        CHECK(sum.coeff({0, 1})[1] == CycNum(1));
        CHECK((sum - e_t1) == f_t2);
        CHECK(e_t1.scaled(CycNum(0)).is_zero());

        LaurentPoly s = LaurentPoly::monomial(2, {-1, 0}, CycNum(2)) +
                        LaurentPoly::constant(2, CycNum::zeta(4));
        CurrentElem moved = e_t1.scaled_poly(s);
        CHECK(moved.coeff({0, 0})[0] == CycNum(2));
        CHECK(moved.coeff({1, 0})[0] == CycNum::zeta(4));
        CHECK(moved.support_radius() == 1);
    }

    SUBCASE("Galois action scales each degree by the root character") {
        GaloisElement g{{1, 0}};
        CurrentElem acted = galois_act_current(ext, g, e_t1);
        CHECK(acted == e_t1.scaled(CycNum(-1)));
        CurrentElem inv = galois_act_current(ext, g, f_t2);
        CHECK(inv == f_t2); // degree (0,1) untouched by the first generator

        // (^g z)(g . a) = z(a) termwise
        TorusPoint a = pt({CycNum(2), CycNum::zeta(4)});
        CurrentElem z = e_t1 + f_t2.scaled(CycNum::zeta(8));
        auto lhs = ev_point(galois_act_current(ext, g, z), galois_act_point(ext, g, a));
        auto rhs = ev_point(z, a);
        CHECK(lhs == rhs);
    }

    SUBCASE("evaluation is the coefficient-weighted point value") {
        CurrentElem h_t2 = CurrentElem::term(2, {0, 1}, unit_vec(3, 2));
        auto v = ev_point(h_t2, pt({CycNum(2), CycNum::zeta(4)}));
        CHECK(v[0].is_zero());
        CHECK(v[1].is_zero());
        CHECK(v[2] == CycNum::zeta(4));

        // coefficient in the ideal of the fiber of (1,1) evaluates to zero
        LaurentPoly van = LaurentPoly::monomial(2, {2, 0}, CycNum(1)) -
                          LaurentPoly::constant(2, CycNum(1));
        CurrentElem kerz = e_t1.scaled_poly(van);
        for (const auto& b : fiber(ext, pt({CycNum(1), CycNum(1)}))) {
            auto w = ev_point(kerz, b);
            CHECK(all_zero(w));
        }
    }
}

TEST_CASE("Laurent matrices act on currents compatibly with evaluation") {
    ExtensionSpec ext = kummer22();
    LaurentMatrix shift(2, 2, 2);
    shift.at(0, 0) = LaurentPoly::variable(2, 0);          // t1
    shift.at(0, 1) = LaurentPoly::constant(2, CycNum(1));  // 1
    shift.at(1, 1) = LaurentPoly::monomial(2, {0, -1}, CycNum(3));

    CurrentElem z(2, 2);
    z.set_coeff({0, 1}, {CycNum(1), CycNum::zeta(4)});

    CurrentElem moved = shift.apply(z);
    CHECK(moved.coeff({1, 1})[0] == CycNum(1));
    CHECK(moved.coeff({0, 1})[0] == CycNum::zeta(4));
    CHECK(moved.coeff({0, 0})[1] == CycNum(3) * CycNum::zeta(4));

    TorusPoint a = pt({CycNum(2), CycNum::zeta(8)});
    auto via_matrix = shift.eval(a).apply(ev_point(z, a));
    auto via_current = ev_point(moved, a);
    CHECK(via_matrix == via_current);

    GaloisElement g{{1, 1}};
    LaurentMatrix acted = shift.galois_applied(ext, g);
    CHECK(acted.at(0, 0) == galois_act_poly(ext, g, shift.at(0, 0)));
    CHECK(acted.at(0, 1) == shift.at(0, 1));

    LaurentMatrix idm = LaurentMatrix::identity(2, 2);
    CHECK(idm * shift == shift);
    CHECK(shift * idm == shift);
}

TEST_CASE("multiloop windows match independent eigenspace enumeration") {
    RankTwoExample ex;

    SUBCASE("window sizes at radii 1 through 4, against brute-force sums") {
        const int expected[] = {8, 16, 40, 56};
        std::vector<CycNum> roots{CycNum(-1), CycNum(-1)};
        for (int D = 1; D <= 4; ++D) {
            FormWindow w = ex.window(D);
            int oracle = 0;
            for (const auto& e : window_degrees(2, D))
                oracle += eigenspace_dim_at(ex.autos, roots, e);
            CHECK(static_cast<int>(w.basis.size()) == oracle);
            CHECK(static_cast<int>(w.basis.size()) == expected[D - 1]);
            CHECK(window_span(w).rank() == static_cast<int>(w.basis.size()));
        }
    }

    SUBCASE("every basis element satisfies the defining condition") {
        FormWindow w = ex.window(2);
        CHECK(window_defining_condition_ok(w));
    }

    SUBCASE("graded placement: h sits at odd second degree, e+f at odd first") {
        FormWindow w = ex.window(1);
        bool saw_h = false, saw_ef = false, saw_emf = false;
        for (const auto& z : w.basis) {
            REQUIRE(z.terms().size() == 1);
            const auto& [deg, v] = *z.terms().begin();
            int p0 = ((deg[0] % 2) + 2) % 2, p1 = ((deg[1] % 2) + 2) % 2;
            if (p0 == 0 && p1 == 1) {
                CHECK(v == unit_vec(3, 2)); // h
                saw_h = true;
            } else if (p0 == 1 && p1 == 0) {
                CHECK(v[0] == v[1]); // e + f direction
                CHECK(v[2].is_zero());
                saw_ef = true;
            } else {
                CHECK(p0 == 1);
                CHECK(p1 == 1);
                CHECK(v[0] == -v[1]); // e - f direction
                CHECK(v[2].is_zero());
                saw_emf = true;
            }
        }
        CHECK(saw_h);
        CHECK(saw_ef);
        CHECK(saw_emf);
    }

    SUBCASE("untwisted windows over the trivial extension fill the lattice") {
        StructureAlgebra sl2 = make_sl(2);
        std::vector<AlgebraAuto> ids{AlgebraAuto{CycMatrix::identity(3), 1}};
        ExtensionSpec triv = trivial_ext(1);
        CHECK(multiloop_window(sl2, ids, triv, 1).basis.size() == 9);  // 3 * 3
        CHECK(multiloop_window(sl2, ids, triv, 2).basis.size() == 15); // 3 * 5

        // identity automorphisms over a genuine degree-2 extension clip to
        // base-ring support: only degrees divisible by the orders survive
        std::vector<AlgebraAuto> ids2{AlgebraAuto{CycMatrix::identity(3), 1},
                                      AlgebraAuto{CycMatrix::identity(3), 1}};
        CHECK(multiloop_window(sl2, ids2, kummer22(), 1).basis.size() == 3);
    }

    SUBCASE("brackets with summed support inside the window stay in the span") {
        FormWindow w = ex.window(2);
        RowSpan span = window_span(w);
        auto degrees = window_degrees(2, 2);
        for (size_t i = 0; i < w.basis.size(); ++i) {
            for (size_t j = i + 1; j < w.basis.size(); ++j) {
                CurrentElem c = current_commutator(ex.sl2, w.basis[i], w.basis[j]);
                if (c.is_zero() || c.support_radius() > 2) continue;
                CHECK(span.contains(flatten_current(c, degrees)));
            }
        }
    }

    SUBCASE("invalid multiloop data is rejected") {
        StructureAlgebra sl2 = make_sl(2);
        auto mats = sl_basis_matrices(2);
        CycMatrix unip(2, 2);
        unip.at(0, 0) = CycNum(1);
        unip.at(0, 1) = CycNum(1);
        unip.at(1, 1) = CycNum(1);
        // conj by a unipotent has infinite order and fails to commute with
        // the diagonal conjugation; the commuting check fires first
        AlgebraAuto bad{conjugation_matrix(mats, unip), 2};
        CHECK_THROWS_AS(multiloop_form(sl2, kummer22(), {ex.autos[0], bad}),
                        InvalidArgumentError);
        // a wrong stated order is caught
        AlgebraAuto lying{ex.autos[0].matrix, 1};
        CHECK_THROWS_AS(multiloop_form(sl2, kummer22(), {lying, ex.autos[1]}),
                        InvalidArgumentError);
        // order must divide the extension order
        ExtensionSpec k33(2, {3, 3}, {CycNum::zeta(3), CycNum::zeta(3)});
        CHECK_THROWS_AS(multiloop_form(sl2, k33, ex.autos), InvalidArgumentError);
        // one automorphism per variable
        CHECK_THROWS_AS(multiloop_form(sl2, kummer22(), {ex.autos[0]}), InvalidArgumentError);
    }
}

TEST_CASE("cocycle verification accepts the constant cocycle and names violations") {
    RankTwoExample ex;
    FormSpec ml = multiloop_form(ex.sl2, ex.ext, ex.autos);

    SUBCASE("constant cocycle from commuting automorphisms passes") {
        CocycleReport rep = verify_cocycle(ex.ext, ex.sl2, ml.cocycle);
        CHECK(rep.ok);
        CHECK(rep.violation.empty());
    }

    SUBCASE("trivial cocycle passes") {
        Cocycle triv;
        for (const auto& g : galois_group(ex.ext))
            triv.images[g.exponents] = LaurentMatrix::identity(3, 2);
        CHECK(verify_cocycle(ex.ext, ex.sl2, triv).ok);
    }

    SUBCASE("non-multiplicative image is reported with the offending pair") {
        Cocycle bad = ml.cocycle;
        CycMatrix stretch = CycMatrix::identity(3);
        stretch.at(2, 2) = CycNum(2); // e -> e, f -> f, h -> 2h breaks [e,f] = h
        bad.images[{1, 0}] = LaurentMatrix::from_constant(stretch, 2);
        CocycleReport rep = verify_cocycle(ex.ext, ex.sl2, bad);
        CHECK_FALSE(rep.ok);
        CHECK(rep.violation.find("multiplicative") != std::string::npos);
        CHECK(rep.violation.find("(1,0)") != std::string::npos);
    }

    SUBCASE("a genuine automorphism in the wrong slot breaks the cocycle law") {
        Cocycle bad;
        for (const auto& g : galois_group(ex.ext))
            bad.images[g.exponents] = LaurentMatrix::identity(3, 2);
        bad.images[{1, 0}] = LaurentMatrix::from_constant(ex.autos[0].matrix, 2);
        CocycleReport rep = verify_cocycle(ex.ext, ex.sl2, bad);
        CHECK_FALSE(rep.ok);
        CHECK(rep.violation.find("cocycle law") != std::string::npos);
    }

    SUBCASE("missing image is reported") {
        Cocycle partial = ml.cocycle;
        partial.images.erase({1, 1});
        CocycleReport rep = verify_cocycle(ex.ext, ex.sl2, partial);
        CHECK_FALSE(rep.ok);
        CHECK(rep.violation.find("no image") != std::string::npos);
    }
}

TEST_CASE("fixed-point solver agrees with the eigenspace construction") {
    RankTwoExample ex;
    FormSpec ml = multiloop_form(ex.sl2, ex.ext, ex.autos);

    SUBCASE("constant cocycle reproduces the multiloop span at radii 1 and 2") {
        for (int D = 1; D <= 2; ++D) {
            FormWindow solved = twisted_form_window(ml, D);
            FormWindow graded = ex.window(D);
            CHECK(solved.basis.size() == graded.basis.size());
            CHECK(window_span(solved) == window_span(graded));
            CHECK(window_defining_condition_ok(solved));
        }
    }

    SUBCASE("trivial cocycle over the trivial extension fills the window") {
        ExtensionSpec triv = trivial_ext(2);
        Cocycle c;
        c.images[{0, 0}] = LaurentMatrix::identity(3, 2);
        FormSpec spec = twisted_form(ex.sl2, triv, c);
        FormWindow w = twisted_form_window(spec, 1);
        CHECK(w.basis.size() == 27); // dim g * (2D+1)^N
    }

    SUBCASE("trivial cocycle over a nontrivial extension clips to base support") {
        Cocycle c;
        for (const auto& g : galois_group(ex.ext))
            c.images[g.exponents] = LaurentMatrix::identity(3, 2);
        FormSpec spec = twisted_form(ex.sl2, ex.ext, c);
        FormWindow w = twisted_form_window(spec, 1);
        // Galois-invariant vectors have support on degrees divisible by the
        // orders: only (0,0) survives in radius 1
        CHECK(w.basis.size() == 3);
        for (const auto& z : w.basis) {
            for (const auto& [deg, v] : z.terms()) {
                CHECK(deg[0] % 2 == 0);
                CHECK(deg[1] % 2 == 0);
            }
        }
    }

    SUBCASE("invalid cocycles are rejected at construction") {
        Cocycle bad;
        for (const auto& g : galois_group(ex.ext))
            bad.images[g.exponents] = LaurentMatrix::identity(3, 2);
        CycMatrix stretch = CycMatrix::identity(3);
        stretch.at(2, 2) = CycNum(2);
        bad.images[{0, 1}] = LaurentMatrix::from_constant(stretch, 2);
        CHECK_THROWS_AS(twisted_form(ex.sl2, ex.ext, bad), InvalidArgumentError);
    }

    SUBCASE("conjugating by a coboundary preserves the window dimension") {
        auto mats = sl_basis_matrices(2);
        CycMatrix unip(2, 2);
        unip.at(0, 0) = CycNum(1);
        unip.at(0, 1) = CycNum(1);
        unip.at(1, 1) = CycNum(1);
        CycMatrix wmat = conjugation_matrix(mats, unip);
        CycMatrix winv = matrix_inverse(wmat);

        Cocycle conj;
        for (const auto& g : galois_group(ex.ext)) {
            // v_g = w^{-1} u_g (^g w); all factors constant here
            CycMatrix u = ml.cocycle.image(g).eval(pt({CycNum(1), CycNum(1)}));
            conj.images[g.exponents] = LaurentMatrix::from_constant(winv * u * wmat, 2);
        }
        FormSpec spec = twisted_form(ex.sl2, ex.ext, conj);
        FormWindow tw = twisted_form_window(spec, 1);
        FormWindow orig = ex.window(1);
        CHECK(tw.basis.size() == orig.basis.size());
        CHECK(window_defining_condition_ok(tw));
        // ... but it is a genuinely different subspace of g(S)
        CHECK_FALSE(window_span(tw) == window_span(orig));
    }
}

TEST_CASE("multiplication map certificates on the window") {
    RankTwoExample ex;

    SUBCASE("the split of e t1 across graded lines, verified by hand") {
        FormWindow w = ex.window(1);
        CycNum half(Rational(1, 2));
        CurrentElem target = CurrentElem::term(2, {1, 0}, unit_vec(3, 0)); // e t1
        CurrentElem epf =
            CurrentElem::term(2, {1, 0}, {CycNum(1), CycNum(1), CycNum(0)});
        CurrentElem emf =
            CurrentElem::term(2, {1, 1}, {CycNum(1), CycNum(-1), CycNum(0)});
        CurrentElem hand =
            epf.scaled(half) + emf.scaled_poly(LaurentPoly::monomial(2, {0, -1}, half));
        CHECK(hand == target);

        // both generators of the identity lie in the window
        RowSpan span = window_span(w);
        auto degrees = window_degrees(2, 1);
        CHECK(span.contains(flatten_current(epf, degrees)));
        CHECK(span.contains(flatten_current(emf, degrees)));

        MuExpression mu = mu_express(w, target, 1);
        REQUIRE(mu.success);
        CurrentElem recomputed(3, 2);
        for (const auto& [idx, s] : mu.combination)
            recomputed += w.basis[static_cast<size_t>(idx)].scaled_poly(s);
        CHECK(recomputed == target);
    }

    SUBCASE("all unit targets in the inner window succeed at radius 2") {
        FormWindow w = ex.window(2);
        for (const auto& e : window_degrees(2, 1)) {
            for (int i = 0; i < 3; ++i) {
                CurrentElem target = CurrentElem::term(2, e, unit_vec(3, i));
                MuExpression mu = mu_express(w, target, 3);
                CHECK(mu.success);
            }
        }
    }

    SUBCASE("a window basis element is expressed as itself") {
        StructureAlgebra sl2 = make_sl(2);
        std::vector<AlgebraAuto> ids{AlgebraAuto{CycMatrix::identity(3), 1}};
        FormWindow w = multiloop_window(sl2, ids, trivial_ext(1), 0);
        CurrentElem target = CurrentElem::term(1, {0}, unit_vec(3, 1));
        MuExpression mu = mu_express(w, target, 0);
        REQUIRE(mu.success);
        REQUIRE(mu.combination.size() == 1);
        CHECK(w.basis[static_cast<size_t>(mu.combination[0].first)] == target);
        CHECK(mu.combination[0].second == LaurentPoly::constant(1, CycNum(1)));
    }

    SUBCASE("zero target gives the empty combination") {
        FormWindow w = ex.window(1);
        MuExpression mu = mu_express(w, CurrentElem(3, 2), 1);
        CHECK(mu.success);
        CHECK(mu.combination.empty());
    }

    SUBCASE("failure honestly reports a too-small window") {
        FormWindow w = ex.window(1);
        // no expansion allowed: h (x) 1 needs a shift from degree (0,+-1)
        CurrentElem h1 = CurrentElem::term(2, {0, 0}, unit_vec(3, 2));
        CHECK_FALSE(mu_express(w, h1, 0).success);
        // far-away target out of reach of radius-1 shifts
        CurrentElem far = CurrentElem::term(2, {3, 0}, unit_vec(3, 0));
        CHECK_FALSE(mu_express(w, far, 1).success);
        // the same targets succeed once the expansion radius grows
        CHECK(mu_express(w, h1, 1).success);
        CHECK(mu_express(w, far, 2).success);
    }
}

TEST_CASE("evaluation is a homomorphism and hits all of the fiber algebra") {
    RankTwoExample ex;
    FormWindow w = ex.window(2);

    SUBCASE("homomorphism property on window pairs") {
        TorusPoint a = pt({CycNum::zeta(4), CycNum(2)});
        CurrentElem z = w.basis[0] + w.basis[3].scaled(CycNum::zeta(8)) + w.basis[7];
        CurrentElem v = w.basis[1].scaled(CycNum(Rational(2, 3))) + w.basis[5];
        auto lhs = ev_point(current_commutator(ex.sl2, z, v), a);
        auto rhs = ex.sl2.product(ev_point(z, a), ev_point(v, a));
        CHECK(lhs == rhs);
    }

    SUBCASE("window images at a rational point span the whole algebra") {
        for (const TorusPoint& a :
             {pt({CycNum(1), CycNum(1)}), pt({CycNum::zeta(4), CycNum(3)})}) {
            FormWindow w1 = ex.window(1);
            CycMatrix images(static_cast<int>(w1.basis.size()), 3);
            for (size_t i = 0; i < w1.basis.size(); ++i) {
                auto v = ev_point(w1.basis[i], a);
                for (int j = 0; j < 3; ++j) images.at(static_cast<int>(i), j) = v[j];
            }
            CHECK(rank_of(images) == 3);
        }
    }
}

TEST_CASE("ideal windows at fiber keys: kernels, ranks, fiber invariance") {
    RankTwoExample ex;

    SUBCASE("full current algebra: codimension is dim times fiber size") {
        StructureAlgebra sl2 = make_sl(2);
        std::vector<AlgebraAuto> ids{AlgebraAuto{CycMatrix::identity(3), 1}};
        FormWindow ambient = multiloop_window(sl2, ids, trivial_ext(1), 2);
        REQUIRE(ambient.basis.size() == 15);

        ExtensionSpec deg2(1, {2}, {CycNum(-1)});
        TorusPoint a = pt({CycNum(1)});
        auto fib = fiber(deg2, a);
        REQUIRE(fib.size() == 2);
        WindowIdeal ideal = points_kernel_window(ambient, fib, fiber_key(deg2, a));
        CHECK(ambient.basis.size() - ideal.basis.size() == 6); // dim g * |fiber|

        // independent rank computation on the stacked evaluation matrix
        CycMatrix stacked(6, 15);
        for (size_t j = 0; j < ambient.basis.size(); ++j)
            for (size_t p = 0; p < fib.size(); ++p) {
                auto v = ev_point(ambient.basis[j], fib[p]);
                for (int i = 0; i < 3; ++i)
                    stacked.at(static_cast<int>(p) * 3 + i, static_cast<int>(j)) = v[i];
            }
        CHECK(rank_of(stacked) == 6);
    }

    SUBCASE("twisted window: all fiber evaluations agree up to the twist") {
        FormWindow w = ex.window(1);
        REQUIRE(w.basis.size() == 8);
        TorusPoint a = pt({CycNum(1), CycNum(1)});
        auto fib = fiber(ex.ext, a);
        REQUIRE(fib.size() == 4);

        WindowIdeal ideal = psi_ideal_window(w, a);
        CHECK(ideal.key == fiber_key(ex.ext, a));
        CHECK(ideal.fiber.size() == 4);
        CHECK(w.basis.size() - ideal.basis.size() == 3);

        // the stacked rank collapses to dim g despite four points
        CycMatrix stacked(12, 8);
        for (size_t j = 0; j < w.basis.size(); ++j)
            for (size_t p = 0; p < fib.size(); ++p) {
                auto v = ev_point(w.basis[j], fib[p]);
                for (int i = 0; i < 3; ++i)
                    stacked.at(static_cast<int>(p) * 3 + i, static_cast<int>(j)) = v[i];
            }
        CHECK(rank_of(stacked) == 3);
    }

    SUBCASE("kernel of one evaluation equals the whole fiber kernel") {
        for (int D = 1; D <= 2; ++D) {
            FormWindow w = ex.window(D);
            TorusPoint a = pt({CycNum(1), CycNum(1)});
            WindowIdeal whole = psi_ideal_window(w, a);
            WindowIdeal single = points_kernel_window(w, {a});
            REQUIRE(whole.basis.size() == single.basis.size());
            auto degrees = window_degrees(2, D);
            RowSpan span_whole(static_cast<int>(degrees.size()) * 3);
            RowSpan span_single(static_cast<int>(degrees.size()) * 3);
            for (const auto& z : whole.basis) span_whole.add(flatten_current(z, degrees));
            for (const auto& z : single.basis) span_single.add(flatten_current(z, degrees));
            CHECK(span_whole == span_single);
        }
    }

    SUBCASE("two points of one fiber give the same ideal") {
        FormWindow w = ex.window(2);
        WindowIdeal i1 = psi_ideal_window(w, pt({CycNum(1), CycNum(1)}));
        WindowIdeal i2 = psi_ideal_window(w, pt({CycNum(-1), CycNum(1)}));
        CHECK(i1.key == i2.key);
        REQUIRE(i1.basis.size() == i2.basis.size());
        for (size_t i = 0; i < i1.basis.size(); ++i) CHECK(i1.basis[i] == i2.basis[i]);
    }

    SUBCASE("ideal property: brackets with the window fall back into the ideal") {
        FormWindow w = ex.window(2);
        WindowIdeal ideal = psi_ideal_window(w, pt({CycNum(1), CycNum(1)}));
        auto degrees = window_degrees(2, 2);
        RowSpan ideal_span(static_cast<int>(degrees.size()) * 3);
        for (const auto& z : ideal.basis) ideal_span.add(flatten_current(z, degrees));
        int checked = 0;
        for (const auto& z : ideal.basis) {
            for (const auto& b : w.basis) {
                CurrentElem c = current_commutator(ex.sl2, z, b);
                if (c.is_zero() || c.support_radius() > 2) continue; // exits the window
                CHECK(ideal_span.contains(flatten_current(c, degrees)));
                ++checked;
            }
        }
        CHECK(checked > 0);

        // and every ideal element evaluates to zero on the whole fiber
        for (const auto& z : ideal.basis)
            for (const auto& b : ideal.fiber) {
                auto v = ev_point(z, b);
                CHECK(all_zero(v));
            }
    }
}

TEST_CASE("coefficient ideals: vanishing loci, Galois stability, monotonicity") {
    RankTwoExample ex;
    FormWindow w = ex.window(2);
    TorusPoint a = pt({CycNum(1), CycNum(1)});

    SUBCASE("coefficients of the fiber ideal vanish exactly on the fiber") {
        WindowIdeal ideal = psi_ideal_window(w, a);
        auto polys = j_map_window(ideal);
        CHECK_FALSE(polys.empty());
        for (const auto& p : polys) {
            CHECK(member_MS(ex.ext, p, a));
            for (const auto& b : ideal.fiber) CHECK(eval_poly(p, b).is_zero());
        }
        // away from the fiber some coefficient survives, and the witness
        // property is Galois-stable
        for (const TorusPoint& x :
             {pt({CycNum(2), CycNum(3)}), pt({CycNum::zeta(3), CycNum(1)})}) {
            for (const auto& g : galois_group(ex.ext)) {
                TorusPoint gx = galois_act_point(ex.ext, g, x);
                bool nonzero = false;
                for (const auto& p : polys)
                    if (!eval_poly(p, gx).is_zero()) nonzero = true;
                CHECK(nonzero);
            }
        }
    }

    SUBCASE("whole window collapses to polynomials with empty common locus") {
        WindowIdeal whole = points_kernel_window(w, {});
        CHECK(whole.basis.size() == w.basis.size());
        auto polys = j_map_window(whole);
        for (const TorusPoint& x : {a, pt({CycNum(2), CycNum(5)}),
                                    pt({CycNum::zeta(4), CycNum::zeta(3)})}) {
            bool nonzero = false;
            for (const auto& p : polys)
                if (!eval_poly(p, x).is_zero()) nonzero = true;
            CHECK(nonzero);
        }
    }

    SUBCASE("zero ideal gives no polynomials") {
        StructureAlgebra sl2 = make_sl(2);
        std::vector<AlgebraAuto> ids{AlgebraAuto{CycMatrix::identity(3), 1}};
        FormWindow tiny = multiloop_window(sl2, ids, trivial_ext(1), 0);
        WindowIdeal zero = points_kernel_window(tiny, {pt({CycNum(2)})});
        CHECK(zero.basis.empty());
        CHECK(j_map_window(zero).empty());
    }

    SUBCASE("larger point sets give smaller ideals, loci reverse-contain") {
        TorusPoint b = pt({CycNum::zeta(3), CycNum(1)});
        auto f1 = fiber(ex.ext, a);
        auto f2 = fiber(ex.ext, b);
        auto joint = f1;
        joint.insert(joint.end(), f2.begin(), f2.end());

        WindowIdeal i1 = psi_ideal_window(w, a);
        WindowIdeal i12 = points_kernel_window(w, joint);
        CHECK(i12.basis.size() < i1.basis.size());

        auto degrees = window_degrees(2, 2);
        RowSpan span1(static_cast<int>(degrees.size()) * 3);
        for (const auto& z : i1.basis) span1.add(flatten_current(z, degrees));
        for (const auto& z : i12.basis) CHECK(span1.contains(flatten_current(z, degrees)));

        // coefficients of the joint ideal vanish on both fibers; the smaller
        // ideal's coefficients do not all vanish on the second fiber
        for (const auto& p : j_map_window(i12)) {
            for (const auto& x : joint) CHECK(eval_poly(p, x).is_zero());
        }
        bool separated = false;
        for (const auto& p : j_map_window(i1))
            for (const auto& x : f2)
                if (!eval_poly(p, x).is_zero()) separated = true;
        CHECK(separated);
    }
}

TEST_CASE("quaternion-like window: relations, sizes, and its traceless core") {
    ExtensionSpec ext = kummer22();

    SUBCASE("defining relations hold inside the current algebra") {
        StructureAlgebra m2 = make_matrix_algebra(2);
        std::vector<CycNum> dvec{CycNum(1), CycNum(0), CycNum(0), CycNum(-1)};
        std::vector<CycNum> wvec{CycNum(0), CycNum(1), CycNum(1), CycNum(0)};
        std::vector<CycNum> ivec{CycNum(1), CycNum(0), CycNum(0), CycNum(1)};
        CurrentElem T1 = CurrentElem::term(2, {1, 0}, dvec);
        CurrentElem T2 = CurrentElem::term(2, {0, 1}, wvec);
        CHECK((current_product(m2, T2, T1) + current_product(m2, T1, T2)).is_zero());
        CHECK(current_product(m2, T1, T1) == CurrentElem::term(2, {2, 0}, ivec));
        CHECK(current_product(m2, T2, T2) == CurrentElem::term(2, {0, 2}, ivec));
    }

    SUBCASE("window sizes match the monomial enumeration") {
        // independent oracle: count generator monomials G * t^f (f in the
        // doubled lattice) whose degree stays inside the window
        auto oracle = [](int D) {
            const std::vector<std::vector<int>> base = {{0, 0}, {1, 0}, {0, 1}, {1, 1}};
            int count = 0;
            for (const auto& g : base)
                for (int f1 = -2 * D; f1 <= 2 * D; f1 += 2)
                    for (int f2 = -2 * D; f2 <= 2 * D; f2 += 2)
                        if (std::abs(g[0] + f1) <= D && std::abs(g[1] + f2) <= D) ++count;
            return count;
        };
        REQUIRE(oracle(1) == 9);
        FormWindow w1 = azumaya_window(ext, 1);
        CHECK(static_cast<int>(w1.basis.size()) == oracle(1));
        FormWindow w2 = azumaya_window(ext, 2);
        CHECK(static_cast<int>(w2.basis.size()) == oracle(2));
        CHECK(w2.basis.size() == 25);
        CHECK(window_defining_condition_ok(w1));
        CHECK(window_span(w2).rank() == 25);
        CHECK(verify_cocycle(ext, w1.spec.algebra, w1.spec.cocycle).ok);
    }

    SUBCASE("only the rank-two order-(2,2) extension is accepted") {
        CHECK_THROWS_AS(azumaya_window(ExtensionSpec(1, {2}, {CycNum(-1)}), 1),
                        InvalidArgumentError);
        CHECK_THROWS_AS(
            azumaya_window(ExtensionSpec(2, {2, 4}, {CycNum(-1), CycNum::zeta(4)}), 1),
            InvalidArgumentError);
    }
}

TEST_CASE("derived spans recover the eigenspace construction of the traceless part") {
    ExtensionSpec ext = kummer22();
    StructureAlgebra sl2 = make_sl(2);
    auto mats = sl_basis_matrices(2);
    AlgebraAuto conj_d = check_auto(sl2, conjugation_matrix(mats, diag_sign()));
    AlgebraAuto conj_w = check_auto(sl2, conjugation_matrix(mats, antidiag()));

    SUBCASE("commutators of the quaternion-like window, compared degreewise") {
        FormWindow az = azumaya_window(ext, 2);
        FormWindow der = derived_window(az);
        CHECK(der.basis.size() == 16);

        // every derived element is traceless
        for (const auto& z : der.basis)
            for (const auto& [deg, v] : z.terms()) CHECK(v[0] == -v[3]);

        auto degrees = window_degrees(2, 2);
        RowSpan derived_span(static_cast<int>(degrees.size()) * 4);
        for (const auto& z : der.basis) derived_span.add(flatten_current(z, degrees));

        // matching pairing: the first slot twists by the antidiagonal
        FormWindow ml = multiloop_window(sl2, {conj_w, conj_d}, ext, 2);
        REQUIRE(ml.basis.size() == 16);
        RowSpan embedded(static_cast<int>(degrees.size()) * 4);
        for (const auto& z : ml.basis)
            embedded.add(flatten_current(embed_sl2_in_m2(z), degrees));
        CHECK(derived_span == embedded);

        // swapping the pairing moves the graded lines to the wrong degrees
        FormWindow swapped = multiloop_window(sl2, {conj_d, conj_w}, ext, 2);
        RowSpan embedded_swapped(static_cast<int>(degrees.size()) * 4);
        for (const auto& z : swapped.basis)
            embedded_swapped.add(flatten_current(embed_sl2_in_m2(z), degrees));
        CHECK_FALSE(derived_span == embedded_swapped);
    }

    SUBCASE("abelian windows have zero derived span") {
        std::vector<CycNum> zeros(2 * 2 * 2, CycNum(0));
        StructureAlgebra abelian(2, {"A", "B"}, zeros, true);
        std::vector<AlgebraAuto> ids{AlgebraAuto{CycMatrix::identity(2), 1}};
        FormWindow w = multiloop_window(abelian, ids, trivial_ext(1), 1);
        CHECK(w.basis.size() == 6);
        CHECK(derived_window(w).basis.empty());
    }

    SUBCASE("derived of the twisted window regenerates the inner window") {
        std::vector<AlgebraAuto> autos{conj_d, conj_w};
        FormWindow w2 = multiloop_window(sl2, autos, ext, 2);
        FormWindow der = derived_window(w2);
        auto degrees = window_degrees(2, 2);

        RowSpan der_span(static_cast<int>(degrees.size()) * 3);
        for (const auto& z : der.basis) der_span.add(flatten_current(z, degrees));

        // contained in the window span ...
        RowSpan w_span = window_span(w2);
        for (const auto& z : der.basis) CHECK(w_span.contains(flatten_current(z, degrees)));
        // ... and regenerating everything one radius in
        FormWindow w1 = multiloop_window(sl2, autos, ext, 1);
        for (const auto& z : w1.basis) CHECK(der_span.contains(flatten_current(z, degrees)));
    }
}
