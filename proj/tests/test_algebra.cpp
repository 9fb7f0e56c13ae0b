#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numeric>
#include <random>

#include "galcur/algebra.hpp"

using namespace galcur;

namespace {

std::vector<CycNum> unit_vec(int d, int i) {
    std::vector<CycNum> v(d);
    v[i] = CycNum(1);
    return v;
}

std::vector<CycNum> scaled_vec(const std::vector<CycNum>& v, const CycNum& c) {
    std::vector<CycNum> out = v;
    for (auto& x : out) x = x * c;
    return out;
}

CycMatrix diag2(long a, long b) {
    CycMatrix m(2, 2);
    m.at(0, 0) = CycNum(a);
    m.at(1, 1) = CycNum(b);
    return m;
}

CycMatrix swap2() {
    CycMatrix m(2, 2);
    m.at(0, 1) = CycNum(1);
    m.at(1, 0) = CycNum(1);
    return m;
}

// the same algebra on a permuted basis: f_i = e_{p(i)}
StructureAlgebra permuted(const StructureAlgebra& A, const std::vector<int>& p) {
    const int d = A.dim();
    std::vector<CycNum> constants(static_cast<size_t>(d) * d * d);
    std::vector<std::string> names(d);
    for (int i = 0; i < d; ++i) {
        names[i] = A.basis_names()[p[i]];
        for (int j = 0; j < d; ++j)
            for (int k = 0; k < d; ++k)
                constants[(static_cast<size_t>(i) * d + j) * d + k] =
                    A.constant(p[i], p[j], p[k]);
    }
    return StructureAlgebra(d, names, constants, A.is_lie());
}

} // namespace

TEST_CASE("chevalley sl2 relations in the pinned basis order") {
    StructureAlgebra sl2 = make_sl(2); // basis e = E1_2, f = E2_1, h = H1
    CHECK(sl2.dim() == 3);
    CHECK(sl2.is_lie());
    CHECK(sl2.basis_names() == std::vector<std::string>{"E1_2", "E2_1", "H1"});

    auto e = unit_vec(3, 0), f = unit_vec(3, 1), h = unit_vec(3, 2);
    CHECK(sl2.product(e, f) == h);
    CHECK(sl2.product(h, e) == scaled_vec(e, CycNum(2)));
    CHECK(sl2.product(h, f) == scaled_vec(f, CycNum(-2)));
    CHECK(sl2.product(e, e) == std::vector<CycNum>(3));
}

TEST_CASE("sl_n dimensions and construction-time identities") {
    CHECK(make_sl(3).dim() == 8);
    CHECK(make_sl(4).dim() == 15);
    CHECK_THROWS_AS(make_sl(1), InvalidArgumentError);
    // antisymmetry / Jacobi are enforced by the constructor: corrupting a
    // structure constant must be rejected
    StructureAlgebra sl2 = make_sl(2);
    std::vector<CycNum> bad = sl2.constants();
    bad[(0 * 3 + 1) * 3 + 2] = CycNum(2); // [e,f] = 2h breaks antisymmetry vs [f,e] = -h
    CHECK_THROWS_AS(StructureAlgebra(3, sl2.basis_names(), bad, true), InvalidArgumentError);
}

TEST_CASE("ideal closure walks the bracket chain") {
    StructureAlgebra sl2 = make_sl(2);
    auto e = unit_vec(3, 0), f = unit_vec(3, 1), h = unit_vec(3, 2);

    // hand chain: [f,e] = -h, then [f,-h] = -2f, and [e,-h] = 2e
    std::vector<CycNum> minus_h = sl2.product(f, e);
    CHECK(minus_h == scaled_vec(h, CycNum(-1)));
    CHECK(sl2.product(f, minus_h) == scaled_vec(f, CycNum(-2)));

    CycMatrix closure = ideal_closure(sl2, {e});
    CHECK(closure.rows() == 3);

    CHECK(ideal_closure(sl2, {}).rows() == 0);

    StructureAlgebra twice = direct_sum(sl2, sl2);
    std::vector<CycNum> left_e(6);
    left_e[0] = CycNum(1);
    CycMatrix summand = ideal_closure(twice, {left_e});
    CHECK(summand.rows() == 3);
    for (int i = 0; i < summand.rows(); ++i)
        for (int j = 3; j < 6; ++j) CHECK(summand.at(i, j).is_zero());
}

TEST_CASE("central simplicity verdicts") {
    CHECK(verify_central_simple(make_sl(2)));
    CHECK(verify_central_simple(make_sl(3)));
    CHECK(verify_central_simple(make_sl(4)));
    CHECK(verify_central_simple(make_matrix_algebra(2)));
    CHECK_FALSE(verify_central_simple(direct_sum(make_sl(2), make_sl(2))));
}

TEST_CASE("automorphism validation and exact orders") {
    StructureAlgebra sl2 = make_sl(2);
    auto sl2_mats = sl_basis_matrices(2);

    AlgebraAuto sigma = check_auto(sl2, conjugation_matrix(sl2_mats, diag2(1, -1)));
    CHECK(sigma.order == 2);

    StructureAlgebra sl3 = make_sl(3);
    AlgebraAuto ident = check_auto(sl3, CycMatrix::identity(8));
    CHECK(ident.order == 1);

    // e -> e, f -> f, h -> 2h destroys [e,f] = h
    CycMatrix stretch = CycMatrix::identity(3);
    stretch.at(2, 2) = CycNum(2);
    CHECK_THROWS_AS(check_auto(sl2, stretch), NotMultiplicativeError);

    // the zero map preserves products trivially but is singular
    CHECK_THROWS_AS(check_auto(sl2, CycMatrix(3, 3)), NotInvertibleError);

    // conjugation by diag(1,2) has infinite order
    CHECK_THROWS_AS(check_auto(sl2, conjugation_matrix(sl2_mats, diag2(1, 2))), OrderCapError);

    // scaling the conjugating matrix does not change the automorphism
    CycMatrix P(2, 2);
    P.at(0, 0) = CycNum(1);
    P.at(0, 1) = CycNum(1);
    P.at(1, 1) = CycNum(1);
    CHECK(conjugation_matrix(sl2_mats, P) ==
          conjugation_matrix(sl2_mats, P.scaled(CycNum::zeta(8))));

    // conjugations define automorphisms of the associative matrix algebra too
    StructureAlgebra m2 = make_matrix_algebra(2);
    AlgebraAuto tau = check_auto(m2, conjugation_matrix(matrix_unit_matrices(2), swap2()));
    CHECK(tau.order == 2);

    // negative transpose is an order-2 automorphism of sl_n
    AlgebraAuto nt2 = check_auto(sl2, negative_transpose_matrix(sl2_mats));
    CHECK(nt2.order == 2);
    AlgebraAuto nt3 = check_auto(sl3, negative_transpose_matrix(sl_basis_matrices(3)));
    CHECK(nt3.order == 2);
}

TEST_CASE("matrix coordinates recover expansions exactly") {
    auto mats = sl_basis_matrices(3);
    // X = E1_2 + 2 H2 expands with the right coefficients
    CycMatrix X = mats[0] + mats[7].scaled(CycNum(2));
    auto coords = matrix_coordinates(mats, X);
    CHECK(coords[0] == CycNum(1));
    CHECK(coords[7] == CycNum(2));
    // the identity matrix is not traceless, so it cannot be expanded
    CHECK_THROWS_AS(matrix_coordinates(mats, CycMatrix::identity(3)), InvalidArgumentError);
    CHECK(conjugation_matrix(mats, CycMatrix::identity(3)) == CycMatrix::identity(8));
}

TEST_CASE("simultaneous eigenspaces of the two reflections of sl2") {
    StructureAlgebra sl2 = make_sl(2);
    auto mats = sl_basis_matrices(2);
    AlgebraAuto s1 = check_auto(sl2, conjugation_matrix(mats, diag2(1, -1)));
    AlgebraAuto s2 = check_auto(sl2, conjugation_matrix(mats, swap2()));
    GradedDecomposition dec = graded_pieces(sl2, {s1, s2}, {CycNum(-1), CycNum(-1)});

    REQUIRE(dec.pieces.size() == 4);
    CHECK(dec.pieces.at({0, 0}).rows() == 0);
    CHECK(dec.pieces.at({0, 1}).rows() == 1);
    CHECK(dec.pieces.at({1, 0}).rows() == 1);
    CHECK(dec.pieces.at({1, 1}).rows() == 1);

    // spans: h, e + f, e - f
    CHECK(dec.pieces.at({0, 1}).row(0) == unit_vec(3, 2));
    std::vector<CycNum> epf = {CycNum(1), CycNum(1), CycNum(0)};
    std::vector<CycNum> emf = {CycNum(1), CycNum(-1), CycNum(0)};
    CHECK(dec.pieces.at({1, 0}).row(0) == epf);
    RowSpan signed_piece(3);
    signed_piece.add(dec.pieces.at({1, 1}).row(0));
    CHECK(signed_piece.contains(emf));
}

TEST_CASE("graded decomposition invariants") {
    StructureAlgebra sl3 = make_sl(3);
    auto mats = sl_basis_matrices(3);
    CycMatrix D(3, 3);
    D.at(0, 0) = CycNum(1);
    D.at(1, 1) = CycNum(-1);
    D.at(2, 2) = CycNum(1);
    AlgebraAuto s1 = check_auto(sl3, conjugation_matrix(mats, D));
    CycMatrix Z(3, 3); // diag(1, z4, -1): conjugation has order 4
    Z.at(0, 0) = CycNum(1);
    Z.at(1, 1) = CycNum::zeta(4);
    Z.at(2, 2) = CycNum(-1);
    AlgebraAuto s2 = check_auto(sl3, conjugation_matrix(mats, Z));
    CHECK(s2.order == 4);

    GradedDecomposition dec = graded_pieces(sl3, {s1, s2}, {CycNum(-1), CycNum::zeta(4)});

    int total = 0;
    RowSpan whole(8);
    for (const auto& [idx, basis] : dec.pieces) {
        total += basis.rows();
        for (int r = 0; r < basis.rows(); ++r) {
            auto v = basis.row(r);
            CHECK(whole.add(v)); // pieces are independent
            // exact eigenvector conditions
            CHECK(s1.matrix.apply(v) == scaled_vec(v, CycNum(-1).pow(idx[0])));
            CHECK(s2.matrix.apply(v) == scaled_vec(v, CycNum::zeta(4).pow(idx[1])));
        }
    }
    CHECK(total == 8);
    CHECK(whole.rank() == 8);

    // compatibility: [g_j, g_l] lands in the piece at j + l (mod orders)
    for (const auto& [j, bj] : dec.pieces) {
        for (const auto& [l, bl] : dec.pieces) {
            std::vector<int> sum = {(j[0] + l[0]) % 2, (j[1] + l[1]) % 4};
            RowSpan target(8);
            const CycMatrix& bt = dec.pieces.at(sum);
            for (int r = 0; r < bt.rows(); ++r) target.add(bt.row(r));
            for (int r = 0; r < bj.rows(); ++r)
                for (int s = 0; s < bl.rows(); ++s)
                    CHECK(target.contains(sl3.product(bj.row(r), bl.row(s))));
        }
    }
}

TEST_CASE("graded decomposition rejects bad inputs") {
    StructureAlgebra sl2 = make_sl(2);
    auto mats = sl_basis_matrices(2);
    AlgebraAuto s1 = check_auto(sl2, conjugation_matrix(mats, diag2(1, -1)));

    // wrong root order and non-primitive root
    CHECK_THROWS_AS(graded_pieces(sl2, {s1}, {CycNum::zeta(4)}), InvalidArgumentError);
    CHECK_THROWS_AS(graded_pieces(sl2, {s1}, {CycNum(1)}), InvalidArgumentError);

    // non-commuting pair: conjugation by a unipotent vs the diagonal reflection
    CycMatrix P(2, 2);
    P.at(0, 0) = CycNum(1);
    P.at(0, 1) = CycNum(1);
    P.at(1, 1) = CycNum(1);
    CycMatrix u = conjugation_matrix(mats, P);
    REQUIRE(u * s1.matrix != s1.matrix * u);
    AlgebraAuto s3{u, 0}; // order unused before the commutation check
    s3 = AlgebraAuto{u, 360};
    CHECK_THROWS_AS(graded_pieces(sl2, {s1, s3}, {CycNum(-1), CycNum(-1)}),
                    InvalidArgumentError);
}

TEST_CASE("no automorphisms means the trivial grading") {
    StructureAlgebra sl2 = make_sl(2);
    GradedDecomposition dec = graded_pieces(sl2, {}, {});
    REQUIRE(dec.pieces.size() == 1);
    CHECK(dec.pieces.begin()->first.empty());
    CHECK(dec.pieces.begin()->second == CycMatrix::identity(3));
}

TEST_CASE("graded dimensions are basis-order independent") {
    StructureAlgebra sl2 = make_sl(2);
    auto mats = sl_basis_matrices(2);
    CycMatrix m1 = conjugation_matrix(mats, diag2(1, -1));
    CycMatrix m2 = conjugation_matrix(mats, swap2());

    std::vector<int> p = {2, 0, 1}; // h, e, f
    StructureAlgebra shuffled = permuted(sl2, p);
    CycMatrix Q(3, 3); // new coords -> old coords
    for (int i = 0; i < 3; ++i) Q.at(p[i], i) = CycNum(1);
    CycMatrix Qinv = matrix_inverse(Q);

    AlgebraAuto t1 = check_auto(shuffled, Qinv * m1 * Q);
    AlgebraAuto t2 = check_auto(shuffled, Qinv * m2 * Q);
    GradedDecomposition dec =
        graded_pieces(shuffled, {t1, t2}, {CycNum(-1), CycNum(-1)});

    AlgebraAuto s1 = check_auto(sl2, m1);
    AlgebraAuto s2 = check_auto(sl2, m2);
    GradedDecomposition ref = graded_pieces(sl2, {s1, s2}, {CycNum(-1), CycNum(-1)});
    for (const auto& [idx, basis] : ref.pieces) {
        CHECK(dec.pieces.at(idx).rows() == basis.rows());
    }
}
