#pragma once

// Exact arithmetic in cyclotomic fields Q(zeta_n), together with dense exact
// linear algebra over them.  Numbers are stored as coefficient vectors on the
// power basis 1, zeta_n, ..., zeta_n^{phi(n)-1} with arbitrary-precision
// rational coefficients, reduced modulo the n-th cyclotomic polynomial.

#include <gmpxx.h>

#include <compare>
#include <string>
#include <vector>

#include "galcur/error.hpp"

namespace galcur {

using Rational = mpq_class;

/// Euler totient (by trial-division factorization; inputs are small).
int totient(int n);

/// All positive divisors of n, ascending.
std::vector<int> divisors(int n);

/// Coefficients (ascending degree) of the n-th cyclotomic polynomial; monic,
/// degree totient(n).  Memoized.
const std::vector<mpz_class>& cyclotomic_polynomial(int n);

/// Largest conductor the session tolerates.  Read once from the environment
/// variable GC_MAX_CONDUCTOR (default 3600); arithmetic whose result would
/// live in a larger field throws ConductorLimitError.
int conductor_cap();

class CycNum {
  public:
    CycNum() : conductor_(1), coeffs_{Rational(0)} {}
    CycNum(long v) : conductor_(1), coeffs_{Rational(v)} {}
    CycNum(const Rational& v) : conductor_(1), coeffs_{v} {}

    /// A primitive n-th root of unity.
    static CycNum zeta(int n);

    /// Element of Q(zeta_n) given by sum coeffs[i] * zeta_n^i.  The vector may
    /// have any length; it is reduced modulo the cyclotomic polynomial.
    static CycNum from_coeffs(int n, std::vector<Rational> coeffs);

    int conductor() const { return conductor_; }
    const std::vector<Rational>& coeffs() const { return coeffs_; }

    bool is_zero() const;
    bool is_rational() const { return conductor_ == 1; }
    /// Value as a rational; requires is_rational().
    const Rational& rational_value() const;

    CycNum operator-() const;
    CycNum& operator+=(const CycNum& o);
    CycNum& operator-=(const CycNum& o);
    CycNum& operator*=(const CycNum& o);

    friend CycNum operator+(CycNum a, const CycNum& b) { return a += b; }
    friend CycNum operator-(CycNum a, const CycNum& b) { return a -= b; }
    friend CycNum operator*(CycNum a, const CycNum& b) { return a *= b; }

    /// Multiplicative inverse; throws DivisionByZeroError on zero.
    CycNum inverse() const;
    /// Integer power (negative exponents via inverse).
    CycNum pow(long e) const;

    bool operator==(const CycNum& o) const;
    bool operator!=(const CycNum& o) const { return !(*this == o); }

    /// Same value re-expressed in the smallest cyclotomic field containing it.
    CycNum reduced() const;

    /// Total order: compare minimal conductors first, then the minimal-field
    /// coefficient vectors lexicographically (rational order).  Returns
    /// negative/zero/positive.
    static int compare(const CycNum& a, const CycNum& b);

    /// Canonical literal, e.g. "-1/2*z8^3 + z8" (minimal conductor, ascending
    /// powers, "z<n>" for zeta_n).
    std::string str() const;

    /// Parse the literal grammar accepted by str(); conductors may be mixed.
    /// Throws ParseError on malformed input.
    static CycNum parse(const std::string& text);

  private:
    int conductor_;
    std::vector<Rational> coeffs_; // length totient(conductor_)

    CycNum(int n, std::vector<Rational> reduced_coeffs);
    /// Coefficients of this value inside Q(zeta_m); m must be a multiple of
    /// the conductor.  Always totient(m) entries, no rational collapse.
    std::vector<Rational> embedded_coeffs(int m) const;
    friend int lcm_conductor(const CycNum& a, const CycNum& b);
};

inline CycNum operator*(const Rational& c, CycNum x) { return x *= CycNum(c); }

// ---------------------------------------------------------------------------
// dense matrices over the cyclotomic numbers

class CycMatrix {
  public:
    CycMatrix() : rows_(0), cols_(0) {}
    CycMatrix(int rows, int cols)
        : rows_(rows), cols_(cols), data_(static_cast<size_t>(rows) * cols) {}

    static CycMatrix identity(int n);

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    CycNum& at(int i, int j) { return data_[static_cast<size_t>(i) * cols_ + j]; }
    const CycNum& at(int i, int j) const { return data_[static_cast<size_t>(i) * cols_ + j]; }

    CycMatrix transpose() const;

    CycMatrix operator+(const CycMatrix& o) const;
    CycMatrix operator-(const CycMatrix& o) const;
    CycMatrix operator*(const CycMatrix& o) const;
    CycMatrix scaled(const CycNum& c) const;

    bool operator==(const CycMatrix& o) const;
    bool operator!=(const CycMatrix& o) const { return !(*this == o); }

    bool is_zero() const;

    std::vector<CycNum> row(int i) const;
    std::vector<CycNum> col(int j) const;

    /// Matrix * column vector.
    std::vector<CycNum> apply(const std::vector<CycNum>& v) const;

  private:
    int rows_, cols_;
    std::vector<CycNum> data_;
};

/// Kronecker (tensor) product.
CycMatrix kron(const CycMatrix& a, const CycMatrix& b);

/// Reduced row echelon form.  If pivot_cols is non-null it receives the pivot
/// column indices in order.  Zero rows are kept (shape is preserved).
CycMatrix rref(CycMatrix m, std::vector<int>* pivot_cols = nullptr);

/// RREF with zero rows dropped: the canonical basis of the row space.  Two
/// collections of rows span the same subspace iff these agree.
CycMatrix row_space_basis(const CycMatrix& m);

int rank_of(const CycMatrix& m);

CycNum determinant(CycMatrix m);

/// Inverse of a square matrix; throws NotInvertibleError.
CycMatrix matrix_inverse(const CycMatrix& m);

struct LinearSolution {
    bool consistent = false;
    int rank = 0;
    /// One solution per right-hand-side column (free variables set to zero);
    /// shape cols(A) x cols(b).  Valid only when consistent.
    CycMatrix particular;
    /// Columns form the canonical nullspace basis of A (each column has a 1 in
    /// a distinct free-variable slot); shape cols(A) x nullity.
    CycMatrix nullspace;
};

/// Exact solution of A x = b (b may have several columns).
LinearSolution solve_linear(const CycMatrix& A, const CycMatrix& b);

/// Incremental row-space accumulator kept in reduced echelon form.  add()
/// reports whether the rank grew; contains() tests membership in the span.
class RowSpan {
  public:
    explicit RowSpan(int cols) : cols_(cols) {}

    bool add(std::vector<CycNum> row);
    bool contains(std::vector<CycNum> row) const;

    int cols() const { return cols_; }
    int rank() const { return static_cast<int>(rows_.size()); }

    /// Basis rows (reduced echelon, canonical).
    CycMatrix basis() const;

    bool operator==(const RowSpan& o) const;

  private:
    int cols_;
    std::vector<std::vector<CycNum>> rows_; // sorted by pivot column
    std::vector<int> pivots_;

    void reduce(std::vector<CycNum>& row) const;
};

} // namespace galcur
