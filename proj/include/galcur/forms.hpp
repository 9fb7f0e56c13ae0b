#pragma once

// Twisted forms of g(R) inside g(S): multiloop windows, Galois cocycles and
// the fixed-point solver, the multiplication map, evaluation maps, ideal
// windows and their coefficient ideals, and the rank-one Azumaya algebra on
// two variables.  All computations are exact on a sup-norm degree window.

#include <map>
#include <string>
#include <vector>

#include "galcur/algebra.hpp"
#include "galcur/torus.hpp"

namespace galcur {

/// An element sum_e x_e (x) t^e of g(S): finitely many degrees, each carrying
/// a coordinate vector in the algebra.
class CurrentElem {
  public:
    CurrentElem() : dim_(0), nvars_(0) {}
    CurrentElem(int algebra_dim, int num_vars) : dim_(algebra_dim), nvars_(num_vars) {}

    static CurrentElem term(int num_vars, const std::vector<int>& exp,
                            const std::vector<CycNum>& vec);

    int algebra_dim() const { return dim_; }
    int num_vars() const { return nvars_; }
    const std::map<std::vector<int>, std::vector<CycNum>>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    /// Coefficient vector at t^exp (zero vector when absent).
    std::vector<CycNum> coeff(const std::vector<int>& exp) const;
    void set_coeff(const std::vector<int>& exp, std::vector<CycNum> vec);
    void add_to_coeff(const std::vector<int>& exp, int coord, const CycNum& c);

    CurrentElem operator-() const;
    CurrentElem& operator+=(const CurrentElem& o);
    CurrentElem& operator-=(const CurrentElem& o);
    friend CurrentElem operator+(CurrentElem a, const CurrentElem& b) { return a += b; }
    friend CurrentElem operator-(CurrentElem a, const CurrentElem& b) { return a -= b; }
    CurrentElem scaled(const CycNum& c) const;
    /// Multiplication by a Laurent polynomial (S-module structure).
    CurrentElem scaled_poly(const LaurentPoly& s) const;

    bool operator==(const CurrentElem& o) const;
    bool operator!=(const CurrentElem& o) const { return !(*this == o); }

    /// Largest sup-norm of a support degree (0 for the zero element).
    int support_radius() const;

  private:
    int dim_, nvars_;
    std::map<std::vector<int>, std::vector<CycNum>> terms_; // no zero vectors

    void prune(const std::vector<int>& exp);
};

/// Termwise product (x (x) t^a)(y (x) t^b) = xy (x) t^{a+b}.
CurrentElem current_product(const StructureAlgebra& A, const CurrentElem& x,
                            const CurrentElem& y);
/// Commutator xy - yx (equals current_product for Lie algebras).
CurrentElem current_commutator(const StructureAlgebra& A, const CurrentElem& x,
                               const CurrentElem& y);

/// Galois action through the Laurent part.
CurrentElem galois_act_current(const ExtensionSpec& spec, const GaloisElement& gamma,
                               const CurrentElem& z);

/// Evaluation at a torus point: sum_e t^e(a) x_e.
std::vector<CycNum> ev_point(const CurrentElem& z, const TorusPoint& a);

// ---------------------------------------------------------------------------

/// A d x d matrix with Laurent-polynomial entries: an S-linear endomorphism
/// of g(S) in coordinates.
struct LaurentMatrix {
    int rows = 0, cols = 0;
    std::vector<LaurentPoly> entries; // row-major

    LaurentMatrix() = default;
    LaurentMatrix(int r, int c, int num_vars);

    static LaurentMatrix from_constant(const CycMatrix& m, int num_vars);
    static LaurentMatrix identity(int n, int num_vars);

    LaurentPoly& at(int i, int j) { return entries[static_cast<size_t>(i) * cols + j]; }
    const LaurentPoly& at(int i, int j) const {
        return entries[static_cast<size_t>(i) * cols + j];
    }

    LaurentMatrix operator*(const LaurentMatrix& o) const;
    bool operator==(const LaurentMatrix& o) const;
    bool operator!=(const LaurentMatrix& o) const { return !(*this == o); }

    CycMatrix eval(const TorusPoint& a) const;
    CurrentElem apply(const CurrentElem& z) const;
    LaurentMatrix galois_applied(const ExtensionSpec& spec, const GaloisElement& gamma) const;
};

/// A Galois 1-cocycle with values in the S-linear automorphisms of g(S),
/// stored as one matrix per group element (keyed by exponent tuple).
struct Cocycle {
    std::map<std::vector<int>, LaurentMatrix> images;

    const LaurentMatrix& image(const GaloisElement& gamma) const;
};

struct CocycleReport {
    bool ok = true;
    std::string violation; // empty when ok
};

/// Checks identity image, automorphism property of every image, and the
/// twisted cocycle law u_{gd} = u_g o (^g u_d); reports the first violation.
CocycleReport verify_cocycle(const ExtensionSpec& spec, const StructureAlgebra& A,
                             const Cocycle& u);

// ---------------------------------------------------------------------------

struct FormSpec {
    enum class Kind { Multiloop, Twisted, Azumaya12 };

    Kind kind = Kind::Multiloop;
    StructureAlgebra algebra;
    ExtensionSpec extension;
    std::vector<AlgebraAuto> autos; // multiloop data (empty otherwise)
    Cocycle cocycle;                // always populated: the defining condition
};

/// Multiloop data: commuting finite-order automorphisms matching the
/// extension orders; the associated constant cocycle is attached.
FormSpec multiloop_form(StructureAlgebra g, ExtensionSpec ext, std::vector<AlgebraAuto> autos);

/// General cocycle-defined form; the cocycle is verified.
FormSpec twisted_form(StructureAlgebra g, ExtensionSpec ext, Cocycle u);

/// The quaternion-like Azumaya algebra on two variables, inside M_2(k)(S):
/// T1 = diag(1,-1) (x) t1, T2 = antidiag(1,1) (x) t2.  Requires the (2,2)
/// extension.
FormSpec azumaya12_form(ExtensionSpec ext);

struct FormWindow {
    FormSpec spec;
    int radius = 0;
    std::vector<CurrentElem> basis;
};

/// All degrees in [-D, D]^N, lexicographically sorted.
std::vector<std::vector<int>> window_degrees(int num_vars, int radius);

/// Flatten a window element to coordinates (degree-major, then algebra
/// coordinate); degrees outside the list must not occur.
std::vector<CycNum> flatten_current(const CurrentElem& z,
                                    const std::vector<std::vector<int>>& degrees);
CurrentElem unflatten_current(int algebra_dim, int num_vars,
                              const std::vector<std::vector<int>>& degrees,
                              const std::vector<CycNum>& row);

/// Echelon row span of the window basis in flattened coordinates.
RowSpan window_span(const FormWindow& w);

/// Does every basis element satisfy u_gamma(^gamma z) = z for all gamma?
bool window_defining_condition_ok(const FormWindow& w);

/// Eigenspace construction: basis { x (x) t^e : x in g_{e mod m}, |e| <= D }.
FormWindow multiloop_window(const StructureAlgebra& g, const std::vector<AlgebraAuto>& autos,
                            const ExtensionSpec& ext, int radius);

/// Fixed-point solver for the defining condition of an arbitrary (possibly
/// degree-shifting) cocycle; constraints created outside the window are kept
/// as equations.  For constant cocycles this agrees with multiloop_window.
FormWindow twisted_form_window(const FormSpec& spec, int radius);

/// Monomial window of the Azumaya algebra, with the defining relations
/// T2 T1 = -T1 T2 and T_i^2 = t_i^2 verified exactly.
FormWindow azumaya_window(const ExtensionSpec& ext, int radius);

/// Span of all basis commutators whose support stays inside the window.
FormWindow derived_window(const FormWindow& w);

struct MuExpression {
    bool success = false;
    /// pairs (basis index, Laurent coefficient); sum s_i b_i = target on
    /// success.  Failure means the window (or expansion radius) was too
    /// small, never that the target is outside the form.
    std::vector<std::pair<int, LaurentPoly>> combination;
};

/// Express target as an S-linear combination of window basis elements, with
/// coefficient support restricted to shifts between target and basis degrees
/// of sup-norm at most expansion_radius.
MuExpression mu_express(const FormWindow& w, const CurrentElem& target, int expansion_radius);

// ---------------------------------------------------------------------------

struct WindowIdeal {
    std::vector<CycNum> key;       // fiber key of the defining point
    std::vector<TorusPoint> fiber; // canonical order
    std::vector<CurrentElem> basis;
    /// rows = coordinates of basis elements w.r.t. the window basis
    CycMatrix window_coords;
};

/// Kernel of the stacked evaluation map at the given points, as combinations
/// of the window basis.
WindowIdeal points_kernel_window(const FormWindow& w, const std::vector<TorusPoint>& points,
                                 std::vector<CycNum> key = {});

/// The window slice of psi(I) = I L for I the maximal base-ring ideal at the
/// fiber of a: elements of the window span vanishing on the whole fiber.
WindowIdeal psi_ideal_window(const FormWindow& w, const TorusPoint& a);

/// Coefficient polynomials of the ideal basis over the fixed algebra basis,
/// deduplicated: a windowed generating set of the associated ideal of S.
std::vector<LaurentPoly> j_map_window(const WindowIdeal& ideal);

} // namespace galcur
