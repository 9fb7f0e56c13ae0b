#pragma once

// The Laurent-polynomial Galois extension S/R: exact Laurent polynomials with
// cyclotomic coefficients, the Galois group action, torus points as maximal
// ideals, fibers over the base ring, and ideal membership by evaluation.

#include <map>
#include <vector>

#include "galcur/cyclo.hpp"

namespace galcur {

class LaurentPoly {
  public:
    explicit LaurentPoly(int num_vars = 0) : nvars_(num_vars) {}

    static LaurentPoly constant(int num_vars, const CycNum& c);
    static LaurentPoly monomial(int num_vars, const std::vector<int>& exp, const CycNum& c);
    /// The variable t_i (0-based).
    static LaurentPoly variable(int num_vars, int i);

    int num_vars() const { return nvars_; }
    const std::map<std::vector<int>, CycNum>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    /// Coefficient of t^exp (zero when absent).
    CycNum coeff(const std::vector<int>& exp) const;
    void set_coeff(const std::vector<int>& exp, const CycNum& c);

    LaurentPoly operator-() const;
    LaurentPoly& operator+=(const LaurentPoly& o);
    LaurentPoly& operator-=(const LaurentPoly& o);
    friend LaurentPoly operator+(LaurentPoly a, const LaurentPoly& b) { return a += b; }
    friend LaurentPoly operator-(LaurentPoly a, const LaurentPoly& b) { return a -= b; }
    LaurentPoly operator*(const LaurentPoly& o) const;
    LaurentPoly scaled(const CycNum& c) const;
    /// Multiply by the monomial t^exp.
    LaurentPoly shifted(const std::vector<int>& exp) const;

    bool operator==(const LaurentPoly& o) const {
        return nvars_ == o.nvars_ && terms_ == o.terms_;
    }
    bool operator!=(const LaurentPoly& o) const { return !(*this == o); }

  private:
    int nvars_;
    std::map<std::vector<int>, CycNum> terms_; // no zero coefficients stored
};

/// The degree-m Kummer extension data: S = k[t_i^{+-1}] over
/// R = k[t_i^{+-m_i}], Galois group the product of the Z_{m_i}, with xi_i a
/// primitive m_i-th root of unity (verified exactly).
struct ExtensionSpec {
    int num_vars = 0;
    std::vector<int> orders;
    std::vector<CycNum> roots;

    ExtensionSpec() = default;
    ExtensionSpec(int nvars, std::vector<int> orders_in, std::vector<CycNum> roots_in);

    /// |Gamma| = product of the orders.
    long group_size() const;
};

struct GaloisElement {
    std::vector<int> exponents; // 0 <= r_i < m_i

    bool operator==(const GaloisElement& o) const { return exponents == o.exponents; }
};

GaloisElement galois_identity(const ExtensionSpec& spec);
GaloisElement galois_compose(const ExtensionSpec& spec, const GaloisElement& a,
                             const GaloisElement& b);
GaloisElement galois_inverse(const ExtensionSpec& spec, const GaloisElement& a);
/// All group elements, exponent tuples in lexicographic order.
std::vector<GaloisElement> galois_group(const ExtensionSpec& spec);

struct TorusPoint {
    std::vector<CycNum> coords;

    TorusPoint() = default;
    explicit TorusPoint(std::vector<CycNum> coords_in);

    bool operator==(const TorusPoint& o) const { return coords == o.coords; }
    bool operator!=(const TorusPoint& o) const { return !(*this == o); }
};

/// Lexicographic comparison in the cyclotomic total order (for canonical
/// point sets); negative/zero/positive.
int compare_points(const TorusPoint& a, const TorusPoint& b);

/// gamma acts on t^e by the factor prod_i xi_i^{r_i e_i}.
LaurentPoly galois_act_poly(const ExtensionSpec& spec, const GaloisElement& gamma,
                            const LaurentPoly& s);

/// gamma sends the point a to (xi_i^{-r_i} a_i): with this convention the
/// maximal-ideal identity (gamma applied to the ideal of a) = (ideal of
/// gamma applied to a) holds on the nose, i.e. (^gamma s)(gamma.a) = s(a).
TorusPoint galois_act_point(const ExtensionSpec& spec, const GaloisElement& gamma,
                            const TorusPoint& a);

/// Exact substitution t_i <- a_i.
CycNum eval_poly(const LaurentPoly& s, const TorusPoint& a);

/// The Gamma-orbit of a, deduplicated and sorted canonically.
std::vector<TorusPoint> fiber(const ExtensionSpec& spec, const TorusPoint& a);

/// (a_1^{m_1}, ..., a_N^{m_N}); equal keys characterize equal fibers.
std::vector<CycNum> fiber_key(const ExtensionSpec& spec, const TorusPoint& a);

/// Does s lie in the base ring R (every exponent divisible by the orders)?
bool in_R(const ExtensionSpec& spec, const LaurentPoly& s);

/// Does s lie in M.S for M the maximal base-ring ideal under a — i.e. does s
/// vanish on the whole fiber of a?
bool member_MS(const ExtensionSpec& spec, const LaurentPoly& s, const TorusPoint& a);

} // namespace galcur
