#pragma once

// Finite-dimensional algebras over cyclotomic scalars, presented by structure
// constants: ideal closures, the central-simplicity test, validated
// finite-order automorphisms, and simultaneous-eigenspace gradings.

#include <map>
#include <string>
#include <vector>

#include "galcur/cyclo.hpp"

namespace galcur {

class StructureAlgebra {
  public:
    StructureAlgebra() : dim_(0), is_lie_(false) {}

    /// constants[(i*dim + j)*dim + k] is the coefficient of basis element k in
    /// the product of basis elements i and j.  When lie is set, antisymmetry
    /// and the Jacobi identity are verified exactly.
    StructureAlgebra(int dim, std::vector<std::string> basis_names,
                     std::vector<CycNum> constants, bool lie);

    int dim() const { return dim_; }
    bool is_lie() const { return is_lie_; }
    const std::vector<std::string>& basis_names() const { return names_; }

    const CycNum& constant(int i, int j, int k) const {
        return constants_[(static_cast<size_t>(i) * dim_ + j) * dim_ + k];
    }
    const std::vector<CycNum>& constants() const { return constants_; }

    /// Product of two coordinate vectors.
    std::vector<CycNum> product(const std::vector<CycNum>& x,
                                const std::vector<CycNum>& y) const;

    /// Product of basis elements i and j as a coordinate vector.
    std::vector<CycNum> basis_product(int i, int j) const;

  private:
    int dim_;
    bool is_lie_;
    std::vector<std::string> names_;
    std::vector<CycNum> constants_;

    void validate() const;
};

/// sl_n in the fixed Chevalley pinning: basis E_ij (i != j, lexicographic),
/// then H_i = E_ii - E_{i+1,i+1}.  For n = 2 this is the classic (e, f, h).
StructureAlgebra make_sl(int n);

/// Full matrix algebra M_n(k) on the matrix units E_ij (lexicographic),
/// associative product.
StructureAlgebra make_matrix_algebra(int n);

/// Block-diagonal direct sum (each summand becomes an ideal).
StructureAlgebra direct_sum(const StructureAlgebra& a, const StructureAlgebra& b);

/// Natural-representation matrices of the make_sl(n) basis, in basis order.
std::vector<CycMatrix> sl_basis_matrices(int n);

/// Matrix units of make_matrix_algebra(n), in basis order.
std::vector<CycMatrix> matrix_unit_matrices(int n);

/// Coordinates of X in the span of basis_mats (requires membership and
/// independence; throws InvalidArgumentError otherwise).
std::vector<CycNum> matrix_coordinates(const std::vector<CycMatrix>& basis_mats,
                                       const CycMatrix& X);

/// Matrix (in the realization given by basis_mats) of x -> P x P^{-1}.
CycMatrix conjugation_matrix(const std::vector<CycMatrix>& basis_mats, const CycMatrix& P);

/// Matrix (in the realization given by basis_mats) of x -> -x^T.
CycMatrix negative_transpose_matrix(const std::vector<CycMatrix>& basis_mats);

struct AlgebraAuto {
    CycMatrix matrix; // action on coordinates
    int order = 1;
};

/// Validates that m defines an algebra automorphism of A and computes its
/// exact order.  Throws NotMultiplicativeError, NotInvertibleError, or
/// OrderCapError (order exceeds order_cap).
AlgebraAuto check_auto(const StructureAlgebra& A, const CycMatrix& m, int order_cap = 360);

struct GradedDecomposition {
    std::vector<int> orders;
    std::vector<CycNum> roots;
    /// class index (one residue per automorphism) -> basis of the piece,
    /// rows are coordinate vectors in reduced echelon form; every class of
    /// the product group appears, possibly with an empty basis.
    std::map<std::vector<int>, CycMatrix> pieces;
};

/// Simultaneous eigenspace decomposition for commuting finite-order
/// automorphisms: v lands in pieces[j] iff autos[i](v) = roots[i]^{j_i} v.
GradedDecomposition graded_pieces(const StructureAlgebra& A,
                                  const std::vector<AlgebraAuto>& autos,
                                  const std::vector<CycNum>& roots);

/// Basis (echelon rows) of the smallest two-sided ideal containing the seed.
CycMatrix ideal_closure(const StructureAlgebra& A, const std::vector<std::vector<CycNum>>& seed);

/// Every nonzero basis vector generates A as an ideal, and the centroid is
/// one-dimensional.
bool verify_central_simple(const StructureAlgebra& A);

} // namespace galcur
