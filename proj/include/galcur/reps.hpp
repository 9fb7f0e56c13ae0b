#pragma once

// Representation layer: dominant weights and module labels, explicit
// irreducibles for the rank-one algebra, inner/outer decomposition of
// automorphisms, the Galois action on (weight, point) pairs, canonical
// invariants deciding isomorphism, and an independent intertwiner oracle.

#include <vector>

#include "galcur/forms.hpp"

namespace galcur {

/// Coefficients on the fundamental weights (length n-1 for rank n).
using Weight = std::vector<int>;

struct LabelEntry {
    Weight weight;
    TorusPoint point;
};

/// Tensor-product label: finitely many (weight, point) factors with nonzero
/// weights and pairwise distinct fiber keys.
struct ModuleLabel {
    std::vector<LabelEntry> entries;
};

/// Canonically ordered list of full Galois orbits of (weight, point) pairs;
/// two labels give isomorphic modules iff their invariants are equal.
struct InvariantChi {
    std::vector<std::vector<LabelEntry>> orbits;

    bool operator==(const InvariantChi& o) const;
    bool operator!=(const InvariantChi& o) const { return !(*this == o); }
};

/// (point coords under the scalar total order, then weight), lexicographic.
int compare_label_entries(const LabelEntry& a, const LabelEntry& b);

struct ExplicitRep {
    int dim = 0;
    std::vector<CycMatrix> images; // one per algebra basis element
};

/// Highest-weight irreducible of the rank-one algebra in the basis order
/// (e, f, h): dimension lam+1, h acting by lam-2j on the j-th basis vector.
ExplicitRep sl2_irrep(int lam);

enum class DiagramPart { Identity, Flip };

struct AutoDecomposition {
    bool is_inner = true;
    CycMatrix witness;                           // invertible n x n conjugator
    DiagramPart diagram = DiagramPart::Identity; // Flip = x -> -x^T component
};

/// Splits an automorphism of sl_n (given by its matrix on structure-algebra
/// coordinates; multiplicativity and invertibility are validated, finite
/// order is not required) into a conjugation and a diagram part, by solving
/// the exact intertwiner system in the natural representation — first for
/// the map itself, then for its composite with x -> -x^T.
AutoDecomposition decompose_auto(int n, const CycMatrix& alpha);

/// Identity fixes the weight; Flip reverses the fundamental coordinates.
Weight out_on_weight(DiagramPart d, const Weight& w);

/// The Galois action on pairs: the point moves by the group action; the
/// weight twists by the diagram part of the evaluated inverse cocycle matrix
/// at the moved point.
LabelEntry gamma_act_label(const FormSpec& form, const GaloisElement& gamma,
                           const LabelEntry& pair);

/// Expands every label entry to its full Galois orbit and orders everything
/// canonically.  Rejects malformed labels (zero weight, wrong lengths,
/// repeated fiber keys) with LabelShapeError.
InvariantChi chi_canonical(const FormSpec& form, const ModuleLabel& label);

/// The classification decision: equality of canonical invariants.
bool iso_decide(const FormSpec& form, const ModuleLabel& l1, const ModuleLabel& l2);

/// Evaluation module of a rank-one form window: for each window basis
/// element z, the matrix sum_i 1 x ... x rho_{lam_i}(ev_point(z, M_i)) x ... x 1
/// on the tensor product of the labelled irreducibles.
std::vector<CycMatrix> build_module_matrices(const FormWindow& w, const ModuleLabel& label);

/// Brute-force isomorphism decision: exact solve of the intertwiner system
/// over all window basis elements, then invertibility of the (at most
/// one-dimensional, by simplicity) solution space.
bool iso_oracle(const FormWindow& w, const ModuleLabel& l1, const ModuleLabel& l2);

/// All distinct invariants supported on the Galois saturation of the given
/// points, with weight entries bounded by max_weight; canonically ordered.
std::vector<InvariantChi> enumerate_classes(const FormSpec& form,
                                            const std::vector<TorusPoint>& points,
                                            int max_weight);

} // namespace galcur
