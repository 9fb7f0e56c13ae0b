#include "galcur/reps.hpp"

#include <algorithm>
#include <optional>
#include <utility>

#include "galcur/error.hpp"

namespace galcur {

namespace {

int rank_from_dim(int d) {
    for (int n = 2; n * n - 1 <= d; ++n)
        if (n * n - 1 == d) return n;
    throw InvalidArgumentError("reps: algebra dimension does not match any sl_n");
}

bool weight_nonzero(const Weight& w) {
    for (int c : w)
        if (c != 0) return true;
    return false;
}

int compare_weights(const Weight& a, const Weight& b) {
    if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
    for (size_t i = 0; i < a.size(); ++i)
        if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
    return 0;
}

int compare_orbits(const std::vector<LabelEntry>& a, const std::vector<LabelEntry>& b) {
    size_t common = std::min(a.size(), b.size());
    for (size_t i = 0; i < common; ++i) {
        int c = compare_label_entries(a[i], b[i]);
        if (c != 0) return c;
    }
    if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
    return 0;
}

int compare_chis(const InvariantChi& a, const InvariantChi& b) {
    size_t common = std::min(a.orbits.size(), b.orbits.size());
    for (size_t i = 0; i < common; ++i) {
        int c = compare_orbits(a.orbits[i], b.orbits[i]);
        if (c != 0) return c;
    }
    if (a.orbits.size() != b.orbits.size()) return a.orbits.size() < b.orbits.size() ? -1 : 1;
    return 0;
}

/// Natural-representation matrix of the coordinate vector c.
CycMatrix realize(const std::vector<CycMatrix>& basis_mats, const std::vector<CycNum>& c) {
    CycMatrix out(basis_mats[0].rows(), basis_mats[0].cols());
    for (size_t k = 0; k < basis_mats.size(); ++k) out = out + basis_mats[k].scaled(c[k]);
    return out;
}

/// Invertible g with g X_k = Y_k g for all k, when one exists.
std::optional<CycMatrix> conjugating_matrix(const std::vector<CycMatrix>& X,
                                            const std::vector<CycMatrix>& Y) {
    const int n = X[0].rows();
    const int unknowns = n * n; // g_{ab} at slot a*n + b
    const int rows = static_cast<int>(X.size()) * unknowns;
    CycMatrix A(rows, unknowns);
    int r = 0;
    for (size_t k = 0; k < X.size(); ++k)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j, ++r)
                for (int b = 0; b < n; ++b) {
                    // (g X_k - Y_k g)_{ij} = sum_b g_{ib} X_k[b][j] - Y_k[i][b] g_{bj}
                    A.at(r, i * n + b) = A.at(r, i * n + b) + X[k].at(b, j);
                    A.at(r, b * n + j) = A.at(r, b * n + j) - Y[k].at(i, b);
                }
    LinearSolution sol = solve_linear(A, CycMatrix(rows, 1));
    for (int c = 0; c < sol.nullspace.cols(); ++c) {
        CycMatrix g(n, n);
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) g.at(a, b) = sol.nullspace.at(a * n + b, c);
        if (!determinant(g).is_zero()) return g;
    }
    return std::nullopt;
}

void validate_label(const ExtensionSpec& ext, const ModuleLabel& label, int n) {
    std::vector<std::vector<CycNum>> keys;
    for (const LabelEntry& e : label.entries) {
        if (static_cast<int>(e.weight.size()) != n - 1)
            throw LabelShapeError("label weight length does not match the algebra rank");
        for (int c : e.weight)
            if (c < 0) throw LabelShapeError("label weight entries must be nonnegative");
        if (!weight_nonzero(e.weight)) throw LabelShapeError("label contains a zero weight factor");
        if (static_cast<int>(e.point.coords.size()) != ext.num_vars)
            throw LabelShapeError("label point arity does not match the extension");
        std::vector<CycNum> key = fiber_key(ext, e.point);
        for (const auto& seen : keys)
            if (seen == key) throw LabelShapeError("label repeats a fiber key");
        keys.push_back(std::move(key));
    }
}

long label_dim(const ModuleLabel& label) {
    long total = 1;
    for (const LabelEntry& e : label.entries) total *= e.weight[0] + 1;
    return total;
}

} // namespace

bool InvariantChi::operator==(const InvariantChi& o) const { return compare_chis(*this, o) == 0; }

int compare_label_entries(const LabelEntry& a, const LabelEntry& b) {
    int c = compare_points(a.point, b.point);
    if (c != 0) return c;
    return compare_weights(a.weight, b.weight);
}

ExplicitRep sl2_irrep(int lam) {
    if (lam < 0) throw InvalidArgumentError("sl2_irrep: the highest weight must be nonnegative");
    const int d = lam + 1;
    CycMatrix E(d, d), F(d, d), H(d, d);
    for (int j = 0; j < d; ++j) {
        H.at(j, j) = CycNum(static_cast<long>(lam - 2 * j));
        if (j + 1 < d) F.at(j + 1, j) = CycNum(1L);
        if (j >= 1) E.at(j - 1, j) = CycNum(static_cast<long>(j) * (lam - j + 1));
    }
    ExplicitRep rep{d, {E, F, H}};
    StructureAlgebra sl2 = make_sl(2);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            CycMatrix lhs = rep.images[i] * rep.images[j] - rep.images[j] * rep.images[i];
            std::vector<CycNum> c = sl2.basis_product(i, j);
            CycMatrix rhs(d, d);
            for (int k = 0; k < 3; ++k) rhs = rhs + rep.images[k].scaled(c[k]);
            if (lhs != rhs) throw Error("sl2_irrep: commutator check failed");
        }
    return rep;
}

AutoDecomposition decompose_auto(int n, const CycMatrix& alpha) {
    if (n < 2) throw InvalidArgumentError("decompose_auto: rank must be at least 2");
    const int d = n * n - 1;
    if (alpha.rows() != d || alpha.cols() != d)
        throw InvalidArgumentError("decompose_auto: matrix shape does not match sl_n");
    StructureAlgebra g = make_sl(n);
    if (rank_of(alpha) != d)
        throw NotInvertibleError("decompose_auto: the matrix is singular");
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            std::vector<CycNum> lhs = g.product(alpha.col(i), alpha.col(j));
            std::vector<CycNum> rhs = alpha.apply(g.basis_product(i, j));
            if (lhs != rhs)
                throw NotMultiplicativeError("decompose_auto: the matrix does not preserve the bracket");
        }
    std::vector<CycMatrix> X = sl_basis_matrices(n);
    auto natural_images = [&](const CycMatrix& M) {
        std::vector<CycMatrix> Y(d);
        for (int i = 0; i < d; ++i) Y[i] = realize(X, M.col(i));
        return Y;
    };
    if (std::optional<CycMatrix> g0 = conjugating_matrix(X, natural_images(alpha))) {
        if (conjugation_matrix(X, *g0) != alpha)
            throw Error("decompose_auto: inner recomposition failed");
        return AutoDecomposition{true, *g0, DiagramPart::Identity};
    }
    CycMatrix flip = negative_transpose_matrix(X);
    CycMatrix composed = alpha * flip; // x -> -x^T first, then alpha
    if (std::optional<CycMatrix> g0 = conjugating_matrix(X, natural_images(composed))) {
        if (conjugation_matrix(X, *g0) * flip != alpha)
            throw Error("decompose_auto: flip recomposition failed");
        return AutoDecomposition{false, *g0, DiagramPart::Flip};
    }
    throw Error("decompose_auto: neither component solve produced a conjugator");
}

Weight out_on_weight(DiagramPart d, const Weight& w) {
    if (d == DiagramPart::Identity) return w;
    Weight out(w.rbegin(), w.rend());
    return out;
}

LabelEntry gamma_act_label(const FormSpec& form, const GaloisElement& gamma,
                           const LabelEntry& pair) {
    const ExtensionSpec& ext = form.extension;
    const int n = rank_from_dim(form.algebra.dim());
    if (static_cast<int>(pair.weight.size()) != n - 1)
        throw InvalidArgumentError("gamma_act_label: weight length does not match the algebra rank");
    if (static_cast<int>(pair.point.coords.size()) != ext.num_vars)
        throw InvalidArgumentError("gamma_act_label: point arity does not match the extension");
    TorusPoint moved = galois_act_point(ext, gamma, pair.point);
    // u_gamma^{-1} = ^gamma(u_{gamma^{-1}}), by the cocycle law at gamma * gamma^{-1}
    LaurentMatrix u_inv =
        form.cocycle.image(galois_inverse(ext, gamma)).galois_applied(ext, gamma);
    CycMatrix evaluated = u_inv.eval(moved);
    AutoDecomposition dec = decompose_auto(n, evaluated);
    return LabelEntry{out_on_weight(dec.diagram, pair.weight), std::move(moved)};
}

InvariantChi chi_canonical(const FormSpec& form, const ModuleLabel& label) {
    const int n = rank_from_dim(form.algebra.dim());
    validate_label(form.extension, label, n);
    std::vector<GaloisElement> group = galois_group(form.extension);
    InvariantChi chi;
    for (const LabelEntry& e : label.entries) {
        std::vector<LabelEntry> orbit;
        for (const GaloisElement& gamma : group) {
            LabelEntry moved = gamma_act_label(form, gamma, e);
            bool dup = false;
            for (const LabelEntry& seen : orbit)
                if (compare_label_entries(seen, moved) == 0) {
                    dup = true;
                    break;
                }
            if (!dup) orbit.push_back(std::move(moved));
        }
        std::sort(orbit.begin(), orbit.end(), [](const LabelEntry& a, const LabelEntry& b) {
            return compare_label_entries(a, b) < 0;
        });
        chi.orbits.push_back(std::move(orbit));
    }
    std::sort(chi.orbits.begin(), chi.orbits.end(),
              [](const std::vector<LabelEntry>& a, const std::vector<LabelEntry>& b) {
                  return compare_orbits(a, b) < 0;
              });
    return chi;
}

bool iso_decide(const FormSpec& form, const ModuleLabel& l1, const ModuleLabel& l2) {
    return chi_canonical(form, l1) == chi_canonical(form, l2);
}

std::vector<CycMatrix> build_module_matrices(const FormWindow& w, const ModuleLabel& label) {
    const FormSpec& form = w.spec;
    StructureAlgebra sl2 = make_sl(2);
    if (form.algebra.dim() != 3 || !form.algebra.is_lie() ||
        form.algebra.constants() != sl2.constants())
        throw InvalidArgumentError("build_module_matrices: explicit modules exist only for the rank-one algebra");
    validate_label(form.extension, label, 2);
    const int factors = static_cast<int>(label.entries.size());
    std::vector<ExplicitRep> reps;
    std::vector<int> dims;
    for (const LabelEntry& e : label.entries) {
        reps.push_back(sl2_irrep(e.weight[0]));
        dims.push_back(e.weight[0] + 1);
    }
    const int m = static_cast<int>(label_dim(label));
    std::vector<CycMatrix> out;
    out.reserve(w.basis.size());
    for (const CurrentElem& z : w.basis) {
        CycMatrix M(m, m);
        for (int i = 0; i < factors; ++i) {
            std::vector<CycNum> c = ev_point(z, label.entries[i].point);
            CycMatrix Xi(dims[i], dims[i]);
            for (int k = 0; k < 3; ++k) Xi = Xi + reps[i].images[k].scaled(c[k]);
            int left = 1, right = 1;
            for (int a = 0; a < i; ++a) left *= dims[a];
            for (int a = i + 1; a < factors; ++a) right *= dims[a];
            M = M + kron(kron(CycMatrix::identity(left), Xi), CycMatrix::identity(right));
        }
        out.push_back(std::move(M));
    }
    return out;
}

bool iso_oracle(const FormWindow& w, const ModuleLabel& l1, const ModuleLabel& l2) {
    std::vector<CycMatrix> A = build_module_matrices(w, l1);
    std::vector<CycMatrix> B = build_module_matrices(w, l2);
    const long m1 = label_dim(l1);
    if (m1 != label_dim(l2)) return false;
    const int m = static_cast<int>(m1);

    // Deduplicate the action pairs; drop pairs where both sides act by zero.
    std::vector<std::pair<CycMatrix, CycMatrix>> pairs;
    for (size_t z = 0; z < A.size(); ++z) {
        if (A[z].is_zero() && B[z].is_zero()) continue;
        bool dup = false;
        for (const auto& p : pairs)
            if (p.first == A[z] && p.second == B[z]) {
                dup = true;
                break;
            }
        if (!dup) pairs.emplace_back(A[z], B[z]);
    }
    if (pairs.empty()) return true; // both actions vanish; equal dimension suffices

    // Pairs of diagonal actions force T_{ij} = 0 unless the eigenvalues match;
    // use them to restrict the unknown support before the general solve.
    auto is_diagonal = [](const CycMatrix& M) {
        for (int i = 0; i < M.rows(); ++i)
            for (int j = 0; j < M.cols(); ++j)
                if (i != j && !M.at(i, j).is_zero()) return false;
        return true;
    };
    std::vector<const std::pair<CycMatrix, CycMatrix>*> diag_pairs;
    std::vector<const std::pair<CycMatrix, CycMatrix>*> general_pairs;
    for (const auto& p : pairs)
        (is_diagonal(p.first) && is_diagonal(p.second) ? diag_pairs : general_pairs).push_back(&p);

    std::vector<std::pair<int, int>> unknowns;
    std::vector<int> slot(static_cast<size_t>(m) * m, -1);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            bool alive = true;
            for (const auto* p : diag_pairs)
                if (p->first.at(j, j) != p->second.at(i, i)) {
                    alive = false;
                    break;
                }
            if (alive) {
                slot[static_cast<size_t>(i) * m + j] = static_cast<int>(unknowns.size());
                unknowns.emplace_back(i, j);
            }
        }
    if (unknowns.empty()) return false; // only the zero intertwiner survives

    const int rows = static_cast<int>(general_pairs.size()) * m * m;
    CycMatrix sys(rows, static_cast<int>(unknowns.size()));
    int r = 0;
    for (const auto* p : general_pairs)
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j, ++r)
                for (int b = 0; b < m; ++b) {
                    // (T A - B T)_{ij} = sum_b T_{ib} A[b][j] - B[i][b] T_{bj}
                    int s1 = slot[static_cast<size_t>(i) * m + b];
                    if (s1 >= 0) sys.at(r, s1) = sys.at(r, s1) + p->first.at(b, j);
                    int s2 = slot[static_cast<size_t>(b) * m + j];
                    if (s2 >= 0) sys.at(r, s2) = sys.at(r, s2) - p->second.at(i, b);
                }
    LinearSolution sol = solve_linear(sys, CycMatrix(rows, 1));
    const int nullity = sol.nullspace.cols();
    if (nullity == 0) return false;
    if (nullity > 1) throw Error("iso_oracle: the intertwiner space is not at most one-dimensional");
    CycMatrix T(m, m);
    for (size_t s = 0; s < unknowns.size(); ++s)
        T.at(unknowns[s].first, unknowns[s].second) = sol.nullspace.at(static_cast<int>(s), 0);
    return !determinant(T).is_zero();
}

std::vector<InvariantChi> enumerate_classes(const FormSpec& form,
                                            const std::vector<TorusPoint>& points,
                                            int max_weight) {
    const int n = rank_from_dim(form.algebra.dim());
    if (max_weight < 0)
        throw InvalidArgumentError("enumerate_classes: the weight bound must be nonnegative");
    const ExtensionSpec& ext = form.extension;

    // Distinct fibers of the saturation of the point list.
    std::vector<std::vector<TorusPoint>> fibers;
    std::vector<std::vector<CycNum>> keys;
    for (const TorusPoint& p : points) {
        if (static_cast<int>(p.coords.size()) != ext.num_vars)
            throw InvalidArgumentError("enumerate_classes: point arity does not match the extension");
        std::vector<CycNum> key = fiber_key(ext, p);
        bool seen = false;
        for (const auto& k : keys)
            if (k == key) {
                seen = true;
                break;
            }
        if (!seen) {
            keys.push_back(std::move(key));
            fibers.push_back(fiber(ext, p));
        }
    }

    // All nonzero weights with entries in [0, max_weight].
    std::vector<Weight> weights;
    Weight cur(n - 1, 0);
    while (true) {
        if (weight_nonzero(cur)) weights.push_back(cur);
        int pos = n - 2;
        while (pos >= 0 && cur[pos] == max_weight) cur[pos--] = 0;
        if (pos < 0) break;
        ++cur[pos];
    }

    // Per fiber: the distinct pair orbits it supports.
    std::vector<std::vector<std::vector<LabelEntry>>> choices(fibers.size());
    for (size_t f = 0; f < fibers.size(); ++f)
        for (const Weight& wt : weights)
            for (const TorusPoint& p : fibers[f]) {
                ModuleLabel single{{LabelEntry{wt, p}}};
                std::vector<LabelEntry> orbit = chi_canonical(form, single).orbits[0];
                bool dup = false;
                for (const auto& o : choices[f])
                    if (compare_orbits(o, orbit) == 0) {
                        dup = true;
                        break;
                    }
                if (!dup) choices[f].push_back(std::move(orbit));
            }

    // Every selection of at most one orbit per fiber is a class.
    std::vector<InvariantChi> out;
    std::vector<int> pick(fibers.size(), -1); // -1 = fiber absent
    while (true) {
        InvariantChi chi;
        for (size_t f = 0; f < fibers.size(); ++f)
            if (pick[f] >= 0) chi.orbits.push_back(choices[f][pick[f]]);
        std::sort(chi.orbits.begin(), chi.orbits.end(),
                  [](const std::vector<LabelEntry>& a, const std::vector<LabelEntry>& b) {
                      return compare_orbits(a, b) < 0;
                  });
        out.push_back(std::move(chi));
        int pos = static_cast<int>(fibers.size()) - 1;
        while (pos >= 0 && pick[pos] + 1 == static_cast<int>(choices[pos].size())) pick[pos--] = -1;
        if (pos < 0) break;
        ++pick[pos];
    }
    std::sort(out.begin(), out.end(),
              [](const InvariantChi& a, const InvariantChi& b) { return compare_chis(a, b) < 0; });
    out.erase(std::unique(out.begin(), out.end(),
                          [](const InvariantChi& a, const InvariantChi& b) { return a == b; }),
              out.end());
    return out;
}

} // namespace galcur
