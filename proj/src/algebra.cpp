#include "galcur/algebra.hpp"

#include <algorithm>

namespace galcur {

StructureAlgebra::StructureAlgebra(int dim, std::vector<std::string> basis_names,
                                   std::vector<CycNum> constants, bool lie)
    : dim_(dim), is_lie_(lie), names_(std::move(basis_names)), constants_(std::move(constants)) {
    if (dim_ < 0) throw InvalidArgumentError("StructureAlgebra: negative dimension");
    size_t want = static_cast<size_t>(dim_) * dim_ * dim_;
    if (constants_.size() != want)
        throw InvalidArgumentError("StructureAlgebra: structure constant count mismatch");
    if (names_.size() != static_cast<size_t>(dim_))
        throw InvalidArgumentError("StructureAlgebra: basis name count mismatch");
    validate();
}

std::vector<CycNum> StructureAlgebra::basis_product(int i, int j) const {
    std::vector<CycNum> out(dim_);
    for (int k = 0; k < dim_; ++k) out[k] = constant(i, j, k);
    return out;
}

std::vector<CycNum> StructureAlgebra::product(const std::vector<CycNum>& x,
                                              const std::vector<CycNum>& y) const {
    if (static_cast<int>(x.size()) != dim_ || static_cast<int>(y.size()) != dim_)
        throw InvalidArgumentError("product: coordinate length mismatch");
    std::vector<CycNum> out(dim_);
    for (int i = 0; i < dim_; ++i) {
        if (x[i].is_zero()) continue;
        for (int j = 0; j < dim_; ++j) {
            if (y[j].is_zero()) continue;
            CycNum f = x[i] * y[j];
            for (int k = 0; k < dim_; ++k) {
                const CycNum& c = constant(i, j, k);
                if (!c.is_zero()) out[k] += f * c;
            }
        }
    }
    return out;
}

void StructureAlgebra::validate() const {
    if (!is_lie_) return;
    for (int i = 0; i < dim_; ++i) {
        for (int j = 0; j <= i; ++j) {
            for (int k = 0; k < dim_; ++k) {
                if (constant(i, j, k) != -constant(j, i, k))
                    throw InvalidArgumentError("StructureAlgebra: bracket is not antisymmetric");
            }
        }
    }
    // Jacobi: [[i,j],k] + [[j,k],i] + [[k,i],j] = 0
    auto double_bracket = [&](int i, int j, int k, std::vector<CycNum>& acc) {
        for (int l = 0; l < dim_; ++l) {
            const CycNum& c = constant(i, j, l);
            if (c.is_zero()) continue;
            for (int m = 0; m < dim_; ++m) {
                const CycNum& d = constant(l, k, m);
                if (!d.is_zero()) acc[m] += c * d;
            }
        }
    };
    for (int i = 0; i < dim_; ++i) {
        for (int j = i + 1; j < dim_; ++j) {
            for (int k = j; k < dim_; ++k) {
                std::vector<CycNum> acc(dim_);
                double_bracket(i, j, k, acc);
                double_bracket(j, k, i, acc);
                double_bracket(k, i, j, acc);
                for (const auto& v : acc) {
                    if (!v.is_zero())
                        throw InvalidArgumentError("StructureAlgebra: Jacobi identity fails");
                }
            }
        }
    }
}

// --------------------------------------------------------------------------
// concrete algebras

std::vector<CycMatrix> sl_basis_matrices(int n) {
    if (n < 2) throw InvalidArgumentError("sl basis: rank must be at least 2");
    std::vector<CycMatrix> mats;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            CycMatrix E(n, n);
            E.at(i, j) = CycNum(1);
            mats.push_back(std::move(E));
        }
    }
    for (int i = 0; i + 1 < n; ++i) {
        CycMatrix H(n, n);
        H.at(i, i) = CycNum(1);
        H.at(i + 1, i + 1) = CycNum(-1);
        mats.push_back(std::move(H));
    }
    return mats;
}

std::vector<CycMatrix> matrix_unit_matrices(int n) {
    if (n < 1) throw InvalidArgumentError("matrix units: size must be positive");
    std::vector<CycMatrix> mats;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            CycMatrix E(n, n);
            E.at(i, j) = CycNum(1);
            mats.push_back(std::move(E));
        }
    }
    return mats;
}

namespace {

std::vector<std::string> sl_basis_names(int n) {
    std::vector<std::string> names;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j)
                names.push_back("E" + std::to_string(i + 1) + "_" + std::to_string(j + 1));
    for (int i = 0; i + 1 < n; ++i) names.push_back("H" + std::to_string(i + 1));
    return names;
}

// coordinates of a traceless matrix in the Chevalley basis of sl_n: the
// off-diagonal entries are E-coordinates and the diagonal telescopes into
// the H-coordinates
std::vector<CycNum> sl_expand(int n, const CycMatrix& X) {
    std::vector<CycNum> out;
    out.reserve(static_cast<size_t>(n) * n - 1);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j) out.push_back(X.at(i, j));
    CycNum partial(0);
    for (int i = 0; i + 1 < n; ++i) {
        partial += X.at(i, i);
        out.push_back(partial);
    }
    return out;
}

} // namespace

StructureAlgebra make_sl(int n) {
    if (n < 2) throw InvalidArgumentError("make_sl: rank must be at least 2");
    auto mats = sl_basis_matrices(n);
    const int d = static_cast<int>(mats.size());
    std::vector<CycNum> constants(static_cast<size_t>(d) * d * d);
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) {
            CycMatrix comm = mats[i] * mats[j] - mats[j] * mats[i];
            auto coords = sl_expand(n, comm);
            for (int k = 0; k < d; ++k)
                constants[(static_cast<size_t>(i) * d + j) * d + k] = coords[k];
        }
    }
    return StructureAlgebra(d, sl_basis_names(n), std::move(constants), true);
}

StructureAlgebra make_matrix_algebra(int n) {
    if (n < 1) throw InvalidArgumentError("make_matrix_algebra: size must be positive");
    const int d = n * n;
    std::vector<CycNum> constants(static_cast<size_t>(d) * d * d);
    std::vector<std::string> names;
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            names.push_back("E" + std::to_string(a + 1) + "_" + std::to_string(b + 1));
    // E_ab E_cd = [b = c] E_ad
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c)
                for (int e = 0; e < n; ++e) {
                    if (b != c) continue;
                    int i = a * n + b, j = c * n + e, k = a * n + e;
                    constants[(static_cast<size_t>(i) * d + j) * d + k] = CycNum(1);
                }
    return StructureAlgebra(d, std::move(names), std::move(constants), false);
}

StructureAlgebra direct_sum(const StructureAlgebra& a, const StructureAlgebra& b) {
    const int d = a.dim() + b.dim();
    std::vector<CycNum> constants(static_cast<size_t>(d) * d * d);
    auto put = [&](int i, int j, int k, const CycNum& v) {
        constants[(static_cast<size_t>(i) * d + j) * d + k] = v;
    };
    for (int i = 0; i < a.dim(); ++i)
        for (int j = 0; j < a.dim(); ++j)
            for (int k = 0; k < a.dim(); ++k) put(i, j, k, a.constant(i, j, k));
    for (int i = 0; i < b.dim(); ++i)
        for (int j = 0; j < b.dim(); ++j)
            for (int k = 0; k < b.dim(); ++k)
                put(a.dim() + i, a.dim() + j, a.dim() + k, b.constant(i, j, k));
    std::vector<std::string> names;
    for (const auto& s : a.basis_names()) names.push_back("L." + s);
    for (const auto& s : b.basis_names()) names.push_back("R." + s);
    return StructureAlgebra(d, std::move(names), std::move(constants),
                            a.is_lie() && b.is_lie());
}

// --------------------------------------------------------------------------
// realizations by concrete matrices

std::vector<CycNum> matrix_coordinates(const std::vector<CycMatrix>& basis_mats,
                                       const CycMatrix& X) {
    if (basis_mats.empty()) throw InvalidArgumentError("matrix_coordinates: empty basis");
    const int r = basis_mats[0].rows(), c = basis_mats[0].cols();
    const int d = static_cast<int>(basis_mats.size());
    CycMatrix A(r * c, d);
    for (int k = 0; k < d; ++k)
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < c; ++j) A.at(i * c + j, k) = basis_mats[k].at(i, j);
    CycMatrix rhs(r * c, 1);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < c; ++j) rhs.at(i * c + j, 0) = X.at(i, j);
    LinearSolution sol = solve_linear(A, rhs);
    if (!sol.consistent)
        throw InvalidArgumentError("matrix_coordinates: matrix outside basis span");
    if (sol.nullspace.cols() != 0)
        throw InvalidArgumentError("matrix_coordinates: basis matrices are dependent");
    return sol.particular.col(0);
}

CycMatrix conjugation_matrix(const std::vector<CycMatrix>& basis_mats, const CycMatrix& P) {
    CycMatrix Pinv = matrix_inverse(P);
    const int d = static_cast<int>(basis_mats.size());
    CycMatrix out(d, d);
    for (int j = 0; j < d; ++j) {
        auto coords = matrix_coordinates(basis_mats, P * basis_mats[j] * Pinv);
        for (int i = 0; i < d; ++i) out.at(i, j) = coords[i];
    }
    return out;
}

CycMatrix negative_transpose_matrix(const std::vector<CycMatrix>& basis_mats) {
    const int d = static_cast<int>(basis_mats.size());
    CycMatrix out(d, d);
    for (int j = 0; j < d; ++j) {
        auto coords = matrix_coordinates(basis_mats, basis_mats[j].transpose().scaled(CycNum(-1)));
        for (int i = 0; i < d; ++i) out.at(i, j) = coords[i];
    }
    return out;
}

// --------------------------------------------------------------------------
// automorphisms

AlgebraAuto check_auto(const StructureAlgebra& A, const CycMatrix& m, int order_cap) {
    const int d = A.dim();
    if (m.rows() != d || m.cols() != d)
        throw InvalidArgumentError("check_auto: matrix shape mismatch");
    if (order_cap < 1) throw InvalidArgumentError("check_auto: order cap must be positive");

    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) {
            std::vector<CycNum> lhs = m.apply(A.basis_product(i, j));
            std::vector<CycNum> rhs = A.product(m.col(i), m.col(j));
            if (lhs != rhs)
                throw NotMultiplicativeError("check_auto: map breaks the product on basis pair (" +
                                             std::to_string(i) + "," + std::to_string(j) + ")");
        }
    }
    if (rank_of(m) != d) throw NotInvertibleError("check_auto: map is singular");

    CycMatrix id = CycMatrix::identity(d);
    CycMatrix power = m;
    int order = 1;
    while (power != id) {
        power = power * m;
        ++order;
        if (order > order_cap)
            throw OrderCapError("check_auto: order exceeds cap " + std::to_string(order_cap));
    }
    return AlgebraAuto{m, order};
}

GradedDecomposition graded_pieces(const StructureAlgebra& A,
                                  const std::vector<AlgebraAuto>& autos,
                                  const std::vector<CycNum>& roots) {
    const int d = A.dim();
    const int N = static_cast<int>(autos.size());
    if (roots.size() != autos.size())
        throw InvalidArgumentError("graded_pieces: one root per automorphism required");
    for (int i = 0; i < N; ++i) {
        // primitive root of the matching order
        if (roots[i].pow(autos[i].order) != CycNum(1))
            throw InvalidArgumentError("graded_pieces: root does not match automorphism order");
        for (int k : divisors(autos[i].order)) {
            if (k < autos[i].order && roots[i].pow(k) == CycNum(1))
                throw InvalidArgumentError("graded_pieces: root is not primitive");
        }
        for (int j = i + 1; j < N; ++j) {
            if (autos[i].matrix * autos[j].matrix != autos[j].matrix * autos[i].matrix)
                throw InvalidArgumentError("graded_pieces: automorphisms do not commute");
        }
    }

    GradedDecomposition out;
    for (const auto& a : autos) out.orders.push_back(a.order);
    out.roots = roots;

    std::vector<int> index(N, 0);
    int total = 0;
    while (true) {
        CycMatrix stacked(N * d, d);
        for (int i = 0; i < N; ++i) {
            CycNum eig = roots[i].pow(index[i]);
            for (int r = 0; r < d; ++r)
                for (int c = 0; c < d; ++c) {
                    CycNum v = autos[i].matrix.at(r, c);
                    if (r == c) v -= eig;
                    stacked.at(i * d + r, c) = v;
                }
        }
        LinearSolution sol = solve_linear(stacked, CycMatrix(N * d, 1));
        CycMatrix basis_rows = sol.nullspace.transpose();
        total += basis_rows.rows();
        out.pieces.emplace(index, std::move(basis_rows));

        int pos = N - 1;
        while (pos >= 0) {
            if (++index[pos] < autos[pos].order) break;
            index[pos] = 0;
            --pos;
        }
        if (pos < 0) break;
    }
    if (total != d)
        throw Error("graded_pieces: eigenspaces do not exhaust the algebra (non-semisimple input)");
    return out;
}

// --------------------------------------------------------------------------
// ideals

CycMatrix ideal_closure(const StructureAlgebra& A,
                        const std::vector<std::vector<CycNum>>& seed) {
    const int d = A.dim();
    RowSpan span(d);
    std::vector<std::vector<CycNum>> queue;
    for (const auto& v : seed) {
        if (static_cast<int>(v.size()) != d)
            throw InvalidArgumentError("ideal_closure: seed length mismatch");
        if (span.add(v)) queue.push_back(v);
    }
    std::vector<CycNum> basis_vec(d);
    while (!queue.empty()) {
        std::vector<CycNum> v = std::move(queue.back());
        queue.pop_back();
        for (int i = 0; i < d; ++i) {
            for (auto& c : basis_vec) c = CycNum(0);
            basis_vec[i] = CycNum(1);
            std::vector<CycNum> left = A.product(basis_vec, v);
            if (span.add(left)) queue.push_back(std::move(left));
            std::vector<CycNum> right = A.product(v, basis_vec);
            if (span.add(right)) queue.push_back(std::move(right));
        }
    }
    return span.basis();
}

bool verify_central_simple(const StructureAlgebra& A) {
    const int d = A.dim();
    if (d < 1) throw InvalidArgumentError("verify_central_simple: empty algebra");

    for (int i = 0; i < d; ++i) {
        std::vector<CycNum> e(d);
        e[i] = CycNum(1);
        if (ideal_closure(A, {e}).rows() != d) return false;
    }

    // centroid: maps T with T(xy) = x T(y) = T(x) y; collect the linear
    // constraints on the d^2 unknowns t_{kl} (T e_l = sum_k t_{kl} e_k) and
    // stop as soon as corank 1 is certified (the identity is always there)
    RowSpan constraints(d * d);
    auto unknown = [d](int k, int l) { return k * d + l; };
    for (int i = 0; i < d && constraints.rank() < d * d - 1; ++i) {
        for (int j = 0; j < d && constraints.rank() < d * d - 1; ++j) {
            std::vector<CycNum> prod = A.basis_product(i, j);
            for (int m = 0; m < d; ++m) {
                // T(e_i e_j)_m - (e_i T(e_j))_m = 0
                std::vector<CycNum> row(static_cast<size_t>(d) * d);
                for (int l = 0; l < d; ++l)
                    if (!prod[l].is_zero()) row[unknown(m, l)] += prod[l];
                for (int k = 0; k < d; ++k) {
                    const CycNum& c = A.constant(i, k, m);
                    if (!c.is_zero()) row[unknown(k, j)] -= c;
                }
                constraints.add(std::move(row));

                // T(e_i e_j)_m - (T(e_i) e_j)_m = 0
                std::vector<CycNum> row2(static_cast<size_t>(d) * d);
                for (int l = 0; l < d; ++l)
                    if (!prod[l].is_zero()) row2[unknown(m, l)] += prod[l];
                for (int k = 0; k < d; ++k) {
                    const CycNum& c = A.constant(k, j, m);
                    if (!c.is_zero()) row2[unknown(k, i)] -= c;
                }
                constraints.add(std::move(row2));
            }
        }
    }
    return constraints.rank() == d * d - 1;
}

} // namespace galcur
