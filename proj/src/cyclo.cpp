#include "galcur/cyclo.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <map>
#include <mutex>
#include <numeric>
#include <sstream>

namespace galcur {

// --------------------------------------------------------------------------
// small number-theoretic helpers

int totient(int n) {
    if (n <= 0) throw InvalidArgumentError("totient: n must be positive");
    int result = n;
    int m = n;
    for (int p = 2; static_cast<long>(p) * p <= m; ++p) {
        if (m % p == 0) {
            while (m % p == 0) m /= p;
            result -= result / p;
        }
    }
    if (m > 1) result -= result / m;
    return result;
}

std::vector<int> divisors(int n) {
    if (n <= 0) throw InvalidArgumentError("divisors: n must be positive");
    std::vector<int> small, large;
    for (int d = 1; static_cast<long>(d) * d <= n; ++d) {
        if (n % d == 0) {
            small.push_back(d);
            if (d != n / d) large.push_back(n / d);
        }
    }
    small.insert(small.end(), large.rbegin(), large.rend());
    return small;
}

namespace {

// exact division of integer polynomials (divisor monic), ascending coeffs
std::vector<mpz_class> poly_divide_exact(std::vector<mpz_class> num,
                                         const std::vector<mpz_class>& den) {
    int dn = static_cast<int>(num.size()) - 1;
    int dd = static_cast<int>(den.size()) - 1;
    std::vector<mpz_class> quot(dn - dd + 1);
    for (int k = dn - dd; k >= 0; --k) {
        mpz_class c = num[k + dd]; // den is monic
        quot[k] = c;
        if (c != 0) {
            for (int j = 0; j <= dd; ++j) num[k + j] -= c * den[j];
        }
    }
    return quot;
}

std::map<int, std::vector<mpz_class>> g_cyclo_cache;
std::mutex g_cyclo_mutex;

} // namespace

const std::vector<mpz_class>& cyclotomic_polynomial(int n) {
    if (n <= 0) throw InvalidArgumentError("cyclotomic_polynomial: n must be positive");
    std::lock_guard<std::mutex> lock(g_cyclo_mutex);
    auto it = g_cyclo_cache.find(n);
    if (it != g_cyclo_cache.end()) return it->second;

    // x^n - 1 divided by the cyclotomic polynomials of the proper divisors
    std::vector<mpz_class> p(n + 1);
    p[0] = -1;
    p[n] = 1;
    for (int d : divisors(n)) {
        if (d == n) continue;
        auto jt = g_cyclo_cache.find(d);
        if (jt == g_cyclo_cache.end()) {
            // build recursively without re-locking
            std::vector<mpz_class> q(d + 1);
            q[0] = -1;
            q[d] = 1;
            for (int e : divisors(d)) {
                if (e == d) continue;
                q = poly_divide_exact(std::move(q), g_cyclo_cache.at(e));
            }
            jt = g_cyclo_cache.emplace(d, std::move(q)).first;
        }
        p = poly_divide_exact(std::move(p), jt->second);
    }
    auto res = g_cyclo_cache.emplace(n, std::move(p));
    return res.first->second;
}

int conductor_cap() {
    static const int cap = [] {
        const char* env = std::getenv("GC_MAX_CONDUCTOR");
        if (env != nullptr && *env != '\0') {
            char* end = nullptr;
            long v = std::strtol(env, &end, 10);
            if (end != nullptr && *end == '\0' && v >= 1 && v <= 1000000) {
                return static_cast<int>(v);
            }
        }
        return 3600;
    }();
    return cap;
}

namespace {

void check_conductor(int n) {
    if (n > conductor_cap()) {
        throw ConductorLimitError("conductor " + std::to_string(n) +
                                  " exceeds cap " + std::to_string(conductor_cap()));
    }
}

// reduce a rational polynomial modulo the n-th cyclotomic polynomial;
// result has exactly totient(n) coefficients
std::vector<Rational> reduce_mod_cyclo(std::vector<Rational> p, int n) {
    const auto& phi = cyclotomic_polynomial(n);
    const size_t deg = phi.size() - 1; // = totient(n)
    while (p.size() > deg) {
        Rational c = p.back();
        p.pop_back();
        if (c != 0) {
            size_t base = p.size() - deg;
            for (size_t j = 0; j < deg; ++j) {
                p[base + j] -= c * Rational(phi[j]);
            }
        }
    }
    p.resize(deg, Rational(0));
    return p;
}

// ---- rational polynomial helpers for the extended Euclid inverse ----

using QPoly = std::vector<Rational>; // ascending, may carry trailing zeros

void qp_trim(QPoly& p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
}

bool qp_is_zero(const QPoly& p) {
    for (const auto& c : p)
        if (c != 0) return false;
    return true;
}

// division with remainder: num becomes the remainder, quotient returned
QPoly qp_divmod(QPoly& num, const QPoly& den) {
    qp_trim(num);
    QPoly d = den;
    qp_trim(d);
    if (d.empty()) throw DivisionByZeroError("polynomial division by zero");
    if (num.size() < d.size()) return {};
    QPoly quot(num.size() - d.size() + 1);
    Rational lead = d.back();
    for (int k = static_cast<int>(quot.size()) - 1; k >= 0; --k) {
        if (num.size() < d.size() + k) continue;
        Rational c = num[k + d.size() - 1] / lead;
        quot[k] = c;
        if (c != 0) {
            for (size_t j = 0; j < d.size(); ++j) num[k + j] -= c * d[j];
        }
        num.resize(k + d.size() - 1);
    }
    return quot;
}

QPoly qp_sub_mul(const QPoly& a, const QPoly& q, const QPoly& b) {
    // a - q*b
    QPoly out = a;
    if (!q.empty() && !b.empty()) {
        if (out.size() < q.size() + b.size() - 1) out.resize(q.size() + b.size() - 1);
        for (size_t i = 0; i < q.size(); ++i) {
            if (q[i] == 0) continue;
            for (size_t j = 0; j < b.size(); ++j) out[i + j] -= q[i] * b[j];
        }
    }
    qp_trim(out);
    return out;
}

// dense rational Gaussian elimination: first solution of M c = rhs, or none
bool solve_rational(std::vector<std::vector<Rational>>& M, std::vector<Rational>& rhs,
                    int unknowns, std::vector<Rational>& out) {
    const int rows = static_cast<int>(M.size());
    int r = 0;
    std::vector<int> pivot_col_of_row;
    for (int c = 0; c < unknowns && r < rows; ++c) {
        int piv = -1;
        for (int i = r; i < rows; ++i) {
            if (M[i][c] != 0) {
                piv = i;
                break;
            }
        }
        if (piv < 0) continue;
        std::swap(M[piv], M[r]);
        std::swap(rhs[piv], rhs[r]);
        Rational inv = 1 / M[r][c];
        for (int j = c; j < unknowns; ++j) M[r][j] *= inv;
        rhs[r] *= inv;
        for (int i = 0; i < rows; ++i) {
            if (i == r || M[i][c] == 0) continue;
            Rational f = M[i][c];
            for (int j = c; j < unknowns; ++j) M[i][j] -= f * M[r][j];
            rhs[i] -= f * rhs[r];
        }
        pivot_col_of_row.push_back(c);
        ++r;
    }
    for (int i = r; i < rows; ++i) {
        if (rhs[i] != 0) return false;
    }
    out.assign(unknowns, Rational(0));
    for (int k = 0; k < r; ++k) out[pivot_col_of_row[k]] = rhs[k];
    return true;
}

} // namespace

// --------------------------------------------------------------------------
// CycNum

CycNum::CycNum(int n, std::vector<Rational> reduced_coeffs)
    : conductor_(n), coeffs_(std::move(reduced_coeffs)) {
    bool rational = true;
    for (size_t i = 1; i < coeffs_.size(); ++i) {
        if (coeffs_[i] != 0) {
            rational = false;
            break;
        }
    }
    if (rational && conductor_ != 1) {
        Rational v = coeffs_.empty() ? Rational(0) : coeffs_[0];
        conductor_ = 1;
        coeffs_.assign(1, v);
    }
}

CycNum CycNum::zeta(int n) {
    if (n <= 0) throw InvalidArgumentError("zeta: order must be positive");
    check_conductor(n);
    return from_coeffs(n, {Rational(0), Rational(1)});
}

CycNum CycNum::from_coeffs(int n, std::vector<Rational> coeffs) {
    if (n <= 0) throw InvalidArgumentError("from_coeffs: conductor must be positive");
    check_conductor(n);
    // callers may hand us fractions that are not in lowest terms, and the
    // comparison semantics of mpq demand canonical form
    for (auto& c : coeffs) c.canonicalize();
    return CycNum(n, reduce_mod_cyclo(std::move(coeffs), n));
}

bool CycNum::is_zero() const {
    for (const auto& c : coeffs_)
        if (c != 0) return false;
    return true;
}

const Rational& CycNum::rational_value() const {
    if (conductor_ != 1) throw InvalidArgumentError("rational_value: not a rational number");
    return coeffs_[0];
}

// full-length coefficient vector of this value inside Q(zeta_m); never
// collapses, so the result always has exactly totient(m) entries
std::vector<Rational> CycNum::embedded_coeffs(int m) const {
    if (m == conductor_) return coeffs_;
    if (m % conductor_ != 0)
        throw InvalidArgumentError("embedded_coeffs: target is not a multiple of the conductor");
    check_conductor(m);
    int k = m / conductor_;
    std::vector<Rational> raw(static_cast<size_t>(k) * (coeffs_.size() - 1) + 1, Rational(0));
    for (size_t i = 0; i < coeffs_.size(); ++i) raw[i * k] = coeffs_[i];
    return reduce_mod_cyclo(std::move(raw), m);
}

int lcm_conductor(const CycNum& a, const CycNum& b) {
    long g = std::gcd(static_cast<long>(a.conductor_), static_cast<long>(b.conductor_));
    long l = static_cast<long>(a.conductor_) / g * b.conductor_;
    if (l > conductor_cap()) {
        throw ConductorLimitError("conductor " + std::to_string(l) + " exceeds cap " +
                                  std::to_string(conductor_cap()));
    }
    return static_cast<int>(l);
}

CycNum CycNum::operator-() const {
    CycNum out = *this;
    for (auto& c : out.coeffs_) c = -c;
    return out;
}

CycNum& CycNum::operator+=(const CycNum& o) {
    int m = lcm_conductor(*this, o);
    std::vector<Rational> a = embedded_coeffs(m), b = o.embedded_coeffs(m);
    for (size_t i = 0; i < a.size(); ++i) a[i] += b[i];
    *this = CycNum(m, std::move(a));
    return *this;
}

CycNum& CycNum::operator-=(const CycNum& o) {
    int m = lcm_conductor(*this, o);
    std::vector<Rational> a = embedded_coeffs(m), b = o.embedded_coeffs(m);
    for (size_t i = 0; i < a.size(); ++i) a[i] -= b[i];
    *this = CycNum(m, std::move(a));
    return *this;
}

CycNum& CycNum::operator*=(const CycNum& o) {
    int m = lcm_conductor(*this, o);
    std::vector<Rational> a = embedded_coeffs(m), b = o.embedded_coeffs(m);
    std::vector<Rational> prod(a.size() + b.size() - 1, Rational(0));
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (size_t j = 0; j < b.size(); ++j) {
            if (b[j] == 0) continue;
            prod[i + j] += a[i] * b[j];
        }
    }
    *this = CycNum(m, reduce_mod_cyclo(std::move(prod), m));
    return *this;
}

CycNum CycNum::inverse() const {
    if (is_zero()) throw DivisionByZeroError("inverse of zero");
    if (conductor_ == 1) return CycNum(Rational(1 / coeffs_[0]));

    // extended Euclid in Q[x] against the cyclotomic polynomial (irreducible,
    // so the gcd with any nonzero residue is a nonzero constant)
    const auto& phi_z = cyclotomic_polynomial(conductor_);
    QPoly r0(phi_z.size());
    for (size_t i = 0; i < phi_z.size(); ++i) r0[i] = Rational(phi_z[i]);
    QPoly r1 = coeffs_;
    qp_trim(r1);
    QPoly s0 = {};              // coefficient of our element in r0 = phi
    QPoly s1 = {Rational(1)};   // ... in r1 = element
    while (!qp_is_zero(r1)) {
        QPoly rem = r0;
        QPoly q = qp_divmod(rem, r1);
        QPoly s2 = qp_sub_mul(s0, q, s1);
        r0 = std::move(r1);
        r1 = std::move(rem);
        qp_trim(r1);
        s0 = std::move(s1);
        s1 = std::move(s2);
    }
    // r0 = s0 * element (mod phi) and r0 is a nonzero constant
    qp_trim(r0);
    Rational c = r0[0];
    for (auto& v : s0) v /= c;
    return CycNum(conductor_, reduce_mod_cyclo(std::move(s0), conductor_));
}

CycNum CycNum::pow(long e) const {
    if (e < 0) return inverse().pow(-e);
    CycNum acc(1);
    CycNum base = *this;
    unsigned long k = static_cast<unsigned long>(e);
    while (k > 0) {
        if (k & 1UL) acc *= base;
        base *= base;
        k >>= 1UL;
    }
    // 0^0 = 1 by the convention above; 0^e = 0 handled naturally
    return acc;
}

bool CycNum::operator==(const CycNum& o) const {
    if (conductor_ == o.conductor_) return coeffs_ == o.coeffs_;
    int m = lcm_conductor(*this, o);
    return embedded_coeffs(m) == o.embedded_coeffs(m);
}

CycNum CycNum::reduced() const {
    if (conductor_ == 1) return *this;
    const int n = conductor_;
    const int phin = static_cast<int>(coeffs_.size());
    for (int d : divisors(n)) {
        if (d == n) break;
        int phid = totient(d);
        // columns: zeta_n^{(n/d) j} for j < phi(d), expressed in Q(zeta_n)
        std::vector<std::vector<Rational>> M(phin, std::vector<Rational>(phid, Rational(0)));
        for (int j = 0; j < phid; ++j) {
            std::vector<Rational> mono(static_cast<size_t>(n / d) * j + 1, Rational(0));
            mono.back() = 1;
            auto col = reduce_mod_cyclo(std::move(mono), n);
            for (int i = 0; i < phin; ++i) M[i][j] = col[i];
        }
        std::vector<Rational> rhs = coeffs_;
        std::vector<Rational> sol;
        if (solve_rational(M, rhs, phid, sol)) {
            return CycNum(d, reduce_mod_cyclo(std::move(sol), d));
        }
    }
    return *this;
}

int CycNum::compare(const CycNum& a, const CycNum& b) {
    CycNum ra = a.reduced(), rb = b.reduced();
    if (ra.conductor_ != rb.conductor_) return ra.conductor_ < rb.conductor_ ? -1 : 1;
    for (size_t i = 0; i < ra.coeffs_.size(); ++i) {
        int c = cmp(ra.coeffs_[i], rb.coeffs_[i]);
        if (c != 0) return c;
    }
    return 0;
}

// --------------------------------------------------------------------------
// literal grammar

namespace {

std::string rational_str(const Rational& q) { return q.get_str(); }

struct Cursor {
    const std::string& s;
    size_t pos = 0;

    void skip_ws() {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }
    bool done() const { return pos >= s.size(); }
    char peek() const { return pos < s.size() ? s[pos] : '\0'; }

    std::string read_digits() {
        size_t start = pos;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
        if (pos == start) throw ParseError("expected digits at position " + std::to_string(start) +
                                           " in \"" + s + "\"");
        return s.substr(start, pos - start);
    }
};

// 'z' uint ['^' ['-'] uint]  -> zeta_n^e
CycNum parse_zeta_factor(Cursor& cur) {
    ++cur.pos; // consume 'z'
    std::string nstr = cur.read_digits();
    long n = std::strtol(nstr.c_str(), nullptr, 10);
    if (n < 1) throw ParseError("root order must be positive in \"" + cur.s + "\"");
    long e = 1;
    if (cur.peek() == '^') {
        ++cur.pos;
        bool neg = false;
        if (cur.peek() == '-') {
            neg = true;
            ++cur.pos;
        }
        std::string estr = cur.read_digits();
        e = std::strtol(estr.c_str(), nullptr, 10);
        if (neg) e = -e;
    }
    return CycNum::zeta(static_cast<int>(n)).pow(e);
}

CycNum parse_term(Cursor& cur) {
    if (cur.peek() == 'z') return parse_zeta_factor(cur);
    if (!std::isdigit(static_cast<unsigned char>(cur.peek())))
        throw ParseError("expected term at position " + std::to_string(cur.pos) + " in \"" +
                         cur.s + "\"");
    std::string num = cur.read_digits();
    std::string den;
    if (cur.peek() == '/') {
        ++cur.pos;
        den = cur.read_digits();
    }
    Rational q;
    if (den.empty()) {
        q = Rational(num);
    } else {
        q = Rational(num + "/" + den);
        if (q.get_den() == 0) throw ParseError("zero denominator in \"" + cur.s + "\"");
    }
    q.canonicalize();
    CycNum coeff(q);
    cur.skip_ws();
    if (cur.peek() == '*') {
        ++cur.pos;
        cur.skip_ws();
        if (cur.peek() != 'z') throw ParseError("expected root factor after '*' in \"" + cur.s + "\"");
        coeff *= parse_zeta_factor(cur);
    }
    return coeff;
}

} // namespace

CycNum CycNum::parse(const std::string& text) {
    Cursor cur{text};
    cur.skip_ws();
    if (cur.done()) throw ParseError("empty cyclotomic literal");
    CycNum acc(0);
    int sign = 1;
    if (cur.peek() == '-') {
        sign = -1;
        ++cur.pos;
        cur.skip_ws();
    } else if (cur.peek() == '+') {
        ++cur.pos;
        cur.skip_ws();
    }
    while (true) {
        CycNum term = parse_term(cur);
        acc += sign == 1 ? term : -term;
        cur.skip_ws();
        if (cur.done()) break;
        if (cur.peek() == '+') {
            sign = 1;
        } else if (cur.peek() == '-') {
            sign = -1;
        } else {
            throw ParseError("unexpected character '" + std::string(1, cur.peek()) +
                             "' at position " + std::to_string(cur.pos) + " in \"" + text + "\"");
        }
        ++cur.pos;
        cur.skip_ws();
        if (cur.done()) throw ParseError("dangling sign in \"" + text + "\"");
    }
    return acc;
}

std::string CycNum::str() const {
    CycNum r = reduced();
    if (r.is_zero()) return "0";
    std::ostringstream out;
    bool first = true;
    for (size_t i = 0; i < r.coeffs_.size(); ++i) {
        const Rational& c = r.coeffs_[i];
        if (c == 0) continue;
        bool neg = c < 0;
        Rational mag = neg ? Rational(-c) : c;
        if (first) {
            if (neg) out << "-";
            first = false;
        } else {
            out << (neg ? " - " : " + ");
        }
        if (i == 0) {
            out << rational_str(mag);
        } else {
            if (mag != 1) out << rational_str(mag) << "*";
            out << "z" << r.conductor_;
            if (i > 1) out << "^" << i;
        }
    }
    return out.str();
}

// --------------------------------------------------------------------------
// matrices

CycMatrix CycMatrix::identity(int n) {
    CycMatrix m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = CycNum(1);
    return m;
}

CycMatrix CycMatrix::transpose() const {
    CycMatrix out(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) out.at(j, i) = at(i, j);
    return out;
}

CycMatrix CycMatrix::operator+(const CycMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_)
        throw InvalidArgumentError("matrix addition: shape mismatch");
    CycMatrix out(rows_, cols_);
    for (size_t k = 0; k < data_.size(); ++k) out.data_[k] = data_[k] + o.data_[k];
    return out;
}

CycMatrix CycMatrix::operator-(const CycMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_)
        throw InvalidArgumentError("matrix subtraction: shape mismatch");
    CycMatrix out(rows_, cols_);
    for (size_t k = 0; k < data_.size(); ++k) out.data_[k] = data_[k] - o.data_[k];
    return out;
}

CycMatrix CycMatrix::operator*(const CycMatrix& o) const {
    if (cols_ != o.rows_) throw InvalidArgumentError("matrix product: shape mismatch");
    CycMatrix out(rows_, o.cols_);
    for (int i = 0; i < rows_; ++i) {
        for (int k = 0; k < cols_; ++k) {
            const CycNum& a = at(i, k);
            if (a.is_zero()) continue;
            for (int j = 0; j < o.cols_; ++j) {
                const CycNum& b = o.at(k, j);
                if (b.is_zero()) continue;
                out.at(i, j) += a * b;
            }
        }
    }
    return out;
}

CycMatrix CycMatrix::scaled(const CycNum& c) const {
    CycMatrix out(rows_, cols_);
    for (size_t k = 0; k < data_.size(); ++k) out.data_[k] = data_[k] * c;
    return out;
}

bool CycMatrix::operator==(const CycMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) return false;
    for (size_t k = 0; k < data_.size(); ++k)
        if (data_[k] != o.data_[k]) return false;
    return true;
}

bool CycMatrix::is_zero() const {
    for (const auto& c : data_)
        if (!c.is_zero()) return false;
    return true;
}

std::vector<CycNum> CycMatrix::row(int i) const {
    std::vector<CycNum> out(cols_);
    for (int j = 0; j < cols_; ++j) out[j] = at(i, j);
    return out;
}

std::vector<CycNum> CycMatrix::col(int j) const {
    std::vector<CycNum> out(rows_);
    for (int i = 0; i < rows_; ++i) out[i] = at(i, j);
    return out;
}

std::vector<CycNum> CycMatrix::apply(const std::vector<CycNum>& v) const {
    if (static_cast<int>(v.size()) != cols_)
        throw InvalidArgumentError("matrix apply: length mismatch");
    std::vector<CycNum> out(rows_);
    for (int i = 0; i < rows_; ++i) {
        for (int j = 0; j < cols_; ++j) {
            if (at(i, j).is_zero() || v[j].is_zero()) continue;
            out[i] += at(i, j) * v[j];
        }
    }
    return out;
}

CycMatrix kron(const CycMatrix& a, const CycMatrix& b) {
    CycMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) {
            if (a.at(i, j).is_zero()) continue;
            for (int k = 0; k < b.rows(); ++k)
                for (int l = 0; l < b.cols(); ++l) {
                    if (b.at(k, l).is_zero()) continue;
                    out.at(i * b.rows() + k, j * b.cols() + l) = a.at(i, j) * b.at(k, l);
                }
        }
    return out;
}

CycMatrix rref(CycMatrix m, std::vector<int>* pivot_cols) {
    if (pivot_cols != nullptr) pivot_cols->clear();
    int r = 0;
    for (int c = 0; c < m.cols() && r < m.rows(); ++c) {
        int piv = -1;
        for (int i = r; i < m.rows(); ++i) {
            if (!m.at(i, c).is_zero()) {
                piv = i;
                break;
            }
        }
        if (piv < 0) continue;
        if (piv != r) {
            for (int j = 0; j < m.cols(); ++j) std::swap(m.at(piv, j), m.at(r, j));
        }
        CycNum inv = m.at(r, c).inverse();
        for (int j = c; j < m.cols(); ++j) m.at(r, j) *= inv;
        for (int i = 0; i < m.rows(); ++i) {
            if (i == r || m.at(i, c).is_zero()) continue;
            CycNum f = m.at(i, c);
            for (int j = c; j < m.cols(); ++j) m.at(i, j) -= f * m.at(r, j);
        }
        if (pivot_cols != nullptr) pivot_cols->push_back(c);
        ++r;
    }
    return m;
}

CycMatrix row_space_basis(const CycMatrix& m) {
    std::vector<int> pivots;
    CycMatrix red = rref(m, &pivots);
    CycMatrix out(static_cast<int>(pivots.size()), m.cols());
    for (int i = 0; i < out.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) out.at(i, j) = red.at(i, j);
    return out;
}

int rank_of(const CycMatrix& m) {
    std::vector<int> pivots;
    rref(m, &pivots);
    return static_cast<int>(pivots.size());
}

CycNum determinant(CycMatrix m) {
    if (m.rows() != m.cols()) throw InvalidArgumentError("determinant: matrix not square");
    const int n = m.rows();
    CycNum det(1);
    for (int c = 0; c < n; ++c) {
        int piv = -1;
        for (int i = c; i < n; ++i) {
            if (!m.at(i, c).is_zero()) {
                piv = i;
                break;
            }
        }
        if (piv < 0) return CycNum(0);
        if (piv != c) {
            for (int j = 0; j < n; ++j) std::swap(m.at(piv, j), m.at(c, j));
            det = -det;
        }
        det *= m.at(c, c);
        CycNum inv = m.at(c, c).inverse();
        for (int i = c + 1; i < n; ++i) {
            if (m.at(i, c).is_zero()) continue;
            CycNum f = m.at(i, c) * inv;
            for (int j = c; j < n; ++j) m.at(i, j) -= f * m.at(c, j);
        }
    }
    return det;
}

CycMatrix matrix_inverse(const CycMatrix& m) {
    if (m.rows() != m.cols()) throw NotInvertibleError("inverse: matrix not square");
    const int n = m.rows();
    CycMatrix aug(n, 2 * n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) aug.at(i, j) = m.at(i, j);
        aug.at(i, n + i) = CycNum(1);
    }
    std::vector<int> pivots;
    CycMatrix red = rref(std::move(aug), &pivots);
    if (static_cast<int>(pivots.size()) != n || pivots.back() != n - 1)
        throw NotInvertibleError("inverse: matrix is singular");
    CycMatrix out(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) out.at(i, j) = red.at(i, n + j);
    return out;
}

LinearSolution solve_linear(const CycMatrix& A, const CycMatrix& b) {
    if (A.rows() != b.rows()) throw InvalidArgumentError("solve_linear: row count mismatch");
    const int n = A.cols();
    CycMatrix aug(A.rows(), n + b.cols());
    for (int i = 0; i < A.rows(); ++i) {
        for (int j = 0; j < n; ++j) aug.at(i, j) = A.at(i, j);
        for (int j = 0; j < b.cols(); ++j) aug.at(i, n + j) = b.at(i, j);
    }
    std::vector<int> pivots;
    CycMatrix red = rref(std::move(aug), &pivots);

    LinearSolution sol;
    std::vector<int> a_pivots;
    for (int p : pivots) {
        if (p < n)
            a_pivots.push_back(p);
        else {
            sol.consistent = false;
            sol.rank = static_cast<int>(a_pivots.size());
            return sol; // a pivot landed in the right-hand block
        }
    }
    sol.consistent = true;
    sol.rank = static_cast<int>(a_pivots.size());

    sol.particular = CycMatrix(n, b.cols());
    for (size_t k = 0; k < a_pivots.size(); ++k)
        for (int j = 0; j < b.cols(); ++j)
            sol.particular.at(a_pivots[k], j) = red.at(static_cast<int>(k), n + j);

    std::vector<bool> is_pivot(n, false);
    for (int p : a_pivots) is_pivot[p] = true;
    std::vector<int> free_cols;
    for (int c = 0; c < n; ++c)
        if (!is_pivot[c]) free_cols.push_back(c);

    sol.nullspace = CycMatrix(n, static_cast<int>(free_cols.size()));
    for (size_t f = 0; f < free_cols.size(); ++f) {
        sol.nullspace.at(free_cols[f], static_cast<int>(f)) = CycNum(1);
        for (size_t k = 0; k < a_pivots.size(); ++k)
            sol.nullspace.at(a_pivots[k], static_cast<int>(f)) =
                -red.at(static_cast<int>(k), free_cols[f]);
    }
    return sol;
}

// --------------------------------------------------------------------------
// RowSpan

void RowSpan::reduce(std::vector<CycNum>& row) const {
    for (size_t k = 0; k < rows_.size(); ++k) {
        const CycNum& f = row[pivots_[k]];
        if (f.is_zero()) continue;
        CycNum c = f; // row[pivot] mutates below
        for (int j = 0; j < cols_; ++j) {
            if (rows_[k][j].is_zero()) continue;
            row[j] -= c * rows_[k][j];
        }
    }
}

bool RowSpan::add(std::vector<CycNum> row) {
    if (static_cast<int>(row.size()) != cols_)
        throw InvalidArgumentError("RowSpan::add: length mismatch");
    reduce(row);
    int p = -1;
    for (int j = 0; j < cols_; ++j) {
        if (!row[j].is_zero()) {
            p = j;
            break;
        }
    }
    if (p < 0) return false;
    CycNum inv = row[p].inverse();
    for (int j = p; j < cols_; ++j) row[j] *= inv;
    // eliminate the new pivot from the existing rows
    for (size_t k = 0; k < rows_.size(); ++k) {
        const CycNum& f = rows_[k][p];
        if (f.is_zero()) continue;
        CycNum c = f;
        for (int j = p; j < cols_; ++j) {
            if (row[j].is_zero()) continue;
            rows_[k][j] -= c * row[j];
        }
    }
    auto pos = std::upper_bound(pivots_.begin(), pivots_.end(), p);
    size_t idx = static_cast<size_t>(pos - pivots_.begin());
    pivots_.insert(pos, p);
    rows_.insert(rows_.begin() + idx, std::move(row));
    return true;
}

bool RowSpan::contains(std::vector<CycNum> row) const {
    if (static_cast<int>(row.size()) != cols_)
        throw InvalidArgumentError("RowSpan::contains: length mismatch");
    reduce(row);
    for (const auto& c : row)
        if (!c.is_zero()) return false;
    return true;
}

CycMatrix RowSpan::basis() const {
    CycMatrix out(rank(), cols_);
    for (int i = 0; i < out.rows(); ++i)
        for (int j = 0; j < cols_; ++j) out.at(i, j) = rows_[i][j];
    return out;
}

bool RowSpan::operator==(const RowSpan& o) const {
    return cols_ == o.cols_ && pivots_ == o.pivots_ && rows_ == o.rows_;
}

} // namespace galcur
