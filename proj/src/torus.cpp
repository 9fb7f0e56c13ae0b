#include "galcur/torus.hpp"

#include <algorithm>

namespace galcur {

LaurentPoly LaurentPoly::constant(int num_vars, const CycNum& c) {
    LaurentPoly p(num_vars);
    p.set_coeff(std::vector<int>(num_vars, 0), c);
    return p;
}

LaurentPoly LaurentPoly::monomial(int num_vars, const std::vector<int>& exp, const CycNum& c) {
    if (static_cast<int>(exp.size()) != num_vars)
        throw InvalidArgumentError("monomial: exponent length mismatch");
    LaurentPoly p(num_vars);
    p.set_coeff(exp, c);
    return p;
}

LaurentPoly LaurentPoly::variable(int num_vars, int i) {
    if (i < 0 || i >= num_vars) throw InvalidArgumentError("variable index out of range");
    std::vector<int> exp(num_vars, 0);
    exp[i] = 1;
    return monomial(num_vars, exp, CycNum(1));
}

CycNum LaurentPoly::coeff(const std::vector<int>& exp) const {
    auto it = terms_.find(exp);
    return it == terms_.end() ? CycNum(0) : it->second;
}

void LaurentPoly::set_coeff(const std::vector<int>& exp, const CycNum& c) {
    if (static_cast<int>(exp.size()) != nvars_)
        throw InvalidArgumentError("set_coeff: exponent length mismatch");
    if (c.is_zero())
        terms_.erase(exp);
    else
        terms_[exp] = c;
}

LaurentPoly LaurentPoly::operator-() const {
    LaurentPoly out(nvars_);
    for (const auto& [e, c] : terms_) out.terms_.emplace(e, -c);
    return out;
}

LaurentPoly& LaurentPoly::operator+=(const LaurentPoly& o) {
    if (nvars_ != o.nvars_) throw InvalidArgumentError("poly addition: variable count mismatch");
    for (const auto& [e, c] : o.terms_) {
        auto it = terms_.find(e);
        if (it == terms_.end()) {
            terms_.emplace(e, c);
        } else {
            it->second += c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }
    return *this;
}

LaurentPoly& LaurentPoly::operator-=(const LaurentPoly& o) {
    if (nvars_ != o.nvars_)
        throw InvalidArgumentError("poly subtraction: variable count mismatch");
    for (const auto& [e, c] : o.terms_) {
        auto it = terms_.find(e);
        if (it == terms_.end()) {
            terms_.emplace(e, -c);
        } else {
            it->second -= c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }
    return *this;
}

LaurentPoly LaurentPoly::operator*(const LaurentPoly& o) const {
    if (nvars_ != o.nvars_)
        throw InvalidArgumentError("poly product: variable count mismatch");
    LaurentPoly out(nvars_);
    std::vector<int> e(nvars_);
    for (const auto& [e1, c1] : terms_) {
        for (const auto& [e2, c2] : o.terms_) {
            for (int i = 0; i < nvars_; ++i) e[i] = e1[i] + e2[i];
            auto it = out.terms_.find(e);
            if (it == out.terms_.end()) {
                out.terms_.emplace(e, c1 * c2);
            } else {
                it->second += c1 * c2;
            }
        }
    }
    for (auto it = out.terms_.begin(); it != out.terms_.end();) {
        it = it->second.is_zero() ? out.terms_.erase(it) : std::next(it);
    }
    return out;
}

LaurentPoly LaurentPoly::scaled(const CycNum& c) const {
    LaurentPoly out(nvars_);
    if (c.is_zero()) return out;
    for (const auto& [e, v] : terms_) out.terms_.emplace(e, v * c);
    return out;
}

LaurentPoly LaurentPoly::shifted(const std::vector<int>& exp) const {
    if (static_cast<int>(exp.size()) != nvars_)
        throw InvalidArgumentError("shifted: exponent length mismatch");
    LaurentPoly out(nvars_);
    std::vector<int> e(nvars_);
    for (const auto& [e1, c] : terms_) {
        for (int i = 0; i < nvars_; ++i) e[i] = e1[i] + exp[i];
        out.terms_.emplace(e, c);
    }
    return out;
}

// --------------------------------------------------------------------------

ExtensionSpec::ExtensionSpec(int nvars, std::vector<int> orders_in, std::vector<CycNum> roots_in)
    : num_vars(nvars), orders(std::move(orders_in)), roots(std::move(roots_in)) {
    if (num_vars < 0) throw InvalidArgumentError("ExtensionSpec: negative variable count");
    if (static_cast<int>(orders.size()) != num_vars ||
        static_cast<int>(roots.size()) != num_vars)
        throw InvalidArgumentError("ExtensionSpec: orders/roots must match variable count");
    for (int i = 0; i < num_vars; ++i) {
        if (orders[i] < 1) throw InvalidArgumentError("ExtensionSpec: orders must be positive");
        if (roots[i].pow(orders[i]) != CycNum(1))
            throw InvalidArgumentError("ExtensionSpec: root is not of the stated order");
        for (int d : divisors(orders[i])) {
            if (d < orders[i] && roots[i].pow(d) == CycNum(1))
                throw InvalidArgumentError("ExtensionSpec: root is not primitive");
        }
    }
}

long ExtensionSpec::group_size() const {
    long n = 1;
    for (int m : orders) n *= m;
    return n;
}

GaloisElement galois_identity(const ExtensionSpec& spec) {
    return GaloisElement{std::vector<int>(spec.num_vars, 0)};
}

namespace {

void check_element(const ExtensionSpec& spec, const GaloisElement& g) {
    if (static_cast<int>(g.exponents.size()) != spec.num_vars)
        throw InvalidArgumentError("galois element: exponent length mismatch");
    for (int i = 0; i < spec.num_vars; ++i) {
        if (g.exponents[i] < 0 || g.exponents[i] >= spec.orders[i])
            throw InvalidArgumentError("galois element: exponent out of range");
    }
}

} // namespace

GaloisElement galois_compose(const ExtensionSpec& spec, const GaloisElement& a,
                             const GaloisElement& b) {
    check_element(spec, a);
    check_element(spec, b);
    GaloisElement out;
    out.exponents.resize(spec.num_vars);
    for (int i = 0; i < spec.num_vars; ++i)
        out.exponents[i] = (a.exponents[i] + b.exponents[i]) % spec.orders[i];
    return out;
}

GaloisElement galois_inverse(const ExtensionSpec& spec, const GaloisElement& a) {
    check_element(spec, a);
    GaloisElement out;
    out.exponents.resize(spec.num_vars);
    for (int i = 0; i < spec.num_vars; ++i)
        out.exponents[i] = (spec.orders[i] - a.exponents[i]) % spec.orders[i];
    return out;
}

std::vector<GaloisElement> galois_group(const ExtensionSpec& spec) {
    std::vector<GaloisElement> out;
    out.reserve(static_cast<size_t>(spec.group_size()));
    GaloisElement g = galois_identity(spec);
    while (true) {
        out.push_back(g);
        int pos = spec.num_vars - 1;
        while (pos >= 0) {
            if (++g.exponents[pos] < spec.orders[pos]) break;
            g.exponents[pos] = 0;
            --pos;
        }
        if (pos < 0) break;
    }
    return out;
}

// --------------------------------------------------------------------------

TorusPoint::TorusPoint(std::vector<CycNum> coords_in) : coords(std::move(coords_in)) {
    for (const auto& c : coords) {
        if (c.is_zero())
            throw InvalidArgumentError("TorusPoint: coordinates must be nonzero");
    }
}

int compare_points(const TorusPoint& a, const TorusPoint& b) {
    if (a.coords.size() != b.coords.size())
        return a.coords.size() < b.coords.size() ? -1 : 1;
    for (size_t i = 0; i < a.coords.size(); ++i) {
        int c = CycNum::compare(a.coords[i], b.coords[i]);
        if (c != 0) return c;
    }
    return 0;
}

LaurentPoly galois_act_poly(const ExtensionSpec& spec, const GaloisElement& gamma,
                            const LaurentPoly& s) {
    if (s.num_vars() != spec.num_vars)
        throw InvalidArgumentError("galois_act_poly: variable count mismatch");
    check_element(spec, gamma);
    LaurentPoly out(spec.num_vars);
    for (const auto& [e, c] : s.terms()) {
        CycNum factor(1);
        for (int i = 0; i < spec.num_vars; ++i) {
            long k = static_cast<long>(gamma.exponents[i]) * e[i];
            if (k != 0) factor *= spec.roots[i].pow(k);
        }
        out.set_coeff(e, c * factor);
    }
    return out;
}

TorusPoint galois_act_point(const ExtensionSpec& spec, const GaloisElement& gamma,
                            const TorusPoint& a) {
    if (static_cast<int>(a.coords.size()) != spec.num_vars)
        throw InvalidArgumentError("galois_act_point: coordinate count mismatch");
    check_element(spec, gamma);
    std::vector<CycNum> out(a.coords.size());
    for (int i = 0; i < spec.num_vars; ++i)
        out[i] = spec.roots[i].pow(-static_cast<long>(gamma.exponents[i])) * a.coords[i];
    return TorusPoint(std::move(out));
}

CycNum eval_poly(const LaurentPoly& s, const TorusPoint& a) {
    if (s.num_vars() != static_cast<int>(a.coords.size()))
        throw InvalidArgumentError("eval_poly: variable count mismatch");
    CycNum acc(0);
    for (const auto& [e, c] : s.terms()) {
        CycNum term = c;
        for (size_t i = 0; i < a.coords.size(); ++i) {
            if (e[i] != 0) term *= a.coords[i].pow(e[i]);
        }
        acc += term;
    }
    return acc;
}

std::vector<TorusPoint> fiber(const ExtensionSpec& spec, const TorusPoint& a) {
    std::vector<TorusPoint> orbit;
    for (const auto& g : galois_group(spec)) {
        TorusPoint p = galois_act_point(spec, g, a);
        bool seen = false;
        for (const auto& q : orbit) {
            if (compare_points(p, q) == 0) {
                seen = true;
                break;
            }
        }
        if (!seen) orbit.push_back(std::move(p));
    }
    std::sort(orbit.begin(), orbit.end(),
              [](const TorusPoint& x, const TorusPoint& y) { return compare_points(x, y) < 0; });
    return orbit;
}

std::vector<CycNum> fiber_key(const ExtensionSpec& spec, const TorusPoint& a) {
    if (static_cast<int>(a.coords.size()) != spec.num_vars)
        throw InvalidArgumentError("fiber_key: coordinate count mismatch");
    std::vector<CycNum> key(a.coords.size());
    for (int i = 0; i < spec.num_vars; ++i) key[i] = a.coords[i].pow(spec.orders[i]);
    return key;
}

bool in_R(const ExtensionSpec& spec, const LaurentPoly& s) {
    if (s.num_vars() != spec.num_vars)
        throw InvalidArgumentError("in_R: variable count mismatch");
    for (const auto& [e, c] : s.terms()) {
        for (int i = 0; i < spec.num_vars; ++i) {
            if (e[i] % spec.orders[i] != 0) return false;
        }
    }
    return true;
}

bool member_MS(const ExtensionSpec& spec, const LaurentPoly& s, const TorusPoint& a) {
    for (const auto& p : fiber(spec, a)) {
        if (!eval_poly(s, p).is_zero()) return false;
    }
    return true;
}

} // namespace galcur
