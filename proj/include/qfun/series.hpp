#pragma once

#include "qfun/polynomial.hpp"

#include <climits>
#include <vector>

namespace qfun {

constexpr long long kExactOrder = LLONG_MAX;

// Truncate a coefficient polynomial at q-degree <= p (lattice aware).
// Returns true when something was dropped.
inline bool truncate_q_inplace(Polynomial& poly, long long p) {
    if (p == kExactOrder || poly.is_zero() || !poly.has_var("q")) return false;
    long long lattice_cap = p * poly.q_lattice_den();
    if (poly.degree("q") <= lattice_cap) return false;
    Polynomial kept;
    for (Exp e : poly.exponents_of("q")) {
        if (e <= lattice_cap) {
            Polynomial part = poly.coeff_of("q", e);
            Polynomial qe;
            if (poly.q_lattice_den() == 2)
                qe = Polynomial::q_power_half(e);
            else
                qe = P_q(e);
            kept = kept + part * qe;
        }
    }
    poly = kept;
    return true;
}

// Power series in one main variable with polynomial coefficients that do not
// contain the main variable. `q_order` is the q-degree through which the
// coefficients are reliable; kExactOrder means nothing was ever truncated.
struct TruncatedSeries {
    std::string main_var;
    std::vector<Polynomial> coeffs; // x^0 .. x^order
    long long q_order = kExactOrder;

    int order() const { return (int)coeffs.size() - 1; }
    bool exact() const { return q_order == kExactOrder; }

    const Polynomial& coeff(int n) const {
        static const Polynomial zero;
        if (n < 0 || n >= (int)coeffs.size()) return zero;
        return coeffs[(std::size_t)n];
    }

    bool is_zero() const {
        for (const auto& c : coeffs)
            if (!c.is_zero()) return false;
        return true;
    }
};

inline TruncatedSeries ts_zero(const std::string& v, int order) {
    return {v, std::vector<Polynomial>((std::size_t)order + 1), kExactOrder};
}

inline TruncatedSeries ts_constant(const Polynomial& p, const std::string& v, int order) {
    if (p.has_var(v)) throw std::domain_error("constant coefficient contains the series variable");
    TruncatedSeries s = ts_zero(v, order);
    s.coeffs[0] = p;
    return s;
}

inline TruncatedSeries ts_from_poly(const Polynomial& p, const std::string& v, int order) {
    if (p.low_degree(v) < 0) throw std::domain_error("negative power of series variable");
    TruncatedSeries s = ts_zero(v, order);
    for (Exp e : p.exponents_of(v))
        if (e <= order) s.coeffs[(std::size_t)e] = p.coeff_of(v, e);
    return s;
}

inline void ts_truncate(TruncatedSeries& s) {
    if (s.exact()) return;
    for (auto& c : s.coeffs) truncate_q_inplace(c, s.q_order);
}

inline TruncatedSeries ts_add(const TruncatedSeries& a, const TruncatedSeries& b) {
    TruncatedSeries r = ts_zero(a.main_var, std::min(a.order(), b.order()));
    r.q_order = std::min(a.q_order, b.q_order);
    for (int n = 0; n <= r.order(); ++n) r.coeffs[(std::size_t)n] = a.coeff(n) + b.coeff(n);
    ts_truncate(r);
    return r;
}

inline TruncatedSeries ts_neg(const TruncatedSeries& a) {
    TruncatedSeries r = a;
    for (auto& c : r.coeffs) c = -c;
    return r;
}

inline TruncatedSeries ts_sub(const TruncatedSeries& a, const TruncatedSeries& b) {
    return ts_add(a, ts_neg(b));
}

inline TruncatedSeries ts_scale(const TruncatedSeries& a, const Polynomial& p) {
    TruncatedSeries r = a;
    for (auto& c : r.coeffs) c = c * p;
    ts_truncate(r);
    return r;
}

inline TruncatedSeries ts_mul(const TruncatedSeries& a, const TruncatedSeries& b) {
    TruncatedSeries r = ts_zero(a.main_var, std::min(a.order(), b.order()));
    r.q_order = std::min(a.q_order, b.q_order);
    for (int n = 0; n <= r.order(); ++n) {
        Polynomial acc;
        for (int k = 0; k <= n; ++k) {
            if (a.coeff(k).is_zero() || b.coeff(n - k).is_zero()) continue;
            acc = acc + a.coeff(k) * b.coeff(n - k);
        }
        r.coeffs[(std::size_t)n] = std::move(acc);
    }
    ts_truncate(r);
    return r;
}

// main_var -> c * q^m * main_var  (coefficient reindexing under a q-shift)
inline TruncatedSeries ts_shift_var(const TruncatedSeries& a, const Rational& c, long long m) {
    TruncatedSeries r = a;
    for (int n = 0; n <= r.order(); ++n)
        r.coeffs[(std::size_t)n] = r.coeffs[(std::size_t)n] * rpow(c, n) * P_q(m * n);
    ts_truncate(r);
    return r;
}

// Multiplicative inverse; requires an invertible constant coefficient whose
// graded-lex minimal term divides away to 1 + (positive q-degree).
inline TruncatedSeries ts_invert(const TruncatedSeries& a, long long q_cap) {
    if (a.coeff(0).is_zero()) throw std::domain_error("series inversion: zero constant term");
    const Polynomial& c0 = a.coeffs[0];
    // graded-lex minimal monomial of c0
    Polynomial m;
    {
        std::vector<Exp> best;
        Rational cbest;
        bool first = true;
        for (const auto& [e, c] : c0.terms()) {
            if (first || Polynomial::grlex_less(e, best)) {
                best = e;
                cbest = c;
                first = false;
            }
        }
        Polynomial mono(cbest);
        const auto& vs = c0.vars();
        for (std::size_t i = 0; i < vs.size(); ++i) {
            if (best[i] == 0) continue;
            if (vs[i] == "q" && c0.q_lattice_den() == 2)
                mono = mono * Polynomial::q_power_half(best[i]);
            else
                mono = mono * Polynomial::variable(vs[i], best[i]);
        }
        m = mono;
    }
    Polynomial w_num = c0 - m; // c0 = m (1 + w), w = w_num / m
    bool exact_inverse = w_num.is_zero();
    long long p = q_cap;
    TruncatedSeries r = ts_zero(a.main_var, a.order());
    r.q_order = exact_inverse ? a.q_order : std::min(a.q_order, p);

    Polynomial m_inv = m.mono_pow(-1);
    Polynomial inv0;
    if (exact_inverse) {
        inv0 = m_inv;
    } else {
        Polynomial w = w_num * m_inv;
        if (!w.has_var("q") || w.low_degree("q") < 1)
            throw std::domain_error("series inversion: constant coefficient not q-adically invertible");
        Polynomial term(1), acc(1);
        for (long long j = 1;; ++j) {
            term = -(term * w);
            truncate_q_inplace(term, r.q_order);
            if (term.is_zero()) break;
            acc = acc + term;
            if (j > 4 * (r.q_order + 2)) throw std::domain_error("series inversion did not terminate");
        }
        inv0 = acc * m_inv;
        truncate_q_inplace(inv0, r.q_order);
    }
    r.coeffs[0] = inv0;
    for (int n = 1; n <= r.order(); ++n) {
        Polynomial s;
        for (int k = 1; k <= n; ++k) {
            if (a.coeff(k).is_zero() || r.coeffs[(std::size_t)(n - k)].is_zero()) continue;
            s = s + a.coeff(k) * r.coeffs[(std::size_t)(n - k)];
        }
        Polynomial c = -(inv0 * s);
        truncate_q_inplace(c, r.q_order);
        r.coeffs[(std::size_t)n] = std::move(c);
    }
    return r;
}

inline TruncatedSeries ts_pow(const TruncatedSeries& a, long long e, long long q_cap) {
    if (e < 0) return ts_pow(ts_invert(a, q_cap), -e, q_cap);
    TruncatedSeries acc = ts_constant(Polynomial(1), a.main_var, a.order());
    acc.q_order = a.q_order;
    TruncatedSeries b = a;
    unsigned long long n = (unsigned long long)e;
    while (n) {
        if (n & 1) acc = ts_mul(acc, b);
        if (n >>= 1) b = ts_mul(b, b);
    }
    return acc;
}

// ---- dense univariate q-series over Q --------------------------------------

// Power series in q, truncated inclusively at `trunc`.
struct QSeries {
    long long trunc = 0;
    std::vector<Rational> c; // index = exponent, size trunc+1

    explicit QSeries(long long t = 0) : trunc(t), c((std::size_t)t + 1) {}

    static QSeries one(long long t) {
        QSeries s(t);
        s.c[0] = 1;
        return s;
    }

    Rational at(long long e) const {
        if (e < 0 || e > trunc) return Rational(0);
        return c[(std::size_t)e];
    }

    // multiply by (1 - s q^r)
    void mul_binomial(long long r, const Rational& s = Rational(1)) {
        if (r <= 0) throw std::domain_error("factor exponent must be positive");
        for (long long t = trunc; t >= r; --t) c[(std::size_t)t] -= s * c[(std::size_t)(t - r)];
    }

    // divide by (1 - s q^r)
    void div_binomial(long long r, const Rational& s = Rational(1)) {
        if (r <= 0) throw std::domain_error("factor exponent must be positive");
        for (long long t = r; t <= trunc; ++t) c[(std::size_t)t] += s * c[(std::size_t)(t - r)];
    }

    // multiply by (1 - q^r)^e for rational e via the binomial series
    void pow_binomial(long long r, const Rational& e) {
        if (r <= 0) throw std::domain_error("factor exponent must be positive");
        QSeries out(trunc);
        Rational binom(1);
        long long jmax = trunc / r;
        for (long long j = 0; j <= jmax; ++j) {
            Rational coef = binom * (j % 2 ? Rational(-1) : Rational(1));
            for (long long t = 0; t + j * r <= trunc; ++t)
                out.c[(std::size_t)(t + j * r)] += coef * c[(std::size_t)t];
            binom = binom * (e - j) / (j + 1);
        }
        c = std::move(out.c);
    }

    friend QSeries operator*(const QSeries& a, const QSeries& b) {
        QSeries r(std::min(a.trunc, b.trunc));
        for (long long i = 0; i <= r.trunc; ++i) {
            if (a.c[(std::size_t)i] == 0) continue;
            for (long long j = 0; i + j <= r.trunc && j <= b.trunc; ++j) {
                if (b.c[(std::size_t)j] == 0) continue;
                r.c[(std::size_t)(i + j)] += a.c[(std::size_t)i] * b.c[(std::size_t)j];
            }
        }
        return r;
    }

    friend bool operator==(const QSeries& a, const QSeries& b) {
        if (a.trunc != b.trunc) return false;
        return a.c == b.c;
    }
};

// q-expansion of a polynomial in the single variable q.
inline QSeries qseries_of_poly(const Polynomial& p, long long trunc) {
    QSeries s(trunc);
    if (p.is_zero()) return s;
    for (const auto& v : p.vars())
        if (v != "q") throw std::domain_error("polynomial is not univariate in q");
    if (p.q_lattice_den() != 1) throw std::domain_error("half powers not representable as a q-series");
    if (p.low_degree("q") < 0) throw std::domain_error("Laurent polynomial is not a power series");
    for (Exp e : p.exponents_of("q")) {
        if (e <= trunc) s.c[(std::size_t)e] = p.coeff_of("q", e).constant_value();
    }
    return s;
}

} // namespace qfun
