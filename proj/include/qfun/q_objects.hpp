#pragma once

#include "qfun/profile.hpp"
#include "qfun/rational_function.hpp"
#include "qfun/series.hpp"

#include <sstream>

namespace qfun {

// (a; base)_n = prod_{i=0}^{n-1} (1 - a * base^i)
inline Polynomial pochhammer(const Polynomial& a, const Polynomial& base, long long n) {
    if (n < 0) throw std::domain_error("negative Pochhammer length");
    Polynomial acc(1);
    Polynomial cur = a;
    for (long long i = 0; i < n; ++i) {
        acc = acc * (Polynomial(1) - cur);
        if (i + 1 < n) cur = cur * base;
    }
    return acc;
}

inline Polynomial pochhammer_q(long long n) { return pochhammer(P_q(), P_q(), n); }

// Gaussian binomial [top, bottom]_base, zero outside 0 <= bottom <= top.
inline Polynomial q_binomial(long long top, long long bottom, const Polynomial& base) {
    if (bottom < 0 || top < 0 || bottom > top) return Polynomial();
    bottom = std::min(bottom, top - bottom);
    // [top, bottom] = prod_{i=1}^{bottom} (1 - base^(top-bottom+i)) / (1 - base^i)
    Polynomial numer(1), denom(1);
    for (long long i = 1; i <= bottom; ++i) {
        numer = numer * (Polynomial(1) - base.pow(top - bottom + i));
        denom = denom * (Polynomial(1) - base.pow(i));
    }
    auto r = numer.exact_div(denom);
    if (!r) throw std::logic_error("q_binomial: inexact division");
    return *r;
}

inline Polynomial q_binomial(long long top, long long bottom) {
    return q_binomial(top, bottom, P_q());
}

// q-analog of the trinomial coefficient:
//   (L, b; a; base)_2 = sum_m base^(m(m+b)) [L; m, m+a, L-2m-a]
// with vanishing terms following the q-binomial zero convention.
inline Polynomial q_trinomial_round(long long L, long long b, long long a, const Polynomial& base) {
    if (L < 0) return Polynomial();
    Polynomial acc;
    for (long long m = std::max(0LL, -a);; ++m) {
        long long rest = L - 2 * m - a;
        if (rest < 0) break;
        // (base;base)_L / ((base;base)_m (base;base)_{m+a} (base;base)_rest)
        Polynomial t = q_binomial(L, m, base) * q_binomial(L - m, m + a, base);
        if (t.is_zero()) continue;
        long long e = m * (m + b);
        Polynomial pre;
        if (e >= 0)
            pre = base.pow(e);
        else
            pre = base.mono_pow(e);
        acc = acc + pre * t;
    }
    return acc;
}

inline Polynomial q_trinomial_round(long long L, long long b, long long a) {
    return q_trinomial_round(L, b, a, P_q());
}

namespace detail {
// q^((num/2)) for integer num, as an exact (possibly half-lattice) power.
inline Polynomial q_power_half_units(long long num) {
    if (num % 2 == 0) return P_q(num / 2);
    return Polynomial::q_power_half(num);
}
} // namespace detail

// T_n(L, a; q) = q^((L-a)(L+a-n)/2) * (L, a-n; a; 1/q)_2
inline Polynomial q_trinomial_T(long long n, long long L, long long a) {
    Polynomial inv_q = P_q(-1);
    Polynomial body = q_trinomial_round(L, a - n, a, inv_q);
    return detail::q_power_half_units((L - a) * (L + a - n)) * body;
}

// t_n(L, a; q) = q^(n(L-a)/2) * (L, a-n; a; q)_2
inline Polynomial q_trinomial_t(long long n, long long L, long long a) {
    Polynomial body = q_trinomial_round(L, a - n, a, P_q());
    return detail::q_power_half_units(n * (L - a)) * body;
}

// U_n(L, a; q) = T_n(L, a+1; q) + T_n(L, a; q)
inline Polynomial q_trinomial_U(long long n, long long L, long long a) {
    return q_trinomial_T(n, L, a + 1) + q_trinomial_T(n, L, a);
}

// V_n(L, a; q) = T_{n+1}(L, a+1; q) + q^((L-a)/2) T_n(L, a; q)
inline Polynomial q_trinomial_V(long long n, long long L, long long a) {
    return q_trinomial_T(n + 1, L, a + 1) + detail::q_power_half_units(L - a) * q_trinomial_T(n, L, a);
}

// ---- Borodin product --------------------------------------------------------

// Multiset of exponents e (1 <= e <= t) describing prod 1/(q^e; q^t)_inf.
struct ProductDescriptor {
    int modulus = 1;
    std::vector<int> exponents; // sorted, with multiplicity

    std::string str() const {
        std::ostringstream os;
        os << "1/(";
        for (std::size_t i = 0; i < exponents.size(); ++i) {
            if (i) os << ",";
            if (exponents[i] == 1)
                os << "q";
            else
                os << "q^" << exponents[i];
        }
        os << ";q";
        if (modulus != 1) os << "^" << modulus;
        os << ")_inf";
        return os.str();
    }
};

// Product evaluation of the cylindric generating function at z = 1 for a
// profile C: level t = k + |C|, one factor q^t, exponents m+s(i+1,j)+j-i and
// t-m+s(j,i-1)+j-i with s(i,j) = c_i + ... + c_j and s(i,j) = 0 for i > j.
inline ProductDescriptor borodin_product(const Profile& profile) {
    const auto& c = profile.parts;
    int k = profile.length();
    int t = profile.level();
    auto s = [&](int i, int j) {
        int acc = 0;
        for (int r = i; r <= j; ++r) acc += c[(std::size_t)(r - 1)];
        return acc; // empty when i > j
    };
    ProductDescriptor d;
    d.modulus = t;
    d.exponents.push_back(t);
    for (int i = 1; i <= k; ++i)
        for (int j = i; j <= k; ++j)
            for (int m = 1; m <= c[(std::size_t)(i - 1)]; ++m)
                d.exponents.push_back(m + s(i + 1, j) + j - i);
    for (int i = 2; i <= k; ++i)
        for (int j = 2; j <= i; ++j)
            for (int m = 1; m <= c[(std::size_t)(i - 1)]; ++m)
                d.exponents.push_back(t - m + s(j, i - 1) + j - i);
    std::sort(d.exponents.begin(), d.exponents.end());
    return d;
}

// q-expansion of prod 1/(q^e; q^t)_inf over the descriptor's exponents.
inline QSeries descriptor_series(const ProductDescriptor& d, long long trunc) {
    QSeries s = QSeries::one(trunc);
    for (int e : d.exponents)
        for (long long r = e; r <= trunc; r += d.modulus) s.div_binomial(r);
    return s;
}

// q-expansion of (q^e; q^t)_inf (as a multiplier; used for cross-checks).
inline QSeries eta_factor_series(long long e, long long t, long long trunc) {
    QSeries s = QSeries::one(trunc);
    for (long long r = e; r <= trunc; r += t) s.mul_binomial(r);
    return s;
}

// ---- series-to-product extraction -------------------------------------------

struct ProdMakeResult {
    std::vector<Rational> exponents; // e_1 .. e_order with f = prod (1-q^n)^(-e_n)
    bool integral = true;            // false -> not an eta-quotient truncation
};

// Extract exponents e_n with f = prod_{n>=1} (1 - q^n)^(-e_n) through q^order.
inline ProdMakeResult prod_make(const QSeries& f, long long order) {
    if (f.at(0) != 1) throw std::domain_error("prod_make requires constant term 1");
    if (order > f.trunc) throw std::domain_error("prod_make order exceeds series truncation");
    ProdMakeResult res;
    QSeries g = f;
    for (long long n = 1; n <= order; ++n) {
        Rational e = g.at(n);
        res.exponents.push_back(e);
        if (den(e) != 1) res.integral = false;
        if (e == 0) continue;
        if (den(e) == 1 && e > 0) {
            for (Integer i = 0; i < num(e); ++i) g.mul_binomial(n);
        } else if (den(e) == 1 && e < 0) {
            for (Integer i = 0; i < -num(e); ++i) g.div_binomial(n);
        } else {
            g.pow_binomial(n, e);
        }
    }
    return res;
}

// ---- Hirschhorn's triple sum -------------------------------------------------

// sum_{i,j,k>=0} a^i b^(n-i-j-k) c^j d^(k-j) base^(C(j+1,2)+C(k+1,2))
//                 [k+i, i] [n-i-j, k] [k, j]   (q-binomials in `base`)
inline RationalFunction hirschhorn_sum(const RationalFunction& a, const RationalFunction& b,
                                       const RationalFunction& c, const RationalFunction& d,
                                       long long n, const Polynomial& base) {
    if (n < 0) return RationalFunction();
    RationalFunction acc;
    for (long long i = 0; i <= n; ++i) {
        for (long long j = 0; i + j <= n; ++j) {
            for (long long k = j; i + j + k <= n; ++k) {
                Polynomial b1 = q_binomial(k + i, i, base);
                Polynomial b2 = q_binomial(n - i - j, k, base);
                Polynomial b3 = q_binomial(k, j, base);
                if (b1.is_zero() || b2.is_zero() || b3.is_zero()) continue;
                long long e = j * (j + 1) / 2 + k * (k + 1) / 2;
                RationalFunction term(b1 * b2 * b3 * base.pow(e));
                term = term * a.pow(i) * b.pow(n - i - j - k) * c.pow(j) * d.pow(k - j);
                acc = acc + term;
            }
        }
    }
    return acc;
}

} // namespace qfun
