#pragma once

#include "qfun/ore.hpp"
#include "qfun/q_objects.hpp"

#include <map>
#include <numeric>
#include <sstream>

namespace qfun {

// ---- q^(affine) rendering ----------------------------------------------------

// Render a monomial coefficient of a sequence term: Qv^t q^e rest -> pieces.
// Returns {prefix_factors, q_affine_suffix}; see recurrence_to_string.
inline std::string affine_q_string(Exp t, Exp e, const std::string& letter) {
    std::ostringstream os;
    os << "q^(";
    if (t != 0) {
        if (t == -1)
            os << "-";
        else if (t != 1)
            os << t << "*";
        os << letter;
        if (e > 0) os << "+" << e;
        if (e < 0) os << "-" << -e;
    } else {
        os << e;
    }
    os << ")";
    std::string s = os.str();
    if (t == 0 && e == 1) return "q";
    if (t == 1 && e == 0) return "q^" + letter;
    return s;
}

// ---- the three equation forms -------------------------------------------------

// Linear q-shift equation  sum_i p_i(x) F(q^(s*i) x) + boundary + inhom = 0.
struct ShiftEquation {
    std::string unknown = "F";
    std::string var = "x";
    int stride = 1;
    std::map<int, Polynomial> terms;               // shift power -> coefficient
    std::map<int, RationalFunction> boundary;      // j -> coeff of <x^j>F
    Polynomial inhomogeneous;

    int max_shift() const { return terms.empty() ? 0 : terms.rbegin()->first; }
    int min_shift() const { return terms.empty() ? 0 : terms.begin()->first; }

    void drop_zero_terms() {
        for (auto it = terms.begin(); it != terms.end();)
            it = it->second.is_zero() ? terms.erase(it) : std::next(it);
        for (auto it = boundary.begin(); it != boundary.end();)
            it = it->second.is_zero() ? boundary.erase(it) : std::next(it);
    }

    // Shift so the lowest shift power is zero, clear Laurent x powers, and
    // fold a common gcd of the shifts into the stride.
    void normalize_shifts() {
        drop_zero_terms();
        if (terms.empty()) return;
        int lo = min_shift();
        if (lo != 0) {
            std::map<int, Polynomial> t2;
            Polynomial sub = P_q((Exp)stride * (-lo)) * Polynomial::variable(var);
            for (auto& [i, p] : terms) t2[i - lo] = p.subst(var, sub);
            terms = std::move(t2);
            if (!inhomogeneous.is_zero()) inhomogeneous = inhomogeneous.subst(var, sub);
            if (!boundary.empty())
                throw std::domain_error("cannot renormalize shifts under boundary terms");
        }
        int g = 0;
        for (const auto& [i, p] : terms) g = std::gcd(g, i);
        if (g > 1) {
            std::map<int, Polynomial> t2;
            for (auto& [i, p] : terms) t2[i / g] = p;
            terms = std::move(t2);
            stride *= g;
        }
        Exp xlo = 0;
        for (const auto& [i, p] : terms) xlo = std::min(xlo, p.low_degree(var));
        if (!inhomogeneous.is_zero()) xlo = std::min(xlo, inhomogeneous.low_degree(var));
        if (xlo < 0) {
            Polynomial m = Polynomial::variable(var, -xlo);
            for (auto& [i, p] : terms) p = p * m;
            if (!inhomogeneous.is_zero()) inhomogeneous = inhomogeneous * m;
            for (auto& [j, c] : boundary) c = c * RationalFunction(m);
        }
    }

    // Divide out common polynomial content of the main terms.
    ShiftEquation content_normalized(bool fix_sign = true) const {
        ShiftEquation r = *this;
        r.drop_zero_terms();
        if (r.terms.empty()) return r;
        Polynomial g;
        for (const auto& [i, p] : r.terms) g = g.is_zero() ? p : Polynomial::gcd(g, p);
        if (!r.inhomogeneous.is_zero()) g = Polynomial::gcd(g, r.inhomogeneous);
        if (!g.is_one()) {
            for (auto& [i, p] : r.terms) p = *p.exact_div(g);
            if (!r.inhomogeneous.is_zero()) r.inhomogeneous = *r.inhomogeneous.exact_div(g);
            for (auto& [j, c] : r.boundary) c = c / RationalFunction(g);
        }
        Rational rc(0);
        for (const auto& [i, p] : r.terms) {
            Rational c = p.content();
            rc = rc == 0 ? c : Rational(igcd(num(rc) * den(c), num(c) * den(rc)), den(rc) * den(c));
        }
        if (rc != 0 && rc != 1) {
            for (auto& [i, p] : r.terms) p = p * (Rational(1) / rc);
            if (!r.inhomogeneous.is_zero()) r.inhomogeneous = r.inhomogeneous * (Rational(1) / rc);
            for (auto& [j, c] : r.boundary) c = c / RationalFunction(Polynomial(rc));
        }
        if (fix_sign && r.terms.rbegin()->second.leading_coefficient() < 0) {
            for (auto& [i, p] : r.terms) p = -p;
            r.inhomogeneous = -r.inhomogeneous;
            for (auto& [j, c] : r.boundary) c = -c;
        }
        return r;
    }
};

// Linear q-recurrence: operator in Qn applied to a(n), valid for n >= valid_from.
struct Recurrence {
    std::string unknown = "a";
    OreOperator op = OreOperator::zero("Qn");
    int valid_from = 0;
};

// Linear q-differential equation  sum_i p_i(x) F^(i)(x) + init terms = 0,
// with the q-derivative (F(x) - F(qx)) / (x (1-q)).
struct DifferentialEquation {
    std::string unknown = "F";
    std::string var = "x";
    std::map<int, Polynomial> terms;          // derivative order -> coefficient
    std::map<int, RationalFunction> init_terms; // j -> coeff of F^(j)(0)

    void drop_zero_terms() {
        for (auto it = terms.begin(); it != terms.end();)
            it = it->second.is_zero() ? terms.erase(it) : std::next(it);
        for (auto it = init_terms.begin(); it != init_terms.end();)
            it = it->second.is_zero() ? init_terms.erase(it) : std::next(it);
    }
};

// ---- qSE -> qRE ---------------------------------------------------------------

inline Recurrence se_to_re(const ShiftEquation& input, const std::string& seq_unknown) {
    ShiftEquation se = input;
    if (!se.boundary.empty())
        throw std::domain_error("shift equation with boundary terms cannot become a plain recurrence");
    se.normalize_shifts();
    if (se.terms.empty()) throw std::domain_error("empty shift equation");
    if (!se.inhomogeneous.is_zero())
        throw std::domain_error("inhomogeneous shift equations are not convertible here");
    Exp m_top = 0;
    for (const auto& [i, p] : se.terms) m_top = std::max(m_top, p.degree(se.var));
    // coefficient of a(n+u): sum_i coeff_x(p_i, M-u) q^(s*i*u) Qn^(s*i)
    std::vector<Polynomial> r((std::size_t)m_top + 1);
    for (const auto& [i, p] : se.terms) {
        for (Exp m : p.exponents_of(se.var)) {
            Exp u = m_top - m;
            Polynomial c = p.coeff_of(se.var, m);
            Exp siu = (Exp)se.stride * i * u;
            Exp si = (Exp)se.stride * i;
            r[(std::size_t)u] = r[(std::size_t)u] + c * P_q(siu) * Polynomial::variable("Qn", si);
        }
    }
    // strip zero low coefficients; rebase the relation at the lowest term
    std::size_t lo = 0;
    while (lo < r.size() && r[lo].is_zero()) ++lo;
    if (lo >= r.size()) throw std::domain_error("shift equation collapsed to zero");
    if (lo > 0) {
        std::vector<Polynomial> r2(r.begin() + (long)lo, r.end());
        for (auto& c : r2)
            if (!c.is_zero() && c.has_var("Qn"))
                c = c.subst("Qn", P_q(-(Exp)lo) * Polynomial::variable("Qn"));
        Recurrence rec;
        rec.unknown = seq_unknown;
        rec.op = OreOperator("Qn", 1, std::move(r2));
        rec.valid_from = (int)lo;
        return rec;
    }
    Recurrence rec;
    rec.unknown = seq_unknown;
    rec.op = OreOperator("Qn", 1, std::move(r));
    rec.valid_from = 0;
    return rec;
}

// ---- qRE -> qSE ---------------------------------------------------------------

inline ShiftEquation re_to_se(const Recurrence& rec, const std::string& func_unknown,
                              const std::string& var = "x") {
    if (rec.op.is_zero()) throw std::domain_error("zero recurrence");
    const OreOperator& op = rec.op;
    int s = op.stride();
    int ord = op.order();
    // clear negative Qn powers first
    Exp qn_lo = 0;
    for (int i = 0; i <= ord; ++i) qn_lo = std::min(qn_lo, op.coeff(i).low_degree(op.var()));
    ShiftEquation se;
    se.unknown = func_unknown;
    se.var = var;
    se.stride = 1;
    std::map<int, Polynomial> acc;
    std::map<int, RationalFunction> bnd;
    for (int i = 0; i <= ord; ++i) {
        Polynomial p = op.coeff(i);
        if (p.is_zero()) continue;
        if (qn_lo < 0) p = p * Polynomial::variable(op.var(), -qn_lo);
        for (Exp t : p.exponents_of(op.var())) {
            Polynomial rho = p.coeff_of(op.var(), t); // in q and parameters
            long long si = (long long)s * i;
            // rho q^(-t*si) x^(s*ord - si) F(q^t x)
            Polynomial mono = Polynomial::variable(var, (Exp)s * ord - si);
            Polynomial qfac = P_q(-(Exp)t * si);
            Polynomial main = rho * mono * qfac;
            acc[(int)t] = (acc.count((int)t) ? acc[(int)t] : Polynomial()) + main;
            for (long long m = 0; m < si; ++m) {
                // -rho q^(t(m-si)) x^(m + s*ord - si) <x^m>F
                Polynomial bterm = rho * P_q((Exp)t * (m - si)) *
                                   Polynomial::variable(var, (Exp)(m + (long long)s * ord - si));
                RationalFunction cur = bnd.count((int)m) ? bnd[(int)m] : RationalFunction();
                bnd[(int)m] = cur - RationalFunction(bterm);
            }
        }
    }
    se.terms.clear();
    for (auto& [t, p] : acc)
        if (!p.is_zero()) se.terms[t] = p;
    se.boundary = std::move(bnd);
    // fold gcd of shifts into stride (boundary terms are shift-independent)
    int g = 0;
    for (const auto& [i, p] : se.terms) g = std::gcd(g, i);
    if (g > 1) {
        std::map<int, Polynomial> t2;
        for (auto& [i, p] : se.terms) t2[i / g] = p;
        se.terms = std::move(t2);
        se.stride = g;
    }
    return se;
}

// ---- qSE -> qDE ---------------------------------------------------------------

// [j]_q! as a polynomial in q.
inline Polynomial q_factorial(long long j) {
    Polynomial acc(1);
    for (long long i = 1; i <= j; ++i) {
        // [i]_q = 1 + q + ... + q^(i-1)
        Polynomial bracket;
        for (long long t = 0; t < i; ++t) bracket = bracket + P_q(t);
        acc = acc * bracket;
    }
    return acc;
}

inline DifferentialEquation se_to_de(const ShiftEquation& input, const std::string& unknown) {
    ShiftEquation se = input;
    se.drop_zero_terms();
    if (se.stride != 1 && se.max_shift() > 0) {
        // a stride-s equation is a stride-1 equation with sparse shifts
        std::map<int, Polynomial> t2;
        for (auto& [i, p] : se.terms) t2[i * se.stride] = p;
        se.terms = std::move(t2);
        se.stride = 1;
    }
    if (se.min_shift() < 0) se.normalize_shifts();
    const std::string& x = se.var;
    int top = se.max_shift();
    // c[i][j]: F(q^j x) = sum_i c[i][j](x) (D^i F)(x)
    std::vector<std::vector<Polynomial>> c((std::size_t)top + 1,
                                           std::vector<Polynomial>((std::size_t)top + 1));
    c[0][0] = Polynomial(1);
    Polynomial qx = P_q() * Polynomial::variable(x);
    Polynomial neg_x_1mq = -(Polynomial::variable(x) * (Polynomial(1) - P_q()));
    for (int j = 0; j < top; ++j) {
        for (int i = 0; i <= j; ++i) {
            Polynomial cq = c[(std::size_t)i][(std::size_t)j].subst(x, qx);
            c[(std::size_t)i][(std::size_t)(j + 1)] = c[(std::size_t)i][(std::size_t)(j + 1)] + cq;
            c[(std::size_t)(i + 1)][(std::size_t)(j + 1)] =
                c[(std::size_t)(i + 1)][(std::size_t)(j + 1)] + neg_x_1mq * cq;
        }
    }
    DifferentialEquation de;
    de.unknown = unknown;
    de.var = x;
    for (const auto& [j, p] : se.terms) {
        for (int i = 0; i <= j; ++i) {
            Polynomial add = p * c[(std::size_t)i][(std::size_t)j];
            if (add.is_zero()) continue;
            auto it = de.terms.find(i);
            if (it == de.terms.end())
                de.terms[i] = add;
            else
                it->second = it->second + add;
        }
    }
    de.drop_zero_terms();
    // boundary <x^j>F = F^(j)(0) / [j]_q!
    for (const auto& [j, b] : se.boundary)
        de.init_terms[j] = b / RationalFunction(q_factorial(j));
    return de;
}

// ---- qDE -> qSE ---------------------------------------------------------------

inline RationalFunction q_derivative(const RationalFunction& f, const std::string& x) {
    RationalFunction fqx = f.subst(x, RationalFunction(P_q() * Polynomial::variable(x)));
    RationalFunction denom(Polynomial::variable(x) * (Polynomial(1) - P_q()));
    return (f - fqx) / denom;
}

inline ShiftEquation de_to_se(const DifferentialEquation& de_in, const std::string& unknown) {
    DifferentialEquation de = de_in;
    de.drop_zero_terms();
    if (de.terms.empty()) throw std::domain_error("empty differential equation");
    const std::string& x = de.var;
    int top = de.terms.rbegin()->first;
    RationalFunction inv_x1mq =
        RationalFunction(Polynomial(1), Polynomial::variable(x) * (Polynomial(1) - P_q()));
    // d[i][j]: D^i F = sum_j d[i][j](x) F(q^j x)
    std::vector<std::vector<RationalFunction>> d((std::size_t)top + 1,
                                                 std::vector<RationalFunction>((std::size_t)top + 1));
    d[0][0] = RationalFunction(Polynomial(1));
    for (int i = 0; i < top; ++i) {
        for (int j = 0; j <= i; ++j) {
            const RationalFunction& f = d[(std::size_t)i][(std::size_t)j];
            if (f.is_zero()) continue;
            d[(std::size_t)(i + 1)][(std::size_t)j] =
                d[(std::size_t)(i + 1)][(std::size_t)j] + f * inv_x1mq;
            d[(std::size_t)(i + 1)][(std::size_t)(j + 1)] =
                d[(std::size_t)(i + 1)][(std::size_t)(j + 1)] - f * inv_x1mq + q_derivative(f, x);
        }
    }
    std::vector<RationalFunction> cs((std::size_t)top + 1);
    for (const auto& [i, p] : de.terms)
        for (int j = 0; j <= i; ++j)
            cs[(std::size_t)j] = cs[(std::size_t)j] + RationalFunction(p) * d[(std::size_t)i][(std::size_t)j];
    // clear denominators
    Polynomial l(1);
    for (const auto& f : cs) {
        if (f.is_zero()) continue;
        Polynomial g = Polynomial::gcd(l, f.den());
        l = l * *f.den().exact_div(g);
    }
    ShiftEquation se;
    se.unknown = unknown;
    se.var = x;
    se.stride = 1;
    for (int j = 0; j <= top; ++j) {
        if (cs[(std::size_t)j].is_zero()) continue;
        se.terms[j] = cs[(std::size_t)j].num() * *l.exact_div(cs[(std::size_t)j].den());
    }
    for (const auto& [j, c] : de.init_terms)
        se.boundary[j] = c * RationalFunction(q_factorial(j)) * RationalFunction(l);
    return se.content_normalized(false);
}

inline DifferentialEquation re_to_de(const Recurrence& rec, const std::string& unknown,
                                     const std::string& var = "x") {
    return se_to_de(re_to_se(rec, unknown, var), unknown);
}

inline Recurrence de_to_re(const DifferentialEquation& de, const std::string& seq_unknown) {
    ShiftEquation se = de_to_se(de, de.unknown);
    se.boundary.clear(); // initial data drops into the recurrence's valid range
    return se_to_re(se, seq_unknown);
}

// ---- recurrence unrolling -------------------------------------------------------

struct SequenceSpec {
    long long start_index = 0;
    std::vector<RationalFunction> initial_values;
};

// List `count` values starting at init.start_index; extra supplied values are
// echoed and only the last span-many seed the recursion.
inline std::vector<RationalFunction> unroll_recurrence(const Recurrence& rec,
                                                       const SequenceSpec& init, long long count) {
    if (rec.op.is_zero()) throw std::domain_error("zero recurrence");
    const OreOperator& op = rec.op;
    int span = op.order() * op.stride();
    if ((long long)init.initial_values.size() < span)
        throw std::domain_error("need at least " + std::to_string(span) + " initial values");
    std::vector<RationalFunction> vals = init.initial_values;
    if ((long long)vals.size() > count) vals.resize((std::size_t)count);
    while ((long long)vals.size() < count) {
        // relation based at n: sum_i r_i(q^n) a(n + stride*i) = 0
        long long next = init.start_index + (long long)vals.size();
        long long n = next - span;
        Polynomial lead = op.coeff(op.order());
        if (lead.has_var(op.var())) lead = lead.subst(op.var(), P_q((Exp)n));
        if (lead.is_zero())
            throw std::domain_error("leading coefficient vanishes at index " + std::to_string(n));
        RationalFunction acc;
        for (int i = 0; i < op.order(); ++i) {
            if (op.coeff(i).is_zero()) continue;
            Polynomial ci = op.coeff(i);
            if (ci.has_var(op.var())) ci = ci.subst(op.var(), P_q((Exp)n));
            long long idx = n + (long long)op.stride() * i - init.start_index;
            acc = acc + RationalFunction(ci) * vals[(std::size_t)idx];
        }
        vals.push_back(-acc / RationalFunction(lead));
    }
    return vals;
}

// ---- substitution factors -------------------------------------------------------

struct PochAtom {
    Polynomial arg;          // monomial in x and q (q only for sequence factors)
    long long base_exp = 1;  // base is q^base_exp
    bool infinite = true;
    long long len_u = 0, len_v = 0; // finite length u*n + v
    long long power = 1;            // exponent of the whole symbol (usually +-1)
};

struct SubstFactor {
    Rational coef = 1;
    Exp x_power = 0;                         // series factors only
    Rational qn2 = 0, qn1 = 0, qn0 = 0;      // q^(qn2 n^2 + qn1 n + qn0)
    std::vector<PochAtom> atoms;
    std::string var = "x";                   // series variable (ignored for RE factors)
};

namespace detail {

// factor(x) / factor(q^h x) for a series substitution factor.
inline RationalFunction se_factor_ratio(const SubstFactor& f, long long h) {
    RationalFunction r(P_q((Exp)(-h * f.x_power)));
    for (const auto& atom : f.atoms) {
        if (!atom.infinite)
            throw std::domain_error("finite Pochhammer in a series substitution factor");
        Exp e = atom.arg.degree(f.var); // exponent of x in the argument
        if (e == 0) continue;           // x-free factor cancels
        long long he = h * e;
        if (he % atom.base_exp != 0)
            throw std::domain_error("substitution factor has a non-rational shift ratio");
        long long steps = he / atom.base_exp;
        Polynomial base = P_q((Exp)atom.base_exp);
        RationalFunction ratio(Polynomial(1));
        if (steps >= 0) {
            ratio = RationalFunction(pochhammer(atom.arg, base, steps));
        } else {
            Polynomial shifted_arg = atom.arg * P_q((Exp)he);
            ratio = RationalFunction(Polynomial(1), pochhammer(shifted_arg, base, -steps));
        }
        r = r * ratio.pow(atom.power);
    }
    return r;
}

// factor(n) / factor(n+1) for a sequence substitution factor, in Qn and q.
inline RationalFunction re_factor_step(const SubstFactor& f) {
    // prefactor q^(P(n) - P(n+1)) = q^(-(qn2 (2n+1) + qn1))
    Rational c2 = -2 * f.qn2;          // coefficient of n
    Rational c1 = -(f.qn2 + f.qn1);    // constant
    if (den(c2) != 1 || den(c1) != 1)
        throw std::domain_error("substitution prefactor exponent is not integral");
    RationalFunction r(Polynomial::monomial(
        Rational(1), {{"q", (Exp)num(c1)}, {"Qn", (Exp)num(c2)}}));
    for (const auto& atom : f.atoms) {
        if (atom.infinite) continue; // n-independent
        long long u = atom.len_u, v = atom.len_v, g = atom.base_exp;
        RationalFunction ratio(Polynomial(1));
        if (u >= 0) {
            // 1 / prod_{r=0}^{u-1} (1 - arg q^(g(v+r)) Qn^(g u))
            Polynomial prod(1);
            for (long long t = 0; t < u; ++t) {
                Polynomial factor = Polynomial(1) -
                                    atom.arg * P_q((Exp)(g * (v + t))) *
                                        Polynomial::variable("Qn", (Exp)(g * u));
                prod = prod * factor;
            }
            ratio = RationalFunction(Polynomial(1), prod);
        } else {
            Polynomial prod(1);
            for (long long t = 0; t < -u; ++t) {
                Polynomial factor = Polynomial(1) -
                                    atom.arg * P_q((Exp)(g * (v + u + t))) *
                                        Polynomial::variable("Qn", (Exp)(g * u));
                prod = prod * factor;
            }
            ratio = RationalFunction(prod);
        }
        r = r * ratio.pow(atom.power);
    }
    return r;
}

// factor(n) / factor(n+k) = prod_{t=0}^{k-1} step(n+t)
inline RationalFunction re_factor_ratio(const SubstFactor& f, long long k) {
    RationalFunction step = re_factor_step(f);
    RationalFunction acc(Polynomial(1));
    for (long long t = 0; t < k; ++t) {
        RationalFunction s = t == 0 ? step
                                    : step.subst("Qn", RationalFunction(P_q((Exp)t) *
                                                                        Polynomial::variable("Qn")));
        acc = acc * s;
    }
    return acc;
}

} // namespace detail

// Rewrite the equation satisfied by F into the one satisfied by B = factor * F.
inline ShiftEquation substitute_se(const ShiftEquation& input, const SubstFactor& factor,
                                   const std::string& new_unknown) {
    if (!input.boundary.empty())
        throw std::domain_error("substitution under boundary terms is not supported");
    ShiftEquation se = input;
    se.drop_zero_terms();
    std::map<int, RationalFunction> coeffs;
    for (const auto& [i, p] : se.terms)
        coeffs[i] = RationalFunction(p) * detail::se_factor_ratio(factor, (long long)se.stride * i);
    // collect over the common denominator
    Polynomial l(1);
    for (const auto& [i, c] : coeffs) {
        if (c.is_zero()) continue;
        Polynomial g = Polynomial::gcd(l, c.den());
        l = l * *c.den().exact_div(g);
    }
    ShiftEquation out;
    out.unknown = new_unknown;
    out.var = se.var;
    out.stride = se.stride;
    for (const auto& [i, c] : coeffs) {
        if (c.is_zero()) continue;
        out.terms[i] = c.num() * *l.exact_div(c.den());
    }
    return out;
}

// Rewrite the recurrence satisfied by a into the one satisfied by g = factor * a.
inline Recurrence substitute_re(const Recurrence& input, const SubstFactor& factor,
                                const std::string& new_unknown) {
    const OreOperator& op = input.op;
    if (op.is_zero()) throw std::domain_error("zero recurrence");
    std::vector<RationalFunction> coeffs((std::size_t)op.order() + 1);
    for (int i = 0; i <= op.order(); ++i) {
        if (op.coeff(i).is_zero()) continue;
        coeffs[(std::size_t)i] = RationalFunction(op.coeff(i)) *
                                 detail::re_factor_ratio(factor, (long long)op.stride() * i);
    }
    RatOre rat;
    rat.var = op.var();
    rat.stride = op.stride();
    rat.coeffs = std::move(coeffs);
    Recurrence out;
    out.unknown = new_unknown;
    out.op = rat.to_operator();
    out.valid_from = input.valid_from;
    return out;
}

// ---- printing -------------------------------------------------------------------

// Coefficient of a sequence unknown rendered with q^(affine) parts: each
// monomial splits as rational * other-symbols * q^(t*n+e).
inline std::string sequence_coeff_string(const Polynomial& c, const std::string& power_var,
                                         const std::string& letter) {
    if (c.is_zero()) return "0";
    // iterate monomials in graded-lex descending order
    struct Mono {
        Rational coef;
        Exp t, e;
        std::string rest;
    };
    std::vector<std::pair<std::vector<Exp>, Rational>> order;
    for (const auto& [ex, co] : c.terms()) order.push_back({ex, co});
    std::sort(order.begin(), order.end(),
              [](const auto& a, const auto& b) { return Polynomial::grlex_less(b.first, a.first); });
    std::ostringstream os;
    bool first = true;
    for (const auto& [ex, co] : order) {
        Rational r = co;
        bool neg = r < 0;
        if (neg) r = -r;
        Exp t = 0, e = 0;
        std::string rest;
        const auto& vs = c.vars();
        for (std::size_t i = 0; i < vs.size(); ++i) {
            if (ex[i] == 0) continue;
            if (vs[i] == power_var) {
                t = ex[i];
            } else if (vs[i] == "q") {
                e = ex[i];
            } else {
                if (!rest.empty()) rest += "*";
                rest += vs[i];
                if (ex[i] != 1) rest += ex[i] < 0 ? "^(" + std::to_string(ex[i]) + ")"
                                                  : "^" + std::to_string(ex[i]);
            }
        }
        if (first)
            os << (neg ? "-" : "");
        else
            os << (neg ? " - " : " + ");
        first = false;
        std::vector<std::string> parts;
        if (r != 1) parts.push_back(to_string(r));
        if (!rest.empty()) parts.push_back(rest);
        if (t != 0 || e != 0) parts.push_back(affine_q_string(t, e, letter));
        if (parts.empty()) parts.push_back("1");
        for (std::size_t i = 0; i < parts.size(); ++i) {
            if (i) os << "*";
            os << parts[i];
        }
    }
    return os.str();
}

inline std::string index_shift_string(const std::string& letter, long long shift) {
    if (shift == 0) return letter;
    if (shift > 0) return letter + "+" + std::to_string(shift);
    return letter + "-" + std::to_string(-shift);
}

// Canonical textual recurrence: highest shift first, e.g.
// "a(n+2)*q^(2*n+4) - q*a(n)".
inline std::string recurrence_to_string(const Recurrence& rec) {
    const OreOperator& op = rec.op;
    if (op.is_zero()) return "0";
    std::string letter = index_letter_for(op.var());
    std::ostringstream os;
    bool first = true;
    for (int i = op.order(); i >= 0; --i) {
        const Polynomial& c = op.coeff(i);
        if (c.is_zero()) continue;
        std::string call = rec.unknown + "(" + index_shift_string(letter, (long long)op.stride() * i) + ")";
        bool neg = false;
        std::string piece;
        if (c.is_monomial()) {
            Rational r = c.leading_coefficient();
            neg = r < 0;
            Rational ra = neg ? -r : r;
            Exp t = c.degree(op.var());
            Exp e = c.degree("q");
            std::string rest;
            const auto& vs = c.vars();
            const auto& ex = c.terms().begin()->first;
            for (std::size_t k = 0; k < vs.size(); ++k) {
                if (ex[k] == 0 || vs[k] == "q" || vs[k] == op.var()) continue;
                if (!rest.empty()) rest += "*";
                rest += vs[k];
                if (ex[k] != 1) rest += "^" + std::to_string(ex[k]);
            }
            bool trivial = ra == 1 && rest.empty();
            if (trivial && t != 0) {
                piece = call + "*" + affine_q_string(t, e, letter);
            } else {
                std::string pre;
                if (ra != 1) pre = to_string(ra);
                if (!rest.empty()) pre += (pre.empty() ? "" : "*") + rest;
                if (t != 0 || e != 0)
                    pre += (pre.empty() ? "" : "*") + affine_q_string(t, e, letter);
                piece = pre.empty() ? call : pre + "*" + call;
            }
        } else {
            piece = "(" + sequence_coeff_string(c, op.var(), letter) + ")*" + call;
        }
        if (first) {
            os << (neg ? "-" : "") << piece;
            first = false;
        } else {
            os << (neg ? " - " : " + ") << piece;
        }
    }
    return os.str();
}

// Canonical textual shift equation: highest shift first, e.g.
// "F(q^2*x) - q*x^2*F(x)".
inline std::string shift_equation_to_string(const ShiftEquation& se) {
    std::ostringstream os;
    bool first = true;
    auto emit = [&](const std::string& piece, bool neg) {
        if (first) {
            os << (neg ? "-" : "") << piece;
            first = false;
        } else {
            os << (neg ? " - " : " + ") << piece;
        }
    };
    for (auto it = se.terms.rbegin(); it != se.terms.rend(); ++it) {
        int i = it->first;
        const Polynomial& c = it->second;
        if (c.is_zero()) continue;
        long long qexp = (long long)se.stride * i;
        std::string arg = qexp == 0 ? se.var : (qexp == 1 ? "q*" : "q^" + std::to_string(qexp) + "*") + se.var;
        std::string call = se.unknown + "(" + arg + ")";
        if (c.is_one()) {
            emit(call, false);
        } else if ((-c).is_one()) {
            emit(call, true);
        } else if (c.is_monomial()) {
            Rational r = c.leading_coefficient();
            bool neg = r < 0;
            Polynomial cc = neg ? -c : c;
            emit(cc.str() + "*" + call, neg);
        } else {
            emit("(" + c.str() + ")*" + call, false);
        }
    }
    for (const auto& [j, b] : se.boundary) {
        if (b.is_zero()) continue;
        std::string tag = j == 0 ? "<1>" : (j == 1 ? "<" + se.var + ">" : "<" + se.var + "^" + std::to_string(j) + ">");
        std::string piece = tag + se.unknown;
        // render coefficient
        RationalFunction c = b;
        bool neg = false;
        if (c.is_polynomial() && !c.num().is_zero() && c.num().leading_coefficient() < 0) {
            neg = true;
            c = -c;
        }
        std::string cs = c.str();
        if (cs == "1")
            emit(piece, neg);
        else if (c.is_polynomial() && c.num().term_count() > 1)
            emit("(" + cs + ")*" + piece, neg);
        else
            emit(cs + "*" + piece, neg);
    }
    if (!se.inhomogeneous.is_zero()) emit("(" + se.inhomogeneous.str() + ")", false);
    return os.str();
}

// Canonical textual q-differential equation, lowest derivative first, e.g.
// "(1 - q*x^2)*F(x) + ... + q^2*(-x)*F'(0)".
inline std::string differential_equation_to_string(const DifferentialEquation& de) {
    std::ostringstream os;
    bool first = true;
    auto emit = [&](const std::string& piece, bool neg) {
        if (first) {
            os << (neg ? "-" : "") << piece;
            first = false;
        } else {
            os << (neg ? " - " : " + ") << piece;
        }
    };
    for (const auto& [j, b] : de.init_terms) {
        if (b.is_zero()) continue;
        std::string primes(std::size_t(j), '\'');
        std::string call = de.unknown + primes + "(0)";
        RationalFunction c = b;
        bool neg = false;
        if (c.is_polynomial() && !c.num().is_zero() && c.num().leading_coefficient() < 0) {
            neg = true;
            c = -c;
        }
        std::string cs = c.str();
        if (cs == "1")
            emit(call, neg);
        else if (c.is_polynomial() && c.num().term_count() > 1)
            emit("(" + cs + ")*" + call, neg);
        else
            emit(cs + "*" + call, neg);
    }
    for (const auto& [i, p] : de.terms) {
        if (p.is_zero()) continue;
        std::string primes(std::size_t(i), '\'');
        std::string call = de.unknown + primes + "(" + de.var + ")";
        if (p.is_one()) {
            emit(call, false);
        } else if ((-p).is_one()) {
            emit(call, true);
        } else if (p.is_monomial()) {
            Rational r = p.leading_coefficient();
            bool neg = r < 0;
            Polynomial pp = neg ? -p : p;
            emit(pp.str() + "*" + call, neg);
        } else {
            emit("(" + p.str() + ")*" + call, false);
        }
    }
    return os.str();
}

} // namespace qfun
