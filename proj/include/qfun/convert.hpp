#pragma once

#include "qfun/equation.hpp"
#include "qfun/expression.hpp"

#include <functional>

namespace qfun {

namespace detail {

// Evaluate a coefficient that may contain q^(affine in `letter`) into a
// polynomial over q and Q<letter> (the q^letter power variable).
inline Polynomial eval_power_coeff(const ExprPtr& e, const std::string& letter) {
    const std::string pv = "Q" + letter;
    switch (e->kind) {
    case Expr::Kind::Sum: {
        Polynomial acc;
        for (std::size_t i = 0; i < e->args.size(); ++i) {
            Polynomial t = eval_power_coeff(e->args[i], letter);
            acc = e->signs[i] > 0 ? acc + t : acc - t;
        }
        return acc;
    }
    case Expr::Kind::Product: {
        Polynomial acc(1);
        for (const auto& a : e->args) acc = acc * eval_power_coeff(a, letter);
        return acc;
    }
    case Expr::Kind::Power: {
        // q^(t*letter + c)  ->  Q<letter>^t q^c
        if (is_symbol(e->args[0], "q")) {
            Polynomial p = eval_polynomial(e->args[1], {});
            if (p.is_zero()) return Polynomial(1);
            bool ok = true;
            for (const auto& v : p.vars())
                if (v != letter) ok = false;
            if (ok && p.degree(letter) <= 1) {
                Polynomial c0 = p.coeff_of(letter, 0);
                Polynomial c1 = p.coeff_of(letter, 1);
                Rational cc = c0.is_zero() ? Rational(0) : c0.constant_value();
                Rational tc = c1.is_zero() ? Rational(0) : c1.constant_value();
                if (den(cc) == 1 && den(tc) == 1)
                    return Polynomial::monomial(Rational(1),
                                                {{"q", (Exp)num(cc)}, {pv, (Exp)num(tc)}});
            }
            throw std::domain_error("exponent of q must be affine in " + letter);
        }
        return eval_polynomial(e, {});
    }
    case Expr::Kind::Symbol:
        if (e->name == letter)
            throw std::domain_error("bare index variable in a coefficient: " + letter);
        return eval_polynomial(e, {});
    default:
        return eval_polynomial(e, {});
    }
}

struct LinearTerm {
    bool has_call = false;
    std::string call_name;
    ExprPtr call_arg;
    std::vector<ExprPtr> plain_factors; // non-call factors, with power applied
    std::vector<std::pair<ExprPtr, long long>> rational_factors; // (factor, power)
};

// Split a product term into (single call) * (coefficient factors).
inline LinearTerm split_linear_term(const ExprPtr& term) {
    LinearTerm lt;
    std::vector<ExprPtr> factors;
    if (term->kind == Expr::Kind::Product)
        factors = term->args;
    else
        factors = {term};
    for (const auto& f : factors) {
        ExprPtr base = f;
        long long power = 1;
        if (f->kind == Expr::Kind::Power) {
            // detect integer powers for rational accumulation
            try {
                Rational ex = eval_rational(f->args[1], {});
                if (den(ex) == 1) {
                    base = f->args[0];
                    power = (long long)num(ex);
                }
            } catch (const std::exception&) {
                base = f;
                power = 1;
            }
        }
        if (base->kind == Expr::Kind::Call && base->args.size() == 1) {
            if (power != 1 || base != f)
                throw std::domain_error("unknown function under a power: " + base->name);
            if (lt.has_call) throw std::domain_error("nonlinear term: two unknown applications");
            lt.has_call = true;
            lt.call_name = base->name;
            lt.call_arg = base->args[0];
        } else {
            lt.rational_factors.push_back({base, power});
        }
    }
    return lt;
}

inline std::vector<std::pair<ExprPtr, int>> sum_terms(const ExprPtr& e) {
    std::vector<std::pair<ExprPtr, int>> out;
    if (e->kind == Expr::Kind::Sum) {
        for (std::size_t i = 0; i < e->args.size(); ++i) out.push_back({e->args[i], e->signs[i]});
    } else {
        out.push_back({e, 1});
    }
    return out;
}

} // namespace detail

// Interpret an expression as a linear q-shift equation; the unknown is the
// repeated function symbol and the series variable is found in its arguments.
inline ShiftEquation expr_to_shift_equation(const ExprPtr& e) {
    ShiftEquation se;
    std::string var;
    std::string unknown;
    std::map<long long, RationalFunction> coeffs;
    RationalFunction inhom;
    for (const auto& [term, sign] : detail::sum_terms(e)) {
        auto lt = detail::split_linear_term(term);
        RationalFunction c(Polynomial(sign));
        for (const auto& [f, p] : lt.rational_factors)
            c = c * eval_rational_function(f, {}).pow(p);
        if (!lt.has_call) {
            inhom = inhom + c;
            continue;
        }
        if (unknown.empty())
            unknown = lt.call_name;
        else if (lt.call_name != unknown)
            throw std::domain_error("multiple unknown functions: " + lt.call_name);
        se.unknown = unknown;
        Polynomial arg = eval_polynomial(lt.call_arg, {});
        if (!arg.is_monomial()) throw std::domain_error("function argument must be q^j * var");
        // identify the variable and the q power
        std::string this_var;
        for (const auto& v : arg.vars())
            if (v != "q") this_var = v;
        if (this_var.empty()) throw std::domain_error("function argument lacks a series variable");
        if (var.empty()) var = this_var;
        if (this_var != var) throw std::domain_error("inconsistent series variable");
        if (arg.degree(this_var) != 1 || arg.leading_coefficient() != 1)
            throw std::domain_error("function argument must be q^j * var");
        long long j = (long long)arg.degree("q");
        coeffs[j] = (coeffs.count(j) ? coeffs[j] : RationalFunction()) + c;
    }
    if (coeffs.empty()) throw std::domain_error("no unknown function application found");
    se.var = var;
    // clear denominators across the whole equation
    Polynomial l(1);
    for (const auto& [j, c] : coeffs) {
        if (c.is_zero()) continue;
        Polynomial g = Polynomial::gcd(l, c.den());
        l = l * *c.den().exact_div(g);
    }
    if (!inhom.is_zero()) {
        Polynomial g = Polynomial::gcd(l, inhom.den());
        l = l * *inhom.den().exact_div(g);
    }
    for (const auto& [j, c] : coeffs) {
        if (c.is_zero()) continue;
        se.terms[(int)j] = c.num() * *l.exact_div(c.den());
    }
    if (!inhom.is_zero()) se.inhomogeneous = inhom.num() * *l.exact_div(inhom.den());
    long long g = 0;
    for (const auto& [j, p] : se.terms) g = std::gcd(g, j);
    se.stride = g == 0 ? 1 : (int)g;
    if (g > 1) {
        std::map<int, Polynomial> t2;
        for (auto& [j, p] : se.terms) t2[(int)(j / g)] = p;
        se.terms = std::move(t2);
    }
    return se;
}

// Interpret an expression as a linear q-recurrence; arguments are affine
// shifts of one index letter, coefficients may contain q^(affine) powers.
inline Recurrence expr_to_recurrence(const ExprPtr& e) {
    std::string letter;
    std::string unknown;
    std::map<long long, RationalFunction> coeffs;
    for (const auto& [term, sign] : detail::sum_terms(e)) {
        auto lt = detail::split_linear_term(term);
        if (!lt.has_call) throw std::domain_error("recurrence term without unknown application");
        if (unknown.empty())
            unknown = lt.call_name;
        else if (lt.call_name != unknown)
            throw std::domain_error("multiple unknown sequences: " + lt.call_name);
        // argument: letter + shift
        Polynomial arg = eval_polynomial(lt.call_arg, {});
        std::string this_letter;
        for (const auto& v : arg.vars()) this_letter = v;
        if (this_letter.empty()) throw std::domain_error("sequence argument lacks an index variable");
        if (letter.empty()) letter = this_letter;
        if (this_letter != letter) throw std::domain_error("inconsistent index variable");
        if (arg.degree(letter) != 1 || !arg.coeff_of(letter, 1).is_one())
            throw std::domain_error("sequence argument must be " + letter + " + shift");
        Polynomial c0 = arg.coeff_of(letter, 0);
        Rational sh = c0.is_zero() ? Rational(0) : c0.constant_value();
        if (den(sh) != 1) throw std::domain_error("non-integer shift");
        RationalFunction c(Polynomial(sign));
        for (const auto& [f, p] : lt.rational_factors)
            c = c * RationalFunction(detail::eval_power_coeff(f, letter)).pow(p);
        long long j = (long long)num(sh);
        coeffs[j] = (coeffs.count(j) ? coeffs[j] : RationalFunction()) + c;
    }
    if (coeffs.empty()) throw std::domain_error("no unknown sequence application found");
    long long lo = coeffs.begin()->first;
    // rebase so the lowest shift is zero: substitute n -> n - lo
    const std::string pv = "Q" + letter;
    RatOre rat;
    rat.var = pv;
    rat.stride = 1;
    rat.coeffs.resize((std::size_t)(coeffs.rbegin()->first - lo) + 1);
    for (const auto& [j, c] : coeffs) {
        RationalFunction cc = c;
        if (lo != 0) cc = cc.subst(pv, RationalFunction(P_q((Exp)-lo) * Polynomial::variable(pv)));
        rat.coeffs[(std::size_t)(j - lo)] = cc;
    }
    Polynomial l(1);
    for (const auto& c : rat.coeffs) {
        if (c.is_zero()) continue;
        Polynomial g = Polynomial::gcd(l, c.den());
        l = l * *c.den().exact_div(g);
    }
    std::vector<Polynomial> ps(rat.coeffs.size());
    for (std::size_t i = 0; i < rat.coeffs.size(); ++i) {
        if (rat.coeffs[i].is_zero()) continue;
        ps[i] = rat.coeffs[i].num() * *l.exact_div(rat.coeffs[i].den());
    }
    Recurrence rec;
    rec.unknown = unknown;
    rec.op = OreOperator(pv, 1, std::move(ps));
    return rec;
}

// Interpret an expression as a substitution factor: a product of monomial
// prefactors, q^(polynomial of degree <= 2 in the index), and qPochhammer
// atoms raised to +-1. `index` is "x" for series factors, the index letter
// for sequence factors.
inline SubstFactor expr_to_subst_factor(const ExprPtr& e, const std::string& index,
                                        bool series_mode) {
    SubstFactor f;
    f.var = series_mode ? index : "x";
    std::vector<std::pair<ExprPtr, long long>> factors;
    std::function<void(const ExprPtr&, long long)> collect = [&](const ExprPtr& node, long long pw) {
        if (node->kind == Expr::Kind::Product) {
            for (const auto& a : node->args) collect(a, pw);
            return;
        }
        if (node->kind == Expr::Kind::Power) {
            // integer power of a Pochhammer or monomial
            bool is_poch = node->args[0]->kind == Expr::Kind::Call;
            if (is_poch) {
                Rational ex = eval_rational(node->args[1], {});
                if (den(ex) != 1) throw std::domain_error("non-integer Pochhammer power");
                collect(node->args[0], pw * (long long)num(ex));
                return;
            }
        }
        factors.push_back({node, pw});
    };
    collect(e, 1);
    for (const auto& [node, pw] : factors) {
        if (node->kind == Expr::Kind::Call) {
            if (node->name != "qPochhammer")
                throw std::domain_error("unsupported factor in substitution: " + node->name);
            if (node->args.size() != 3) throw std::domain_error("qPochhammer expects 3 arguments");
            PochAtom atom;
            atom.power = pw;
            atom.arg = eval_polynomial(node->args[0], {});
            if (!atom.arg.is_monomial()) throw std::domain_error("Pochhammer argument must be a monomial");
            Polynomial base = eval_polynomial(node->args[1], {});
            if (!base.is_monomial() || base.leading_coefficient() != 1 ||
                (base.has_var("q") ? base.degree("q") < 1 : true) || base.vars().size() != 1)
                throw std::domain_error("Pochhammer base must be a positive power of q");
            atom.base_exp = (long long)base.degree("q");
            if (is_symbol(node->args[2], "inf")) {
                atom.infinite = true;
            } else {
                atom.infinite = false;
                Polynomial len = eval_polynomial(node->args[2], {});
                for (const auto& v : len.vars())
                    if (v != index || series_mode)
                        throw std::domain_error("Pochhammer length must be affine in the index");
                if (len.degree(index) > 1)
                    throw std::domain_error("Pochhammer length must be affine in the index");
                Polynomial c1 = len.coeff_of(index, 1), c0 = len.coeff_of(index, 0);
                Rational u = c1.is_zero() ? Rational(0) : c1.constant_value();
                Rational v = c0.is_zero() ? Rational(0) : c0.constant_value();
                if (den(u) != 1 || den(v) != 1) throw std::domain_error("non-integer Pochhammer length");
                atom.len_u = (long long)num(u);
                atom.len_v = (long long)num(v);
            }
            f.atoms.push_back(atom);
            continue;
        }
        // monomial prefactor: rational, x^e, q^(P(index))
        if (node->kind == Expr::Kind::Number) {
            f.coef *= rpow(node->number, pw);
            continue;
        }
        if (node->kind == Expr::Kind::Symbol) {
            if (series_mode && node->name == index) {
                f.x_power += (Exp)pw;
                continue;
            }
            if (node->name == "q") {
                f.qn0 += pw;
                continue;
            }
            throw std::domain_error("unsupported symbol in substitution factor: " + node->name);
        }
        if (node->kind == Expr::Kind::Power) {
            const ExprPtr& b = node->args[0];
            Polynomial pexp = eval_polynomial(node->args[1], {});
            if (series_mode) {
                Rational ex = pexp.is_constant() ? (pexp.is_zero() ? Rational(0) : pexp.constant_value())
                                                 : Rational(0);
                if (!pexp.is_constant() || den(ex) != 1)
                    throw std::domain_error("series prefactor exponents must be integers");
                if (is_symbol(b, index)) {
                    f.x_power += (Exp)num(ex) * pw;
                    continue;
                }
                if (is_symbol(b, "q")) {
                    f.qn0 += Rational(num(ex)) * pw;
                    continue;
                }
                throw std::domain_error("unsupported prefactor base");
            }
            if (!is_symbol(b, "q")) throw std::domain_error("unsupported prefactor base");
            for (const auto& v : pexp.vars())
                if (v != index) throw std::domain_error("prefactor exponent must involve only " + index);
            if (pexp.degree(index) > 2)
                throw std::domain_error("prefactor exponent degree must be <= 2");
            auto cf = [&](Exp d) {
                Polynomial c = pexp.coeff_of(index, d);
                return c.is_zero() ? Rational(0) : c.constant_value();
            };
            f.qn2 += cf(2) * pw;
            f.qn1 += cf(1) * pw;
            f.qn0 += cf(0) * pw;
            continue;
        }
        throw std::domain_error("unsupported factor in substitution");
    }
    return f;
}

} // namespace qfun
