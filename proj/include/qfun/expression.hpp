#pragma once

#include "qfun/rational_function.hpp"

#include <memory>
#include <string>
#include <vector>

namespace qfun {

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

// Small immutable expression tree for the text front end. Division is
// represented as Power(base, -1) inside a Product; unary minus as a
// one-child Sum with sign -1.
struct Expr {
    enum class Kind { Number, Symbol, Sum, Product, Power, Call, Tuple };

    Kind kind;
    Rational number;           // Number
    std::string name;          // Symbol / Call
    std::vector<ExprPtr> args; // Sum/Product/Call/Tuple children; Power: {base, exponent}
    std::vector<int> signs;    // Sum only, +1 / -1 per child

    static ExprPtr make_number(const Rational& r) {
        auto e = std::make_shared<Expr>();
        e->kind = Kind::Number;
        e->number = r;
        return e;
    }
    static ExprPtr make_symbol(const std::string& s) {
        auto e = std::make_shared<Expr>();
        e->kind = Kind::Symbol;
        e->name = s;
        return e;
    }
    static ExprPtr make_sum(std::vector<ExprPtr> children, std::vector<int> signs) {
        auto e = std::make_shared<Expr>();
        e->kind = Kind::Sum;
        e->args = std::move(children);
        e->signs = std::move(signs);
        return e;
    }
    static ExprPtr make_product(std::vector<ExprPtr> children) {
        auto e = std::make_shared<Expr>();
        e->kind = Kind::Product;
        e->args = std::move(children);
        return e;
    }
    static ExprPtr make_power(ExprPtr base, ExprPtr exp) {
        auto e = std::make_shared<Expr>();
        e->kind = Kind::Power;
        e->args = {std::move(base), std::move(exp)};
        return e;
    }
    static ExprPtr make_call(const std::string& f, std::vector<ExprPtr> args) {
        auto e = std::make_shared<Expr>();
        e->kind = Kind::Call;
        e->name = f;
        e->args = std::move(args);
        return e;
    }
    static ExprPtr make_tuple(std::vector<ExprPtr> args) {
        auto e = std::make_shared<Expr>();
        e->kind = Kind::Tuple;
        e->args = std::move(args);
        return e;
    }
};

// ---- evaluation helpers ----------------------------------------------------

using Env = std::map<std::string, Rational>;

// Numeric evaluation (exponents, summation bounds). Unbound symbols are an error.
inline Rational eval_rational(const ExprPtr& e, const Env& env) {
    switch (e->kind) {
    case Expr::Kind::Number:
        return e->number;
    case Expr::Kind::Symbol: {
        auto it = env.find(e->name);
        if (it == env.end()) throw std::domain_error("unbound symbol in numeric context: " + e->name);
        return it->second;
    }
    case Expr::Kind::Sum: {
        Rational acc(0);
        for (std::size_t i = 0; i < e->args.size(); ++i)
            acc += Rational(e->signs[i]) * eval_rational(e->args[i], env);
        return acc;
    }
    case Expr::Kind::Product: {
        Rational acc(1);
        for (const auto& a : e->args) acc *= eval_rational(a, env);
        return acc;
    }
    case Expr::Kind::Power: {
        Rational b = eval_rational(e->args[0], env);
        Rational ex = eval_rational(e->args[1], env);
        if (den(ex) != 1) throw std::domain_error("non-integer exponent in numeric context");
        return rpow(b, (long long)num(ex));
    }
    default:
        throw std::domain_error("cannot evaluate call/tuple numerically");
    }
}

// Exponent that may be integral or half-integral; returned in half units.
inline long long eval_exponent_half_units(const ExprPtr& e, const Env& env) {
    Rational r = eval_rational(e, env);
    Rational twice = r * 2;
    if (den(twice) != 1) throw std::domain_error("exponent is neither integer nor half-integer");
    return (long long)num(twice);
}

// Evaluate an expression with no calls into a Laurent polynomial. Symbols in
// `env` become rational constants; all other symbols turn into variables.
inline Polynomial eval_polynomial(const ExprPtr& e, const Env& env) {
    switch (e->kind) {
    case Expr::Kind::Number:
        return Polynomial(e->number);
    case Expr::Kind::Symbol: {
        auto it = env.find(e->name);
        if (it != env.end()) return Polynomial(it->second);
        return Polynomial::variable(e->name);
    }
    case Expr::Kind::Sum: {
        Polynomial acc;
        for (std::size_t i = 0; i < e->args.size(); ++i) {
            Polynomial t = eval_polynomial(e->args[i], env);
            acc = e->signs[i] > 0 ? acc + t : acc - t;
        }
        return acc;
    }
    case Expr::Kind::Product: {
        Polynomial acc(1);
        for (const auto& a : e->args) acc = acc * eval_polynomial(a, env);
        return acc;
    }
    case Expr::Kind::Power: {
        long long h = eval_exponent_half_units(e->args[1], env);
        Polynomial b = eval_polynomial(e->args[0], env);
        if (h % 2 == 0) {
            long long ex = h / 2;
            if (ex >= 0) return b.pow(ex);
            if (!b.is_monomial()) throw std::domain_error("negative power of non-monomial");
            return b.mono_pow(ex);
        }
        // half-integer exponent: base must be (a power of) q
        if (b == P_q()) return Polynomial::q_power_half(h);
        throw std::domain_error("half-integer exponent on non-q base");
    }
    default:
        throw std::domain_error("call/tuple not allowed in polynomial context");
    }
}

// As above but allowing division to produce a rational function.
inline RationalFunction eval_rational_function(const ExprPtr& e, const Env& env) {
    switch (e->kind) {
    case Expr::Kind::Sum: {
        RationalFunction acc;
        for (std::size_t i = 0; i < e->args.size(); ++i) {
            RationalFunction t = eval_rational_function(e->args[i], env);
            acc = e->signs[i] > 0 ? acc + t : acc - t;
        }
        return acc;
    }
    case Expr::Kind::Product: {
        RationalFunction acc(Polynomial(1));
        for (const auto& a : e->args) acc = acc * eval_rational_function(a, env);
        return acc;
    }
    case Expr::Kind::Power: {
        long long h = eval_exponent_half_units(e->args[1], env);
        if (h % 2 != 0) return RationalFunction(eval_polynomial(e, env));
        RationalFunction b = eval_rational_function(e->args[0], env);
        return b.pow(h / 2);
    }
    default:
        return RationalFunction(eval_polynomial(e, env));
    }
}

inline bool is_symbol(const ExprPtr& e, const std::string& name) {
    return e->kind == Expr::Kind::Symbol && e->name == name;
}

// ---- canonical printing ----------------------------------------------------

inline std::string expr_to_string(const ExprPtr& e);

namespace detail {

inline bool needs_parens_as_factor(const ExprPtr& e) {
    if (e->kind == Expr::Kind::Sum) return true;
    if (e->kind == Expr::Kind::Number && e->number < 0) return true;
    return false;
}

inline bool needs_parens_as_base(const ExprPtr& e) {
    if (e->kind == Expr::Kind::Sum || e->kind == Expr::Kind::Product ||
        e->kind == Expr::Kind::Power)
        return true;
    if (e->kind == Expr::Kind::Number && (e->number < 0 || den(e->number) != 1)) return true;
    return false;
}

} // namespace detail

inline std::string expr_to_string(const ExprPtr& e) {
    switch (e->kind) {
    case Expr::Kind::Number: {
        return to_string(e->number);
    }
    case Expr::Kind::Symbol:
        return e->name;
    case Expr::Kind::Sum: {
        std::string out;
        for (std::size_t i = 0; i < e->args.size(); ++i) {
            std::string part = expr_to_string(e->args[i]);
            if (i == 0) {
                out += e->signs[i] > 0 ? "" : "-";
            } else {
                out += e->signs[i] > 0 ? " + " : " - ";
            }
            out += part;
        }
        return out;
    }
    case Expr::Kind::Product: {
        std::string out;
        for (std::size_t i = 0; i < e->args.size(); ++i) {
            if (i) out += "*";
            const auto& a = e->args[i];
            std::string part = expr_to_string(a);
            out += detail::needs_parens_as_factor(a) ? "(" + part + ")" : part;
        }
        return out;
    }
    case Expr::Kind::Power: {
        const auto& b = e->args[0];
        const auto& ex = e->args[1];
        std::string bs = expr_to_string(b);
        if (detail::needs_parens_as_base(b)) bs = "(" + bs + ")";
        std::string es = expr_to_string(ex);
        bool simple = ex->kind == Expr::Kind::Number && ex->number >= 0 && den(ex->number) == 1;
        return bs + "^" + (simple ? es : "(" + es + ")");
    }
    case Expr::Kind::Call: {
        std::string out = e->name + "(";
        for (std::size_t i = 0; i < e->args.size(); ++i) {
            if (i) out += ",";
            out += expr_to_string(e->args[i]);
        }
        return out + ")";
    }
    case Expr::Kind::Tuple: {
        std::string out = "(";
        for (std::size_t i = 0; i < e->args.size(); ++i) {
            if (i) out += ",";
            out += expr_to_string(e->args[i]);
        }
        return out + ")";
    }
    }
    return "";
}

} // namespace qfun
