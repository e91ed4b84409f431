#pragma once

#include "qfun/polynomial.hpp"

namespace qfun {

// Quotient of two polynomials in canonical form: gcd(num, den) is a unit and
// the denominator is primitive with positive leading coefficient. Zero is 0/1.
class RationalFunction {
public:
    RationalFunction() : num_(), den_(Polynomial(1)) {}
    RationalFunction(const Polynomial& p) : num_(p), den_(Polynomial(1)) {}
    explicit RationalFunction(const Rational& c) : num_(Polynomial(c)), den_(Polynomial(1)) {}
    explicit RationalFunction(long long c) : num_(Polynomial(c)), den_(Polynomial(1)) {}

    RationalFunction(const Polynomial& n, const Polynomial& d) : num_(n), den_(d) { normalize(); }

    const Polynomial& num() const { return num_; }
    const Polynomial& den() const { return den_; }

    bool is_zero() const { return num_.is_zero(); }
    bool is_polynomial() const { return den_.is_one(); }
    bool is_constant() const { return num_.is_constant() && den_.is_constant(); }

    Rational constant_value() const { return num_.constant_value() / den_.constant_value(); }

    friend RationalFunction operator-(const RationalFunction& a) {
        RationalFunction r = a;
        r.num_ = -r.num_;
        return r;
    }

    friend RationalFunction operator+(const RationalFunction& a, const RationalFunction& b) {
        return RationalFunction(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
    }
    friend RationalFunction operator-(const RationalFunction& a, const RationalFunction& b) {
        return RationalFunction(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
    }
    friend RationalFunction operator*(const RationalFunction& a, const RationalFunction& b) {
        return RationalFunction(a.num_ * b.num_, a.den_ * b.den_);
    }
    friend RationalFunction operator/(const RationalFunction& a, const RationalFunction& b) {
        if (b.is_zero()) throw std::domain_error("division by zero rational function");
        return RationalFunction(a.num_ * b.den_, a.den_ * b.num_);
    }

    RationalFunction pow(long long e) const {
        if (e >= 0) return RationalFunction(num_.pow(e), den_.pow(e));
        if (is_zero()) throw std::domain_error("negative power of zero");
        return RationalFunction(den_.pow(-e), num_.pow(-e));
    }

    friend bool operator==(const RationalFunction& a, const RationalFunction& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator!=(const RationalFunction& a, const RationalFunction& b) { return !(a == b); }

    RationalFunction subst(const std::string& v, const RationalFunction& value) const {
        RationalFunction n = subst_poly(num_, v, value);
        RationalFunction d = subst_poly(den_, v, value);
        return n / d;
    }

    // Substitute a variable by a rational function inside a polynomial.
    static RationalFunction subst_poly(const Polynomial& p, const std::string& v,
                                       const RationalFunction& value) {
        if (!p.has_var(v)) return RationalFunction(p);
        if (value.is_polynomial() && value.num().is_monomial())
            return RationalFunction(p.subst(v, value.num()));
        Exp lo = p.low_degree(v), hi = p.degree(v);
        if (lo < 0 && value.is_zero())
            throw std::domain_error("zero substituted into negative power of " + v);
        // sum_e coeff_e * value^e  =  (sum_e coeff_e N^(e-lo) D^(hi-e)) * N^lo / D^hi
        Polynomial acc;
        for (Exp e : p.exponents_of(v)) {
            acc = acc + p.coeff_of(v, e) * value.num().pow(e - lo) * value.den().pow(hi - e);
        }
        RationalFunction r(acc, value.den().pow(hi - lo));
        // multiply by value^lo exactly
        if (lo >= 0) {
            r = r * RationalFunction(value.num().pow(lo), value.den().pow(lo));
        } else {
            r = r * RationalFunction(value.den().pow(-lo), value.num().pow(-lo));
        }
        return r;
    }

    std::string str() const {
        if (is_polynomial()) return num_.str();
        std::string n = num_.str();
        std::string d = den_.str();
        bool n_par = num_.term_count() > 1;
        bool d_par = den_.term_count() > 1;
        std::string out = n_par ? "(" + n + ")" : n;
        out += "/";
        out += d_par ? "(" + d + ")" : d;
        return out;
    }

    friend bool operator<(const RationalFunction& a, const RationalFunction& b) {
        if (a.num_ != b.num_) return a.num_ < b.num_;
        return a.den_ < b.den_;
    }

private:
    Polynomial num_, den_;

    void normalize() {
        if (den_.is_zero()) throw std::domain_error("zero denominator");
        if (num_.is_zero()) {
            den_ = Polynomial(1);
            return;
        }
        Polynomial g = Polynomial::gcd(num_, den_);
        if (!g.is_one()) {
            num_ = *num_.exact_div(g);
            den_ = *den_.exact_div(g);
        }
        // make denominator primitive with positive leading coefficient; put
        // the rational scale on the numerator
        Rational c = den_.signed_content();
        if (c != 1) {
            den_ = den_ * (Rational(1) / c);
            num_ = num_ * (Rational(1) / c);
        }
    }
};

using RF = RationalFunction;

} // namespace qfun
