#pragma once

#include "qfun/rational.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace qfun {

using Exp = long long;

// Fixed variable ordering used everywhere: q first, then the series/sequence
// variables, then everything else alphabetically.
inline int var_rank_class(const std::string& v) {
    if (v == "q") return 0;
    if (v == "x") return 1;
    if (v == "z") return 2;
    if (v == "Qn") return 3;
    if (v == "Qk") return 4;
    return 5;
}

inline bool var_less(const std::string& a, const std::string& b) {
    int ra = var_rank_class(a), rb = var_rank_class(b);
    if (ra != rb) return ra < rb;
    return a < b;
}

// Sparse multivariate Laurent polynomial over Q.
//
// Exponents of q live on a lattice refined by `qden` (1 or 2): a stored
// exponent e of q denotes q^(e/qden). All other variables always carry
// integer exponents. Values are immutable after construction.
class Polynomial {
public:
    using Terms = std::map<std::vector<Exp>, Rational>;

    Polynomial() = default;
    explicit Polynomial(const Rational& c) {
        if (c != 0) terms_[{}] = c;
    }
    explicit Polynomial(long long c) : Polynomial(Rational(c)) {}

    static Polynomial variable(const std::string& name, Exp e = 1) {
        Polynomial p;
        if (e == 0) return Polynomial(1);
        p.vars_ = {name};
        p.terms_[{e}] = 1;
        return p;
    }

    // c * prod vars[i]^exps[i]
    static Polynomial monomial(const Rational& c,
                               const std::vector<std::pair<std::string, Exp>>& factors) {
        Polynomial p(c);
        for (const auto& [v, e] : factors) p = p * variable(v, e);
        return p;
    }

    // q^(num/2) on the half lattice when num is odd.
    static Polynomial q_power_half(Exp half_units) {
        Polynomial p;
        if (half_units == 0) return Polynomial(1);
        p.vars_ = {"q"};
        p.qden_ = 2;
        p.terms_[{half_units}] = 1;
        p.canonicalize();
        return p;
    }

    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.empty()); }
    bool is_one() const { return is_constant() && constant_value() == 1; }

    Rational constant_value() const {
        if (terms_.empty()) return Rational(0);
        if (!is_constant()) throw std::logic_error("constant_value on non-constant polynomial");
        return terms_.begin()->second;
    }

    // Single term?
    bool is_monomial() const { return terms_.size() == 1; }

    const std::vector<std::string>& vars() const { return vars_; }
    int q_lattice_den() const { return qden_; }
    const Terms& terms() const { return terms_; }
    std::size_t term_count() const { return terms_.size(); }

    bool has_var(const std::string& v) const {
        return std::find(vars_.begin(), vars_.end(), v) != vars_.end();
    }

    friend Polynomial operator-(const Polynomial& a) {
        Polynomial r = a;
        for (auto& [e, c] : r.terms_) c = -c;
        return r;
    }

    friend Polynomial operator+(const Polynomial& a, const Polynomial& b) {
        auto [va, vb] = aligned(a, b);
        for (const auto& [e, c] : vb.terms_) {
            auto it = va.terms_.find(e);
            if (it == va.terms_.end()) {
                va.terms_.emplace(e, c);
            } else {
                it->second += c;
                if (it->second == 0) va.terms_.erase(it);
            }
        }
        va.canonicalize();
        return va;
    }

    friend Polynomial operator-(const Polynomial& a, const Polynomial& b) { return a + (-b); }

    friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
        if (a.is_zero() || b.is_zero()) return Polynomial();
        auto [va, vb] = aligned(a, b);
        Polynomial r;
        r.vars_ = va.vars_;
        r.qden_ = va.qden_;
        std::vector<Exp> e(va.vars_.size());
        for (const auto& [ea, ca] : va.terms_) {
            for (const auto& [eb, cb] : vb.terms_) {
                for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
                Rational c = ca * cb;
                auto it = r.terms_.find(e);
                if (it == r.terms_.end()) {
                    r.terms_.emplace(e, c);
                } else {
                    it->second += c;
                    if (it->second == 0) r.terms_.erase(it);
                }
            }
        }
        r.canonicalize();
        return r;
    }

    friend Polynomial operator*(const Polynomial& a, const Rational& s) {
        if (s == 0) return Polynomial();
        Polynomial r = a;
        for (auto& [e, c] : r.terms_) c *= s;
        return r;
    }
    friend Polynomial operator*(const Rational& s, const Polynomial& a) { return a * s; }

    Polynomial pow(long long e) const {
        if (e < 0) throw std::domain_error("Polynomial::pow negative exponent");
        Polynomial acc(1), b = *this;
        unsigned long long n = (unsigned long long)e;
        while (n) {
            if (n & 1) acc = acc * b;
            if (n >>= 1) b = b * b;
        }
        return acc;
    }

    friend bool operator==(const Polynomial& a, const Polynomial& b) {
        return a.qden_ == b.qden_ && a.vars_ == b.vars_ && a.terms_ == b.terms_;
    }
    friend bool operator!=(const Polynomial& a, const Polynomial& b) { return !(a == b); }

    // Arbitrary strict total order (for use as map keys); not the print order.
    friend bool operator<(const Polynomial& a, const Polynomial& b) {
        if (a.vars_ != b.vars_) return a.vars_ < b.vars_;
        if (a.qden_ != b.qden_) return a.qden_ < b.qden_;
        return a.terms_ < b.terms_;
    }

    // ---- degree queries ------------------------------------------------

    Exp degree(const std::string& v) const {
        int idx = index_of(v);
        if (idx < 0) return 0;
        Exp d = 0;
        bool first = true;
        for (const auto& [e, c] : terms_) {
            if (first || e[idx] > d) d = e[idx];
            first = false;
        }
        return d;
    }

    Exp low_degree(const std::string& v) const {
        int idx = index_of(v);
        if (idx < 0) return 0;
        Exp d = 0;
        bool first = true;
        for (const auto& [e, c] : terms_) {
            if (first || e[idx] < d) d = e[idx];
            first = false;
        }
        return d;
    }

    Exp total_degree() const {
        Exp best = 0;
        bool first = true;
        for (const auto& [e, c] : terms_) {
            Exp t = 0;
            for (Exp x : e) t += x;
            if (first || t > best) best = t;
            first = false;
        }
        return best;
    }

    // Coefficient of v^e, with v removed from the term (exponent set to 0).
    Polynomial coeff_of(const std::string& v, Exp e) const {
        int idx = index_of(v);
        Polynomial r;
        if (idx < 0) {
            if (e == 0) return *this;
            return r;
        }
        r.vars_ = vars_;
        r.qden_ = qden_;
        for (const auto& [ex, c] : terms_) {
            if (ex[(std::size_t)idx] == e) {
                std::vector<Exp> e2 = ex;
                e2[(std::size_t)idx] = 0;
                r.terms_[e2] = c;
            }
        }
        r.canonicalize();
        return r;
    }

    // All exponents of v that occur.
    std::vector<Exp> exponents_of(const std::string& v) const {
        int idx = index_of(v);
        std::vector<Exp> out;
        if (idx < 0) {
            if (!is_zero()) out.push_back(0);
            return out;
        }
        for (const auto& [e, c] : terms_) out.push_back(e[(std::size_t)idx]);
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    }

    // ---- leading data in graded-lex order ------------------------------

    // Returns iterator-like data of the graded-lex greatest term.
    std::pair<std::vector<Exp>, Rational> leading_term() const {
        if (terms_.empty()) throw std::logic_error("leading_term of zero polynomial");
        const std::vector<Exp>* best = nullptr;
        const Rational* cbest = nullptr;
        for (const auto& [e, c] : terms_) {
            if (!best || grlex_less(*best, e)) {
                best = &e;
                cbest = &c;
            }
        }
        return {*best, *cbest};
    }

    Rational leading_coefficient() const { return leading_term().second; }

    // ---- content / normalization ----------------------------------------

    // Positive rational c with (*this)/c having coprime integer coefficients.
    Rational content() const {
        if (is_zero()) return Rational(1);
        Integer g = 0, l = 1;
        for (const auto& [e, c] : terms_) {
            g = igcd(g, num(c));
            l = ilcm(l, den(c));
        }
        return Rational(g, l);
    }

    // content with the sign of the graded-lex leading coefficient.
    Rational signed_content() const {
        if (is_zero()) return Rational(1);
        Rational c = content();
        if (leading_coefficient() < 0) c = -c;
        return c;
    }

    Polynomial primitive_part() const {
        if (is_zero()) return *this;
        Rational c = signed_content();
        return *this * (Rational(1) / c);
    }

    // ---- division / gcd --------------------------------------------------

    // Exact division in the Laurent ring; nullopt if not divisible.
    std::optional<Polynomial> exact_div(const Polynomial& d) const {
        if (d.is_zero()) throw std::domain_error("division by zero polynomial");
        if (is_zero()) return Polynomial();
        auto [a0, b0] = aligned(*this, d);
        // strip monomial parts so ordinary division applies
        std::vector<Exp> ma = a0.min_exponents(), mb = b0.min_exponents();
        a0.shift_exponents(ma, -1);
        b0.shift_exponents(mb, -1);
        Polynomial q;
        Polynomial rem = a0;
        const Polynomial& b_fixed = b0;
        while (!rem.is_zero()) {
            auto [rr, bb] = aligned(rem, b_fixed);
            auto [et, ct] = rr.leading_term();
            auto [ed, cd] = bb.leading_term();
            std::vector<Exp> ediff(et.size());
            for (std::size_t i = 0; i < et.size(); ++i) {
                ediff[i] = et[i] - ed[i];
                if (ediff[i] < 0) return std::nullopt;
            }
            Polynomial t;
            t.vars_ = rr.vars_;
            t.qden_ = rr.qden_;
            t.terms_[ediff] = ct / cd;
            t.canonicalize();
            q = q + t;
            rem = rem - t * b_fixed;
        }
        // reapply monomial parts: q * vars^(ma - mb)
        std::vector<Exp> shift(ma.size());
        for (std::size_t i = 0; i < ma.size(); ++i) shift[i] = ma[i] - mb[i];
        return q * monomial_over(a0.vars_, a0.qden_, shift);
    }

    bool divides(const Polynomial& other) const { return other.exact_div(*this).has_value(); }

    // gcd normalized to primitive with positive leading coefficient; monomial
    // (Laurent) content handled as min-exponents.
    static Polynomial gcd(const Polynomial& pa, const Polynomial& pb) {
        if (pa.is_zero() && pb.is_zero()) throw std::domain_error("gcd(0, 0)");
        if (pa.is_zero()) return pb.primitive_part();
        if (pb.is_zero()) return pa.primitive_part();
        auto [a, b] = aligned(pa, pb);
        std::vector<Exp> ma = a.min_exponents(), mb = b.min_exponents();
        a.shift_exponents(ma, -1);
        b.shift_exponents(mb, -1);
        std::vector<Exp> mg(ma.size());
        for (std::size_t i = 0; i < ma.size(); ++i) mg[i] = std::min(ma[i], mb[i]);
        Polynomial g = gcd_ordinary(a, b) * monomial_over(a.vars_, a.qden_, mg);
        return g.primitive_part();
    }

    // ---- substitution ----------------------------------------------------

    // v -> value where value must be a nonzero monomial (Laurent safe), or
    // where *this has only nonnegative exponents of v.
    Polynomial subst(const std::string& v, const Polynomial& value) const {
        int idx = index_of(v);
        if (idx < 0) return *this;
        if (value.is_monomial()) {
            Polynomial r;
            for (const auto& [e, c] : terms_) {
                Polynomial term;
                term.vars_ = vars_;
                term.qden_ = qden_;
                std::vector<Exp> e2 = e;
                Exp ev = e2[(std::size_t)idx];
                e2[(std::size_t)idx] = 0;
                term.terms_[e2] = c;
                term.canonicalize();
                r = r + term * value.mono_pow(ev);
            }
            return r;
        }
        if (low_degree(v) < 0)
            throw std::domain_error("substitution of non-monomial into negative power of " + v);
        // Horner over the exponents of v, highest first.
        std::vector<Exp> exps = exponents_of(v);
        Polynomial r;
        Exp prev = 0;
        bool first = true;
        for (auto it = exps.rbegin(); it != exps.rend(); ++it) {
            if (first) {
                r = coeff_of(v, *it);
                first = false;
            } else {
                r = r * value.pow(prev - *it) + coeff_of(v, *it);
            }
            prev = *it;
        }
        if (!first) r = r * value.pow(prev);
        return r;
    }

    // Monomial power allowing negative exponents (requires *this monomial).
    Polynomial mono_pow(Exp e) const {
        if (!is_monomial()) throw std::logic_error("mono_pow on non-monomial");
        if (e >= 0) return pow(e);
        Polynomial r;
        r.vars_ = vars_;
        r.qden_ = qden_;
        const auto& [ex, c] = *terms_.begin();
        std::vector<Exp> e2(ex.size());
        for (std::size_t i = 0; i < ex.size(); ++i) e2[i] = ex[i] * e;
        r.terms_[e2] = rpow(c, e);
        r.canonicalize();
        return r;
    }

    // Evaluate all variables at rational points (every variable must be given
    // unless its exponents are all nonnegative... values must be nonzero when
    // negative exponents occur).
    Rational eval(const std::map<std::string, Rational>& point) const {
        Rational acc(0);
        for (const auto& [e, c] : terms_) {
            Rational t = c;
            for (std::size_t i = 0; i < vars_.size(); ++i) {
                if (e[i] == 0) continue;
                auto it = point.find(vars_[i]);
                if (it == point.end()) throw std::domain_error("eval: missing value for " + vars_[i]);
                Exp ee = e[i];
                if (vars_[i] == "q" && qden_ == 2) {
                    if (ee % 2 != 0) throw std::domain_error("eval: half-integer exponent of q");
                    ee /= 2;
                }
                t *= rpow(it->second, ee);
            }
            acc += t;
        }
        return acc;
    }

    // ---- printing --------------------------------------------------------

    std::string str() const {
        if (terms_.empty()) return "0";
        std::vector<const std::pair<const std::vector<Exp>, Rational>*> order;
        order.reserve(terms_.size());
        for (const auto& t : terms_) order.push_back(&t);
        std::sort(order.begin(), order.end(), [](auto* a, auto* b) { return grlex_less(b->first, a->first); });
        std::ostringstream os;
        bool first = true;
        for (auto* t : order) {
            Rational c = t->second;
            bool neg = c < 0;
            if (neg) c = -c;
            if (first) {
                if (neg) os << "-";
            } else {
                os << (neg ? " - " : " + ");
            }
            first = false;
            std::string factors = factors_str(t->first);
            if (factors.empty()) {
                os << to_string(c);
            } else {
                if (c != 1) os << to_string(c) << "*";
                os << factors;
            }
        }
        return os.str();
    }

    // ---- internals used by friends ----------------------------------------

    static bool grlex_less(const std::vector<Exp>& a, const std::vector<Exp>& b) {
        // vectors may have different lengths only when comparing across
        // contexts; callers align first.
        Exp ta = 0, tb = 0;
        for (Exp x : a) ta += x;
        for (Exp x : b) tb += x;
        if (ta != tb) return ta < tb;
        return a < b;
    }

    // Align two polynomials to a merged variable list and common q lattice.
    static std::pair<Polynomial, Polynomial> aligned(const Polynomial& a, const Polynomial& b) {
        if (a.vars_ == b.vars_ && a.qden_ == b.qden_) return {a, b};
        std::vector<std::string> vs;
        std::merge(a.vars_.begin(), a.vars_.end(), b.vars_.begin(), b.vars_.end(),
                   std::back_inserter(vs), var_less);
        vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
        int qd = std::max(a.qden_, b.qden_);
        return {a.remapped(vs, qd), b.remapped(vs, qd)};
    }

private:
    std::vector<std::string> vars_;
    int qden_ = 1;
    Terms terms_;

    int index_of(const std::string& v) const {
        auto it = std::find(vars_.begin(), vars_.end(), v);
        return it == vars_.end() ? -1 : (int)(it - vars_.begin());
    }

    Polynomial remapped(const std::vector<std::string>& vs, int qd) const {
        Polynomial r;
        r.vars_ = vs;
        r.qden_ = qd;
        std::vector<int> pos(vars_.size());
        for (std::size_t i = 0; i < vars_.size(); ++i) {
            auto it = std::find(vs.begin(), vs.end(), vars_[i]);
            pos[i] = (int)(it - vs.begin());
        }
        int qidx = -1;
        if (qd != qden_) {
            auto it = std::find(vars_.begin(), vars_.end(), std::string("q"));
            if (it != vars_.end()) qidx = (int)(it - vars_.begin());
        }
        for (const auto& [e, c] : terms_) {
            std::vector<Exp> e2(vs.size(), 0);
            for (std::size_t i = 0; i < vars_.size(); ++i) {
                Exp val = e[i];
                if ((int)i == qidx) val *= qd / qden_;
                e2[(std::size_t)pos[i]] = val;
            }
            r.terms_[e2] = c;
        }
        return r;
    }

    // Remove unused variables; reduce the q lattice when possible.
    void canonicalize() {
        if (terms_.empty()) {
            vars_.clear();
            qden_ = 1;
            return;
        }
        std::vector<bool> used(vars_.size(), false);
        for (const auto& [e, c] : terms_)
            for (std::size_t i = 0; i < e.size(); ++i)
                if (e[i] != 0) used[i] = true;
        bool all = true;
        for (bool u : used) all = all && u;
        if (!all) {
            std::vector<std::string> vs;
            std::vector<int> keep;
            for (std::size_t i = 0; i < vars_.size(); ++i)
                if (used[i]) {
                    vs.push_back(vars_[i]);
                    keep.push_back((int)i);
                }
            Terms t2;
            for (const auto& [e, c] : terms_) {
                std::vector<Exp> e2(keep.size());
                for (std::size_t i = 0; i < keep.size(); ++i) e2[i] = e[(std::size_t)keep[i]];
                t2.emplace(std::move(e2), c);
            }
            terms_ = std::move(t2);
            vars_ = std::move(vs);
        }
        if (qden_ == 2) {
            int qidx = index_of("q");
            if (qidx < 0) {
                qden_ = 1;
            } else {
                bool even = true;
                for (const auto& [e, c] : terms_)
                    if (e[(std::size_t)qidx] % 2 != 0) {
                        even = false;
                        break;
                    }
                if (even) {
                    Terms t2;
                    for (const auto& [e, c] : terms_) {
                        std::vector<Exp> e2 = e;
                        e2[(std::size_t)qidx] /= 2;
                        t2.emplace(std::move(e2), c);
                    }
                    terms_ = std::move(t2);
                    qden_ = 1;
                }
            }
        }
    }

    std::vector<Exp> min_exponents() const {
        std::vector<Exp> m(vars_.size(), 0);
        bool first = true;
        for (const auto& [e, c] : terms_) {
            for (std::size_t i = 0; i < e.size(); ++i)
                m[i] = first ? e[i] : std::min(m[i], e[i]);
            first = false;
        }
        return m;
    }

    void shift_exponents(const std::vector<Exp>& by, int dir) {
        if (by.empty() || terms_.empty()) return;
        bool all_zero = true;
        for (Exp b : by) all_zero = all_zero && b == 0;
        if (all_zero) return;
        Terms t2;
        for (const auto& [e, c] : terms_) {
            std::vector<Exp> e2 = e;
            for (std::size_t i = 0; i < e2.size() && i < by.size(); ++i) e2[i] += dir * by[i];
            t2.emplace(std::move(e2), c);
        }
        terms_ = std::move(t2);
    }

    // --- multivariate gcd on ordinary (min-exponent-zero) polynomials ----

    static Polynomial gcd_ordinary(const Polynomial& a, const Polynomial& b) {
        if (a.is_constant() || b.is_constant()) return Polynomial(1);
        // recurse on the last variable of the merged context
        std::string v = a.vars_.back();
        if (!b.vars_.empty() && var_less(v, b.vars_.back())) v = b.vars_.back();
        auto ua = univariate_view(a, v);
        auto ub = univariate_view(b, v);
        Polynomial ca = content_of_view(ua);
        Polynomial cb = content_of_view(ub);
        divide_view(ua, ca);
        divide_view(ub, cb);
        // primitive PRS
        while (!ub.empty()) {
            auto r = pseudo_rem(ua, ub, v);
            ua = std::move(ub);
            ub = std::move(r);
            if (!ub.empty()) {
                Polynomial c = content_of_view(ub);
                divide_view(ub, c);
            }
        }
        Polynomial content_gcd = gcd_ordinary_or_one(ca, cb);
        Polynomial g = from_view(ua, v) * content_gcd;
        return g.primitive_part();
    }

    static Polynomial gcd_ordinary_or_one(const Polynomial& a, const Polynomial& b) {
        if (a.is_constant() || b.is_constant()) return Polynomial(1);
        return gcd_ordinary(a, b);
    }

    using View = std::map<Exp, Polynomial>;

    static View univariate_view(const Polynomial& p, const std::string& v) {
        View view;
        for (Exp e : p.exponents_of(v)) view[e] = p.coeff_of(v, e);
        return view;
    }

    static Polynomial from_view(const View& view, const std::string& v) {
        Polynomial r;
        for (const auto& [e, c] : view) r = r + c * variable(v, e);
        return r;
    }

    static Polynomial content_of_view(const View& view) {
        Polynomial g;
        for (const auto& [e, c] : view) {
            if (g.is_zero())
                g = c.primitive_part();
            else
                g = gcd(g, c);
            if (g.is_constant()) return Polynomial(1);
        }
        return g.is_zero() ? Polynomial(1) : g;
    }

    static void divide_view(View& view, const Polynomial& d) {
        if (d.is_one()) return;
        for (auto& [e, c] : view) {
            auto q = c.exact_div(d);
            if (!q) throw std::logic_error("content division failed");
            c = *q;
        }
    }

    static View pseudo_rem(const View& va, const View& vb, const std::string& v) {
        View r = va;
        Exp db = vb.rbegin()->first;
        const Polynomial& lb = vb.rbegin()->second;
        while (!r.empty() && r.rbegin()->first >= db) {
            Exp dr = r.rbegin()->first;
            Polynomial lr = r.rbegin()->second;
            // r := lb * r - lr * v^(dr-db) * b
            View r2;
            for (auto& [e, c] : r) {
                Polynomial t = lb * c;
                if (!t.is_zero()) r2[e] = t;
            }
            for (const auto& [e, c] : vb) {
                Exp e2 = e + dr - db;
                auto it = r2.find(e2);
                Polynomial t = lr * c;
                if (it == r2.end()) {
                    if (!t.is_zero()) r2[e2] = -t;
                } else {
                    it->second = it->second - t;
                    if (it->second.is_zero()) r2.erase(it);
                }
            }
            r2.erase(dr);
            r = std::move(r2);
        }
        return r;
    }

    std::string factors_str(const std::vector<Exp>& e) const {
        std::ostringstream os;
        bool first = true;
        for (std::size_t i = 0; i < vars_.size(); ++i) {
            if (e[i] == 0) continue;
            if (!first) os << "*";
            first = false;
            os << vars_[i];
            Exp ee = e[i];
            bool half = vars_[i] == "q" && qden_ == 2;
            if (half) {
                if (ee % 2 == 0) {
                    ee /= 2;
                    half = false;
                }
            }
            if (half) {
                os << "^(" << ee << "/2)";
            } else if (ee != 1) {
                if (ee < 0)
                    os << "^(" << ee << ")";
                else
                    os << "^" << ee;
            }
        }
        return os.str();
    }
};

inline Polynomial operator*(const Polynomial& a, long long s) { return a * Rational(s); }
inline Polynomial operator*(long long s, const Polynomial& a) { return a * Rational(s); }
inline Polynomial operator+(const Polynomial& a, long long s) { return a + Polynomial(s); }
inline Polynomial operator-(const Polynomial& a, long long s) { return a - Polynomial(s); }

// Convenience builders used all over the library and tests.
inline Polynomial P_q(Exp e = 1) { return Polynomial::variable("q", e); }
inline Polynomial P_x(Exp e = 1) { return Polynomial::variable("x", e); }
inline Polynomial P_var(const std::string& v, Exp e = 1) { return Polynomial::variable(v, e); }
inline Polynomial P_const(long long c) { return Polynomial(c); }

} // namespace qfun
