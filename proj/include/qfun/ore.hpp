#pragma once

#include "qfun/rational_function.hpp"

#include <functional>
#include <vector>

namespace qfun {

// Index letter shown when printing operators over a power variable ("Qn" -> n).
inline std::string index_letter_for(const std::string& var) {
    if (var.size() == 2 && var[0] == 'Q') return std::string(1, var[1]);
    return "n";
}

// Noncommutative operator sum_i r_i(v) S^i with S * p(v) = p(q^s v) * S.
// Normal form: nonzero leading coefficient, no common polynomial content,
// leading coefficient's leading term positive.
class OreOperator {
public:
    OreOperator() = default;
    OreOperator(std::string var, int stride, std::vector<Polynomial> coeffs)
        : var_(std::move(var)), stride_(stride), coeffs_(std::move(coeffs)) {
        strip_high();
    }

    static OreOperator zero(const std::string& var, int stride = 1) {
        return OreOperator(var, stride, {});
    }
    static OreOperator identity(const std::string& var, int stride = 1) {
        return OreOperator(var, stride, {Polynomial(1)});
    }
    static OreOperator shift(const std::string& var, int stride = 1, int power = 1) {
        std::vector<Polynomial> c((std::size_t)power + 1);
        c.back() = Polynomial(1);
        return OreOperator(var, stride, std::move(c));
    }

    const std::string& var() const { return var_; }
    int stride() const { return stride_; }
    bool is_zero() const { return coeffs_.empty(); }
    int order() const { return (int)coeffs_.size() - 1; }
    const std::vector<Polynomial>& coeffs() const { return coeffs_; }

    const Polynomial& coeff(int i) const {
        static const Polynomial zero_poly;
        if (i < 0 || i >= (int)coeffs_.size()) return zero_poly;
        return coeffs_[(std::size_t)i];
    }

    // substitute v -> q^(s*j) v in a coefficient
    Polynomial shifted_coeff(const Polynomial& p, int j) const {
        if (j == 0 || !p.has_var(var_)) return p;
        return p.subst(var_, P_q((Exp)stride_ * j) * Polynomial::variable(var_));
    }

    friend OreOperator operator+(const OreOperator& a, const OreOperator& b) {
        a.check_compat(b);
        const OreOperator& ref = a.is_zero() ? b : a;
        std::vector<Polynomial> c(std::max(a.coeffs_.size(), b.coeffs_.size()));
        for (std::size_t i = 0; i < c.size(); ++i) c[i] = a.coeff((int)i) + b.coeff((int)i);
        return OreOperator(ref.var_, ref.stride_, std::move(c));
    }

    friend OreOperator operator-(const OreOperator& a, const OreOperator& b) { return a + (-b); }

    friend OreOperator operator-(const OreOperator& a) {
        OreOperator r = a;
        for (auto& c : r.coeffs_) c = -c;
        return r;
    }

    friend OreOperator operator*(const OreOperator& a, const OreOperator& b) {
        a.check_compat(b);
        if (a.is_zero() || b.is_zero()) return zero(a.var_, a.stride_);
        std::vector<Polynomial> c((std::size_t)(a.order() + b.order()) + 1);
        for (int i = 0; i <= a.order(); ++i) {
            if (a.coeffs_[(std::size_t)i].is_zero()) continue;
            for (int j = 0; j <= b.order(); ++j) {
                if (b.coeffs_[(std::size_t)j].is_zero()) continue;
                c[(std::size_t)(i + j)] =
                    c[(std::size_t)(i + j)] + a.coeffs_[(std::size_t)i] * a.shifted_coeff(b.coeffs_[(std::size_t)j], i);
            }
        }
        return OreOperator(a.var_, a.stride_, std::move(c));
    }

    friend OreOperator operator*(const Polynomial& p, const OreOperator& a) {
        OreOperator r = a;
        for (auto& c : r.coeffs_) c = c * p;
        r.strip_high();
        return r;
    }

    friend bool operator==(const OreOperator& a, const OreOperator& b) {
        return a.var_ == b.var_ && a.stride_ == b.stride_ && a.coeffs_ == b.coeffs_;
    }
    friend bool operator!=(const OreOperator& a, const OreOperator& b) { return !(a == b); }

    // Remove polynomial content and fix the sign; this is the canonical
    // representative used for printed results and comparisons.
    OreOperator normalized() const {
        if (is_zero()) return *this;
        Polynomial g;
        for (const auto& c : coeffs_) {
            if (c.is_zero()) continue;
            g = g.is_zero() ? c : Polynomial::gcd(g, c);
        }
        std::vector<Polynomial> c2(coeffs_.size());
        for (std::size_t i = 0; i < coeffs_.size(); ++i) {
            if (coeffs_[i].is_zero()) continue;
            auto d = coeffs_[i].exact_div(g);
            c2[i] = *d;
        }
        OreOperator r(var_, stride_, std::move(c2));
        // clear rational content across all coefficients
        Rational rc(0);
        for (const auto& c : r.coeffs_) {
            if (c.is_zero()) continue;
            Rational cc = c.content();
            rc = rc == 0 ? cc : Rational(igcd(num(rc) * den(cc), num(cc) * den(rc)), den(rc) * den(cc));
        }
        if (rc != 0 && rc != 1)
            for (auto& c : r.coeffs_) c = c * (Rational(1) / rc);
        if (!r.coeffs_.empty() && r.coeffs_.back().leading_coefficient() < 0)
            for (auto& c : r.coeffs_) c = -c;
        return r;
    }

    // Apply to concrete sequence values: sum_i r_i(q^n) values[n + stride*i],
    // where `values[j]` holds the sequence member at index start_index + j.
    RationalFunction apply_at(const std::vector<RationalFunction>& values, long long start_index,
                              long long n) const {
        if (is_zero()) return RationalFunction();
        RationalFunction acc;
        for (int i = 0; i <= order(); ++i) {
            if (coeffs_[(std::size_t)i].is_zero()) continue;
            long long idx = n + (long long)stride_ * i - start_index;
            if (idx < 0 || idx >= (long long)values.size())
                throw std::domain_error("apply_at: insufficient sequence values");
            Polynomial ev = coeffs_[(std::size_t)i];
            if (ev.has_var(var_)) ev = ev.subst(var_, P_q((Exp)n));
            acc = acc + RationalFunction(ev) * values[(std::size_t)idx];
        }
        return acc;
    }

private:
    std::string var_ = "Qn";
    int stride_ = 1;
    std::vector<Polynomial> coeffs_;

    void strip_high() {
        while (!coeffs_.empty() && coeffs_.back().is_zero()) coeffs_.pop_back();
    }

    void check_compat(const OreOperator& o) const {
        if (is_zero() || o.is_zero()) return;
        if (var_ != o.var_ || stride_ != o.stride_)
            throw std::domain_error("operator variable/stride mismatch");
    }
};

// Operator with rational-function coefficients (used inside division/GCRD).
struct RatOre {
    std::string var = "Qn";
    int stride = 1;
    std::vector<RationalFunction> coeffs;

    bool is_zero() const { return coeffs.empty(); }
    int order() const { return (int)coeffs.size() - 1; }

    void strip_high() {
        while (!coeffs.empty() && coeffs.back().is_zero()) coeffs.pop_back();
    }

    RationalFunction shifted(const RationalFunction& f, int j) const {
        if (j == 0) return f;
        RationalFunction v(P_q((Exp)stride * j) * Polynomial::variable(var));
        return f.subst(var, v);
    }

    static RatOre from(const OreOperator& a) {
        RatOre r;
        r.var = a.var();
        r.stride = a.stride();
        for (int i = 0; i <= a.order(); ++i) r.coeffs.push_back(RationalFunction(a.coeff(i)));
        r.strip_high();
        return r;
    }

    // Clear denominators and normalize into the canonical polynomial form.
    OreOperator to_operator() const {
        Polynomial l(1);
        for (const auto& c : coeffs) {
            if (c.is_zero()) continue;
            Polynomial g = Polynomial::gcd(l, c.den());
            l = l * *c.den().exact_div(g);
        }
        std::vector<Polynomial> p(coeffs.size());
        for (std::size_t i = 0; i < coeffs.size(); ++i) {
            if (coeffs[i].is_zero()) continue;
            p[i] = coeffs[i].num() * *l.exact_div(coeffs[i].den());
        }
        return OreOperator(var, stride, std::move(p)).normalized();
    }
};

// Right division A = Q*B + R with order(R) < order(B), over the fraction field.
inline std::pair<RatOre, RatOre> ore_right_divide(const OreOperator& a, const OreOperator& b) {
    if (b.is_zero()) throw std::domain_error("right division by zero operator");
    RatOre rem = RatOre::from(a);
    RatOre quo;
    quo.var = b.var();
    quo.stride = b.stride();
    RatOre bb = RatOre::from(b);
    while (!rem.is_zero() && rem.order() >= bb.order()) {
        int d = rem.order() - bb.order();
        // c = lc(rem) / sigma^d(lc(b))
        RationalFunction c = rem.coeffs.back() / rem.shifted(bb.coeffs.back(), d);
        if ((int)quo.coeffs.size() < d + 1) quo.coeffs.resize((std::size_t)d + 1);
        quo.coeffs[(std::size_t)d] = quo.coeffs[(std::size_t)d] + c;
        // rem -= c * S^d * B
        for (int j = 0; j <= bb.order(); ++j) {
            if (bb.coeffs[(std::size_t)j].is_zero()) continue;
            rem.coeffs[(std::size_t)(j + d)] =
                rem.coeffs[(std::size_t)(j + d)] - c * rem.shifted(bb.coeffs[(std::size_t)j], d);
        }
        rem.coeffs.pop_back(); // leading entry cancels exactly
        rem.strip_high();
    }
    quo.strip_high();
    return {quo, rem};
}

inline bool ore_divides(const OreOperator& b, const OreOperator& a) {
    auto [q, r] = ore_right_divide(a, b);
    (void)q;
    return r.is_zero();
}

// Greatest common right divisor (Euclidean algorithm), normalized.
inline OreOperator ore_gcrd(const OreOperator& a, const OreOperator& b) {
    if (a.is_zero() || b.is_zero()) throw std::domain_error("GCRD of a zero operator");
    OreOperator x = a.normalized(), y = b.normalized();
    if (x.order() < y.order()) std::swap(x, y);
    while (true) {
        auto [q, r] = ore_right_divide(x, y);
        (void)q;
        if (r.is_zero()) return y.normalized();
        x = y;
        y = r.to_operator();
    }
}

// ---- uncoupling --------------------------------------------------------------

// A coupled system: each row is sum_u row[u] applied to unknown u, = 0.
using OperatorRow = std::vector<OreOperator>;

struct UncoupleFailure : std::runtime_error {
    explicit UncoupleFailure(const std::string& msg) : std::runtime_error(msg) {}
};

namespace detail {

// Eliminate column `col` among `rows` (indices into rows vector), leaving at
// most one row with a nonzero entry in that column; returns its index or -1.
inline int eliminate_column(std::vector<OperatorRow>& rows, const std::vector<int>& active,
                            std::size_t col) {
    std::vector<int> live;
    for (int r : active)
        if (!rows[(std::size_t)r][col].is_zero()) live.push_back(r);
    while (live.size() > 1) {
        // pick the two rows of smallest order in this column (deterministic)
        std::sort(live.begin(), live.end(), [&](int r1, int r2) {
            int o1 = rows[(std::size_t)r1][col].order();
            int o2 = rows[(std::size_t)r2][col].order();
            if (o1 != o2) return o1 < o2;
            return r1 < r2;
        });
        int lo = live[0], hi = live[1];
        const OreOperator& elo = rows[(std::size_t)lo][col];
        const OreOperator& ehi = rows[(std::size_t)hi][col];
        int d = ehi.order() - elo.order();
        // row_hi := sigma^d(lc(lo)) * row_hi - lc(hi) * S^d * row_lo
        Polynomial lc_lo = elo.coeff(elo.order());
        Polynomial lc_hi = ehi.coeff(ehi.order());
        Polynomial lc_lo_shift = elo.shifted_coeff(lc_lo, d);
        OreOperator mult = lc_hi * OreOperator::shift(elo.var(), elo.stride(), d);
        bool changed = false;
        for (std::size_t u = 0; u < rows[(std::size_t)hi].size(); ++u) {
            OreOperator t = lc_lo_shift * rows[(std::size_t)hi][u] - mult * rows[(std::size_t)lo][u];
            rows[(std::size_t)hi][u] = t;
            changed = changed || !t.is_zero();
        }
        // remove content across the row to curb growth
        Polynomial g;
        for (const auto& e : rows[(std::size_t)hi])
            for (const auto& c : e.coeffs()) {
                if (c.is_zero()) continue;
                g = g.is_zero() ? c : Polynomial::gcd(g, c);
                if (g.is_one()) break;
            }
        if (!g.is_zero() && !g.is_one()) {
            for (auto& e : rows[(std::size_t)hi]) {
                std::vector<Polynomial> cs;
                for (int i = 0; i <= e.order(); ++i) {
                    auto d2 = e.coeff(i).is_zero() ? std::optional<Polynomial>(Polynomial())
                                                   : e.coeff(i).exact_div(g);
                    cs.push_back(*d2);
                }
                e = OreOperator(e.var(), e.stride(), std::move(cs));
            }
        }
        (void)changed;
        live.clear();
        for (int r : active)
            if (!rows[(std::size_t)r][col].is_zero()) live.push_back(r);
    }
    return live.empty() ? -1 : live[0];
}

} // namespace detail

// For each unknown produce one nonzero operator annihilating every solution of
// the coupled system. Throws UncoupleFailure when the elimination collapses.
inline std::vector<OreOperator> uncouple(const std::vector<OperatorRow>& system,
                                         const std::string& var, int stride = 1) {
    if (system.empty()) throw UncoupleFailure("empty system");
    std::size_t m = system[0].size();
    std::vector<OreOperator> result;
    for (std::size_t target = 0; target < m; ++target) {
        std::vector<OperatorRow> rows = system;
        std::vector<int> active;
        for (std::size_t r = 0; r < rows.size(); ++r) active.push_back((int)r);
        for (std::size_t col = 0; col < m; ++col) {
            if (col == target) continue;
            int pivot = detail::eliminate_column(rows, active, col);
            if (pivot >= 0) {
                active.erase(std::remove(active.begin(), active.end(), pivot), active.end());
            }
        }
        OreOperator best = OreOperator::zero(var, stride);
        for (int r : active) {
            bool clean = true;
            for (std::size_t u = 0; u < m; ++u)
                if (u != target && !rows[(std::size_t)r][u].is_zero()) clean = false;
            if (!clean) continue;
            const OreOperator& cand = rows[(std::size_t)r][target];
            if (cand.is_zero()) continue;
            best = best.is_zero() ? cand.normalized() : ore_gcrd(best, cand);
        }
        if (best.is_zero())
            throw UncoupleFailure("system does not determine unknown " + std::to_string(target));
        result.push_back(best.normalized());
    }
    return result;
}

} // namespace qfun
