#pragma once

#include "qfun/rational_function.hpp"

#include <vector>

namespace qfun {

using PolyMatrix = std::vector<std::vector<Polynomial>>;
using RFMatrix = std::vector<std::vector<RationalFunction>>;

// Clear denominators row by row.
inline PolyMatrix clear_denominators(const RFMatrix& m) {
    PolyMatrix out;
    out.reserve(m.size());
    for (const auto& row : m) {
        Polynomial l(1);
        for (const auto& e : row) {
            if (e.is_zero()) continue;
            Polynomial g = Polynomial::gcd(l, e.den());
            l = l * *e.den().exact_div(g);
        }
        std::vector<Polynomial> r;
        r.reserve(row.size());
        for (const auto& e : row) {
            if (e.is_zero()) {
                r.emplace_back();
            } else {
                r.push_back(e.num() * *l.exact_div(e.den()));
            }
        }
        out.push_back(std::move(r));
    }
    return out;
}

// Right nullspace basis via fraction-free (Bareiss) elimination with full
// pivoting. Pivot choice: fewest terms, then lowest column, then lowest row.
// Basis vectors are denominator-free, content-normalized, and the first
// nonzero entry has positive leading coefficient; ordered by ascending free
// column index. Empty result <=> trivial nullspace.
inline std::vector<std::vector<Polynomial>> nullspace(const RFMatrix& input) {
    if (input.empty()) return {};
    std::size_t rows = input.size(), cols = input[0].size();
    PolyMatrix m = clear_denominators(input);
    std::vector<std::size_t> colperm(cols);
    for (std::size_t j = 0; j < cols; ++j) colperm[j] = j;

    Polynomial prev(1);
    std::size_t rank = 0;
    while (rank < rows && rank < cols) {
        // pivot search over the remaining block
        bool found = false;
        std::size_t pi = 0, pj = 0;
        std::size_t best_terms = 0;
        for (std::size_t j = rank; j < cols; ++j) {
            for (std::size_t i = rank; i < rows; ++i) {
                const Polynomial& e = m[i][j];
                if (e.is_zero()) continue;
                std::size_t t = e.term_count();
                std::size_t cj = colperm[j];
                if (!found || t < best_terms ||
                    (t == best_terms && (cj < colperm[pj] || (cj == colperm[pj] && i < pi)))) {
                    found = true;
                    pi = i;
                    pj = j;
                    best_terms = t;
                }
            }
        }
        if (!found) break;
        std::swap(m[rank], m[pi]);
        if (pj != rank) {
            for (std::size_t i = 0; i < rows; ++i) std::swap(m[i][rank], m[i][pj]);
            std::swap(colperm[rank], colperm[pj]);
        }
        const Polynomial pivot = m[rank][rank];
        for (std::size_t i = rank + 1; i < rows; ++i) {
            for (std::size_t j = rank + 1; j < cols; ++j) {
                Polynomial t = m[i][j] * pivot - m[i][rank] * m[rank][j];
                if (t.is_zero()) {
                    m[i][j] = Polynomial();
                    continue;
                }
                auto d = t.exact_div(prev);
                if (!d) throw std::logic_error("fraction-free elimination: inexact division");
                m[i][j] = std::move(*d);
            }
            m[i][rank] = Polynomial();
        }
        prev = pivot;
        ++rank;
    }

    // free columns in ascending original index
    std::vector<std::size_t> free_cols;
    for (std::size_t j = rank; j < cols; ++j) free_cols.push_back(j);
    std::sort(free_cols.begin(), free_cols.end(),
              [&](std::size_t a, std::size_t b) { return colperm[a] < colperm[b]; });

    std::vector<std::vector<Polynomial>> basis;
    for (std::size_t f : free_cols) {
        std::vector<RationalFunction> v(cols);
        v[colperm[f]] = RationalFunction(Polynomial(1));
        for (std::size_t i = rank; i-- > 0;) {
            RationalFunction s;
            for (std::size_t j = i + 1; j < cols; ++j) {
                if (m[i][j].is_zero() || v[colperm[j]].is_zero()) continue;
                s = s + RationalFunction(m[i][j]) * v[colperm[j]];
            }
            v[colperm[i]] = -s / RationalFunction(m[i][i]);
        }
        // clear denominators and content
        Polynomial l(1);
        for (const auto& e : v) {
            if (e.is_zero()) continue;
            Polynomial g = Polynomial::gcd(l, e.den());
            l = l * *e.den().exact_div(g);
        }
        std::vector<Polynomial> w(cols);
        Polynomial content;
        for (std::size_t j = 0; j < cols; ++j) {
            if (v[j].is_zero()) continue;
            w[j] = v[j].num() * *l.exact_div(v[j].den());
            content = content.is_zero() ? w[j] : Polynomial::gcd(content, w[j]);
        }
        if (!content.is_one() && !content.is_zero()) {
            for (auto& e : w)
                if (!e.is_zero()) e = *e.exact_div(content);
        }
        // sign: first nonzero entry gets a positive leading coefficient
        for (auto& e : w) {
            if (e.is_zero()) continue;
            if (e.leading_coefficient() < 0)
                for (auto& f : w) f = -f;
            break;
        }
        // integer content
        Rational rc(0);
        for (const auto& e : w) {
            if (e.is_zero()) continue;
            Rational c = e.content();
            rc = rc == 0 ? c : Rational(igcd(num(rc) * den(c), num(c) * den(rc)), den(rc) * den(c));
        }
        if (rc != 0 && rc != 1)
            for (auto& e : w) e = e * (Rational(1) / rc);
        basis.push_back(std::move(w));
    }
    return basis;
}

inline std::size_t matrix_rank(const RFMatrix& m) {
    if (m.empty()) return 0;
    return m[0].size() - nullspace(m).size();
}

} // namespace qfun
