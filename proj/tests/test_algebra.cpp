#include <catch2/catch_amalgamated.hpp>

#include "qfun/linalg.hpp"
#include "qfun/polynomial.hpp"
#include "qfun/rational_function.hpp"

using namespace qfun;

namespace {

Polynomial random_poly(Rng& rng, const std::vector<std::string>& vars, int max_terms, int max_exp) {
    Polynomial p;
    int terms = (int)rng.range(0, max_terms);
    for (int t = 0; t < terms; ++t) {
        Polynomial mono(Rational(rng.range(-4, 4)));
        for (const auto& v : vars)
            mono = mono * Polynomial::variable(v, rng.range(0, max_exp));
        p = p + mono;
    }
    return p;
}

} // namespace

TEST_CASE("basic arithmetic identities") {
    Polynomial q = P_q(), x = P_x();
    CHECK((q + x) + (-q) == x);
    CHECK((Polynomial(1) - q) * (Polynomial(1) + q) == Polynomial(1) - q.pow(2));
    Polynomial qn = P_var("Qn");
    CHECK((q * qn.pow(2)) * (q.pow(3) * qn) == q.pow(4) * qn.pow(3));
}

TEST_CASE("zero and constants") {
    Polynomial z;
    CHECK(z.is_zero());
    CHECK((z + Polynomial(5)).constant_value() == 5);
    CHECK((Polynomial(3) * Polynomial(Rational(1, 3))).is_one());
}

TEST_CASE("Laurent exponents and printing") {
    Polynomial p = Polynomial::monomial(Rational(1), {{"q", -2}});
    CHECK(p.str() == "q^(-2)");
    Polynomial h = Polynomial::q_power_half(1);
    CHECK(h.str() == "q^(1/2)");
    CHECK((h * h) == P_q());
    Polynomial mixed = P_q(4) * P_var("Qn", 2) - P_q();
    CHECK(mixed.str() == "q^4*Qn^2 - q");
}

TEST_CASE("ring axioms on random polynomials") {
    Rng rng(42);
    std::vector<std::string> vars = {"q", "x"};
    for (int iter = 0; iter < 60; ++iter) {
        Polynomial a = random_poly(rng, vars, 4, 3);
        Polynomial b = random_poly(rng, vars, 4, 3);
        Polynomial c = random_poly(rng, vars, 4, 3);
        CHECK((a + b) * c == a * c + b * c);
        CHECK(a * (b * c) == (a * b) * c);
        CHECK(a * b == b * a);
        CHECK(a + b - b == a);
    }
}

TEST_CASE("exact division") {
    Polynomial q = P_q(), x = P_x();
    Polynomial a = (Polynomial(1) - q * x) * (Polynomial(1) + q * x) * q.pow(3);
    auto quo = a.exact_div(Polynomial(1) - q * x);
    REQUIRE(quo.has_value());
    CHECK(*quo == (Polynomial(1) + q * x) * q.pow(3));
    CHECK_FALSE((a + Polynomial(1)).exact_div(Polynomial(1) - q * x).has_value());
    // Laurent division
    Polynomial lm = Polynomial::monomial(Rational(1), {{"q", -1}, {"x", 1}});
    auto quo2 = x.exact_div(lm);
    REQUIRE(quo2.has_value());
    CHECK(*quo2 == P_q());
}

TEST_CASE("gcd with common factor") {
    Polynomial q = P_q(), x = P_x();
    // q^2 x - x and q x + x share x (q + 1)
    Polynomial a = q.pow(2) * x - x;
    Polynomial b = q * x + x;
    Polynomial g = Polynomial::gcd(a, b);
    CHECK(g == q * x + x);
    CHECK(g.divides(a));
    CHECK(g.divides(b));
}

TEST_CASE("gcd with zero and shared irreducible factor") {
    Polynomial q = P_q(), x = P_x();
    Polynomial p = Polynomial(2) * x * q - Polynomial(2) * x;
    CHECK(Polynomial::gcd(p, Polynomial()) == p.primitive_part());
    Polynomial f = Polynomial(1) - q * x;
    Polynomial a = f * (Polynomial(1) + q * x);
    Polynomial b = f * q;
    Polynomial g = Polynomial::gcd(a, b);
    CHECK((g == f || g == -f));
    CHECK(g.divides(a));
    CHECK(g.divides(b));
}

TEST_CASE("random gcd divides both inputs") {
    Rng rng(7);
    std::vector<std::string> vars = {"q", "x"};
    for (int iter = 0; iter < 25; ++iter) {
        Polynomial a = random_poly(rng, vars, 3, 2);
        Polynomial b = random_poly(rng, vars, 3, 2);
        Polynomial m = random_poly(rng, vars, 2, 2);
        if (a.is_zero() || b.is_zero() || m.is_zero()) continue;
        Polynomial g = Polynomial::gcd(a * m, b * m);
        CHECK(g.divides(a * m));
        CHECK(g.divides(b * m));
        CHECK(m.primitive_part().divides(g));
    }
}

TEST_CASE("substitution: monomial shifts") {
    Polynomial q = P_q(), x = P_x();
    // x^2 q with x -> q^2 x gives q^5 x^2
    Polynomial p = x.pow(2) * q;
    CHECK(p.subst("x", q.pow(2) * x) == q.pow(5) * x.pow(2));
    // Qn -> q Qn on q^4 Qn^2 gives q^6 Qn^2
    Polynomial r = P_q(4) * P_var("Qn", 2);
    CHECK(r.subst("Qn", q * P_var("Qn")) == P_q(6) * P_var("Qn", 2));
}

TEST_CASE("substitution with general polynomial value") {
    Polynomial q = P_q();
    Polynomial a = P_var("a"), b = P_var("b"), c = P_var("c");
    Polynomial p = Polynomial(1) + a * q + b * q + c * q;
    Polynomial expected = Polynomial(1) + a * q + b * q + a * b * q.pow(2);
    CHECK(p.subst("c", a * b * q) == expected);
}

TEST_CASE("substitution round trip x -> qx -> x/q") {
    Rng rng(99);
    std::vector<std::string> vars = {"q", "x"};
    Polynomial q = P_q(), x = P_x();
    for (int iter = 0; iter < 20; ++iter) {
        Polynomial p = random_poly(rng, vars, 5, 3);
        Polynomial shifted = p.subst("x", q * x);
        Polynomial back = shifted.subst("x", Polynomial::monomial(Rational(1), {{"q", -1}, {"x", 1}}));
        CHECK(back == p);
    }
}

TEST_CASE("rational function canonical form") {
    Polynomial q = P_q(), x = P_x();
    Polynomial p = Polynomial(1) - q * x;
    Polynomial r = x * (Polynomial(1) + q);
    RationalFunction f(p, r);
    RationalFunction g(p * Polynomial(-7) * q, r * Polynomial(-7) * q);
    CHECK(f == g);
    RationalFunction scaled(p * (q - Polynomial(1)), r * (q - Polynomial(1)));
    CHECK(f == scaled);
}

TEST_CASE("rational function arithmetic") {
    Polynomial q = P_q();
    RationalFunction half(Polynomial(1), Polynomial(2));
    CHECK(half + half == RationalFunction(Polynomial(1)));
    RationalFunction f(Polynomial(1), Polynomial(1) - q);
    RationalFunction g(Polynomial(1), Polynomial(1) + q);
    RationalFunction sum = f + g;
    CHECK(sum == RationalFunction(Polynomial(2), Polynomial(1) - q.pow(2)));
    CHECK(f * g == RationalFunction(Polynomial(1), Polynomial(1) - q.pow(2)));
    CHECK((f / g) == RationalFunction(Polynomial(1) + q, Polynomial(1) - q));
}

TEST_CASE("nullspace of a single relation") {
    RFMatrix m = {{RationalFunction(Polynomial(1)), RationalFunction(Polynomial(1))}};
    auto basis = nullspace(m);
    REQUIRE(basis.size() == 1);
    CHECK(basis[0][0] == Polynomial(1));
    CHECK(basis[0][1] == Polynomial(-1));
}

TEST_CASE("nullspace of the identity is trivial") {
    RFMatrix m(3, std::vector<RationalFunction>(3));
    for (int i = 0; i < 3; ++i) m[(std::size_t)i][(std::size_t)i] = RationalFunction(Polynomial(1));
    CHECK(nullspace(m).empty());
}

namespace {

// plain fraction-based Gaussian elimination used as an oracle
std::size_t naive_rank(RFMatrix m) {
    std::size_t rows = m.size(), cols = m.empty() ? 0 : m[0].size();
    std::size_t rank = 0;
    for (std::size_t col = 0; col < cols && rank < rows; ++col) {
        std::size_t pivot = rows;
        for (std::size_t i = rank; i < rows; ++i)
            if (!m[i][col].is_zero()) {
                pivot = i;
                break;
            }
        if (pivot == rows) continue;
        std::swap(m[rank], m[pivot]);
        for (std::size_t i = rank + 1; i < rows; ++i) {
            if (m[i][col].is_zero()) continue;
            RationalFunction f = m[i][col] / m[rank][col];
            for (std::size_t j = col; j < cols; ++j) m[i][j] = m[i][j] - f * m[rank][j];
        }
        ++rank;
    }
    return rank;
}

} // namespace

TEST_CASE("nullspace vectors are exact and ranks match the naive oracle") {
    Rng rng(123);
    std::vector<std::string> vars = {"q"};
    for (int iter = 0; iter < 15; ++iter) {
        std::size_t rows = (std::size_t)rng.range(1, 4), cols = (std::size_t)rng.range(1, 4);
        RFMatrix m(rows, std::vector<RationalFunction>(cols));
        for (auto& row : m)
            for (auto& e : row) e = RationalFunction(random_poly(rng, vars, 2, 2));
        auto basis = nullspace(m);
        for (const auto& v : basis) {
            for (std::size_t i = 0; i < rows; ++i) {
                RationalFunction acc;
                for (std::size_t j = 0; j < cols; ++j)
                    acc = acc + m[i][j] * RationalFunction(v[j]);
                CHECK(acc.is_zero());
            }
        }
        CHECK(naive_rank(m) + basis.size() == cols);
    }
}
