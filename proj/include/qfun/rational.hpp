#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <string>

namespace qfun {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline Integer num(const Rational& r) { return boost::multiprecision::numerator(r); }
inline Integer den(const Rational& r) { return boost::multiprecision::denominator(r); }

inline Integer igcd(Integer a, Integer b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    return boost::multiprecision::gcd(a, b);
}

inline Integer ilcm(const Integer& a, const Integer& b) {
    if (a == 0 || b == 0) return 0;
    Integer l = boost::multiprecision::lcm(a, b);
    return l < 0 ? Integer(-l) : l;
}

inline Rational rpow(const Rational& base, long long e) {
    if (e == 0) return Rational(1);
    Rational b = e > 0 ? base : Rational(1) / base;
    unsigned long long n = e > 0 ? (unsigned long long)e : (unsigned long long)(-e);
    Rational acc(1);
    while (n) {
        if (n & 1) acc *= b;
        b *= b;
        n >>= 1;
    }
    return acc;
}

inline std::string to_string(const Rational& r) { return r.str(); }

// Deterministic xorshift generator for property tests and randomized checks.
class Rng {
public:
    explicit Rng(std::uint64_t seed = 0x9e3779b97f4a7c15ULL) : s_(seed ? seed : 1) {}
    std::uint64_t next() {
        std::uint64_t x = s_;
        x ^= x << 13;
        x ^= x >> 7;
        x ^= x << 17;
        return s_ = x;
    }
    // uniform in [lo, hi]
    long long range(long long lo, long long hi) {
        return lo + (long long)(next() % (std::uint64_t)(hi - lo + 1));
    }

private:
    std::uint64_t s_;
};

} // namespace qfun
