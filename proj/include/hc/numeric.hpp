#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <stdexcept>
#include <string>

namespace hc {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline Int num(const Rat& r) { return boost::multiprecision::numerator(r); }
inline Int den(const Rat& r) { return boost::multiprecision::denominator(r); }

inline bool is_integer(const Rat& r) { return den(r) == 1; }

// floor(a/b) for exact integers, b != 0
inline Int floor_div(const Int& a, const Int& b) {
    Int q = a / b, r = a % b;
    if (r != 0 && ((r < 0) != (b < 0))) --q;
    return q;
}

inline Int mod_floor(const Int& a, const Int& b) { return a - floor_div(a, b) * b; }

inline Int gcd(const Int& a, const Int& b) { return boost::multiprecision::gcd(a, b); }

// floor of sqrt, n >= 0
inline Int isqrt(const Int& n) {
    if (n < 0) throw std::domain_error("isqrt: negative");
    return boost::multiprecision::sqrt(n);
}

inline bool is_square(const Int& n) {
    if (n < 0) return false;
    Int s = isqrt(n);
    return s * s == n;
}

// raised when an enumeration would exceed its configured budget
struct resource_limit_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// raised when a q-exponent falls outside the target lattice X
struct lattice_violation_error : std::domain_error {
    using std::domain_error::domain_error;
};

} // namespace hc
