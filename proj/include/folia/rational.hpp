#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <optional>
#include <string>

namespace folia {

using BigInt = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline BigInt rat_num(const Rat& r) { return boost::multiprecision::numerator(r); }
inline BigInt rat_den(const Rat& r) { return boost::multiprecision::denominator(r); }

inline bool rat_is_integer(const Rat& r) { return rat_den(r) == 1; }

inline int rat_sign(const Rat& r) { return r.sign(); }

// Exact integer k-th root, or nullopt when n is not a perfect k-th power.
inline std::optional<BigInt> int_kth_root_exact(const BigInt& n, unsigned k) {
    using boost::multiprecision::pow;
    if (k == 0) return std::nullopt;
    if (k == 1) return n;
    if (n < 0) {
        if (k % 2 == 0) return std::nullopt;
        auto r = int_kth_root_exact(-n, k);
        if (!r) return std::nullopt;
        return -*r;
    }
    if (n == 0 || n == 1) return n;
    // Newton iteration for the floor root, then verify exactness.
    unsigned bits = boost::multiprecision::msb(n) + 1;
    BigInt x = BigInt(1) << (bits / k + 1);
    while (true) {
        BigInt xk1 = pow(x, k - 1);
        BigInt next = ((k - 1) * x + n / xk1) / k;
        if (next >= x) break;
        x = next;
    }
    while (pow(x, k) > n) --x;
    while (pow(x + 1, k) <= n) ++x;
    if (pow(x, k) == n) return x;
    return std::nullopt;
}

inline std::optional<BigInt> int_sqrt_exact(const BigInt& n) {
    if (n < 0) return std::nullopt;
    BigInt r = boost::multiprecision::sqrt(n);
    if (r * r == n) return r;
    return std::nullopt;
}

// Exact rational k-th root (principal sign for odd k; nonnegative for even k).
inline std::optional<Rat> rat_kth_root_exact(const Rat& r, unsigned k) {
    auto n = int_kth_root_exact(rat_num(r), k);
    if (!n) return std::nullopt;
    auto d = int_kth_root_exact(rat_den(r), k);
    if (!d) return std::nullopt;
    return Rat(*n, *d);
}

inline std::optional<Rat> rat_sqrt_exact(const Rat& r) { return rat_kth_root_exact(r, 2); }

inline std::string rat_to_string(const Rat& r) {
    std::string s = rat_num(r).str();
    if (!rat_is_integer(r)) {
        s += "/";
        s += rat_den(r).str();
    }
    return s;
}

inline double rat_to_double(const Rat& r) { return r.convert_to<double>(); }

inline BigInt int_gcd(const BigInt& a, const BigInt& b) {
    return boost::multiprecision::gcd(a, b);
}

inline long long int_lcm_small(long long a, long long b) {
    BigInt g = int_gcd(BigInt(a), BigInt(b));
    BigInt l = BigInt(a) / g * BigInt(b);
    return l.convert_to<long long>();
}

} // namespace folia
