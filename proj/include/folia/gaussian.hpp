#pragma once

#include "folia/errors.hpp"
#include "folia/rational.hpp"

#include <optional>
#include <string>
#include <tuple>

namespace folia {

// Exact element of Q(i). Both parts are kept in lowest terms with positive
// denominator by the underlying rational type.
struct Gaussian {
    Rat re;
    Rat im;

    Gaussian() = default;
    Gaussian(Rat r) : re(std::move(r)) {}
    Gaussian(Rat r, Rat i) : re(std::move(r)), im(std::move(i)) {}
    Gaussian(int n) : re(n) {}

    static Gaussian unit_i() { return Gaussian(Rat(0), Rat(1)); }

    bool is_zero() const { return re == 0 && im == 0; }
    bool is_one() const { return re == 1 && im == 0; }
    bool is_rational() const { return im == 0; }

    Rat norm() const { return re * re + im * im; }
    Gaussian conj() const { return Gaussian(re, -im); }

    friend Gaussian operator+(const Gaussian& a, const Gaussian& b) {
        return Gaussian(a.re + b.re, a.im + b.im);
    }
    friend Gaussian operator-(const Gaussian& a, const Gaussian& b) {
        return Gaussian(a.re - b.re, a.im - b.im);
    }
    friend Gaussian operator-(const Gaussian& a) { return Gaussian(-a.re, -a.im); }
    friend Gaussian operator*(const Gaussian& a, const Gaussian& b) {
        return Gaussian(a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re);
    }

    Gaussian inverse() const {
        if (is_zero()) throw internal_error("Gaussian inverse of zero");
        Rat n = norm();
        return Gaussian(re / n, -im / n);
    }
    friend Gaussian operator/(const Gaussian& a, const Gaussian& b) {
        return a * b.inverse();
    }

    friend bool operator==(const Gaussian& a, const Gaussian& b) {
        return a.re == b.re && a.im == b.im;
    }
    friend bool operator!=(const Gaussian& a, const Gaussian& b) { return !(a == b); }

    // Total order used only for deterministic sorting.
    friend bool operator<(const Gaussian& a, const Gaussian& b) {
        return std::tie(a.re, a.im) < std::tie(b.re, b.im);
    }

    std::string to_string() const {
        if (im == 0) return rat_to_string(re);
        std::string imag;
        if (im == 1) imag = "i";
        else if (im == -1) imag = "-i";
        else imag = rat_to_string(im) + "*i";
        if (re == 0) return imag;
        if (im.sign() > 0) return rat_to_string(re) + "+" + imag;
        return rat_to_string(re) + imag;
    }
};

// Square root in Q(i) when one exists. For z = a+bi with b != 0 a square root
// x+iy satisfies x^2 = (a+c)/2 and y = b/(2x) with c = sqrt(a^2+b^2).
inline std::optional<Gaussian> gaussian_sqrt(const Gaussian& z) {
    if (z.is_zero()) return Gaussian(Rat(0));
    if (z.im == 0) {
        if (auto r = rat_sqrt_exact(z.re)) return Gaussian(*r);
        if (auto r = rat_sqrt_exact(-z.re)) return Gaussian(Rat(0), *r);
        return std::nullopt;
    }
    auto c = rat_sqrt_exact(z.norm());
    if (!c) return std::nullopt;
    auto x2 = Rat((z.re + *c) / 2);
    auto x = rat_sqrt_exact(x2);
    if (!x || *x == 0) return std::nullopt;
    Rat y = z.im / (2 * *x);
    Gaussian root(*x, y);
    if (root * root != z) throw internal_error("gaussian_sqrt verification failed");
    return root;
}

// Exact k-th root in Q(i) for the cases the toolkit needs: arbitrary k for
// rational inputs, powers of two in general.
inline std::optional<Gaussian> gaussian_kth_root(const Gaussian& z, unsigned k) {
    if (k == 0) return std::nullopt;
    if (k == 1) return z;
    if (z.is_rational()) {
        if (auto r = rat_kth_root_exact(z.re, k)) return Gaussian(*r);
        // fall through: a rational can still have a gaussian even root
    }
    if (k % 2 == 0) {
        auto s = gaussian_sqrt(z);
        if (!s) return std::nullopt;
        return gaussian_kth_root(*s, k / 2);
    }
    return std::nullopt;
}

} // namespace folia
