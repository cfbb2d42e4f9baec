#pragma once

#include "folia/errors.hpp"
#include "folia/gaussian.hpp"

#include <algorithm>
#include <complex>
#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace folia {

class NumberField;
using FieldPtr = std::shared_ptr<const NumberField>;

// Coordinates of an element over the power basis of a tower field. A field
// with k quadratic steps has dimension 2^k over Q(i); basis element number m
// is the product of the generators selected by the bits of m.
using GaussVec = std::vector<Gaussian>;

// One quadratic step of the tower: minimal polynomial t^2 + p t + q with
// p, q in the field below, stored as coordinate vectors of that subfield.
struct QuadraticStep {
    GaussVec p;
    GaussVec q;
};

namespace detail {

inline GaussVec vec_zero(std::size_t n) { return GaussVec(n); }

inline bool vec_is_zero(const GaussVec& a) {
    for (const auto& c : a)
        if (!c.is_zero()) return false;
    return true;
}

inline GaussVec vec_add(const GaussVec& a, const GaussVec& b) {
    GaussVec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

inline GaussVec vec_sub(const GaussVec& a, const GaussVec& b) {
    GaussVec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

inline GaussVec vec_neg(const GaussVec& a) {
    GaussVec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = -a[i];
    return r;
}

inline GaussVec vec_scale(const GaussVec& a, const Gaussian& c) {
    GaussVec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] * c;
    return r;
}

inline GaussVec lower_half(const GaussVec& a) {
    return GaussVec(a.begin(), a.begin() + a.size() / 2);
}
inline GaussVec upper_half(const GaussVec& a) {
    return GaussVec(a.begin() + a.size() / 2, a.end());
}
inline GaussVec join_halves(const GaussVec& lo, const GaussVec& hi) {
    GaussVec r = lo;
    r.insert(r.end(), hi.begin(), hi.end());
    return r;
}

} // namespace detail

// A tower of at most two quadratic extensions of Q(i). Immutable; values are
// shared through FieldPtr. Equality of fields is structural.
class NumberField {
public:
    NumberField() = default;
    explicit NumberField(std::vector<QuadraticStep> steps) : steps_(std::move(steps)) {
        for (std::size_t k = 0; k < steps_.size(); ++k) {
            if (steps_[k].p.size() != (std::size_t(1) << k) ||
                steps_[k].q.size() != (std::size_t(1) << k))
                throw internal_error("NumberField: malformed step coordinates");
        }
        if (steps_.size() > 2)
            throw tower_depth_error("field tower would exceed two quadratic extensions");
        compute_approx();
    }

    static FieldPtr gaussian_rationals() {
        static const FieldPtr base = std::make_shared<NumberField>();
        return base;
    }

    const std::vector<QuadraticStep>& steps() const { return steps_; }
    std::size_t levels() const { return steps_.size(); }
    std::size_t dim() const { return std::size_t(1) << levels(); }

    bool same_structure(const NumberField& other) const {
        if (steps_.size() != other.steps_.size()) return false;
        for (std::size_t k = 0; k < steps_.size(); ++k)
            if (steps_[k].p != other.steps_[k].p || steps_[k].q != other.steps_[k].q)
                return false;
        return true;
    }

    bool is_prefix_of(const NumberField& other) const {
        if (steps_.size() > other.steps_.size()) return false;
        for (std::size_t k = 0; k < steps_.size(); ++k)
            if (steps_[k].p != other.steps_[k].p || steps_[k].q != other.steps_[k].q)
                return false;
        return true;
    }

    // Minimal polynomial of generator k as a display string in t.
    std::string step_to_string(std::size_t k) const;

    std::string describe() const {
        std::string s = "Q(i)";
        for (std::size_t k = 0; k < steps_.size(); ++k)
            s += "[" + step_to_string(k) + "]";
        return s;
    }

    // Numeric images of the generators; presentation only, never used in
    // exact computation.
    const std::vector<std::complex<double>>& generator_approx() const { return gen_approx_; }

    std::complex<double> approx_of(const GaussVec& coords) const {
        std::complex<double> acc(0.0, 0.0);
        for (std::size_t m = 0; m < coords.size(); ++m) {
            std::complex<double> term(rat_to_double(coords[m].re), rat_to_double(coords[m].im));
            for (std::size_t k = 0; k < levels(); ++k)
                if (m & (std::size_t(1) << k)) term *= gen_approx_[k];
            acc += term;
        }
        return acc;
    }

private:
    void compute_approx() {
        gen_approx_.clear();
        std::vector<QuadraticStep> built;
        for (std::size_t k = 0; k < steps_.size(); ++k) {
            NumberField sub(built);
            sub.gen_approx_ = std::vector<std::complex<double>>(gen_approx_.begin(),
                                                                gen_approx_.end());
            std::complex<double> p = sub.approx_of(steps_[k].p);
            std::complex<double> q = sub.approx_of(steps_[k].q);
            std::complex<double> disc = p * p - 4.0 * q;
            gen_approx_.push_back((-p + std::sqrt(disc)) / 2.0);
            built.push_back(steps_[k]);
        }
    }

    std::vector<QuadraticStep> steps_;
    std::vector<std::complex<double>> gen_approx_;
};

namespace detail {

// Multiplication at the given level (coordinate vectors of size 2^level),
// reducing by alpha^2 = -p*alpha - q at each split.
inline GaussVec vec_mul(const NumberField& f, std::size_t level, const GaussVec& a,
                        const GaussVec& b) {
    if (level == 0) return GaussVec{a[0] * b[0]};
    const auto& step = f.steps()[level - 1];
    GaussVec a0 = lower_half(a), a1 = upper_half(a);
    GaussVec b0 = lower_half(b), b1 = upper_half(b);
    GaussVec a0b0 = vec_mul(f, level - 1, a0, b0);
    GaussVec a1b1 = vec_mul(f, level - 1, a1, b1);
    GaussVec cross = vec_add(vec_mul(f, level - 1, a0, b1), vec_mul(f, level - 1, a1, b0));
    GaussVec lo = vec_sub(a0b0, vec_mul(f, level - 1, step.q, a1b1));
    GaussVec hi = vec_sub(cross, vec_mul(f, level - 1, step.p, a1b1));
    return join_halves(lo, hi);
}

inline GaussVec vec_inv(const NumberField& f, std::size_t level, const GaussVec& a) {
    if (vec_is_zero(a)) throw internal_error("field inverse of zero");
    if (level == 0) return GaussVec{a[0].inverse()};
    const auto& step = f.steps()[level - 1];
    GaussVec a0 = lower_half(a), a1 = upper_half(a);
    // (a0 + a1*alpha)^-1 = (a0 + a1*(-p - alpha)) / N with
    // N = a0^2 - a0*a1*p + a1^2*q in the subfield.
    GaussVec a0a0 = vec_mul(f, level - 1, a0, a0);
    GaussVec a0a1 = vec_mul(f, level - 1, a0, a1);
    GaussVec a1a1 = vec_mul(f, level - 1, a1, a1);
    GaussVec n = vec_add(vec_sub(a0a0, vec_mul(f, level - 1, a0a1, step.p)),
                         vec_mul(f, level - 1, a1a1, step.q));
    GaussVec ninv = vec_inv(f, level - 1, n);
    GaussVec lo = vec_sub(a0, vec_mul(f, level - 1, a1, step.p));
    return join_halves(vec_mul(f, level - 1, lo, ninv),
                       vec_neg(vec_mul(f, level - 1, a1, ninv)));
}

std::optional<GaussVec> vec_sqrt(const NumberField& f, std::size_t level, const GaussVec& z);

// Roots of t^2 + p t + q over the level-subfield, when the discriminant is a
// square there.
inline std::optional<std::pair<GaussVec, GaussVec>>
vec_quadratic_roots(const NumberField& f, std::size_t level, const GaussVec& p,
                    const GaussVec& q) {
    GaussVec disc = vec_sub(vec_mul(f, level, p, p), vec_scale(q, Gaussian(4)));
    auto s = vec_sqrt(f, level, disc);
    if (!s) return std::nullopt;
    Gaussian half(Rat(1, 2));
    GaussVec r1 = vec_scale(vec_add(vec_neg(p), *s), half);
    GaussVec r2 = vec_scale(vec_sub(vec_neg(p), *s), half);
    return std::make_pair(r1, r2);
}

// Deterministic sign normalization: flip so the first nonzero coordinate has
// (re, im) lexicographically positive.
inline GaussVec vec_canonical_sign(GaussVec v) {
    for (const auto& c : v) {
        if (c.is_zero()) continue;
        bool neg = (c.re < 0) || (c.re == 0 && c.im < 0);
        if (neg) return vec_neg(v);
        return v;
    }
    return v;
}

inline std::optional<GaussVec> vec_sqrt(const NumberField& f, std::size_t level,
                                        const GaussVec& z) {
    if (level == 0) {
        auto r = gaussian_sqrt(z[0]);
        if (!r) return std::nullopt;
        return vec_canonical_sign(GaussVec{*r});
    }
    const auto& step = f.steps()[level - 1];
    GaussVec u = lower_half(z), v = upper_half(z);
    GaussVec P = step.p, Q = step.q;
    GaussVec D = vec_sub(vec_mul(f, level - 1, P, P), vec_scale(Q, Gaussian(4)));
    auto check = [&](const GaussVec& cand) -> std::optional<GaussVec> {
        if (vec_mul(f, level, cand, cand) == z) return vec_canonical_sign(cand);
        return std::nullopt;
    };
    if (vec_is_zero(v)) {
        // x = s: s^2 = u in the subfield.
        if (auto s = vec_sqrt(f, level - 1, u)) {
            GaussVec cand = join_halves(*s, vec_zero(s->size()));
            if (auto ok = check(cand)) return ok;
        }
        // x = t*(P/2 + alpha): t^2 = 4u/D.
        GaussVec w = vec_mul(f, level - 1, vec_scale(u, Gaussian(4)), vec_inv(f, level - 1, D));
        if (auto t = vec_sqrt(f, level - 1, w)) {
            GaussVec s = vec_scale(vec_mul(f, level - 1, P, *t), Gaussian(Rat(1, 2)));
            if (auto ok = check(join_halves(s, *t))) return ok;
        }
        return std::nullopt;
    }
    // General case: x = s + t*alpha with w = t^2 solving
    // D w^2 + (2vP - 4u) w + v^2 = 0 in the subfield.
    GaussVec bcoef = vec_sub(vec_scale(vec_mul(f, level - 1, v, P), Gaussian(2)),
                             vec_scale(u, Gaussian(4)));
    GaussVec ccoef = vec_mul(f, level - 1, v, v);
    // Normalize: w^2 + (b/D) w + (c/D) = 0.
    GaussVec dinv = vec_inv(f, level - 1, D);
    auto roots = vec_quadratic_roots(f, level - 1, vec_mul(f, level - 1, bcoef, dinv),
                                     vec_mul(f, level - 1, ccoef, dinv));
    if (!roots) return std::nullopt;
    for (const GaussVec& w : {roots->first, roots->second}) {
        auto t = vec_sqrt(f, level - 1, w);
        if (!t || vec_is_zero(*t)) continue;
        // s = (v + P t^2) / (2t)
        GaussVec num = vec_add(v, vec_mul(f, level - 1, P, vec_mul(f, level - 1, *t, *t)));
        GaussVec s = vec_mul(f, level - 1, num,
                             vec_inv(f, level - 1, vec_scale(*t, Gaussian(2))));
        if (auto ok = check(join_halves(s, *t))) return ok;
    }
    return std::nullopt;
}

} // namespace detail

// An exact element of a tower field. Immutable value type.
class FieldElement {
public:
    FieldElement() = default;
    FieldElement(FieldPtr field, GaussVec coords)
        : field_(std::move(field)), coords_(std::move(coords)) {
        if (coords_.size() != field_->dim())
            throw internal_error("FieldElement: coordinate size mismatch");
    }

    static FieldElement from_rat(const FieldPtr& f, const Rat& r) {
        GaussVec c(f->dim());
        c[0] = Gaussian(r);
        return FieldElement(f, std::move(c));
    }
    static FieldElement from_gaussian(const FieldPtr& f, const Gaussian& g) {
        GaussVec c(f->dim());
        c[0] = g;
        return FieldElement(f, std::move(c));
    }
    static FieldElement zero(const FieldPtr& f) { return from_rat(f, Rat(0)); }
    static FieldElement one(const FieldPtr& f) { return from_rat(f, Rat(1)); }
    static FieldElement unit_i(const FieldPtr& f) {
        return from_gaussian(f, Gaussian::unit_i());
    }
    // The generator adjoined at step k of the tower.
    static FieldElement generator(const FieldPtr& f, std::size_t k) {
        if (k >= f->levels()) throw internal_error("generator index out of range");
        GaussVec c(f->dim());
        c[std::size_t(1) << k] = Gaussian(1);
        return FieldElement(f, std::move(c));
    }

    const FieldPtr& field() const { return field_; }
    const GaussVec& coords() const { return coords_; }
    bool valid() const { return field_ != nullptr; }

    bool is_zero() const { return detail::vec_is_zero(coords_); }
    bool is_one() const {
        if (!coords_[0].is_one()) return false;
        for (std::size_t i = 1; i < coords_.size(); ++i)
            if (!coords_[i].is_zero()) return false;
        return true;
    }
    bool is_gaussian() const {
        for (std::size_t i = 1; i < coords_.size(); ++i)
            if (!coords_[i].is_zero()) return false;
        return true;
    }
    bool is_rational() const { return is_gaussian() && coords_[0].is_rational(); }

    std::optional<Gaussian> as_gaussian() const {
        if (!is_gaussian()) return std::nullopt;
        return coords_[0];
    }
    std::optional<Rat> as_rational() const {
        if (!is_rational()) return std::nullopt;
        return coords_[0].re;
    }

    // Embeds into a field this one is a structural prefix of.
    FieldElement embedded(const FieldPtr& bigger) const {
        if (field_->same_structure(*bigger)) return FieldElement(bigger, coords_);
        if (!field_->is_prefix_of(*bigger))
            throw internal_error("embedded: target is not a tower extension");
        GaussVec c(bigger->dim());
        for (std::size_t i = 0; i < coords_.size(); ++i) c[i] = coords_[i];
        return FieldElement(bigger, std::move(c));
    }

    friend FieldElement operator+(const FieldElement& a, const FieldElement& b) {
        auto [x, y] = aligned(a, b);
        return FieldElement(x.field_, detail::vec_add(x.coords_, y.coords_));
    }
    friend FieldElement operator-(const FieldElement& a, const FieldElement& b) {
        auto [x, y] = aligned(a, b);
        return FieldElement(x.field_, detail::vec_sub(x.coords_, y.coords_));
    }
    friend FieldElement operator-(const FieldElement& a) {
        return FieldElement(a.field_, detail::vec_neg(a.coords_));
    }
    friend FieldElement operator*(const FieldElement& a, const FieldElement& b) {
        auto [x, y] = aligned(a, b);
        return FieldElement(x.field_,
                            detail::vec_mul(*x.field_, x.field_->levels(), x.coords_, y.coords_));
    }
    FieldElement inverse() const {
        return FieldElement(field_, detail::vec_inv(*field_, field_->levels(), coords_));
    }
    friend FieldElement operator/(const FieldElement& a, const FieldElement& b) {
        auto [x, y] = aligned(a, b);
        return x * y.inverse();
    }

    FieldElement pow(long e) const {
        if (e < 0) return inverse().pow(-e);
        FieldElement acc = one(field_);
        FieldElement base = *this;
        while (e > 0) {
            if (e & 1) acc = acc * base;
            base = base * base;
            e >>= 1;
        }
        return acc;
    }

    friend bool operator==(const FieldElement& a, const FieldElement& b) {
        auto [x, y] = aligned(a, b);
        return x.coords_ == y.coords_;
    }
    friend bool operator!=(const FieldElement& a, const FieldElement& b) { return !(a == b); }

    // Deterministic total order (field structure first, then coordinates).
    static bool total_less(const FieldElement& a, const FieldElement& b) {
        auto [x, y] = aligned(a, b);
        return x.coords_ < y.coords_;
    }

    std::optional<FieldElement> sqrt() const {
        auto r = detail::vec_sqrt(*field_, field_->levels(), coords_);
        if (!r) return std::nullopt;
        return FieldElement(field_, *r);
    }

    bool is_square() const { return sqrt().has_value(); }

    // Exact k-th root within the same field, when the toolkit can find one:
    // any k for rational values, chains of square roots otherwise.
    std::optional<FieldElement> kth_root(unsigned k) const {
        if (k == 0) return std::nullopt;
        if (k == 1) return *this;
        if (auto g = as_gaussian()) {
            if (auto r = gaussian_kth_root(*g, k)) return from_gaussian(field_, *r);
        }
        if (k % 2 == 0) {
            if (auto s = sqrt()) return s->kth_root(k / 2);
        }
        return std::nullopt;
    }

    std::complex<double> approx() const { return field_->approx_of(coords_); }

    // Monic minimal polynomial over Q, coefficients low..high.
    std::vector<Rat> minpoly_over_q() const;

    std::string to_string() const;

private:
    static std::pair<FieldElement, FieldElement> aligned(const FieldElement& a,
                                                         const FieldElement& b);

    FieldPtr field_;
    GaussVec coords_;
};

inline std::string NumberField::step_to_string(std::size_t k) const {
    std::vector<QuadraticStep> prefix(steps_.begin(), steps_.begin() + k);
    auto sub = std::make_shared<NumberField>(prefix);
    FieldElement p(sub, steps_[k].p), q(sub, steps_[k].q);
    std::string s = "t^2";
    if (!p.is_zero()) s += "+(" + p.to_string() + ")*t";
    if (!q.is_zero()) s += "+(" + q.to_string() + ")";
    return s;
}

// ---------------------------------------------------------------------------
// Field unification

struct Unified {
    FieldPtr field;
    // Images of each source generator in the unified field, per side.
    std::vector<FieldElement> left_images;
    std::vector<FieldElement> right_images;
    bool left_trivial = false;  // left elements embed by coordinate padding
    bool right_trivial = false;
};

namespace detail {

inline FieldElement eval_via_images(const GaussVec& coords, std::size_t level,
                                    const FieldPtr& target,
                                    const std::vector<FieldElement>& images) {
    FieldElement acc = FieldElement::zero(target);
    for (std::size_t m = 0; m < coords.size(); ++m) {
        if (coords[m].is_zero()) continue;
        FieldElement term = FieldElement::from_gaussian(target, coords[m]);
        for (std::size_t k = 0; k < level; ++k)
            if (m & (std::size_t(1) << k)) term = term * images[k];
        acc = acc + term;
    }
    return acc;
}

} // namespace detail

// Computes a common tower containing both fields, adjoining steps of `b` onto
// `a` when needed. Throws unsupported_extension_error when the result would
// exceed the two-step cap.
inline Unified unify_fields(const FieldPtr& a, const FieldPtr& b) {
    Unified u;
    if (a->same_structure(*b)) {
        u.field = a;
        u.left_trivial = u.right_trivial = true;
        return u;
    }
    if (a->is_prefix_of(*b)) {
        u.field = b;
        u.left_trivial = u.right_trivial = true;
        return u;
    }
    if (b->is_prefix_of(*a)) {
        u.field = a;
        u.left_trivial = u.right_trivial = true;
        return u;
    }
    // General amalgamation: extend a by the steps of b, mapping each step's
    // coefficients through the images computed so far.
    FieldPtr current = a;
    std::vector<FieldElement> right_images;
    for (std::size_t k = 0; k < b->levels(); ++k) {
        FieldElement p = detail::eval_via_images(b->steps()[k].p, k, current, right_images);
        FieldElement q = detail::eval_via_images(b->steps()[k].q, k, current, right_images);
        auto roots = detail::vec_quadratic_roots(*current, current->levels(), p.coords(),
                                                 q.coords());
        if (roots) {
            right_images.push_back(FieldElement(current, roots->first));
            continue;
        }
        if (current->levels() >= 2)
            throw unsupported_extension_error(
                "cannot amalgamate field towers within two quadratic extensions: " +
                a->describe() + " vs " + b->describe());
        std::vector<QuadraticStep> steps = current->steps();
        steps.push_back(QuadraticStep{p.coords(), q.coords()});
        FieldPtr next = std::make_shared<NumberField>(steps);
        for (auto& img : right_images) img = img.embedded(next);
        right_images.push_back(FieldElement::generator(next, next->levels() - 1));
        current = next;
    }
    u.field = current;
    u.left_trivial = true; // a is a structural prefix of the result
    u.right_images = std::move(right_images);
    return u;
}

inline FieldElement apply_unification(const FieldElement& e, const Unified& u, bool left) {
    if ((left && u.left_trivial) || (!left && u.right_trivial)) return e.embedded(u.field);
    const auto& images = left ? u.left_images : u.right_images;
    return detail::eval_via_images(e.coords(), e.field()->levels(), u.field, images);
}

inline std::pair<FieldElement, FieldElement>
FieldElement::aligned(const FieldElement& a, const FieldElement& b) {
    if (!a.field_ || !b.field_) throw internal_error("arithmetic on empty FieldElement");
    if (a.field_ == b.field_ || a.field_->same_structure(*b.field_))
        return {a, FieldElement(a.field_, b.coords_)};
    Unified u = unify_fields(a.field_, b.field_);
    return {apply_unification(a, u, true), apply_unification(b, u, false)};
}

// ---------------------------------------------------------------------------

inline std::vector<Rat> FieldElement::minpoly_over_q() const {
    // Flatten to a Q-vector space of dimension 2*dim (re and im parts).
    std::size_t n = 2 * field_->dim();
    auto flatten = [&](const FieldElement& e) {
        std::vector<Rat> v;
        v.reserve(n);
        for (const auto& g : e.coords()) {
            v.push_back(g.re);
            v.push_back(g.im);
        }
        return v;
    };
    // Row-reduced basis of the span of powers; powers[i] tracks z^i.
    std::vector<std::vector<Rat>> rows;        // reduced rows
    std::vector<std::vector<Rat>> row_coeffs;  // expression of each row in powers
    FieldElement p = one(field_);
    std::vector<std::vector<Rat>> power_flat;
    for (std::size_t deg = 0; deg <= n; ++deg) {
        std::vector<Rat> v = flatten(p);
        power_flat.push_back(v);
        std::vector<Rat> combo(deg + 1, Rat(0));
        combo[deg] = 1;
        // Reduce against existing rows.
        for (std::size_t r = 0; r < rows.size(); ++r) {
            std::size_t piv = 0;
            while (piv < n && rows[r][piv] == 0) ++piv;
            if (piv == n || v[piv] == 0) continue;
            Rat factor = v[piv] / rows[r][piv];
            for (std::size_t j = 0; j < n; ++j) v[j] -= factor * rows[r][j];
            for (std::size_t j = 0; j < row_coeffs[r].size() && j < combo.size(); ++j)
                combo[j] -= factor * row_coeffs[r][j];
        }
        bool zero = std::all_of(v.begin(), v.end(), [](const Rat& x) { return x == 0; });
        if (zero) {
            // combo gives the dependency: sum combo[j] * z^j = 0, combo[deg]=1.
            return combo;
        }
        rows.push_back(v);
        row_coeffs.push_back(combo);
        p = p * *this;
    }
    throw internal_error("minpoly_over_q: no dependency found");
}

inline std::string FieldElement::to_string() const {
    if (auto g = as_gaussian()) return g->to_string();
    std::string s;
    bool first = true;
    for (std::size_t m = 0; m < coords_.size(); ++m) {
        if (coords_[m].is_zero()) continue;
        std::string term = "(" + coords_[m].to_string() + ")";
        for (std::size_t k = 0; k < field_->levels(); ++k)
            if (m & (std::size_t(1) << k)) term += "*r" + std::to_string(k + 1);
        if (!first) s += "+";
        s += term;
        first = false;
    }
    if (first) s = "0";
    return s;
}

// Result of adjoining a root of a monic quadratic.
struct AdjoinResult {
    FieldPtr field;        // possibly extended field
    FieldElement root;     // a root of the polynomial, in `field`
    bool extended = false;
};

// Adjoins a root of t^2 + p t + q (p, q in `field`). When the polynomial is
// reducible the field is returned unchanged together with a root.
inline AdjoinResult adjoin_quadratic_root(const FieldPtr& field, const FieldElement& p,
                                          const FieldElement& q) {
    FieldElement pe = p, qe = q;
    if (!pe.field()->same_structure(*field)) pe = pe.embedded(field);
    if (!qe.field()->same_structure(*field)) qe = qe.embedded(field);
    auto roots = detail::vec_quadratic_roots(*field, field->levels(), pe.coords(), qe.coords());
    if (roots) return AdjoinResult{field, FieldElement(field, roots->first), false};
    if (field->levels() >= 2)
        throw tower_depth_error("adjoining a root would exceed total degree 4 over Q(i): " +
                                field->describe());
    std::vector<QuadraticStep> steps = field->steps();
    steps.push_back(QuadraticStep{pe.coords(), qe.coords()});
    FieldPtr ext = std::make_shared<NumberField>(steps);
    return AdjoinResult{ext, FieldElement::generator(ext, ext->levels() - 1), true};
}

// Square root of an element, extending the tower when needed.
inline std::pair<FieldPtr, FieldElement> sqrt_extending(const FieldElement& z) {
    if (auto s = z.sqrt()) return {z.field(), *s};
    AdjoinResult r = adjoin_quadratic_root(z.field(), FieldElement::zero(z.field()), -z);
    return {r.field, r.root};
}

} // namespace folia
