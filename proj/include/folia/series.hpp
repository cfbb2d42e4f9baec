#pragma once

#include "folia/bipoly.hpp"
#include "folia/errors.hpp"
#include "folia/number_field.hpp"

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

namespace folia {

// Truncated power series in one variable. Coefficients for exponents
// 0 .. truncation()-1 are tracked; every arithmetic result's truncation is
// the minimum of the operands'.
class PowerSeries {
public:
    PowerSeries() : field_(NumberField::gaussian_rationals()), trunc_(0) {}
    PowerSeries(FieldPtr field, int trunc, std::string var = "t")
        : field_(std::move(field)), var_(std::move(var)), trunc_(trunc),
          coeff_((std::size_t)std::max(0, trunc), FieldElement::zero(field_)) {}

    static PowerSeries zero(const FieldPtr& f, int trunc) { return PowerSeries(f, trunc); }
    static PowerSeries constant(const FieldPtr& f, const FieldElement& c, int trunc) {
        PowerSeries s(f, trunc);
        if (trunc > 0) s.set(0, c);
        return s;
    }
    static PowerSeries identity(const FieldPtr& f, int trunc) {
        PowerSeries s(f, trunc);
        if (trunc > 1) s.set(1, FieldElement::one(f));
        return s;
    }

    const FieldPtr& field() const { return field_; }
    int truncation() const { return trunc_; }
    const std::string& var() const { return var_; }

    FieldElement at(int k) const {
        if (k < 0 || k >= trunc_) return FieldElement::zero(field_);
        return coeff_[(std::size_t)k];
    }
    void set(int k, const FieldElement& c) {
        if (k < 0 || k >= trunc_) {
            if (c.is_zero()) return;
            throw internal_error("PowerSeries::set beyond truncation");
        }
        FieldElement v = c;
        if (!v.field()->same_structure(*field_)) {
            Unified u = unify_fields(field_, v.field());
            if (!u.field->same_structure(*field_)) {
                promote_in_place(u.field);
                v = apply_unification(c, u, false);
            } else {
                v = apply_unification(c, u, false);
            }
        }
        coeff_[(std::size_t)k] = v;
    }

    bool is_zero() const {
        return std::all_of(coeff_.begin(), coeff_.end(),
                           [](const FieldElement& c) { return c.is_zero(); });
    }
    // Order of the first nonzero coefficient; nullopt if zero to truncation.
    std::optional<int> ord() const {
        for (int k = 0; k < trunc_; ++k)
            if (!coeff_[(std::size_t)k].is_zero()) return k;
        return std::nullopt;
    }

    PowerSeries truncated(int n) const {
        PowerSeries r(field_, std::min(n, trunc_), var_);
        for (int k = 0; k < r.trunc_; ++k) r.coeff_[(std::size_t)k] = coeff_[(std::size_t)k];
        return r;
    }

    void promote_in_place(const FieldPtr& f) {
        if (field_->same_structure(*f)) return;
        Unified u = unify_fields(field_, f);
        for (auto& c : coeff_) c = apply_unification(c, u, true);
        field_ = u.field;
    }

    static std::pair<PowerSeries, PowerSeries> aligned(const PowerSeries& a,
                                                       const PowerSeries& b) {
        PowerSeries x = a, y = b;
        if (!x.field_->same_structure(*y.field_)) {
            Unified u = unify_fields(x.field_, y.field_);
            x.promote_in_place(u.field);
            y.promote_in_place(u.field);
        }
        int t = std::min(x.trunc_, y.trunc_);
        return {x.truncated(t), y.truncated(t)};
    }

    friend PowerSeries operator+(const PowerSeries& a, const PowerSeries& b) {
        auto [x, y] = aligned(a, b);
        for (int k = 0; k < x.trunc_; ++k)
            x.coeff_[(std::size_t)k] = x.coeff_[(std::size_t)k] + y.coeff_[(std::size_t)k];
        return x;
    }
    friend PowerSeries operator-(const PowerSeries& a, const PowerSeries& b) {
        auto [x, y] = aligned(a, b);
        for (int k = 0; k < x.trunc_; ++k)
            x.coeff_[(std::size_t)k] = x.coeff_[(std::size_t)k] - y.coeff_[(std::size_t)k];
        return x;
    }
    friend PowerSeries operator-(const PowerSeries& a) {
        PowerSeries r = a;
        for (auto& c : r.coeff_) c = -c;
        return r;
    }
    friend PowerSeries operator*(const PowerSeries& a, const PowerSeries& b) {
        auto [x, y] = aligned(a, b);
        PowerSeries r(x.field_, x.trunc_, x.var_);
        for (int i = 0; i < x.trunc_; ++i) {
            if (x.coeff_[(std::size_t)i].is_zero()) continue;
            for (int j = 0; i + j < x.trunc_; ++j)
                r.coeff_[(std::size_t)(i + j)] =
                    r.coeff_[(std::size_t)(i + j)] + x.coeff_[(std::size_t)i] * y.coeff_[(std::size_t)j];
        }
        return r;
    }
    friend PowerSeries operator*(const PowerSeries& a, const FieldElement& c) {
        PowerSeries r = a;
        for (auto& v : r.coeff_) v = v * c;
        return r;
    }

    friend bool operator==(const PowerSeries& a, const PowerSeries& b) {
        auto [x, y] = aligned(a, b);
        return x.coeff_ == y.coeff_;
    }

    // Multiplication by the k-th power of the variable (k >= 0), or exact
    // division by it (k < 0; the low coefficients must vanish).
    PowerSeries shift(int k) const {
        PowerSeries r(field_, trunc_, var_);
        if (k >= 0) {
            for (int i = 0; i + k < trunc_; ++i) r.coeff_[(std::size_t)(i + k)] = coeff_[(std::size_t)i];
            r.trunc_ = trunc_; // window keeps its length; high terms fall off
        } else {
            for (int i = 0; i < -k; ++i)
                if (!at(i).is_zero()) throw internal_error("PowerSeries::shift: not divisible");
            r = PowerSeries(field_, trunc_ + k, var_);
            for (int i = 0; i < r.trunc_; ++i) r.coeff_[(std::size_t)i] = at(i - k);
        }
        return r;
    }

    // Substitute the variable by its k-th power: exponents multiply by k.
    PowerSeries stretch(int k) const {
        if (k <= 0) throw internal_error("PowerSeries::stretch: k must be positive");
        PowerSeries r(field_, trunc_ * k, var_);
        for (int i = 0; i < trunc_; ++i) r.coeff_[(std::size_t)(i * k)] = coeff_[(std::size_t)i];
        return r;
    }

    PowerSeries derivative() const {
        PowerSeries r(field_, std::max(0, trunc_ - 1), var_);
        for (int k = 1; k < trunc_; ++k)
            r.coeff_[(std::size_t)(k - 1)] =
                coeff_[(std::size_t)k] * FieldElement::from_rat(field_, Rat(k));
        return r;
    }

    // Multiplicative inverse; requires a unit constant term.
    PowerSeries inverse() const {
        if (trunc_ <= 0 || at(0).is_zero())
            throw internal_error("PowerSeries::inverse: constant term is zero");
        PowerSeries r(field_, trunc_, var_);
        FieldElement c0inv = at(0).inverse();
        r.set(0, c0inv);
        for (int k = 1; k < trunc_; ++k) {
            FieldElement acc = FieldElement::zero(field_);
            for (int j = 1; j <= k; ++j) acc = acc + at(j) * r.at(k - j);
            r.set(k, -(acc * c0inv));
        }
        return r;
    }

    // Composition a(b(t)); requires ord(b) >= 1.
    PowerSeries compose(const PowerSeries& b) const {
        if (b.at(0).is_zero() == false)
            throw internal_error("PowerSeries::compose: inner constant term nonzero");
        auto [x, y] = aligned(*this, b);
        PowerSeries r = PowerSeries::zero(x.field_, x.trunc_);
        PowerSeries p = PowerSeries::constant(x.field_, FieldElement::one(x.field_), x.trunc_);
        for (int k = 0; k < x.trunc_; ++k) {
            r = r + p * x.at(k);
            p = p * y;
        }
        return r;
    }

    // Compositional inverse of a series with ord 1: returns phi with
    // self(phi(t)) = t to the common truncation.
    PowerSeries reversion() const {
        if (trunc_ < 2 || at(0).is_zero() == false || at(1).is_zero())
            throw internal_error("PowerSeries::reversion: needs order exactly 1");
        PowerSeries phi(field_, trunc_, var_);
        FieldElement w1inv = at(1).inverse();
        phi.set(1, w1inv);
        for (int k = 2; k < trunc_; ++k) {
            // [t^k] self(phi_partial) with phi_k unknown contributes w1 * phi_k.
            PowerSeries trial = compose(phi.truncated(trunc_));
            FieldElement residue = trial.at(k); // target coefficient is zero for k >= 2
            phi.set(k, -(residue * w1inv));
        }
        PowerSeries check = compose(phi);
        for (int k = 0; k < trunc_; ++k) {
            FieldElement expect =
                (k == 1) ? FieldElement::one(field_) : FieldElement::zero(field_);
            if (check.at(k) != expect) throw internal_error("reversion verification failed");
        }
        return phi;
    }

    // k-th root with prescribed root of the leading unit coefficient.
    // Requires at(0) != 0 and root0^k == at(0).
    PowerSeries kth_root_with(const FieldElement& root0, unsigned k) const {
        if (at(0).is_zero()) throw internal_error("kth_root_with: constant term zero");
        PowerSeries r(field_, trunc_, var_);
        FieldElement r0 = root0;
        if (!r0.field()->same_structure(*field_)) {
            Unified u = unify_fields(field_, r0.field());
            PowerSeries self = *this;
            self.promote_in_place(u.field);
            return self.kth_root_with(apply_unification(r0, u, false), k);
        }
        if (r0.pow((long)k) != at(0)) throw internal_error("kth_root_with: wrong leading root");
        r.set(0, r0);
        FieldElement kf = FieldElement::from_rat(field_, Rat(k));
        FieldElement denom = (kf * r0.pow((long)k - 1)).inverse();
        for (int m = 1; m < trunc_; ++m) {
            PowerSeries pk = r.pow_series(k);
            FieldElement residue = at(m) - pk.at(m);
            r.set(m, residue * denom);
        }
        PowerSeries check = r.pow_series(k);
        for (int m = 0; m < trunc_; ++m)
            if (check.at(m) != at(m)) throw internal_error("kth_root verification failed");
        return r;
    }

    PowerSeries pow_series(unsigned e) const {
        PowerSeries acc = PowerSeries::constant(field_, FieldElement::one(field_), trunc_);
        PowerSeries base = *this;
        while (e > 0) {
            if (e & 1) acc = acc * base;
            base = base * base;
            e >>= 1;
        }
        return acc;
    }

    std::string to_string() const {
        std::string s;
        bool first = true;
        for (int k = 0; k < trunc_; ++k) {
            if (at(k).is_zero()) continue;
            std::string term;
            if (auto r = at(k).as_rational()) {
                if (*r == 1 && k > 0)
                    term = "";
                else if (*r == -1 && k > 0)
                    term = "-";
                else
                    term = rat_to_string(*r) + (k > 0 ? "*" : "");
            } else {
                term = "(" + at(k).to_string() + ")" + (k > 0 ? "*" : "");
            }
            if (k > 0) term += var_ + (k > 1 ? "^" + std::to_string(k) : "");
            if (!first && term.rfind('-', 0) != 0) s += "+";
            s += term;
            first = false;
        }
        if (first) s = "0";
        s += " + O(" + var_ + "^" + std::to_string(trunc_) + ")";
        return s;
    }

private:
    FieldPtr field_;
    std::string var_ = "t";
    int trunc_ = 0;
    std::vector<FieldElement> coeff_;
};

// Evaluate a bivariate polynomial at a pair of series, truncating throughout.
inline PowerSeries bipoly_eval_series(const BiPoly& p, const PowerSeries& sx,
                                      const PowerSeries& sy) {
    auto [x, y] = PowerSeries::aligned(sx, sy);
    BiPoly q = p;
    {
        Unified u = unify_fields(q.field(), x.field());
        if (!u.field->same_structure(*x.field())) {
            x.promote_in_place(u.field);
            y.promote_in_place(u.field);
        }
        q = q.promoted(u.field);
        x.promote_in_place(u.field);
        y.promote_in_place(u.field);
    }
    int t = x.truncation();
    PowerSeries acc = PowerSeries::zero(x.field(), t);
    std::vector<PowerSeries> xp{PowerSeries::constant(x.field(), FieldElement::one(x.field()), t)};
    std::vector<PowerSeries> yp{xp[0]};
    for (const auto& [k, c] : q.terms()) {
        while ((int)xp.size() <= k.first) xp.push_back(xp.back() * x);
        while ((int)yp.size() <= k.second) yp.push_back(yp.back() * y);
        acc = acc + xp[(std::size_t)k.first] * yp[(std::size_t)k.second] * c;
    }
    return acc;
}

} // namespace folia
