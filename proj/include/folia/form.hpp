#pragma once

#include "folia/bipoly.hpp"
#include "folia/errors.hpp"

#include <climits>
#include <optional>
#include <string>
#include <utility>

namespace folia {

// A foliation germ given by the 1-form a dx + b dy with polynomial
// coefficients. Saturated at construction: gcd(a, b) is divided out.
class OneForm {
public:
    OneForm() = default;

    static OneForm make(const BiPoly& a, const BiPoly& b) {
        auto [pa, pb] = BiPoly::aligned(a, b);
        if (pa.is_zero() && pb.is_zero())
            throw domain_error("OneForm: both coefficients are zero");
        OneForm w;
        BiPoly g = bipoly_gcd(pa, pb);
        if (!g.is_constant()) {
            auto qa = exact_divide(pa, g);
            auto qb = exact_divide(pb, g);
            if (!qa || !qb) throw internal_error("OneForm: gcd division failed");
            pa = *qa;
            pb = *qb;
            w.saturation_divided_ = true;
        }
        w.a_ = pa;
        w.b_ = pb;
        return w;
    }

    const BiPoly& a() const { return a_; } // dx coefficient
    const BiPoly& b() const { return b_; } // dy coefficient
    const FieldPtr& field() const { return a_.field(); }
    bool saturation_divided() const { return saturation_divided_; }

    bool is_saturated() const { return bipoly_gcd(a_, b_).is_constant(); }

    // nu = min(ord a, ord b).
    int multiplicity() const {
        auto oa = a_.order(), ob = b_.order();
        if (!oa) return *ob;
        if (!ob) return *oa;
        return std::min(*oa, *ob);
    }

    bool singular_at_origin() const {
        return a_.coefficient(0, 0).is_zero() && b_.coefficient(0, 0).is_zero();
    }

    OneForm promoted(const FieldPtr& f) const {
        OneForm w;
        w.a_ = a_.promoted(f);
        w.b_ = b_.promoted(f);
        w.saturation_divided_ = saturation_divided_;
        return w;
    }

    OneForm translated(const FieldElement& cx, const FieldElement& cy) const {
        OneForm w;
        w.a_ = poly_translate(a_, cx, cy);
        w.b_ = poly_translate(b_, cx, cy);
        w.saturation_divided_ = saturation_divided_;
        return w;
    }

    friend bool operator==(const OneForm& u, const OneForm& v) {
        return u.a_ == v.a_ && u.b_ == v.b_;
    }

    // Proportionality as saturated forms (equal up to a unit scalar).
    bool same_foliation(const OneForm& v) const {
        return (a_ * v.b_) == (v.a_ * b_);
    }

    std::string to_string(const std::string& xv = "x", const std::string& yv = "y") const {
        std::string s;
        if (!a_.is_zero()) s += "(" + a_.to_string(xv, yv) + ") d" + xv;
        if (!b_.is_zero()) {
            if (!s.empty()) s += " + ";
            s += "(" + b_.to_string(xv, yv) + ") d" + yv;
        }
        return s;
    }

private:
    BiPoly a_;
    BiPoly b_;
    bool saturation_divided_ = false;
};

// Linear data of the dual vector field X = b d/dx - a d/dy at the origin:
// matrix [[b_x, b_y], [-a_x, -a_y]], trace and determinant.
struct LinearPart {
    FieldElement m11, m12, m21, m22;
    FieldElement trace;
    FieldElement det;
};

inline LinearPart linear_part_at_origin(const OneForm& w) {
    const FieldPtr& f = w.field();
    LinearPart lp;
    lp.m11 = w.b().coefficient(1, 0);
    lp.m12 = w.b().coefficient(0, 1);
    lp.m21 = -w.a().coefficient(1, 0);
    lp.m22 = -w.a().coefficient(0, 1);
    lp.trace = lp.m11 + lp.m22;
    lp.det = lp.m11 * lp.m22 - lp.m12 * lp.m21;
    (void)f;
    return lp;
}

enum class SingClass { Regular, Simple, SaddleNode, NonSimple };

inline std::string to_string(SingClass c) {
    switch (c) {
    case SingClass::Regular: return "Regular";
    case SingClass::Simple: return "Simple";
    case SingClass::SaddleNode: return "SaddleNode";
    case SingClass::NonSimple: return "NonSimple";
    }
    return "?";
}

// Classification from the linear part. With D != 0 the eigenvalue ratio r
// solves D r^2 - (T^2 - 2D) r + D = 0; the singularity is non-simple exactly
// when some root is a positive rational.
inline SingClass classify_linear(const FieldElement& T, const FieldElement& D) {
    if (D.is_zero()) {
        if (T.is_zero()) return SingClass::NonSimple; // nilpotent or zero linear part
        return SingClass::SaddleNode;
    }
    const FieldPtr& f = T.field();
    FieldElement two = FieldElement::from_rat(f, Rat(2));
    FieldElement b = -(T * T - two * D) / D; // monic: r^2 + b r + 1
    FieldElement one = FieldElement::one(f);
    auto roots = detail::vec_quadratic_roots(*f, f->levels(), b.coords(),
                                             one.embedded(f).coords());
    if (!roots) return SingClass::Simple; // ratio not even in the tower
    for (const GaussVec& rv : {roots->first, roots->second}) {
        FieldElement r(f, rv);
        auto q = r.as_rational();
        if (q && *q > 0) return SingClass::NonSimple;
    }
    return SingClass::Simple;
}

// Eigenvalues of the linear part within the tower, when expressible.
inline std::optional<std::pair<FieldElement, FieldElement>>
eigenvalues_in_tower(const FieldElement& T, const FieldElement& D) {
    const FieldPtr& f = T.field();
    auto roots = detail::vec_quadratic_roots(*f, f->levels(), (-T).coords(), D.coords());
    if (!roots) return std::nullopt;
    return std::make_pair(FieldElement(f, roots->first), FieldElement(f, roots->second));
}

// Result of one elementary blow-up of a 1-form in one chart direction.
struct FormTransform {
    OneForm form;
    bool dicritical = false;
    int nu = 0;
};

// x-chart: (x, t) -> (x, x t). Pullback, divided by x^nu (x^{ nu+1 } when
// dicritical), then re-saturated.
inline FormTransform strict_transform_x(const OneForm& w) {
    FormTransform out;
    int nu = w.multiplicity();
    out.nu = nu;
    const FieldPtr& f = w.field();
    BiPoly an = w.a().homogeneous_part(nu);
    BiPoly bn = w.b().homogeneous_part(nu);
    BiPoly crit = BiPoly::var_x(f) * an + BiPoly::var_y(f) * bn;
    out.dicritical = crit.is_zero();
    BiPoly asub = w.a().subst_y_to_xy();
    BiPoly bsub = w.b().subst_y_to_xy();
    BiPoly A = asub + BiPoly::var_y(f) * bsub;
    BiPoly B = BiPoly::var_x(f) * bsub;
    int m = std::min(A.is_zero() ? INT_MAX : A.x_order(), B.is_zero() ? INT_MAX : B.x_order());
    bool divisible_extra = m >= nu + 1;
    if (divisible_extra != out.dicritical)
        throw internal_error("dicritical criterion and divisibility disagree (x-chart)");
    int k = nu + (out.dicritical ? 1 : 0);
    out.form = OneForm::make(A.shift_x(-k), B.shift_x(-k));
    return out;
}

// y-chart: (s, y) -> (s y, y).
inline FormTransform strict_transform_y(const OneForm& w) {
    FormTransform out;
    int nu = w.multiplicity();
    out.nu = nu;
    const FieldPtr& f = w.field();
    BiPoly an = w.a().homogeneous_part(nu);
    BiPoly bn = w.b().homogeneous_part(nu);
    BiPoly crit = BiPoly::var_x(f) * an + BiPoly::var_y(f) * bn;
    out.dicritical = crit.is_zero();
    BiPoly asub = w.a().subst_x_to_xy();
    BiPoly bsub = w.b().subst_x_to_xy();
    BiPoly A = BiPoly::var_y(f) * asub;           // ds coefficient
    BiPoly B = BiPoly::var_x(f) * asub + bsub;    // dy coefficient
    int m = std::min(A.is_zero() ? INT_MAX : A.y_order(), B.is_zero() ? INT_MAX : B.y_order());
    bool divisible_extra = m >= nu + 1;
    if (divisible_extra != out.dicritical)
        throw internal_error("dicritical criterion and divisibility disagree (y-chart)");
    int k = nu + (out.dicritical ? 1 : 0);
    out.form = OneForm::make(A.shift_y(-k), B.shift_y(-k));
    return out;
}

enum class ChartDir { X, Y };

inline std::string to_string(ChartDir d) { return d == ChartDir::X ? "x" : "y"; }

inline FormTransform strict_transform_blowup(const OneForm& w, ChartDir dir) {
    return dir == ChartDir::X ? strict_transform_x(w) : strict_transform_y(w);
}

} // namespace folia
