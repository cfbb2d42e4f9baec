#pragma once

#include "folia/errors.hpp"
#include "folia/number_field.hpp"

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace folia {

// Sparse bivariate polynomial over a tower field. No explicit zero
// coefficients are stored; all coefficients share one field.
class BiPoly {
public:
    using Key = std::pair<int, int>; // (x exponent, y exponent)

    BiPoly() : field_(NumberField::gaussian_rationals()) {}
    explicit BiPoly(FieldPtr field) : field_(std::move(field)) {}

    static BiPoly zero(const FieldPtr& f) { return BiPoly(f); }
    static BiPoly constant(const FieldPtr& f, const FieldElement& c) {
        BiPoly p(f);
        p.set(0, 0, c);
        return p;
    }
    static BiPoly constant(const FieldPtr& f, const Rat& c) {
        return constant(f, FieldElement::from_rat(f, c));
    }
    static BiPoly monomial(const FieldPtr& f, int i, int j, const FieldElement& c) {
        BiPoly p(f);
        p.set(i, j, c);
        return p;
    }
    static BiPoly var_x(const FieldPtr& f) {
        return monomial(f, 1, 0, FieldElement::one(f));
    }
    static BiPoly var_y(const FieldPtr& f) {
        return monomial(f, 0, 1, FieldElement::one(f));
    }

    const FieldPtr& field() const { return field_; }
    const std::map<Key, FieldElement>& terms() const { return terms_; }

    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const {
        return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first == Key{0, 0});
    }
    bool is_unit() const { return terms_.size() == 1 && terms_.begin()->first == Key{0, 0}; }

    FieldElement coefficient(int i, int j) const {
        auto it = terms_.find({i, j});
        if (it == terms_.end()) return FieldElement::zero(field_);
        return it->second;
    }

    void set(int i, int j, const FieldElement& c) {
        if (i < 0 || j < 0) throw internal_error("BiPoly: negative exponent");
        FieldElement cc = c;
        if (!cc.field()->same_structure(*field_)) cc = cc.embedded(field_);
        if (cc.is_zero())
            terms_.erase({i, j});
        else
            terms_[{i, j}] = cc;
    }

    void add_term(int i, int j, const FieldElement& c) {
        set(i, j, coefficient(i, j) + c);
    }

    // Total degree; nullopt for the zero polynomial.
    std::optional<int> degree() const {
        if (terms_.empty()) return std::nullopt;
        int d = 0;
        for (const auto& [k, c] : terms_) d = std::max(d, k.first + k.second);
        return d;
    }
    // Minimal total degree of a monomial; nullopt (infinite) for zero.
    std::optional<int> order() const {
        if (terms_.empty()) return std::nullopt;
        int d = terms_.begin()->first.first + terms_.begin()->first.second;
        for (const auto& [k, c] : terms_) d = std::min(d, k.first + k.second);
        return d;
    }
    int deg_x() const {
        int d = -1;
        for (const auto& [k, c] : terms_) d = std::max(d, k.first);
        return d;
    }
    int deg_y() const {
        int d = -1;
        for (const auto& [k, c] : terms_) d = std::max(d, k.second);
        return d;
    }
    // Largest k with x^k dividing the polynomial (0 for zero polynomial).
    int x_order() const {
        if (terms_.empty()) return 0;
        int d = terms_.begin()->first.first;
        for (const auto& [k, c] : terms_) d = std::min(d, k.first);
        return d;
    }
    int y_order() const {
        if (terms_.empty()) return 0;
        int d = terms_.begin()->first.second;
        for (const auto& [k, c] : terms_) d = std::min(d, k.second);
        return d;
    }

    BiPoly promoted(const FieldPtr& f) const {
        if (field_->same_structure(*f)) {
            BiPoly r(f);
            r.terms_ = terms_;
            return r;
        }
        Unified u = unify_fields(field_, f);
        if (!u.field->same_structure(*f))
            throw internal_error("promoted: target field too small");
        BiPoly r(f);
        for (const auto& [k, c] : terms_) r.set(k.first, k.second, apply_unification(c, u, true));
        return r;
    }

    static std::pair<BiPoly, BiPoly> aligned(const BiPoly& a, const BiPoly& b) {
        if (a.field_->same_structure(*b.field_)) return {a, b.promoted(a.field_)};
        Unified u = unify_fields(a.field_, b.field_);
        BiPoly ra(u.field), rb(u.field);
        for (const auto& [k, c] : a.terms_)
            ra.set(k.first, k.second, apply_unification(c, u, true));
        for (const auto& [k, c] : b.terms_)
            rb.set(k.first, k.second, apply_unification(c, u, false));
        return {ra, rb};
    }

    friend BiPoly operator+(const BiPoly& a, const BiPoly& b) {
        auto [x, y] = aligned(a, b);
        for (const auto& [k, c] : y.terms_) x.add_term(k.first, k.second, c);
        return x;
    }
    friend BiPoly operator-(const BiPoly& a, const BiPoly& b) {
        auto [x, y] = aligned(a, b);
        for (const auto& [k, c] : y.terms_) x.add_term(k.first, k.second, -c);
        return x;
    }
    friend BiPoly operator-(const BiPoly& a) {
        BiPoly r(a.field_);
        for (const auto& [k, c] : a.terms_) r.terms_[k] = -c;
        return r;
    }
    friend BiPoly operator*(const BiPoly& a, const BiPoly& b) {
        auto [x, y] = aligned(a, b);
        BiPoly r(x.field_);
        for (const auto& [ka, ca] : x.terms_)
            for (const auto& [kb, cb] : y.terms_)
                r.add_term(ka.first + kb.first, ka.second + kb.second, ca * cb);
        return r;
    }
    friend BiPoly operator*(const BiPoly& a, const FieldElement& c) {
        BiPoly r(a.field_);
        for (const auto& [k, v] : a.terms_) r.set(k.first, k.second, v * c);
        return r;
    }
    friend BiPoly operator*(const FieldElement& c, const BiPoly& a) { return a * c; }

    friend bool operator==(const BiPoly& a, const BiPoly& b) {
        auto [x, y] = aligned(a, b);
        return x.terms_ == y.terms_;
    }
    friend bool operator!=(const BiPoly& a, const BiPoly& b) { return !(a == b); }

    BiPoly pow(int e) const {
        if (e < 0) throw internal_error("BiPoly::pow: negative exponent");
        BiPoly acc = constant(field_, FieldElement::one(field_));
        BiPoly base = *this;
        while (e > 0) {
            if (e & 1) acc = acc * base;
            base = base * base;
            e >>= 1;
        }
        return acc;
    }

    BiPoly derivative_x() const {
        BiPoly r(field_);
        for (const auto& [k, c] : terms_)
            if (k.first > 0)
                r.set(k.first - 1, k.second, c * FieldElement::from_rat(field_, Rat(k.first)));
        return r;
    }
    BiPoly derivative_y() const {
        BiPoly r(field_);
        for (const auto& [k, c] : terms_)
            if (k.second > 0)
                r.set(k.first, k.second - 1, c * FieldElement::from_rat(field_, Rat(k.second)));
        return r;
    }

    // Homogeneous part of total degree d.
    BiPoly homogeneous_part(int d) const {
        BiPoly r(field_);
        for (const auto& [k, c] : terms_)
            if (k.first + k.second == d) r.set(k.first, k.second, c);
        return r;
    }

    BiPoly swap_vars() const {
        BiPoly r(field_);
        for (const auto& [k, c] : terms_) r.set(k.second, k.first, c);
        return r;
    }

    // Exponent remaps for the hot substitutions.
    BiPoly subst_x_pow(int d) const { // x -> x^d
        BiPoly r(field_);
        for (const auto& [k, c] : terms_) r.set(k.first * d, k.second, c);
        return r;
    }
    BiPoly subst_y_to_xy() const { // y -> x*y
        BiPoly r(field_);
        for (const auto& [k, c] : terms_) r.set(k.first + k.second, k.second, c);
        return r;
    }
    BiPoly subst_x_to_xy() const { // x -> x*y
        BiPoly r(field_);
        for (const auto& [k, c] : terms_) r.set(k.first, k.first + k.second, c);
        return r;
    }
    BiPoly shift_x(int d) const { // multiply by x^d (d may be negative if divisible)
        BiPoly r(field_);
        for (const auto& [k, c] : terms_) {
            if (k.first + d < 0) throw internal_error("shift_x: not divisible");
            r.set(k.first + d, k.second, c);
        }
        return r;
    }
    BiPoly shift_y(int d) const {
        BiPoly r(field_);
        for (const auto& [k, c] : terms_) {
            if (k.second + d < 0) throw internal_error("shift_y: not divisible");
            r.set(k.first, k.second + d, c);
        }
        return r;
    }

    FieldElement eval(const FieldElement& x, const FieldElement& y) const {
        FieldElement acc = FieldElement::zero(field_);
        for (const auto& [k, c] : terms_) acc = acc + c * x.pow(k.first) * y.pow(k.second);
        return acc;
    }

    // Substitute x = c, leaving a polynomial in y (and symmetrically).
    BiPoly eval_x(const FieldElement& c) const {
        BiPoly r(field_);
        for (const auto& [k, v] : terms_) r.add_term(0, k.second, v * c.pow(k.first));
        return r;
    }
    BiPoly eval_y(const FieldElement& c) const {
        BiPoly r(field_);
        for (const auto& [k, v] : terms_) r.add_term(k.first, 0, v * c.pow(k.second));
        return r;
    }

    // General composition p(X(x,y), Y(x,y)).
    BiPoly substitute(const BiPoly& X, const BiPoly& Y) const {
        auto fx = X.field();
        BiPoly r(fx);
        std::vector<BiPoly> xp{constant(fx, FieldElement::one(fx))};
        std::vector<BiPoly> yp{constant(fx, FieldElement::one(fx))};
        for (const auto& [k, c] : terms_) {
            while ((int)xp.size() <= k.first) xp.push_back(xp.back() * X);
            while ((int)yp.size() <= k.second) yp.push_back(yp.back() * Y);
            r = r + xp[k.first] * yp[k.second] * c;
        }
        return r;
    }

    std::string to_string(const std::string& xv = "x", const std::string& yv = "y") const;

private:
    FieldPtr field_;
    std::map<Key, FieldElement> terms_;
};

// p(x + cx, y + cy); degree preserved, exact.
inline BiPoly poly_translate(const BiPoly& p, const FieldElement& cx, const FieldElement& cy) {
    FieldPtr f = p.field();
    FieldElement ex = cx, ey = cy;
    if (!ex.field()->same_structure(*f) || !ey.field()->same_structure(*f)) {
        Unified u1 = unify_fields(f, ex.field());
        Unified u2 = unify_fields(u1.field, ey.field());
        f = u2.field;
        ex = apply_unification(apply_unification(ex, u1, false), u2, true);
        ey = apply_unification(ey, u2, false);
    }
    BiPoly q = p.promoted(f);
    if (ex.is_zero() && ey.is_zero()) return q;
    BiPoly X = BiPoly::var_x(f) + BiPoly::constant(f, ex);
    BiPoly Y = BiPoly::var_y(f) + BiPoly::constant(f, ey);
    return q.substitute(X, Y);
}

// Exact division; nullopt when b does not divide a. Leading-term reduction
// under graded-lex order.
inline std::optional<BiPoly> exact_divide(const BiPoly& a, const BiPoly& b) {
    if (b.is_zero()) return std::nullopt;
    auto [x, y] = BiPoly::aligned(a, b);
    const FieldPtr& f = x.field();
    auto grlex_leading = [](const BiPoly& p) {
        BiPoly::Key best{-1, -1};
        bool first = true;
        for (const auto& [k, c] : p.terms()) {
            if (first) {
                best = k;
                first = false;
                continue;
            }
            int da = k.first + k.second, db = best.first + best.second;
            if (da > db || (da == db && k > best)) best = k;
        }
        return best;
    };
    BiPoly rem = x;
    BiPoly quot(f);
    BiPoly::Key lb = grlex_leading(y);
    FieldElement lcb = y.coefficient(lb.first, lb.second);
    while (!rem.is_zero()) {
        BiPoly::Key la = grlex_leading(rem);
        if (la.first < lb.first || la.second < lb.second) return std::nullopt;
        FieldElement c = rem.coefficient(la.first, la.second) / lcb;
        int di = la.first - lb.first, dj = la.second - lb.second;
        quot.add_term(di, dj, c);
        rem = rem - y * BiPoly::monomial(f, di, dj, c);
    }
    return quot;
}

inline bool divides(const BiPoly& b, const BiPoly& a) { return exact_divide(a, b).has_value(); }

// ---------------------------------------------------------------------------
// Univariate view: polynomials in x only, as coefficient vectors low..high.

using UniPoly = std::vector<FieldElement>;

inline UniPoly uni_trim(UniPoly p) {
    while (!p.empty() && p.back().is_zero()) p.pop_back();
    return p;
}
inline bool uni_is_zero(const UniPoly& p) { return p.empty(); }
inline int uni_deg(const UniPoly& p) { return (int)p.size() - 1; }

inline UniPoly uni_from_bipoly(const BiPoly& p) {
    if (p.deg_y() > 0) throw internal_error("uni_from_bipoly: polynomial is not univariate");
    UniPoly r((std::size_t)std::max(0, p.deg_x() + 1), FieldElement::zero(p.field()));
    for (const auto& [k, c] : p.terms()) r[(std::size_t)k.first] = c;
    return uni_trim(r);
}

inline BiPoly uni_to_bipoly(const UniPoly& p, const FieldPtr& f) {
    BiPoly r(f);
    for (std::size_t i = 0; i < p.size(); ++i) r.set((int)i, 0, p[i]);
    return r;
}

// Restriction of a bivariate polynomial to x = 0, read as univariate in y.
inline UniPoly uni_restrict_x0(const BiPoly& p) {
    UniPoly r((std::size_t)std::max(0, p.deg_y() + 1), FieldElement::zero(p.field()));
    for (const auto& [k, c] : p.terms())
        if (k.first == 0) r[(std::size_t)k.second] = c;
    return uni_trim(r);
}

inline FieldElement uni_eval(const UniPoly& p, const FieldElement& x) {
    FieldElement acc = FieldElement::zero(x.field());
    for (std::size_t i = p.size(); i-- > 0;) acc = acc * x + p[i];
    return acc;
}

inline UniPoly uni_scale(const UniPoly& p, const FieldElement& c) {
    UniPoly r = p;
    for (auto& v : r) v = v * c;
    return uni_trim(r);
}

inline UniPoly uni_promote(const UniPoly& p, const FieldPtr& f) {
    UniPoly r;
    r.reserve(p.size());
    for (const auto& v : p) {
        Unified u = unify_fields(v.field(), f);
        if (!u.field->same_structure(*f)) throw internal_error("uni_promote: field mismatch");
        r.push_back(apply_unification(v, u, true));
    }
    return r;
}

inline UniPoly uni_sub(const UniPoly& a, const UniPoly& b) {
    UniPoly r = a;
    if (b.size() > r.size()) {
        FieldPtr f = b.empty() ? (a.empty() ? NumberField::gaussian_rationals() : a[0].field())
                               : b[0].field();
        r.resize(b.size(), FieldElement::zero(f));
    }
    for (std::size_t i = 0; i < b.size(); ++i) r[i] = r[i] - b[i];
    return uni_trim(r);
}

inline UniPoly uni_mul(const UniPoly& a, const UniPoly& b) {
    if (a.empty() || b.empty()) return {};
    FieldPtr f = a[0].field();
    UniPoly r(a.size() + b.size() - 1, FieldElement::zero(f));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = r[i + j] + a[i] * b[j];
    return uni_trim(r);
}

// Division with remainder over a field.
inline std::pair<UniPoly, UniPoly> uni_divmod(const UniPoly& a, const UniPoly& b) {
    if (uni_is_zero(b)) throw internal_error("uni_divmod: division by zero");
    UniPoly rem = a;
    FieldPtr f = b.back().field();
    UniPoly quot;
    if (rem.size() >= b.size()) quot.assign(rem.size() - b.size() + 1, FieldElement::zero(f));
    FieldElement lcinv = b.back().inverse();
    while (rem.size() >= b.size() && !uni_is_zero(rem)) {
        std::size_t shift = rem.size() - b.size();
        FieldElement c = rem.back() * lcinv;
        quot[shift] = quot[shift] + c;
        for (std::size_t i = 0; i < b.size(); ++i)
            rem[shift + i] = rem[shift + i] - c * b[i];
        rem = uni_trim(rem);
    }
    return {uni_trim(quot), rem};
}

inline UniPoly uni_gcd(UniPoly a, UniPoly b) {
    a = uni_trim(a);
    b = uni_trim(b);
    while (!uni_is_zero(b)) {
        auto [q, r] = uni_divmod(a, b);
        a = b;
        b = r;
    }
    if (!uni_is_zero(a)) a = uni_scale(a, a.back().inverse()); // monic
    return a;
}

inline UniPoly uni_derivative(const UniPoly& p) {
    if (p.size() <= 1) return {};
    FieldPtr f = p[0].field();
    UniPoly r(p.size() - 1, FieldElement::zero(f));
    for (std::size_t i = 1; i < p.size(); ++i)
        r[i - 1] = p[i] * FieldElement::from_rat(f, Rat(i));
    return uni_trim(r);
}

// ---------------------------------------------------------------------------
// Bivariate gcd via primitive pseudo-remainder sequences in K[x][y].

namespace detail {

// y-coefficients of p as univariate polynomials in x.
inline std::vector<UniPoly> y_coeffs(const BiPoly& p) {
    std::vector<UniPoly> cs((std::size_t)std::max(0, p.deg_y() + 1));
    for (auto& c : cs) c = {};
    for (const auto& [k, v] : p.terms()) {
        auto& c = cs[(std::size_t)k.second];
        if ((std::size_t)k.first >= c.size())
            c.resize((std::size_t)k.first + 1, FieldElement::zero(p.field()));
        c[(std::size_t)k.first] = v;
    }
    for (auto& c : cs) c = uni_trim(c);
    return cs;
}

inline BiPoly from_y_coeffs(const std::vector<UniPoly>& cs, const FieldPtr& f) {
    BiPoly r(f);
    for (std::size_t j = 0; j < cs.size(); ++j)
        for (std::size_t i = 0; i < cs[j].size(); ++i)
            r.set((int)i, (int)j, cs[j][i]);
    return r;
}

inline UniPoly bipoly_content_y(const BiPoly& p) {
    UniPoly g;
    for (const auto& c : y_coeffs(p))
        if (!uni_is_zero(c)) g = uni_gcd(g, c);
    return g;
}

inline BiPoly divide_by_x_content(const BiPoly& p, const UniPoly& content) {
    if (uni_is_zero(content)) return p;
    BiPoly cb = uni_to_bipoly(content, p.field());
    auto q = exact_divide(p, cb);
    if (!q) throw internal_error("divide_by_x_content: content does not divide");
    return *q;
}

} // namespace detail

// Monic-normalized gcd in K[x,y].
inline BiPoly bipoly_gcd(const BiPoly& a0, const BiPoly& b0) {
    auto [a, b] = BiPoly::aligned(a0, b0);
    const FieldPtr& f = a.field();
    auto normalize = [&](BiPoly p) {
        if (p.is_zero()) return p;
        // scale so the graded-lex leading coefficient is one
        BiPoly::Key best{-1, -1};
        bool first = true;
        for (const auto& [k, c] : p.terms()) {
            int da = k.first + k.second;
            if (first || da > best.first + best.second ||
                (da == best.first + best.second && k > best)) {
                best = k;
                first = false;
            }
        }
        return p * p.coefficient(best.first, best.second).inverse();
    };
    if (a.is_zero()) return normalize(b);
    if (b.is_zero()) return normalize(a);
    if (a.deg_y() == 0 && b.deg_y() == 0) {
        UniPoly g = uni_gcd(uni_from_bipoly(a), uni_from_bipoly(b));
        return normalize(uni_to_bipoly(g, f));
    }
    UniPoly ca = detail::bipoly_content_y(a);
    UniPoly cb = detail::bipoly_content_y(b);
    BiPoly pa = detail::divide_by_x_content(a, ca);
    BiPoly pb = detail::divide_by_x_content(b, cb);
    UniPoly cg = uni_gcd(ca, cb);
    // Primitive PRS on the primitive parts, viewed in K[x][y].
    BiPoly u = pa, v = pb;
    if (u.deg_y() < v.deg_y()) std::swap(u, v);
    while (!v.is_zero() && v.deg_y() > 0) {
        // pseudo-remainder of u by v in y
        auto vc = detail::y_coeffs(v);
        UniPoly lcv = vc.back();
        BiPoly lcv_b = uni_to_bipoly(lcv, f);
        BiPoly r = u;
        int dv = v.deg_y();
        while (!r.is_zero() && r.deg_y() >= dv) {
            auto rc = detail::y_coeffs(r);
            UniPoly lcr = rc.back();
            int shift = r.deg_y() - dv;
            BiPoly term = uni_to_bipoly(lcr, f).shift_y(shift);
            r = r * lcv_b - v * term;
            if (!r.is_zero() && r.deg_y() >= dv + shift + 1)
                throw internal_error("bipoly_gcd: pseudo-division failed to reduce");
        }
        u = v;
        v = r.is_zero() ? r : detail::divide_by_x_content(r, detail::bipoly_content_y(r));
    }
    BiPoly g(f);
    if (v.is_zero()) {
        g = detail::divide_by_x_content(u, detail::bipoly_content_y(u));
    } else {
        // gcd of the primitive parts is a unit times a pure x-polynomial
        g = BiPoly::constant(f, FieldElement::one(f));
    }
    return normalize(g * uni_to_bipoly(cg, f));
}

// f divided by the gcd of f and its partials: the square-free part.
inline BiPoly squarefree_part(const BiPoly& f) {
    if (f.is_zero()) return f;
    BiPoly g = bipoly_gcd(f, bipoly_gcd(f.derivative_x(), f.derivative_y()));
    if (g.is_constant()) return f;
    auto q = exact_divide(f, g);
    if (!q) throw internal_error("squarefree_part: gcd does not divide");
    return *q;
}

inline bool is_squarefree(const BiPoly& f) {
    if (f.is_zero()) return false;
    BiPoly g = bipoly_gcd(f, bipoly_gcd(f.derivative_x(), f.derivative_y()));
    return g.is_constant();
}

inline std::string BiPoly::to_string(const std::string& xv, const std::string& yv) const {
    if (terms_.empty()) return "0";
    // Human order: highest total degree first, then lex.
    std::vector<std::pair<Key, FieldElement>> ts(terms_.begin(), terms_.end());
    std::sort(ts.begin(), ts.end(), [](const auto& a, const auto& b) {
        int da = a.first.first + a.first.second, db = b.first.first + b.first.second;
        if (da != db) return da > db;
        return a.first > b.first;
    });
    std::string s;
    bool first = true;
    for (const auto& [k, c] : ts) {
        std::string mono;
        if (k.first > 0) mono += xv + (k.first > 1 ? "^" + std::to_string(k.first) : "");
        if (k.second > 0) {
            if (!mono.empty()) mono += "*";
            mono += yv + (k.second > 1 ? "^" + std::to_string(k.second) : "");
        }
        std::string cs;
        bool neg = false;
        if (auto r = c.as_rational()) {
            Rat rv = *r;
            if (rv < 0) {
                neg = true;
                rv = -rv;
            }
            cs = rat_to_string(rv);
            if (cs == "1" && !mono.empty()) cs.clear();
        } else {
            cs = "(" + c.to_string() + ")";
        }
        std::string term = cs;
        if (!mono.empty()) {
            if (!term.empty()) term += "*";
            term += mono;
        }
        if (first) {
            s += (neg ? "-" : "") + term;
            first = false;
        } else {
            s += (neg ? " - " : " + ") + term;
        }
    }
    return s;
}

} // namespace folia
