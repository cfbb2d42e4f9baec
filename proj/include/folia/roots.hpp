#pragma once

#include "folia/bipoly.hpp"
#include "folia/errors.hpp"
#include "folia/number_field.hpp"

#include <algorithm>
#include <optional>
#include <utility>
#include <vector>

namespace folia {

// Result of root isolation over the tower. When an irreducible factor needs
// an extension of degree >= 3 the factor is reported in `unresolved` and
// `unsupported` is set; roots found so far are still returned.
struct RootResult {
    FieldPtr field;
    std::vector<std::pair<FieldElement, int>> roots; // (root, multiplicity)
    std::vector<UniPoly> unresolved;                 // factors left unsolved
    bool unsupported = false;
};

namespace detail {

// Square-free decomposition (Yun): returns factors f_i with multiplicity i.
inline std::vector<std::pair<UniPoly, int>> squarefree_decompose(const UniPoly& p) {
    std::vector<std::pair<UniPoly, int>> out;
    UniPoly a = uni_trim(p);
    if (uni_deg(a) < 1) return out;
    UniPoly d = uni_derivative(a);
    UniPoly g = uni_gcd(a, d);
    if (uni_deg(g) < 1) {
        out.push_back({a, 1});
        return out;
    }
    UniPoly w = uni_divmod(a, g).first;
    UniPoly y = uni_divmod(d, g).first;
    UniPoly z = uni_sub(y, uni_derivative(w));
    int i = 1;
    while (uni_deg(w) >= 1) {
        UniPoly gi = uni_gcd(w, z);
        if (uni_deg(gi) >= 1) out.push_back({gi, i});
        w = uni_divmod(w, gi).first;
        y = uni_divmod(z, gi).first;
        z = uni_sub(y, uni_derivative(w));
        ++i;
        if (i > 128) throw internal_error("squarefree_decompose runaway");
    }
    return out;
}

inline std::vector<BigInt> divisors_of(BigInt n) {
    if (n < 0) n = -n;
    std::vector<BigInt> ds;
    if (n == 0) return ds;
    for (BigInt d = 1; d * d <= n; ++d) {
        if (n % d == 0) {
            ds.push_back(d);
            if (d * d != n) ds.push_back(n / d);
        }
        if (d > 2000000) break; // inputs this large are outside the supported corpus
    }
    std::sort(ds.begin(), ds.end());
    return ds;
}

// Rational roots of a univariate polynomial over the tower. A rational root
// must annihilate every power-basis/imaginary coordinate polynomial, so we
// take the gcd of those Q-coefficient polynomials and apply the rational
// root theorem to it.
inline std::vector<Rat> rational_roots(const UniPoly& p) {
    std::vector<Rat> out;
    if (uni_deg(p) < 1) return out;
    std::size_t dim = p[0].field()->dim();
    // coordinate polynomials over Q
    std::vector<std::vector<Rat>> coords(2 * dim, std::vector<Rat>(p.size(), Rat(0)));
    for (std::size_t k = 0; k < p.size(); ++k)
        for (std::size_t m = 0; m < dim; ++m) {
            coords[2 * m][k] = p[k].coords()[m].re;
            coords[2 * m + 1][k] = p[k].coords()[m].im;
        }
    auto rat_trim = [](std::vector<Rat> v) {
        while (!v.empty() && v.back() == 0) v.pop_back();
        return v;
    };
    auto rat_gcd_poly = [&](std::vector<Rat> a, std::vector<Rat> b) {
        a = rat_trim(std::move(a));
        b = rat_trim(std::move(b));
        while (!b.empty()) {
            // remainder of a by b
            while (a.size() >= b.size() && !a.empty()) {
                Rat c = a.back() / b.back();
                std::size_t shift = a.size() - b.size();
                for (std::size_t i = 0; i < b.size(); ++i) a[shift + i] -= c * b[i];
                a = rat_trim(std::move(a));
            }
            std::swap(a, b);
        }
        return a;
    };
    std::vector<Rat> g;
    for (auto& c : coords) {
        auto ct = rat_trim(c);
        if (ct.empty()) continue;
        g = g.empty() ? ct : rat_gcd_poly(g, ct);
        if (g.size() == 1) return out; // gcd is a unit: no rational roots
    }
    if (g.size() <= 1) return out;
    // Clear denominators to an integer polynomial.
    BigInt lcm_den = 1;
    for (const auto& c : g) {
        BigInt d = rat_den(c);
        lcm_den = lcm_den / int_gcd(lcm_den, d) * d;
    }
    std::vector<BigInt> zi(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        Rat scaled = g[i] * Rat(lcm_den);
        zi[i] = rat_num(scaled);
    }
    // Strip powers of t.
    std::size_t low = 0;
    while (low < zi.size() && zi[low] == 0) ++low;
    if (low > 0) out.push_back(Rat(0));
    std::vector<BigInt> zz(zi.begin() + low, zi.end());
    if (zz.size() <= 1) return out;
    auto ds_const = divisors_of(zz.front());
    auto ds_lead = divisors_of(zz.back());
    auto eval_int = [&](const Rat& r) {
        Rat acc(0);
        for (std::size_t i = zz.size(); i-- > 0;) acc = acc * r + Rat(zz[i]);
        return acc;
    };
    for (const auto& pnum : ds_const)
        for (const auto& qden : ds_lead) {
            Rat cand(pnum, qden);
            for (int sign = 0; sign < 2; ++sign) {
                Rat r = sign ? -cand : cand;
                if (eval_int(r) == 0 &&
                    std::find(out.begin(), out.end(), r) == out.end())
                    out.push_back(r);
            }
        }
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace detail

// Deflates p by the linear factor (t - r); p(r) must be zero.
inline UniPoly uni_deflate(const UniPoly& p, const FieldElement& r) {
    FieldPtr f = p[0].field();
    FieldElement rr = r;
    UniPoly q = p;
    if (!rr.field()->same_structure(*f)) {
        Unified u = unify_fields(f, rr.field());
        q = uni_promote(q, u.field);
        rr = apply_unification(rr, u, false);
        f = u.field;
    }
    UniPoly divisor{-rr, FieldElement::one(f)};
    auto [quot, rem] = uni_divmod(q, divisor);
    if (!uni_is_zero(rem)) throw internal_error("uni_deflate: not a root");
    return quot;
}

// All roots of p inside the tower (extending by at most the remaining
// quadratic steps). Multiplicities are exact. Factors that would need a
// higher-degree extension are reported unsolved.
inline RootResult univariate_roots(const UniPoly& p_in, const FieldPtr& field) {
    if (uni_is_zero(p_in)) throw internal_error("univariate_roots: zero polynomial");
    RootResult res;
    res.field = field;
    UniPoly p = uni_promote(p_in, field);
    auto sq = detail::squarefree_decompose(p);
    for (auto& [factor, mult] : sq) {
        UniPoly work = uni_promote(factor, res.field);
        // Peel rational roots first (works in any tower).
        bool progress = true;
        while (progress && uni_deg(work) >= 1) {
            progress = false;
            if (uni_deg(work) == 1) {
                FieldElement root = -(work[0] / work[1]);
                res.roots.push_back({root, mult});
                work = {};
                break;
            }
            if (uni_deg(work) == 2) {
                // Monic normalize: t^2 + b t + c.
                FieldElement a = work[2], b = work[1], c = work[0];
                FieldElement bb = b / a, cc = c / a;
                AdjoinResult ar;
                try {
                    ar = adjoin_quadratic_root(res.field, bb.embedded(res.field),
                                               cc.embedded(res.field));
                } catch (const tower_depth_error&) {
                    res.unresolved.push_back(work);
                    res.unsupported = true;
                    work = {};
                    break;
                }
                if (ar.extended) {
                    res.field = ar.field;
                    for (auto& [r, m] : res.roots) r = r.embedded(res.field);
                }
                FieldElement r1 = ar.root;
                FieldElement r2 = -(bb.embedded(res.field)) - r1;
                if (FieldElement::total_less(r2, r1)) std::swap(r1, r2);
                res.roots.push_back({r1, mult});
                res.roots.push_back({r2, mult});
                work = {};
                break;
            }
            for (const Rat& r : detail::rational_roots(work)) {
                FieldElement root = FieldElement::from_rat(res.field, r);
                if (uni_eval(uni_promote(work, res.field), root).is_zero()) {
                    res.roots.push_back({root, mult});
                    work = uni_deflate(uni_promote(work, res.field), root);
                    progress = true;
                    break;
                }
            }
        }
        if (uni_deg(work) >= 1) {
            res.unresolved.push_back(work);
            res.unsupported = true;
        }
    }
    // Deterministic ordering.
    std::sort(res.roots.begin(), res.roots.end(), [](const auto& a, const auto& b) {
        return FieldElement::total_less(a.first, b.first);
    });
    return res;
}

inline RootResult univariate_roots(const BiPoly& p, const FieldPtr& field) {
    BiPoly q = p;
    if (q.deg_y() > 0 && q.deg_x() > 0)
        throw internal_error("univariate_roots: polynomial has two variables");
    if (q.deg_y() > 0) q = q.swap_vars();
    return univariate_roots(uni_from_bipoly(q.promoted(field)), field);
}

// Wrapper matching the adjoin operation on whole minimal polynomials: accepts
// a monic degree-2 univariate polynomial.
inline AdjoinResult adjoin_root(const FieldPtr& field, const BiPoly& minpoly) {
    BiPoly m = minpoly;
    if (m.deg_y() > 0) m = m.swap_vars();
    UniPoly u = uni_from_bipoly(m.promoted(field));
    if (uni_deg(u) != 2 || !u[2].is_one())
        throw domain_error("adjoin_root: minimal polynomial must be monic of degree 2");
    return adjoin_quadratic_root(field, u[1], u[0]);
}

} // namespace folia
