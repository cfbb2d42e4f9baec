#pragma once

#include "folia/bipoly.hpp"
#include "folia/errors.hpp"
#include "folia/roots.hpp"
#include "folia/series.hpp"

#include <map>
#include <numeric>
#include <optional>
#include <vector>

namespace folia {

// One edge of the Newton polygon: endpoints in the exponent lattice and the
// inclination rise/drop = p/q in lowest terms (inclination = di/(-dj) > 0).
struct NewtonEdge {
    std::pair<int, int> from; // higher j endpoint
    std::pair<int, int> to;   // lower j endpoint
    int rise = 0;             // p = di
    int drop = 1;             // q = -dj
    Rat inclination() const { return Rat(rise, drop); }
    // Supporting line value: q*i + p*j is constant on the edge and minimal
    // over the support.
    long level() const { return (long)drop * from.first + (long)rise * from.second; }
};

struct NewtonPolygon {
    std::vector<std::pair<int, int>> vertices;
    std::vector<NewtonEdge> edges;
};

// Lower-left hull of the exponent support of f. Pre: f != 0, f(0,0) = 0.
inline NewtonPolygon newton_polygon(const BiPoly& f) {
    if (f.is_zero()) throw domain_error("newton_polygon: zero polynomial");
    if (!f.coefficient(0, 0).is_zero())
        throw domain_error("newton_polygon: polynomial does not vanish at the origin");
    std::vector<std::pair<int, int>> pts;
    for (const auto& [k, c] : f.terms()) pts.push_back(k);
    std::sort(pts.begin(), pts.end());
    NewtonPolygon poly;
    // Start: minimal i, then minimal j at that i (map order gives it directly).
    std::pair<int, int> v = pts.front();
    for (const auto& p : pts)
        if (p.first == pts.front().first) v = std::min(v, p);
    poly.vertices.push_back(v);
    while (true) {
        std::optional<std::pair<int, int>> best;
        for (const auto& w : pts) {
            if (w.second >= v.second) continue;
            if (!best) {
                best = w;
                continue;
            }
            // Compare inclinations (w.i - v.i)/(v.j - w.j) rationally.
            long lhs = (long)(w.first - v.first) * (v.second - best->second);
            long rhs = (long)(best->first - v.first) * (v.second - w.second);
            if (lhs < rhs || (lhs == rhs && w.first > best->first)) best = w;
        }
        if (!best) break;
        int di = best->first - v.first;
        int dj = v.second - best->second;
        if (di < 0) throw internal_error("newton_polygon: hull moved left");
        if (di > 0) {
            int g = std::gcd(di, dj);
            poly.edges.push_back(NewtonEdge{v, *best, di / g, dj / g});
        }
        // di == 0 cannot occur from a hull vertex; guard anyway by skipping.
        poly.vertices.push_back(*best);
        v = *best;
    }
    return poly;
}

// Truncated Puiseux expansion of one branch class: y(t) with x = t^d.
struct PuiseuxJet {
    int ram = 1;                 // ramification index d (minimal for the exponents)
    PowerSeries series;          // y(t)
    bool exact = false;          // the stored terms satisfy f identically
    int guaranteed_t_order = 0;  // f(t^d, y(t)) == 0 mod t^this
};

struct PuiseuxExpansion {
    std::vector<PuiseuxJet> jets;
    bool vertical_branch = false; // f had the branch x = 0 (excluded from jets)
};

namespace detail {

struct PartialJet {
    int d = 1;
    std::map<int, FieldElement> terms; // t-exponent -> coefficient
    bool exact = false;
};

// Solve y(x) = sum_{k>=1} c_k x^k for h(x, y(x)) = 0 when dh/dy(0,0) != 0.
inline PowerSeries simple_root_tail(const BiPoly& h, int length) {
    FieldPtr f = h.field();
    FieldElement hy = h.derivative_y().coefficient(0, 0);
    if (hy.is_zero()) throw internal_error("simple_root_tail: root is not simple");
    FieldElement hyinv = hy.inverse();
    PowerSeries s = PowerSeries::zero(f, length);
    PowerSeries x = PowerSeries::identity(f, length);
    for (int k = 1; k < length; ++k) {
        PowerSeries val = bipoly_eval_series(h, x, s);
        s.set(k, -(val.at(k) * hyinv));
    }
    return s;
}

// h(x^q, x^p * (c + y)) / x^level
inline BiPoly edge_substitute(const BiPoly& h, int q, int p, const FieldElement& c,
                              long level) {
    FieldPtr f = c.field();
    BiPoly hh = h.promoted(f);
    BiPoly base = BiPoly::var_y(f) + BiPoly::constant(f, c); // c + y
    std::vector<BiPoly> pw{BiPoly::constant(f, FieldElement::one(f))};
    BiPoly out(f);
    for (const auto& [k, coef] : hh.terms()) {
        while ((int)pw.size() <= k.second) pw.push_back(pw.back() * base);
        long xe = (long)q * k.first + (long)p * k.second - level;
        if (xe < 0) throw internal_error("edge_substitute: exponent below supporting line");
        out = out + pw[(std::size_t)k.second].shift_x((int)xe) * coef;
    }
    return out;
}

inline void expand_rec(const BiPoly& h_in, int x_budget, int depth,
                       std::vector<PartialJet>& out) {
    if (depth > 64) throw internal_error("newton_puiseux: recursion depth exceeded");
    BiPoly h = h_in;
    // Branch y = 0 splits off exactly.
    if (h.y_order() >= 1) {
        PartialJet zero;
        zero.exact = true;
        out.push_back(zero);
        h = h.shift_y(-h.y_order());
    }
    if (!h.coefficient(0, 0).is_zero()) return; // unit: no further branches
    if (h.is_zero()) throw internal_error("newton_puiseux: zero after peeling");
    NewtonPolygon poly = newton_polygon(h);
    for (const auto& edge : poly.edges) {
        int q = edge.drop, p = edge.rise;
        long level = edge.level();
        // Edge polynomial deflated in u = c^q: all edge j-exponents are
        // congruent mod q, so psi(c) = c^jmin * Psi(c^q).
        int jmin = edge.to.second;
        FieldPtr f = h.field();
        UniPoly psi_defl;
        for (const auto& [k, coef] : h.terms()) {
            if ((long)q * k.first + (long)p * k.second != level) continue;
            if ((k.second - jmin) % q != 0)
                throw internal_error("newton_puiseux: edge exponents not congruent mod q");
            std::size_t e = (std::size_t)((k.second - jmin) / q);
            if (psi_defl.size() <= e) psi_defl.resize(e + 1, FieldElement::zero(f));
            psi_defl[e] = coef;
        }
        psi_defl = uni_trim(psi_defl);
        RootResult roots = univariate_roots(psi_defl, f);
        if (roots.unsupported)
            throw unsupported_extension_error(
                "newton_puiseux: edge equation needs an extension of degree > 2");
        for (const auto& [u, mult] : roots.roots) {
            if (u.is_zero()) continue;
            // One class representative: any q-th root of u.
            FieldPtr rf = roots.field;
            FieldElement c = FieldElement::zero(rf);
            if (auto r = u.kth_root((unsigned)q)) {
                c = *r;
            } else if (q == 2) {
                auto [ef, root] = sqrt_extending(u);
                rf = ef;
                c = root;
            } else {
                throw unsupported_extension_error(
                    "newton_puiseux: branch leading coefficient needs a degree-" +
                    std::to_string(q) + " root outside the tower");
            }
            BiPoly h1 = edge_substitute(h.promoted(rf), q, p, c, level);
            int child_budget = std::max(1, q * x_budget - p);
            std::vector<PartialJet> children;
            if (mult == 1 && h1.y_order() == 0) {
                // Simple root: solve the tail directly.
                PartialJet tail;
                PowerSeries s = simple_root_tail(h1, child_budget + 1);
                for (int k = 1; k <= child_budget; ++k)
                    if (!s.at(k).is_zero()) tail.terms[k] = s.at(k);
                children.push_back(tail);
            } else {
                expand_rec(h1, child_budget, depth + 1, children);
            }
            for (const auto& ch : children) {
                PartialJet jet;
                jet.d = q * ch.d;
                jet.exact = ch.exact;
                FieldElement cc = c;
                jet.terms[p * ch.d] = cc; // leading coefficient
                for (const auto& [e, v] : ch.terms) {
                    auto key = p * ch.d + e;
                    auto it = jet.terms.find(key);
                    if (it == jet.terms.end())
                        jet.terms[key] = v;
                    else
                        it->second = it->second + v;
                }
                out.push_back(jet);
            }
        }
    }
}

} // namespace detail

// Newton-Puiseux expansion: one jet per conjugacy class of branches.
// Pre: f != 0, square-free, f(0,0) = 0.
inline PuiseuxExpansion newton_puiseux_expand(const BiPoly& f_in, int order) {
    if (f_in.is_zero()) throw domain_error("newton_puiseux_expand: zero polynomial");
    if (!f_in.coefficient(0, 0).is_zero())
        throw domain_error("newton_puiseux_expand: f(0,0) != 0");
    if (order < 1) order = 1;
    PuiseuxExpansion result;
    BiPoly g = f_in;
    int xc = g.x_order();
    if (xc > 0) {
        result.vertical_branch = true;
        g = g.shift_x(-xc);
    }
    if (g.is_constant()) return result;
    std::vector<detail::PartialJet> partials;
    detail::expand_rec(g, order, 0, partials);
    for (auto& pj : partials) {
        // Normalize: gcd of d and all exponents must be 1.
        int gcd_all = pj.d;
        for (const auto& [e, v] : pj.terms) gcd_all = std::gcd(gcd_all, e);
        if (gcd_all > 1) {
            std::map<int, FieldElement> nt;
            for (const auto& [e, v] : pj.terms) nt[e / gcd_all] = v;
            pj.terms = std::move(nt);
            pj.d /= gcd_all;
        }
        PuiseuxJet jet;
        jet.ram = pj.d;
        jet.exact = pj.exact;
        int trunc = pj.d * order + 1;
        if (pj.exact && !pj.terms.empty())
            trunc = std::max(trunc, pj.terms.rbegin()->first + 1);
        FieldPtr jf = f_in.field();
        for (const auto& [e, v] : pj.terms) {
            Unified u = unify_fields(jf, v.field());
            jf = u.field;
        }
        jet.series = PowerSeries(jf, trunc);
        for (const auto& [e, v] : pj.terms)
            if (e < trunc) jet.series.set(e, v);
        // Verify and record the guaranteed vanishing order.
        int window = trunc + (f_in.degree().value_or(1)) * pj.d + 2;
        PowerSeries tx = PowerSeries::identity(jf, window).pow_series((unsigned)pj.d);
        PowerSeries ys = jet.series.truncated(trunc);
        {
            PowerSeries wide(jf, window);
            for (int k = 0; k < ys.truncation(); ++k) wide.set(k, ys.at(k));
            ys = wide;
        }
        PowerSeries residual = bipoly_eval_series(g, tx, ys);
        auto ord = residual.ord();
        if (pj.exact && !ord) {
            jet.guaranteed_t_order = window;
        } else {
            if (!ord) ord = window;
            jet.guaranteed_t_order = *ord;
            if (jet.guaranteed_t_order < pj.d * order)
                throw internal_error("newton_puiseux: jet below requested precision");
            jet.exact = false;
        }
        result.jets.push_back(std::move(jet));
    }
    return result;
}

// Least common multiple of the branch ramification indices.
inline int ramification_exponent(const std::vector<PuiseuxJet>& jets) {
    if (jets.empty()) throw domain_error("ramification_exponent: no branches");
    long long l = 1;
    for (const auto& j : jets) l = int_lcm_small(l, j.ram);
    return (int)l;
}

} // namespace folia
