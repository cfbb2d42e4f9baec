#pragma once

#include "folia/camacho_sad.hpp"
#include "folia/errors.hpp"
#include "folia/foliation.hpp"
#include "folia/newton.hpp"

#include <optional>
#include <string>
#include <vector>

namespace folia {

// The morphism (x, y) -> (x^d, y); d = 1 is the identity.
struct RamificationMap {
    int exponent = 1;

    explicit RamificationMap(int d = 1) : exponent(d) {
        if (d < 1) throw domain_error("ramification exponent must be >= 1");
    }
    bool is_identity() const { return exponent == 1; }
    // Substitution images of the coordinates.
    std::pair<BiPoly, BiPoly> substitution(const FieldPtr& f) const {
        return {BiPoly::var_x(f).subst_x_pow(exponent), BiPoly::var_y(f)};
    }
    RamificationMap composed_with(const RamificationMap& inner) const {
        return RamificationMap(exponent * inner.exponent);
    }
};

// Pullback of a 1-form: d x^{d-1} a(x^d, y) dx + b(x^d, y) dy, saturated.
inline OneForm pullback_ramify(const OneForm& w, const RamificationMap& rho) {
    if (rho.is_identity()) return w;
    int d = rho.exponent;
    const FieldPtr& f = w.field();
    BiPoly a = w.a().subst_x_pow(d).shift_x(d - 1) * FieldElement::from_rat(f, Rat(d));
    BiPoly b = w.b().subst_x_pow(d);
    return OneForm::make(a, b);
}

inline OneForm pullback_ramify(const OneForm& w, int d) {
    return pullback_ramify(w, RamificationMap(d));
}

inline BiPoly ramify_curve(const BiPoly& f, const RamificationMap& rho) {
    return f.subst_x_pow(rho.exponent);
}

inline BiPoly ramify_curve(const BiPoly& f, int d) {
    return ramify_curve(f, RamificationMap(d));
}

// ---------------------------------------------------------------------------
// Embedded resolution of a plane curve: blow up until the strict transform is
// smooth, meets at most one exceptional component at each point, and meets it
// transversally.

namespace detail {

struct CurvePoint {
    int node = 0;
    ChartDir dir = ChartDir::X;
    std::pair<FieldElement, FieldElement> point;
};

// done <=> multiplicity 1, at most one component through, contact 1 with it.
inline bool curve_point_done(const ChartState& cs,
                             const std::pair<FieldElement, FieldElement>& pt) {
    const BiPoly& g = std::get<BiPoly>(cs.payload);
    FieldPtr f = g.field();
    Unified u1 = unify_fields(f, pt.first.field());
    Unified u2 = unify_fields(u1.field, pt.second.field());
    f = u2.field;
    FieldElement px = apply_unification(apply_unification(pt.first, u1, false), u2, true);
    FieldElement py = apply_unification(pt.second, u2, false);
    BiPoly local = poly_translate(g.promoted(f), px, py);
    int mult = local.order().value_or(0);
    if (mult == 0) throw internal_error("curve_point_done: point not on the curve");
    if (mult >= 2) return false;
    std::vector<const LocalComponent*> through;
    for (const auto& lc : cs.components)
        if (lc.equation.eval(pt.first, pt.second).is_zero()) through.push_back(&lc);
    if (through.size() >= 2) return false;
    if (through.empty()) return true; // smooth away from the divisor
    BiPoly eq = poly_translate(through[0]->equation.promoted(f), px, py);
    Axis axis = axis_of_equation(eq);
    UniPoly restricted = axis == Axis::First
                             ? uni_restrict_x0(local)
                             : uni_from_bipoly(local.eval_y(FieldElement::zero(f)));
    if (uni_is_zero(restricted))
        throw internal_error("curve_point_done: component contained in the curve");
    std::size_t contact = 0;
    while (restricted[contact].is_zero()) ++contact;
    return contact == 1;
}

// Points where the strict transform meets the new exceptional line of `node`.
inline std::vector<CurvePoint> curve_points_on_divisor(const ResolutionTree& tree, int node) {
    std::vector<CurvePoint> out;
    const ChartState& xcs = tree.chart_state(node, ChartDir::X);
    const BiPoly& gx = std::get<BiPoly>(xcs.payload);
    FieldPtr f = gx.field();
    UniPoly restricted = uni_restrict_x0(gx);
    if (uni_is_zero(restricted))
        throw internal_error("curve strict transform contains the divisor");
    if (uni_deg(restricted) >= 1) {
        RootResult roots = univariate_roots(restricted, f);
        if (roots.unsupported)
            throw unsupported_extension_error(
                "curve-divisor intersection needs an extension of degree > 2",
                tree.chart_path(node, ChartDir::X));
        for (const auto& [r, mult] : roots.roots)
            out.push_back(CurvePoint{node, ChartDir::X,
                                     {FieldElement::zero(roots.field), r}});
    }
    const ChartState& ycs = tree.chart_state(node, ChartDir::Y);
    const BiPoly& gy = std::get<BiPoly>(ycs.payload);
    if (gy.coefficient(0, 0).is_zero()) {
        FieldPtr fy = gy.field();
        out.push_back(CurvePoint{node, ChartDir::Y,
                                 {FieldElement::zero(fy), FieldElement::zero(fy)}});
    }
    return out;
}

} // namespace detail

struct CurveResolution {
    ResolutionTree tree;
    bool free_only = true;
    int blowups = 0;
};

// Pre: f square-free, f(0,0) = 0 (a smooth germ yields an empty tree).
inline CurveResolution embedded_resolution(const BiPoly& f, int max_depth = 50,
                                           int ram_exponent = 1,
                                           const BiPoly* source = nullptr) {
    if (f.is_zero() || !f.coefficient(0, 0).is_zero())
        throw domain_error("embedded_resolution: curve must vanish at the origin");
    CurveResolution out;
    out.tree = make_tree(Payload(f), ram_exponent);
    out.tree.source = source ? Payload(*source) : Payload(f);
    out.tree.max_depth_guard = max_depth;
    FieldPtr field = f.field();
    FieldElement zero = FieldElement::zero(field);
    std::vector<detail::CurvePoint> pending;
    if (!detail::curve_point_done(out.tree.root, {zero, zero}))
        pending.push_back(detail::CurvePoint{0, ChartDir::X, {zero, zero}});
    std::size_t guard = 0;
    while (!pending.empty()) {
        if (++guard > 10000)
            throw resolution_depth_error("embedded resolution did not terminate (node guard)");
        detail::CurvePoint cp = pending.front();
        pending.erase(pending.begin());
        out.tree = blow_up_at(out.tree, cp.node, cp.dir, cp.point);
        int node = (int)out.tree.nodes.size();
        for (const auto& np : detail::curve_points_on_divisor(out.tree, node)) {
            const ChartState& cs = out.tree.chart_state(np.node, np.dir);
            if (!detail::curve_point_done(cs, np.point)) pending.push_back(np);
        }
    }
    out.blowups = (int)out.tree.nodes.size();
    out.free_only = free_centers_only(out.tree);
    return out;
}

// Main theorem, curve-encoded: d = lcm of the Puiseux denominators makes
// every branch of f(x^d, y) smooth and its embedded resolution free-only.
struct CurveTheoremResult {
    int d = 1;
    bool free_only = true;
    ResolutionTree tree;
    std::vector<PuiseuxJet> original_jets;
    std::vector<PuiseuxJet> ramified_jets;
};

inline CurveTheoremResult curve_theorem_check(const BiPoly& f, int order = 16,
                                              int max_depth = 50) {
    if (f.is_zero() || !f.coefficient(0, 0).is_zero())
        throw domain_error("curve_theorem_check: curve must vanish at the origin");
    if (!is_squarefree(f))
        throw domain_error("curve_theorem_check: curve must be square-free");
    CurveTheoremResult res;
    PuiseuxExpansion exp = newton_puiseux_expand(f, order);
    res.original_jets = exp.jets;
    res.d = exp.jets.empty() ? 1 : ramification_exponent(exp.jets);
    BiPoly g = ramify_curve(f, res.d);
    res.ramified_jets = newton_puiseux_expand(g, order).jets;
    CurveResolution cr = embedded_resolution(g, max_depth, res.d, &f);
    res.tree = cr.tree;
    res.free_only = cr.free_only;
    return res;
}

// ---------------------------------------------------------------------------
// Main theorem, foliation-encoded: search for the least exponent whose
// ramified pullback reduces with free centers only.

struct RamificationAttempt {
    int d = 1;
    bool free_only = false;
    bool simple_only = false;
    int satellites = 0;
    int blowups = 0;
};

struct RamificationSearchResult {
    int d = 1;
    ResolutionTree tree;
    std::vector<RamificationAttempt> attempts;
    int hint = 1;
};

namespace detail {

// For an exact form (a Hamiltonian differential), reconstruct f with df = w.
inline std::optional<BiPoly> hamiltonian_primitive(const OneForm& w) {
    if (w.a().derivative_y() != w.b().derivative_x()) return std::nullopt;
    const FieldPtr& fld = w.field();
    // Integrate a in x.
    BiPoly F(fld);
    for (const auto& [k, c] : w.a().terms())
        F.add_term(k.first + 1, k.second, c / FieldElement::from_rat(fld, Rat(k.first + 1)));
    // g'(y) = b - dF/dy, a pure-y polynomial.
    BiPoly rest = w.b() - F.derivative_y();
    if (rest.deg_x() > 0) return std::nullopt;
    for (const auto& [k, c] : rest.terms())
        F.add_term(0, k.second + 1, c / FieldElement::from_rat(fld, Rat(k.second + 1)));
    if (!(F.derivative_x() == w.a()) || !(F.derivative_y() == w.b())) return std::nullopt;
    F.set(0, 0, FieldElement::zero(fld));
    return F;
}

} // namespace detail

inline RamificationAttempt evaluate_ramification(const OneForm& w, int d, int max_depth,
                                                 ResolutionTree* tree_out = nullptr) {
    OneForm wd = pullback_ramify(w, d);
    ResolutionTree tree = reduce_singularities(wd, max_depth, d, &w);
    RamificationAttempt att;
    att.d = d;
    att.blowups = (int)tree.nodes.size();
    att.simple_only = fully_reduced(tree);
    att.free_only = free_centers_only(tree);
    for (const auto& n : tree.nodes)
        if (n.kind == CenterKind::Satellite) ++att.satellites;
    if (tree_out) *tree_out = std::move(tree);
    return att;
}

// Least d <= d_max making the reduction of the ramified pullback use free
// centers only and end with simple singularities only. The separatrix-derived
// exponent is evaluated first as a hint.
inline RamificationSearchResult find_regular_ramification(const OneForm& w, int d_max = 12,
                                                          int max_depth = 50) {
    if (!w.singular_at_origin())
        throw domain_error("find_regular_ramification: form is regular at the origin");
    RamificationSearchResult res;
    // Hint: lcm of the separatrix jet denominator and, for Hamiltonian forms,
    // of the branch denominators of the primitive.
    int hint = 1;
    try {
        ResolutionTree base = reduce_singularities(w, max_depth);
        SeparatrixJet sep = extract_separatrix(base, 8);
        hint = sep.jet.ram;
    } catch (const error&) {
        hint = 1;
    }
    if (auto prim = detail::hamiltonian_primitive(w)) {
        try {
            BiPoly sf = squarefree_part(*prim);
            PuiseuxExpansion exp = newton_puiseux_expand(sf, 8);
            if (!exp.jets.empty())
                hint = (int)int_lcm_small(hint, ramification_exponent(exp.jets));
        } catch (const error&) {
        }
    }
    res.hint = hint;
    std::optional<RamificationAttempt> hint_attempt;
    ResolutionTree hint_tree;
    if (hint >= 1 && hint <= d_max) {
        try {
            hint_attempt = evaluate_ramification(w, hint, max_depth, &hint_tree);
        } catch (const error&) {
            hint_attempt.reset();
        }
    }
    std::optional<RamificationAttempt> best;
    for (int d = 1; d <= d_max; ++d) {
        RamificationAttempt att;
        ResolutionTree tree;
        try {
            if (hint_attempt && d == hint) {
                att = *hint_attempt;
                tree = hint_tree;
            } else {
                att = evaluate_ramification(w, d, max_depth, &tree);
            }
        } catch (const error&) {
            continue;
        }
        res.attempts.push_back(att);
        if (att.free_only && att.simple_only) {
            res.d = d;
            res.tree = std::move(tree);
            return res;
        }
        if (!best || att.satellites < best->satellites) best = att;
    }
    std::string summary = "no exponent <= " + std::to_string(d_max) + " worked";
    if (best)
        summary += "; best partial: d=" + std::to_string(best->d) + " with " +
                   std::to_string(best->satellites) + " satellite center(s)";
    throw no_ramification_error(summary, d_max, summary);
}

} // namespace folia
