#pragma once

#include "folia/errors.hpp"
#include "folia/foliation.hpp"
#include "folia/newton.hpp"
#include "folia/series.hpp"

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

namespace folia {

using CSIndex = FieldElement;

namespace detail {

// Residue at 0 of N(t)/D(t) dt, exact.
inline FieldElement residue_at_zero(const UniPoly& num, const UniPoly& den) {
    if (uni_is_zero(den)) throw non_isolated_residue_error("residue denominator is zero");
    FieldPtr f = den[0].field();
    if (uni_is_zero(num)) return FieldElement::zero(f);
    std::size_t n = 0;
    while (num[n].is_zero()) ++n;
    std::size_t m = 0;
    while (den[m].is_zero()) ++m;
    int pole = (int)m - (int)n; // order of the pole at 0
    if (pole <= 0) return FieldElement::zero(f);
    int want = pole - 1; // coefficient of t^{-1}
    int window = want + 1;
    PowerSeries ns(f, window), ds(f, window);
    for (int k = 0; k < window; ++k) {
        if (n + (std::size_t)k < num.size()) ns.set(k, num[n + (std::size_t)k]);
        if (m + (std::size_t)k < den.size()) ds.set(k, den[m + (std::size_t)k]);
    }
    PowerSeries q = ns * ds.inverse();
    return q.at(want);
}

} // namespace detail

// Camacho-Sad index of the singularity of `local` (at the origin) relative to
// the invariant coordinate line given by `axis`. Normalized so the linear
// model gives the eigenvalue ratio transverse-over-along.
inline CSIndex cs_index_local(const OneForm& local, Axis axis,
                              const std::string& chart_path = {}) {
    if (axis == Axis::Second) {
        // Curve {v=0}: v must divide the du coefficient.
        if (local.a().y_order() < 1 && !local.a().is_zero())
            throw curve_not_invariant_error("curve v=0 is not invariant", chart_path);
        BiPoly a_over = local.a().is_zero() ? local.a() : local.a().shift_y(-1);
        UniPoly num = uni_from_bipoly(a_over.eval_y(FieldElement::zero(local.field())));
        UniPoly den = uni_from_bipoly(local.b().eval_y(FieldElement::zero(local.field())));
        if (uni_is_zero(den))
            throw non_isolated_residue_error("b(x,0) is identically zero", chart_path);
        return -detail::residue_at_zero(num, den);
    }
    // Curve {u=0}: u must divide the dv coefficient.
    if (local.b().x_order() < 1 && !local.b().is_zero())
        throw curve_not_invariant_error("curve u=0 is not invariant", chart_path);
    BiPoly b_over = local.b().is_zero() ? local.b() : local.b().shift_x(-1);
    BiPoly num_b = b_over.eval_x(FieldElement::zero(local.field())).swap_vars();
    BiPoly den_b = local.a().eval_x(FieldElement::zero(local.field())).swap_vars();
    UniPoly num = uni_from_bipoly(num_b);
    UniPoly den = uni_from_bipoly(den_b);
    if (uni_is_zero(den))
        throw non_isolated_residue_error("a(0,y) is identically zero", chart_path);
    return -detail::residue_at_zero(num, den);
}

// Index of a recorded singularity relative to one of its divisor components.
inline CSIndex cs_index(const SingularityRecord& rec, int component_id) {
    for (const auto& rc : rec.components)
        if (rc.id == component_id) return cs_index_local(rec.local, rc.axis);
    throw domain_error("cs_index: record does not lie on component " +
                       std::to_string(component_id));
}

struct ComponentIndexReport {
    int component = 0;
    int self_intersection = 0;
    bool invariant = true;
    bool skipped = false;
    std::string skip_reason;
    std::vector<std::pair<std::string, FieldElement>> indices; // (point label, value)
    FieldElement sum;
    bool equal = false;
    bool unsupported = false;
    std::string error;
};

inline std::string record_label(const SingularityRecord& rec) {
    return "node" + std::to_string(rec.node) + "/" + to_string(rec.dir) + "(" +
           rec.point.first.to_string() + "," + rec.point.second.to_string() + ")";
}

// Per-component index sums of a reduced tree: on every invariant component
// the Camacho-Sad indices of the singular points add up to the
// self-intersection, exactly.
inline std::vector<ComponentIndexReport> index_theorem_check(const ResolutionTree& tree) {
    std::vector<ComponentIndexReport> out;
    for (const auto& comp : tree.components) {
        ComponentIndexReport rep;
        rep.component = comp.id;
        rep.self_intersection = comp.self_intersection;
        rep.invariant = !comp.dicritical;
        if (comp.dicritical) {
            rep.skipped = true;
            rep.skip_reason = "non-invariant";
            out.push_back(rep);
            continue;
        }
        FieldPtr f = NumberField::gaussian_rationals();
        FieldElement sum = FieldElement::zero(f);
        try {
            for (const auto& rec : tree.final_records) {
                for (const auto& rc : rec.components) {
                    if (rc.id != comp.id) continue;
                    FieldElement v = cs_index_local(rec.local, rc.axis);
                    rep.indices.push_back({record_label(rec), v});
                    sum = sum + v;
                }
            }
            rep.sum = sum;
            rep.equal =
                (sum == FieldElement::from_rat(sum.field(), Rat(comp.self_intersection)));
        } catch (const unsupported_extension_error& e) {
            rep.unsupported = true;
            rep.error = e.what();
        }
        out.push_back(rep);
    }
    return out;
}

inline bool index_theorem_holds(const std::vector<ComponentIndexReport>& reports) {
    for (const auto& r : reports) {
        if (r.skipped) continue;
        if (r.unsupported || !r.equal) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// Separatrix extraction

struct SeparatrixJet {
    PuiseuxJet jet;      // y(t) with x = t^d, at the original origin
    std::string origin;  // "dicritical" or "singular-point"
    int node = 0;
    ChartDir dir = ChartDir::X;
    std::string point_label;
    int unramification = 1;          // ramification exponent of the tree
    int residual_checked_order = 0;  // verified vanishing t-order of the pullback
    bool residual_exact = false;
};

namespace detail {

// Solve the invariant graph through the origin of `local`:
//   axis == First  : curve v = V(u), V(0) = v0 (v0 = 0 at singular points)
//   axis == Second : curve u = U(v), U(0) = u0
// Coefficients are found order by order from the exact linear equation; a
// candidate that cannot be continued returns nullopt.
inline std::optional<PowerSeries> solve_invariant_graph(const OneForm& local, Axis axis,
                                                        const FieldElement& c0, int length) {
    FieldPtr f = local.field();
    BiPoly A = local.a(), B = local.b();
    if (axis == Axis::Second) {
        std::swap(A, B);
        A = A.swap_vars();
        B = B.swap_vars();
    }
    // Now solve A(u,V) + B(u,V) V' = 0 with V(0) = c0.
    FieldElement cc = c0;
    {
        Unified u = unify_fields(f, cc.field());
        f = u.field;
        A = A.promoted(f);
        B = B.promoted(f);
        cc = apply_unification(c0, u, false);
    }
    PowerSeries V = PowerSeries::zero(f, length);
    V.set(0, cc);
    PowerSeries u_id = PowerSeries::identity(f, length);
    BiPoly Av = A.derivative_y();
    for (int k = 1; k < length; ++k) {
        PowerSeries Aser = bipoly_eval_series(A, u_id, V);
        PowerSeries Bser = bipoly_eval_series(B, u_id, V);
        PowerSeries F = Aser + Bser * V.derivative();
        // Perturbation of F by c*u^k: gamma = dA/dv * u^k + B * k * u^{k-1}.
        PowerSeries Avs = bipoly_eval_series(Av, u_id, V);
        PowerSeries gamma(f, length);
        for (int j = 0; j + k < length; ++j) gamma.set(j + k, Avs.at(j));
        FieldElement kf = FieldElement::from_rat(f, Rat(k));
        for (int j = 0; j + k - 1 < length; ++j)
            gamma.set(j + k - 1, gamma.at(j + k - 1) + Bser.at(j) * kf);
        auto jg = gamma.ord();
        auto jf_ = F.ord();
        if (!jf_) break;       // already flat to the window
        if (!jg) return std::nullopt;
        if (*jf_ < *jg) return std::nullopt; // residue below reach: not solvable
        if (*jf_ > *jg) continue;            // c_k = 0
        FieldElement ck = -(F.at(*jg) / gamma.at(*jg));
        V.set(k, V.at(k) + ck);
    }
    // Final consistency: the equation must vanish well into the window.
    PowerSeries Aser = bipoly_eval_series(A, u_id, V);
    PowerSeries Bser = bipoly_eval_series(B, u_id, V);
    PowerSeries F = Aser + Bser * V.derivative();
    auto rord = F.ord();
    if (rord && *rord < length - 1) return std::nullopt;
    return V;
}

struct Candidate {
    std::string origin;
    int node = 0;
    ChartDir dir = ChartDir::X;
    std::string label;
    // parametrization in chart coordinates: w -> (P1(w), P2(w))
    PowerSeries p1, p2;
};

// Parametrize the candidate curve in chart coordinates with window `length`.
inline std::optional<Candidate> build_candidate_series(const ResolutionTree& tree,
                                                       const SingularityRecord& rec,
                                                       int length) {
    if (rec.components.size() != 1) return std::nullopt;
    Axis e_axis = rec.components[0].axis;
    FieldPtr f = rec.local.field();
    auto V = solve_invariant_graph(rec.local, e_axis, FieldElement::zero(f), length);
    if (!V) return std::nullopt;
    Candidate c;
    c.origin = "singular-point";
    c.node = rec.node;
    c.dir = rec.dir;
    c.label = record_label(rec);
    FieldPtr vf = V->field();
    PowerSeries w_id = PowerSeries::identity(vf, length);
    PowerSeries shift1 =
        PowerSeries::constant(vf, rec.point.first.embedded(vf), length);
    PowerSeries shift2 =
        PowerSeries::constant(vf, rec.point.second.embedded(vf), length);
    if (e_axis == Axis::First) {
        c.p1 = w_id + shift1;
        c.p2 = *V + shift2;
    } else {
        c.p1 = *V + shift1;
        c.p2 = w_id + shift2;
    }
    return c;
}

// A regular non-corner point (0, tau) of a dicritical component, with the
// leaf through it. tau runs over small naturals; first workable one wins.
inline std::optional<Candidate> build_dicritical_candidate(const ResolutionTree& tree,
                                                           const DivisorComponent& comp,
                                                           int length) {
    int node = comp.birth_node;
    const ChartState& cs = tree.chart_state(node, ChartDir::X);
    const OneForm& w = std::get<OneForm>(cs.payload);
    FieldPtr f = w.field();
    for (int tau_i = 0; tau_i <= 100; ++tau_i) {
        FieldElement tau = FieldElement::from_rat(f, Rat(tau_i));
        std::pair<FieldElement, FieldElement> pt{FieldElement::zero(f), tau};
        if (tree.point_blown(node, ChartDir::X, pt)) continue;
        // Not a singular point, not on another component, leaf transverse.
        if (w.a().eval(pt.first, pt.second).is_zero() &&
            w.b().eval(pt.first, pt.second).is_zero())
            continue;
        bool on_other = false;
        for (const auto& lc : cs.components)
            if (lc.id != comp.id && lc.equation.eval(pt.first, pt.second).is_zero())
                on_other = true;
        if (on_other) continue;
        if (w.b().eval(pt.first, pt.second).is_zero()) continue;
        OneForm local = w.translated(pt.first, pt.second);
        auto V = solve_invariant_graph(local, Axis::First, FieldElement::zero(f), length);
        if (!V) continue;
        Candidate c;
        c.origin = "dicritical";
        c.node = node;
        c.dir = ChartDir::X;
        c.label = "E" + std::to_string(comp.id) + "@(0," + tau.to_string() + ")";
        FieldPtr vf = V->field();
        PowerSeries w_id = PowerSeries::identity(vf, length);
        c.p1 = w_id;
        c.p2 = *V + PowerSeries::constant(vf, tau.embedded(vf), length);
        return c;
    }
    return std::nullopt;
}

struct Pushdown {
    int d = 1;
    PowerSeries y_of_t;
    bool ok = false;
};

// Push the candidate curve down the chart map and normalize the
// parametrization to x = t^d exactly.
inline Pushdown push_down(const ResolutionTree& tree, const Candidate& cand, int length) {
    Pushdown out;
    const ChartState& cs = tree.chart_state(cand.node, cand.dir);
    PowerSeries X = bipoly_eval_series(cs.chart.map_x(), cand.p1, cand.p2);
    PowerSeries Y = bipoly_eval_series(cs.chart.map_y(), cand.p1, cand.p2);
    auto mo = X.ord();
    if (!mo || *mo == 0) return out;
    int m = *mo;
    FieldPtr f = X.field();
    // X = w^m * eps with eps a unit; find an m-th root of eps.
    PowerSeries eps = X.shift(-m);
    FieldElement e0 = eps.at(0);
    FieldElement r0 = FieldElement::zero(f);
    if (auto r = e0.kth_root((unsigned)m)) {
        r0 = *r;
    } else if (m % 2 == 0) {
        try {
            auto [ef, root] = sqrt_extending(e0);
            if (auto r2 = root.kth_root((unsigned)m / 2)) {
                r0 = *r2;
            } else {
                return out;
            }
        } catch (const tower_depth_error&) {
            return out;
        }
    } else {
        return out;
    }
    PowerSeries rho = eps.kth_root_with(r0, (unsigned)m);
    PowerSeries W = PowerSeries::identity(rho.field(), rho.truncation()) * rho; // W^m = X
    PowerSeries phi = W.reversion();
    PowerSeries yt = Y.compose(phi);
    out.d = m;
    out.y_of_t = yt;
    out.ok = true;
    return out;
}

} // namespace detail

// Constructive separatrix: an invariant-curve jet at the original origin.
// Selection rule: any dicritical component first (lifting a leaf through a
// regular non-corner point), otherwise simple/saddle-node points at
// non-corner locations in birth order, x-charts before y-charts.
inline SeparatrixJet extract_separatrix(const ResolutionTree& tree_in, int order = 16) {
    const ResolutionTree* treep = &tree_in;
    ResolutionTree scratch;
    if (tree_in.nodes.empty()) {
        // Already-reduced origin: blow up once (scratch) and search there.
        if (!std::holds_alternative<OneForm>(tree_in.root.payload))
            throw domain_error("extract_separatrix: tree does not hold a foliation");
        const OneForm& w = std::get<OneForm>(tree_in.root.payload);
        FieldPtr f = w.field();
        FieldElement zero = FieldElement::zero(f);
        scratch = tree_in;
        scratch = blow_up_at(scratch, 0, ChartDir::X, {zero, zero});
        for (auto& rec : singular_locus_on_divisor(scratch, 1))
            scratch.final_records.push_back(rec);
        treep = &scratch;
    }
    const ResolutionTree& tree = *treep;

    std::string diagnostics;
    {
        int probe_len = 24;
        std::vector<detail::Candidate> candidates;
        // Dicritical components first, in birth order.
        for (const auto& comp : tree.components) {
            if (!comp.dicritical) continue;
            if (auto c = detail::build_dicritical_candidate(tree, comp, probe_len))
                candidates.push_back(*c);
        }
        // Then terminal singular points at non-corner locations.
        std::vector<const SingularityRecord*> recs;
        for (const auto& rec : tree.final_records) {
            if (!rec.terminal() || rec.cls == SingClass::Regular) continue;
            if (rec.components.size() != 1) continue;
            recs.push_back(&rec);
        }
        std::stable_sort(recs.begin(), recs.end(),
                         [](const SingularityRecord* a, const SingularityRecord* b) {
                             if (a->node != b->node) return a->node < b->node;
                             return a->dir == ChartDir::X && b->dir == ChartDir::Y;
                         });
        for (const auto* rec : recs)
            if (auto c = detail::build_candidate_series(tree, *rec, probe_len))
                candidates.push_back(*c);

        for (const auto& cand : candidates) {
            // First pass: probe the x-order m with a short window, then redo
            // at full precision.
            detail::Pushdown probe = detail::push_down(tree, cand, probe_len);
            if (!probe.ok) {
                diagnostics += cand.label + ": pushdown failed; ";
                continue;
            }
            int m = probe.d;
            int length = m * order + 10;
            detail::Candidate full = cand;
            if (cand.origin == "dicritical") {
                std::optional<detail::Candidate> c2;
                for (const auto& comp : tree.components)
                    if (comp.dicritical && comp.birth_node == cand.node) {
                        c2 = detail::build_dicritical_candidate(tree, comp, length);
                        break;
                    }
                if (!c2) continue;
                full = *c2;
            } else {
                const SingularityRecord* match = nullptr;
                for (const auto& rec : tree.final_records)
                    if (record_label(rec) == cand.label) match = &rec;
                if (!match) continue;
                auto c2 = detail::build_candidate_series(tree, *match, length);
                if (!c2) continue;
                full = *c2;
            }
            detail::Pushdown pd = detail::push_down(tree, full, length);
            if (!pd.ok || pd.d != m) continue;

            // Residual against the original (pre-ramification) form.
            const OneForm& source = std::get<OneForm>(tree.source);
            FieldPtr f = pd.y_of_t.field();
            int window = pd.y_of_t.truncation();
            PowerSeries xt = PowerSeries::identity(f, window).pow_series((unsigned)pd.d);
            PowerSeries aser = bipoly_eval_series(source.a(), xt, pd.y_of_t);
            PowerSeries bser = bipoly_eval_series(source.b(), xt, pd.y_of_t);
            PowerSeries dxdt(f, window);
            dxdt.set(pd.d - 1, FieldElement::from_rat(f, Rat(pd.d)));
            PowerSeries residual = aser * dxdt + bser * pd.y_of_t.derivative();
            auto rord = residual.ord();
            int needed = pd.d * order;
            if (rord && *rord < needed) {
                diagnostics += cand.label + ": residual order " + std::to_string(*rord) +
                               " < " + std::to_string(needed) + "; ";
                continue;
            }

            SeparatrixJet sj;
            sj.origin = cand.origin;
            sj.node = cand.node;
            sj.dir = cand.dir;
            sj.point_label = cand.label;
            sj.unramification = tree.ram_exponent;
            sj.residual_exact = !rord.has_value();
            sj.residual_checked_order = rord ? *rord : window;
            // Normalize gcd of d and the exponents.
            int g = pd.d;
            for (int k = 0; k < pd.y_of_t.truncation(); ++k)
                if (!pd.y_of_t.at(k).is_zero()) g = std::gcd(g, k);
            PuiseuxJet jet;
            if (g > 1) {
                jet.ram = pd.d / g;
                PowerSeries comp(f, (pd.y_of_t.truncation() + g - 1) / g);
                for (int k = 0; k < pd.y_of_t.truncation(); ++k)
                    if (!pd.y_of_t.at(k).is_zero()) comp.set(k / g, pd.y_of_t.at(k));
                jet.series = comp;
            } else {
                jet.ram = pd.d;
                jet.series = pd.y_of_t;
            }
            jet.exact = sj.residual_exact;
            jet.guaranteed_t_order = sj.residual_checked_order;
            sj.jet = jet;
            return sj;
        }
    }
    throw no_separatrix_error(
        "no separatrix candidate succeeded on this reduced tree (diagnostics: " +
        diagnostics + ")");
}

} // namespace folia
