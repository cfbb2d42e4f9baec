#pragma once

#include "folia/errors.hpp"
#include "folia/form.hpp"
#include "folia/roots.hpp"
#include "folia/surface.hpp"

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

namespace folia {

namespace detail {

inline Axis axis_of_equation(const BiPoly& eq) {
    // Local divisor equations in this construction are coordinate lines.
    if (eq == BiPoly::var_x(eq.field()) * eq.coefficient(1, 0) && !eq.coefficient(1, 0).is_zero())
        return Axis::First;
    if (eq == BiPoly::var_y(eq.field()) * eq.coefficient(0, 1) && !eq.coefficient(0, 1).is_zero())
        return Axis::Second;
    throw internal_error("divisor equation is not a coordinate line: " + eq.to_string());
}

inline SingularityRecord
make_record(const ResolutionTree& tree, int node, ChartDir dir,
            const std::pair<FieldElement, FieldElement>& pt) {
    const ChartState& cs = tree.chart_state(node, dir);
    if (!std::holds_alternative<OneForm>(cs.payload))
        throw internal_error("make_record: payload is not a foliation");
    FieldPtr f = pt.first.field();
    {
        Unified u = unify_fields(f, pt.second.field());
        f = u.field;
    }
    SingularityRecord rec;
    rec.node = node;
    rec.dir = dir;
    rec.point = pt;
    OneForm w = std::get<OneForm>(cs.payload).promoted(f);
    rec.local = w.translated(pt.first.embedded(f), pt.second.embedded(f));
    for (const auto& lc : cs.components) {
        if (!lc.equation.eval(pt.first, pt.second).is_zero()) continue;
        BiPoly eq = poly_translate(lc.equation.promoted(f), pt.first.embedded(f),
                                   pt.second.embedded(f));
        rec.components.push_back(RecordComponent{lc.id, axis_of_equation(eq)});
    }
    LinearPart lp = linear_part_at_origin(rec.local);
    rec.trace = lp.trace;
    rec.det = lp.det;
    rec.cls = rec.local.singular_at_origin() ? classify_linear(lp.trace, lp.det)
                                             : SingClass::Regular;
    return rec;
}

} // namespace detail

// All singular points of the node's transform lying on the exceptional line
// of one chart. The x-chart owns every finite point of the new component; the
// y-chart contributes only its origin (the point at infinity of the line).
inline std::vector<SingularityRecord>
scan_chart_singularities(const ResolutionTree& tree, int node, ChartDir dir) {
    const ChartState& cs = tree.chart_state(node, dir);
    const OneForm& w = std::get<OneForm>(cs.payload);
    std::vector<SingularityRecord> out;
    FieldPtr f = w.field();
    if (dir == ChartDir::X) {
        // Points (0, tau): common roots of a(0, t) and b(0, t).
        UniPoly ar = uni_restrict_x0(w.a());
        UniPoly br = uni_restrict_x0(w.b());
        if (uni_is_zero(ar) && uni_is_zero(br))
            throw internal_error("saturated transform vanishes on the divisor");
        UniPoly g;
        if (uni_is_zero(ar))
            g = uni_scale(br, br.back().inverse());
        else if (uni_is_zero(br))
            g = uni_scale(ar, ar.back().inverse());
        else
            g = uni_gcd(ar, br);
        if (uni_deg(g) >= 1) {
            RootResult roots = univariate_roots(g, f);
            if (roots.unsupported)
                throw unsupported_extension_error(
                    "singular locus needs an extension of degree > 2",
                    tree.chart_path(node, dir));
            for (const auto& [r, mult] : roots.roots) {
                FieldElement zero = FieldElement::zero(roots.field);
                out.push_back(detail::make_record(tree, node, dir, {zero, r}));
            }
        }
    } else {
        // Only the origin of the y-chart is owned by it.
        if (w.a().coefficient(0, 0).is_zero() && w.b().coefficient(0, 0).is_zero()) {
            FieldElement zero = FieldElement::zero(f);
            out.push_back(detail::make_record(tree, node, dir, {zero, zero}));
        }
    }
    return out;
}

// Both charts of a node: every singular point on the new exceptional line,
// each identified exactly once.
inline std::vector<SingularityRecord> singular_locus_on_divisor(const ResolutionTree& tree,
                                                                int node) {
    std::vector<SingularityRecord> out = scan_chart_singularities(tree, node, ChartDir::X);
    auto y = scan_chart_singularities(tree, node, ChartDir::Y);
    out.insert(out.end(), y.begin(), y.end());
    return out;
}

inline SingClass classify_singularity(const SingularityRecord& rec) { return rec.cls; }

// Seidenberg reduction: blow up every non-simple singularity until only
// Regular / Simple / SaddleNode points remain. The tree records the final
// singularity records, dicritical flags and center classifications.
inline ResolutionTree reduce_singularities(const OneForm& w, int max_depth = 50,
                                           int ram_exponent = 1,
                                           const OneForm* source = nullptr) {
    ResolutionTree tree = make_tree(Payload(w), ram_exponent);
    tree.source = source ? Payload(*source) : Payload(w);
    tree.max_depth_guard = max_depth;
    FieldPtr f = w.field();
    FieldElement zero = FieldElement::zero(f);
    if (!w.singular_at_origin()) {
        SingularityRecord rec = detail::make_record(tree, 0, ChartDir::X, {zero, zero});
        tree.final_records.push_back(rec);
        return tree;
    }
    std::vector<SingularityRecord> pending;
    {
        SingularityRecord rec = detail::make_record(tree, 0, ChartDir::X, {zero, zero});
        if (rec.terminal()) {
            tree.final_records.push_back(rec);
            return tree;
        }
        pending.push_back(rec);
    }
    std::size_t guard = 0;
    while (!pending.empty()) {
        if (++guard > 10000)
            throw resolution_depth_error("reduction did not terminate (node guard)");
        SingularityRecord rec = pending.front();
        pending.erase(pending.begin());
        tree = blow_up_at(tree, rec.node, rec.dir, rec.point);
        int new_node = (int)tree.nodes.size();
        for (auto& found : singular_locus_on_divisor(tree, new_node)) {
            if (found.terminal())
                tree.final_records.push_back(found);
            else
                pending.push_back(found);
        }
    }
    return tree;
}

// True when every final record of the tree is Regular/Simple/SaddleNode.
inline bool fully_reduced(const ResolutionTree& tree) {
    for (const auto& rec : tree.final_records)
        if (!rec.terminal()) return false;
    return true;
}

// True when every non-root center is free.
inline bool free_centers_only(const ResolutionTree& tree) {
    for (const auto& n : tree.nodes)
        if (n.kind == CenterKind::Satellite) return false;
    return true;
}

} // namespace folia
