#pragma once

#include "folia/bipoly.hpp"
#include "folia/errors.hpp"
#include "folia/form.hpp"

#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

namespace folia {

// -------------------------------------------------------------------------
// Charts

struct SubBlowX {};                        // (x, t) -> (x, x t)
struct SubBlowY {};                        // (s, y) -> (s y, y)
struct SubTranslate {
    FieldElement cx, cy;
};
struct SubRamify {
    int d = 1;
};                                         // (x, y) -> (x^d, y), root only
using Substitution = std::variant<SubRamify, SubTranslate, SubBlowX, SubBlowY>;

// Exact polynomial map from chart coordinates to the original plane,
// stored both as the list of elementary substitutions and as the composed
// coordinate pair.
class Chart {
public:
    Chart() = default;

    static Chart identity(const FieldPtr& f) {
        Chart c;
        c.map_x_ = BiPoly::var_x(f);
        c.map_y_ = BiPoly::var_y(f);
        return c;
    }

    static Chart ramified(const FieldPtr& f, int d) {
        Chart c = identity(f);
        if (d > 1) {
            c.subs_.push_back(SubRamify{d});
            c.map_x_ = c.map_x_.subst_x_pow(d);
        }
        c.path_ = "root";
        return c;
    }

    const BiPoly& map_x() const { return map_x_; }
    const BiPoly& map_y() const { return map_y_; }
    const std::vector<Substitution>& substitutions() const { return subs_; }
    const std::string& path() const { return path_; }

    Chart after_translate(const FieldElement& cx, const FieldElement& cy) const {
        if (cx.is_zero() && cy.is_zero()) return *this;
        Chart c = *this;
        c.subs_.push_back(SubTranslate{cx, cy});
        c.map_x_ = poly_translate(map_x_, cx, cy);
        c.map_y_ = poly_translate(map_y_, cx, cy);
        return c;
    }

    Chart after_blow(ChartDir dir) const {
        Chart c = *this;
        if (dir == ChartDir::X) {
            c.subs_.push_back(SubBlowX{});
            c.map_x_ = map_x_.subst_y_to_xy();
            c.map_y_ = map_y_.subst_y_to_xy();
        } else {
            c.subs_.push_back(SubBlowY{});
            c.map_x_ = map_x_.subst_x_to_xy();
            c.map_y_ = map_y_.subst_x_to_xy();
        }
        c.path_ = path_ + "/" + to_string(dir);
        return c;
    }

    // Recompose the total map from the substitution list (invariant check).
    std::pair<BiPoly, BiPoly> recompose(const FieldPtr& f) const {
        BiPoly mx = BiPoly::var_x(f), my = BiPoly::var_y(f);
        for (const auto& sub : subs_) {
            if (std::holds_alternative<SubRamify>(sub)) {
                mx = mx.subst_x_pow(std::get<SubRamify>(sub).d);
            } else if (std::holds_alternative<SubTranslate>(sub)) {
                const auto& t = std::get<SubTranslate>(sub);
                mx = poly_translate(mx, t.cx, t.cy);
                my = poly_translate(my, t.cx, t.cy);
            } else if (std::holds_alternative<SubBlowX>(sub)) {
                mx = mx.subst_y_to_xy();
                my = my.subst_y_to_xy();
            } else {
                mx = mx.subst_x_to_xy();
                my = my.subst_x_to_xy();
            }
        }
        return {mx, my};
    }

private:
    std::vector<Substitution> subs_;
    BiPoly map_x_, map_y_;
    std::string path_ = "root";
};

// -------------------------------------------------------------------------
// Divisor bookkeeping

struct DivisorComponent {
    int id = 0;                  // birth order, 1-based
    int self_intersection = -1;  // -1 at birth; decremented by later centers
    bool dicritical = false;     // not invariant for the transformed foliation
    int birth_node = 0;
};

struct LocalComponent {
    int id = 0;
    BiPoly equation; // local equation in the chart's coordinates
};

using Payload = std::variant<OneForm, BiPoly>;

inline Payload promote_payload(const Payload& p, const FieldPtr& f) {
    if (std::holds_alternative<OneForm>(p)) return std::get<OneForm>(p).promoted(f);
    return std::get<BiPoly>(p).promoted(f);
}

inline Payload translate_payload(const Payload& p, const FieldElement& cx,
                                 const FieldElement& cy) {
    if (std::holds_alternative<OneForm>(p)) return std::get<OneForm>(p).translated(cx, cy);
    return poly_translate(std::get<BiPoly>(p), cx, cy);
}

struct ChartState {
    Chart chart;
    Payload payload;
    std::vector<LocalComponent> components;
};

enum class CenterKind { Root, Free, Satellite };

inline std::string to_string(CenterKind k) {
    switch (k) {
    case CenterKind::Root: return "root";
    case CenterKind::Free: return "free";
    case CenterKind::Satellite: return "satellite";
    }
    return "?";
}

struct TreeNode {
    int id = 0;     // 1-based
    int parent = 0; // 0 = root chart
    ChartDir parent_dir = ChartDir::X;
    std::pair<FieldElement, FieldElement> center; // in the parent chart
    CenterKind kind = CenterKind::Root;
    int depth = 1;
    bool dicritical = false; // meaningful for foliation payloads
    int multiplicity = 0;    // nu (foliation) or curve multiplicity
    ChartState x_chart;
    ChartState y_chart;
};

struct BlownPoint {
    int node = 0; // 0 = root chart
    ChartDir dir = ChartDir::X;
    std::pair<FieldElement, FieldElement> point;
    int child = 0;
};

// Which coordinate line of a chart a divisor component occupies locally.
enum class Axis { First, Second };

inline std::string to_string(Axis a) { return a == Axis::First ? "u=0" : "v=0"; }

struct RecordComponent {
    int id = 0;
    Axis axis = Axis::First;
};

// A singular point of the transformed foliation, located on some chart of the
// tree, with its local data translated to the origin.
struct SingularityRecord {
    int node = 0; // 0 = origin of the root chart
    ChartDir dir = ChartDir::X;
    std::pair<FieldElement, FieldElement> point; // chart coordinates (pre-translation)
    OneForm local;                               // translated: singularity at (0,0)
    std::vector<RecordComponent> components;     // divisor components through the point
    FieldElement trace;
    FieldElement det;
    SingClass cls = SingClass::Regular;

    bool is_corner() const { return components.size() >= 2; }
    bool terminal() const { return cls != SingClass::NonSimple; }
};

// Full record of a blow-up sequence. A value type: blow_up_at returns a new
// tree; node payloads are shared through the copied vectors.
struct ResolutionTree {
    ChartState root;
    std::vector<TreeNode> nodes;
    std::vector<DivisorComponent> components;
    std::set<std::pair<int, int>> adjacency; // intersecting component pairs (i<j)
    std::vector<BlownPoint> blown;
    std::vector<SingularityRecord> final_records; // filled by the reduction driver
    int ram_exponent = 1;      // x -> x^d precomposition at the root
    Payload source;            // the original (un-ramified) object
    int max_depth_guard = 50;

    const ChartState& chart_state(int node, ChartDir dir) const {
        if (node == 0) return root;
        const TreeNode& n = nodes.at((std::size_t)node - 1);
        return dir == ChartDir::X ? n.x_chart : n.y_chart;
    }
    int depth_of(int node) const {
        return node == 0 ? 0 : nodes.at((std::size_t)node - 1).depth;
    }
    std::string chart_path(int node, ChartDir dir) const {
        return chart_state(node, dir).chart.path();
    }
    bool point_blown(int node, ChartDir dir, const std::pair<FieldElement, FieldElement>& pt,
                     int* child = nullptr) const {
        for (const auto& bp : blown)
            if (bp.node == node && bp.dir == dir && bp.point.first == pt.first &&
                bp.point.second == pt.second) {
                if (child) *child = bp.child;
                return true;
            }
        return false;
    }
};

inline ResolutionTree make_tree(const Payload& object, int ram_exponent = 1,
                                const Payload* source = nullptr) {
    ResolutionTree t;
    FieldPtr f = std::holds_alternative<OneForm>(object) ? std::get<OneForm>(object).field()
                                                         : std::get<BiPoly>(object).field();
    t.root.chart = Chart::ramified(f, ram_exponent);
    t.root.payload = object;
    t.ram_exponent = ram_exponent;
    t.source = source ? *source : object;
    return t;
}

namespace detail {

inline std::vector<LocalComponent>
transform_components(const std::vector<LocalComponent>& comps, ChartDir dir,
                     const FieldPtr& f) {
    std::vector<LocalComponent> out;
    for (const auto& lc : comps) {
        BiPoly eq = lc.equation.promoted(f);
        if (!eq.coefficient(0, 0).is_zero()) continue; // not through the center
        BiPoly pulled = dir == ChartDir::X ? eq.subst_y_to_xy() : eq.subst_x_to_xy();
        int k = dir == ChartDir::X ? pulled.x_order() : pulled.y_order();
        BiPoly strict = dir == ChartDir::X ? pulled.shift_x(-k) : pulled.shift_y(-k);
        if (strict.is_unit()) continue; // component not visible in this chart
        out.push_back(LocalComponent{lc.id, strict});
    }
    return out;
}

} // namespace detail

// The classification a center WOULD get: root when no component passes
// through it, free on exactly one, satellite on two.
inline CenterKind classify_center_at(const ChartState& cs,
                                     const std::pair<FieldElement, FieldElement>& pt) {
    int through = 0;
    for (const auto& lc : cs.components)
        if (lc.equation.eval(pt.first, pt.second).is_zero()) ++through;
    if (through == 0) return CenterKind::Root;
    if (through == 1) return CenterKind::Free;
    if (through == 2) return CenterKind::Satellite;
    throw internal_error("center lies on three divisor components");
}

inline CenterKind classify_center(const ResolutionTree& tree, int node) {
    if (node == 0) return CenterKind::Root;
    return tree.nodes.at((std::size_t)node - 1).kind;
}

// One blow-up at `point` of the chosen chart. Returns the extended tree; the
// new node id is nodes.size() of the result.
inline ResolutionTree blow_up_at(const ResolutionTree& tree, int node, ChartDir dir,
                                 const std::pair<FieldElement, FieldElement>& point) {
    ResolutionTree out = tree;
    const ChartState& cs0 = out.chart_state(node, dir);
    if (out.point_blown(node, dir, point))
        throw domain_error("blow_up_at: point already blown up", out.chart_path(node, dir));

    // Promote everything to a common field including the point coordinates.
    FieldPtr f = cs0.chart.map_x().field();
    for (const FieldElement* e : {&point.first, &point.second}) {
        Unified u = unify_fields(f, e->field());
        f = u.field;
    }
    FieldElement px = point.first, py = point.second;
    {
        Unified ux = unify_fields(px.field(), f);
        px = apply_unification(px, ux, true);
        Unified uy = unify_fields(py.field(), f);
        py = apply_unification(py, uy, true);
    }

    ChartState cs;
    cs.chart = cs0.chart.after_translate(px, py);
    cs.payload = translate_payload(promote_payload(cs0.payload, f), px, py);
    for (const auto& lc : cs0.components)
        cs.components.push_back(
            LocalComponent{lc.id, poly_translate(lc.equation.promoted(f), px, py)});

    // Which components pass through the center?
    std::vector<int> through;
    for (const auto& lc : cs.components)
        if (lc.equation.coefficient(0, 0).is_zero()) through.push_back(lc.id);

    TreeNode tn;
    tn.id = (int)out.nodes.size() + 1;
    tn.parent = node;
    tn.parent_dir = dir;
    tn.center = {px, py};
    tn.depth = out.depth_of(node) + 1;
    if (through.empty()) {
        if (node != 0 || !out.nodes.empty() || !out.components.empty())
            throw domain_error("blow_up_at: non-root center off the exceptional divisor",
                               out.chart_path(node, dir));
        tn.kind = CenterKind::Root;
    } else if (through.size() == 1) {
        tn.kind = CenterKind::Free;
    } else if (through.size() == 2) {
        tn.kind = CenterKind::Satellite;
    } else {
        throw internal_error("blow_up_at: center on three components");
    }
    if (tn.depth > out.max_depth_guard)
        throw resolution_depth_error("blow-up depth guard exceeded",
                                     out.chart_path(node, dir));

    // Transform the payload.
    bool dicritical = false;
    int mult = 0;
    Payload px_payload, py_payload;
    if (std::holds_alternative<OneForm>(cs.payload)) {
        const OneForm& w = std::get<OneForm>(cs.payload);
        FormTransform tx = strict_transform_x(w);
        FormTransform ty = strict_transform_y(w);
        dicritical = tx.dicritical;
        mult = tx.nu;
        px_payload = tx.form;
        py_payload = ty.form;
    } else {
        const BiPoly& g = std::get<BiPoly>(cs.payload);
        mult = g.order().value_or(0);
        BiPoly gx = g.subst_y_to_xy();
        BiPoly gy = g.subst_x_to_xy();
        px_payload = gx.shift_x(-gx.x_order());
        py_payload = gy.shift_y(-gy.y_order());
    }
    tn.dicritical = dicritical;
    tn.multiplicity = mult;

    // New component and bookkeeping.
    DivisorComponent comp;
    comp.id = (int)out.components.size() + 1;
    comp.self_intersection = -1;
    comp.dicritical = dicritical;
    comp.birth_node = tn.id;
    for (int cid : through) {
        out.components[(std::size_t)cid - 1].self_intersection -= 1;
        out.adjacency.insert({std::min(cid, comp.id), std::max(cid, comp.id)});
    }
    for (std::size_t i = 0; i < through.size(); ++i)
        for (std::size_t j = i + 1; j < through.size(); ++j)
            out.adjacency.erase({std::min(through[i], through[j]),
                                 std::max(through[i], through[j])});
    out.components.push_back(comp);

    // Children chart states.
    tn.x_chart.chart = cs.chart.after_blow(ChartDir::X);
    tn.x_chart.payload = px_payload;
    tn.x_chart.components = detail::transform_components(cs.components, ChartDir::X, f);
    tn.x_chart.components.push_back(LocalComponent{comp.id, BiPoly::var_x(f)});
    tn.y_chart.chart = cs.chart.after_blow(ChartDir::Y);
    tn.y_chart.payload = py_payload;
    tn.y_chart.components = detail::transform_components(cs.components, ChartDir::Y, f);
    tn.y_chart.components.push_back(LocalComponent{comp.id, BiPoly::var_y(f)});

    out.blown.push_back(BlownPoint{node, dir, {px, py}, tn.id});
    out.nodes.push_back(std::move(tn));
    return out;
}

// -------------------------------------------------------------------------
// Dual graph and intersection matrix

struct DualGraph {
    std::vector<std::pair<int, int>> vertices; // (component id, self-intersection)
    std::vector<std::pair<int, int>> edges;    // component id pairs, i < j
    std::vector<std::vector<BigInt>> matrix;   // intersection matrix
    BigInt det = 0;
};

inline BigInt det_bareiss(std::vector<std::vector<BigInt>> m) {
    std::size_t n = m.size();
    if (n == 0) return 1;
    BigInt prev = 1;
    int sign = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (m[k][k] == 0) {
            std::size_t swap_row = k + 1;
            while (swap_row < n && m[swap_row][k] == 0) ++swap_row;
            if (swap_row == n) return 0;
            std::swap(m[k], m[swap_row]);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j)
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
        prev = m[k][k];
    }
    return sign * m[n - 1][n - 1];
}

inline DualGraph dual_graph(const ResolutionTree& tree) {
    DualGraph g;
    std::size_t n = tree.components.size();
    for (const auto& c : tree.components) g.vertices.push_back({c.id, c.self_intersection});
    for (const auto& e : tree.adjacency) g.edges.push_back(e);
    g.matrix.assign(n, std::vector<BigInt>(n, 0));
    for (std::size_t i = 0; i < n; ++i)
        g.matrix[i][i] = tree.components[i].self_intersection;
    for (const auto& [i, j] : tree.adjacency) {
        g.matrix[(std::size_t)i - 1][(std::size_t)j - 1] = 1;
        g.matrix[(std::size_t)j - 1][(std::size_t)i - 1] = 1;
    }
    g.det = det_bareiss(g.matrix);
    return g;
}

// -------------------------------------------------------------------------
// Chart gluing check: the two charts of a node describe the same object on
// the overlap (x, t) = (s y, 1/s).

namespace detail {

// p(s*y, 1/s) * s^clear, as a polynomial.
inline BiPoly glue_substitute(const BiPoly& p, int clear) {
    const FieldPtr& f = p.field();
    BiPoly out(f);
    for (const auto& [k, c] : p.terms()) {
        int se = k.first - k.second + clear; // (s y)^i * s^{-j} * s^clear
        int ye = k.first;
        if (se < 0) throw internal_error("glue_substitute: clearing power too small");
        out.add_term(se, ye, c);
    }
    return out;
}

} // namespace detail

// Exact proportionality of the two chart payloads on the overlap.
inline bool verify_gluing(const ResolutionTree& tree, int node) {
    const TreeNode& n = tree.nodes.at((std::size_t)node - 1);
    if (std::holds_alternative<BiPoly>(n.x_chart.payload)) {
        BiPoly gx = std::get<BiPoly>(n.x_chart.payload);
        BiPoly gy = std::get<BiPoly>(n.y_chart.payload);
        if (gx.is_zero() || gy.is_zero()) return gx.is_zero() == gy.is_zero();
        auto [a, b] = BiPoly::aligned(gx, gy);
        BiPoly glued = detail::glue_substitute(a, a.deg_y());
        // glued == monomial * unit * b: strip contents and compare cross-wise.
        BiPoly gs = glued.shift_x(-glued.x_order()).shift_y(-glued.y_order());
        BiPoly bs = b.shift_x(-b.x_order()).shift_y(-b.y_order());
        auto lead = [](const BiPoly& p) {
            return p.terms().begin()->second;
        };
        return gs * lead(bs) == bs * lead(gs);
    }
    const OneForm& wx = std::get<OneForm>(n.x_chart.payload);
    const OneForm& wy = std::get<OneForm>(n.y_chart.payload);
    // Pull the x-chart form through (s, y) -> (x = s y, t = 1/s):
    //   dx = y ds + s dy, dt = -s^-2 ds.
    auto [A, B] = BiPoly::aligned(wx.a(), wx.b());
    const FieldPtr& f = A.field();
    int clear = std::max(A.deg_y(), B.deg_y()) + 2;
    BiPoly As = detail::glue_substitute(A, clear);
    BiPoly Bs = detail::glue_substitute(B, clear);
    // ds coefficient y*A - s^-2*B and dy coefficient s*A, both times s^(clear+2).
    BiPoly P = BiPoly::var_y(f) * As * BiPoly::monomial(f, 2, 0, FieldElement::one(f)) - Bs;
    BiPoly Q = BiPoly::var_x(f) * As * BiPoly::monomial(f, 2, 0, FieldElement::one(f));
    BiPoly C = wy.a().promoted(f);
    BiPoly D = wy.b().promoted(f);
    return P * D == Q * C;
}

// Recomposing the chart substitutions reproduces the stored total map.
inline bool verify_chart_composition(const Chart& chart) {
    const FieldPtr& f = chart.map_x().field();
    auto [mx, my] = chart.recompose(f);
    return mx == chart.map_x() && my == chart.map_y();
}

} // namespace folia
