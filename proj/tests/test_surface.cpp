#include <doctest.h>

#include "folia/foliation.hpp"
#include "folia/surface.hpp"

using namespace folia;

namespace {
FieldPtr base() { return NumberField::gaussian_rationals(); }
BiPoly C(int n) { return BiPoly::constant(base(), Rat(n)); }
BiPoly X() { return BiPoly::var_x(base()); }
BiPoly Y() { return BiPoly::var_y(base()); }
FieldElement fz() { return FieldElement::zero(base()); }

// Cofactor-expansion determinant: the independent oracle for Bareiss.
BigInt det_cofactor(const std::vector<std::vector<BigInt>>& m) {
    std::size_t n = m.size();
    if (n == 0) return 1;
    if (n == 1) return m[0][0];
    BigInt acc = 0;
    for (std::size_t j = 0; j < n; ++j) {
        if (m[0][j] == 0) continue;
        std::vector<std::vector<BigInt>> minor;
        for (std::size_t i = 1; i < n; ++i) {
            std::vector<BigInt> row;
            for (std::size_t k = 0; k < n; ++k)
                if (k != j) row.push_back(m[i][k]);
            minor.push_back(row);
        }
        BigInt term = m[0][j] * det_cofactor(minor);
        acc += (j % 2 == 0) ? term : -term;
    }
    return acc;
}

// A chain of blow-ups of the cusp Hamiltonian, reused by several cases.
ResolutionTree cusp_tree() {
    OneForm w = OneForm::make(C(-3) * X() * X(), C(2) * Y());
    return reduce_singularities(w);
}
} // namespace

TEST_CASE("first blow-up gives one component of self-intersection -1") {
    OneForm w = OneForm::make(Y(), X());
    ResolutionTree t = make_tree(Payload(w));
    t = blow_up_at(t, 0, ChartDir::X, {fz(), fz()});
    REQUIRE(t.components.size() == 1);
    CHECK(t.components[0].self_intersection == -1);
    CHECK(t.nodes[0].kind == CenterKind::Root);
}

TEST_CASE("second blow-up at a free point decrements E1") {
    OneForm w = OneForm::make(Y(), X());
    ResolutionTree t = make_tree(Payload(w));
    t = blow_up_at(t, 0, ChartDir::X, {fz(), fz()});
    // (0, 0) of the x-chart lies on E1 only.
    t = blow_up_at(t, 1, ChartDir::X, {fz(), fz()});
    CHECK(t.components[0].self_intersection == -2);
    CHECK(t.components[1].self_intersection == -1);
    CHECK(t.nodes[1].kind == CenterKind::Free);
}

TEST_CASE("third blow-up at the corner E1 * E2 decrements both") {
    OneForm w = OneForm::make(Y(), X());
    ResolutionTree t = make_tree(Payload(w));
    t = blow_up_at(t, 0, ChartDir::X, {fz(), fz()});
    t = blow_up_at(t, 1, ChartDir::X, {fz(), fz()});
    // The corner E1 * E2 sits at the y-chart origin of node 2.
    t = blow_up_at(t, 2, ChartDir::Y, {fz(), fz()});
    CHECK(t.components[0].self_intersection == -3);
    CHECK(t.components[1].self_intersection == -2);
    CHECK(t.components[2].self_intersection == -1);
    CHECK(t.nodes[2].kind == CenterKind::Satellite);
}

TEST_CASE("classify_center: root, free and satellite") {
    ResolutionTree t = cusp_tree();
    REQUIRE(t.nodes.size() == 3);
    CHECK(classify_center(t, 1) == CenterKind::Root);
    CHECK(classify_center(t, 2) == CenterKind::Free);
    CHECK(classify_center(t, 3) == CenterKind::Satellite);
}

TEST_CASE("a non-root center off the divisor is rejected") {
    OneForm w = OneForm::make(Y(), X());
    ResolutionTree t = make_tree(Payload(w));
    t = blow_up_at(t, 0, ChartDir::X, {fz(), fz()});
    FieldElement one = FieldElement::one(base());
    CHECK_THROWS_AS(blow_up_at(t, 1, ChartDir::X, {one, one}), domain_error);
}

TEST_CASE("dual graph: single blow-up") {
    OneForm w = OneForm::make(Y(), X());
    ResolutionTree t = make_tree(Payload(w));
    t = blow_up_at(t, 0, ChartDir::X, {fz(), fz()});
    DualGraph g = dual_graph(t);
    REQUIRE(g.vertices.size() == 1);
    CHECK(g.vertices[0] == std::pair<int, int>(1, -1));
    CHECK(g.edges.empty());
    CHECK(g.det == -1);
}

TEST_CASE("dual graph: chain of two has determinant +1") {
    OneForm w = OneForm::make(Y(), X());
    ResolutionTree t = make_tree(Payload(w));
    t = blow_up_at(t, 0, ChartDir::X, {fz(), fz()});
    t = blow_up_at(t, 1, ChartDir::X, {fz(), fz()});
    DualGraph g = dual_graph(t);
    REQUIRE(g.vertices.size() == 2);
    CHECK(g.vertices[0].second == -2);
    CHECK(g.vertices[1].second == -1);
    REQUIRE(g.edges.size() == 1);
    CHECK(g.det == 1);
}

TEST_CASE("dual graph: cusp resolution weights and unimodularity") {
    ResolutionTree t = cusp_tree();
    DualGraph g = dual_graph(t);
    REQUIRE(g.vertices.size() == 3);
    CHECK(g.vertices[0].second == -3);
    CHECK(g.vertices[1].second == -2);
    CHECK(g.vertices[2].second == -1);
    CHECK((g.det == 1 || g.det == -1));
    CHECK(g.det == det_cofactor(g.matrix));
    // E3 is adjacent to both earlier components; E1-E2 was separated.
    CHECK(g.edges == std::vector<std::pair<int, int>>{{1, 3}, {2, 3}});
}

TEST_CASE("unimodularity along every stage of a blow-up chain") {
    OneForm w = OneForm::make(Y(), X());
    ResolutionTree t = make_tree(Payload(w));
    t = blow_up_at(t, 0, ChartDir::X, {fz(), fz()});
    for (int step = 0; step < 4; ++step) {
        DualGraph g = dual_graph(t);
        CHECK((g.det == 1 || g.det == -1));
        CHECK(g.det == det_cofactor(g.matrix));
        t = blow_up_at(t, (int)t.nodes.size(), step % 2 ? ChartDir::Y : ChartDir::X,
                       {fz(), fz()});
    }
}

TEST_CASE("chart gluing and substitution-composition on the cusp tree") {
    ResolutionTree t = cusp_tree();
    for (const auto& n : t.nodes) {
        CHECK(verify_gluing(t, n.id));
        CHECK(verify_chart_composition(n.x_chart.chart));
        CHECK(verify_chart_composition(n.y_chart.chart));
    }
}

TEST_CASE("chart gluing for curve payloads") {
    BiPoly f = Y() * Y() - X().pow(3);
    ResolutionTree t = make_tree(Payload(f));
    t = blow_up_at(t, 0, ChartDir::X, {fz(), fz()});
    CHECK(verify_gluing(t, 1));
    t = blow_up_at(t, 1, ChartDir::X, {fz(), fz()});
    CHECK(verify_gluing(t, 2));
}

TEST_CASE("blowing the same point twice is rejected") {
    OneForm w = OneForm::make(Y(), X());
    ResolutionTree t = make_tree(Payload(w));
    t = blow_up_at(t, 0, ChartDir::X, {fz(), fz()});
    CHECK_THROWS_AS(blow_up_at(t, 0, ChartDir::X, {fz(), fz()}), domain_error);
}

TEST_CASE("ramified root chart composes the substitution x -> x^d") {
    OneForm w = OneForm::make(C(-3) * X() * X(), C(2) * Y());
    ResolutionTree t = make_tree(Payload(w), 2);
    CHECK(t.root.chart.map_x() == X() * X());
    CHECK(t.root.chart.map_y() == Y());
    CHECK(verify_chart_composition(t.root.chart));
}

TEST_CASE("x-chart and y-chart singular scans identify overlap points once") {
    // One blow-up of the saddle: the two singular points are distinct chart
    // origins; the full y-chart line doubles the x-chart line except s=0.
    OneForm w = OneForm::make(Y(), X());
    ResolutionTree t = make_tree(Payload(w));
    t = blow_up_at(t, 0, ChartDir::X, {fz(), fz()});
    auto recs = singular_locus_on_divisor(t, 1);
    REQUIRE(recs.size() == 2);
    CHECK(recs[0].dir == ChartDir::X);
    CHECK(recs[1].dir == ChartDir::Y);
    // The x-chart root at t=0 and the y-chart origin are genuinely different
    // points of the exceptional line (t=0 vs t=infinity).
    CHECK(recs[0].point.second.is_zero());
}
