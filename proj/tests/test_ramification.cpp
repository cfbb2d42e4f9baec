#include <doctest.h>

#include "folia/ramification.hpp"

using namespace folia;

namespace {
FieldPtr base() { return NumberField::gaussian_rationals(); }
BiPoly C(int n) { return BiPoly::constant(base(), Rat(n)); }
BiPoly X() { return BiPoly::var_x(base()); }
BiPoly Y() { return BiPoly::var_y(base()); }
} // namespace

TEST_CASE("pullback_ramify: identity at d = 1") {
    OneForm w = OneForm::make(C(-3) * X() * X(), C(2) * Y());
    CHECK(pullback_ramify(w, 1) == w);
}

TEST_CASE("pullback_ramify: cusp at d = 2 is d(y^2 - x^6)") {
    OneForm w = OneForm::make(C(-3) * X() * X(), C(2) * Y());
    OneForm r = pullback_ramify(w, 2);
    CHECK(r.a() == C(-6) * X().pow(5));
    CHECK(r.b() == C(2) * Y());
}

TEST_CASE("pullback_ramify: radial at d = 3 saturates to 3y dx - x dy") {
    OneForm w = OneForm::make(Y(), -X());
    OneForm r = pullback_ramify(w, 3);
    CHECK(r.a() == C(3) * Y());
    CHECK(r.b() == -X());
}

TEST_CASE("pullback composition: d then e defines the same foliation as d*e") {
    OneForm w = OneForm::make(C(-3) * X() * X(), C(2) * Y());
    CHECK(pullback_ramify(pullback_ramify(w, 2), 3)
              .same_foliation(pullback_ramify(w, 6)));
    OneForm v = OneForm::make(Y(), -X());
    CHECK(pullback_ramify(pullback_ramify(v, 2), 2)
              .same_foliation(pullback_ramify(v, 4)));
}

TEST_CASE("ramify_curve: worked examples") {
    BiPoly cusp = Y() * Y() - X().pow(3);
    CHECK(ramify_curve(cusp, 2) == Y() * Y() - X().pow(6));
    BiPoly c32 = Y().pow(3) - X() * X();
    CHECK(ramify_curve(c32, 3) == Y().pow(3) - X().pow(6));
    BiPoly smooth = Y() - X();
    CHECK(ramify_curve(smooth, 1) == smooth);
}

TEST_CASE("embedded resolution of the cusp: satellite center present") {
    CurveResolution cr = embedded_resolution(Y() * Y() - X().pow(3));
    CHECK(cr.blowups == 3);
    CHECK_FALSE(cr.free_only);
    CHECK(cr.tree.nodes[2].kind == CenterKind::Satellite);
}

TEST_CASE("curve_theorem_check: ramified cusp resolves with free centers only") {
    CurveTheoremResult r = curve_theorem_check(Y() * Y() - X().pow(3), 8);
    CHECK(r.d == 2);
    CHECK(r.free_only);
    for (const auto& j : r.ramified_jets) CHECK(j.ram == 1);
}

TEST_CASE("curve_theorem_check: smooth curve needs nothing") {
    CurveTheoremResult r = curve_theorem_check(Y() - X(), 8);
    CHECK(r.d == 1);
    CHECK(r.free_only);
    CHECK(r.tree.nodes.empty());
}

TEST_CASE("curve_theorem_check: y^3 - x^2 with d = 3") {
    CurveTheoremResult r = curve_theorem_check(Y().pow(3) - X() * X(), 8);
    CHECK(r.d == 3);
    CHECK(r.free_only);
    for (const auto& j : r.ramified_jets) CHECK(j.ram == 1);
}

TEST_CASE("curve_theorem_check rejects non-square-free input") {
    CHECK_THROWS_AS(curve_theorem_check((Y() - X()) * (Y() - X()), 8), domain_error);
}

TEST_CASE("find_regular_ramification: saddle needs d = 1") {
    RamificationSearchResult r = find_regular_ramification(OneForm::make(Y(), X()));
    CHECK(r.d == 1);
    CHECK(r.tree.nodes.empty());
}

TEST_CASE("find_regular_ramification: cusp needs d = 2") {
    OneForm w = OneForm::make(C(-3) * X() * X(), C(2) * Y());
    RamificationSearchResult r = find_regular_ramification(w, 6);
    CHECK(r.d == 2);
    CHECK(free_centers_only(r.tree));
    CHECK(fully_reduced(r.tree));
    // d = 1 must genuinely fail (satellite in the plain reduction).
    REQUIRE(!r.attempts.empty());
    CHECK(r.attempts[0].d == 1);
    CHECK_FALSE(r.attempts[0].free_only);
}

TEST_CASE("find_regular_ramification: the 1:2 node already works at d = 1") {
    OneForm w = OneForm::make(C(2) * Y(), -X());
    RamificationSearchResult r = find_regular_ramification(w);
    CHECK(r.d == 1);
    CHECK(free_centers_only(r.tree));
}

TEST_CASE("determinism: re-running the search reproduces an identical tree") {
    OneForm w = OneForm::make(C(-3) * X() * X(), C(2) * Y());
    RamificationSearchResult a = find_regular_ramification(w, 6);
    RamificationSearchResult b = find_regular_ramification(w, 6);
    CHECK(a.d == b.d);
    REQUIRE(a.tree.nodes.size() == b.tree.nodes.size());
    for (std::size_t k = 0; k < a.tree.nodes.size(); ++k) {
        const auto& na = a.tree.nodes[k];
        const auto& nb = b.tree.nodes[k];
        CHECK(na.parent == nb.parent);
        CHECK(na.parent_dir == nb.parent_dir);
        CHECK(na.kind == nb.kind);
        CHECK(na.center.first == nb.center.first);
        CHECK(na.center.second == nb.center.second);
    }
    for (std::size_t k = 0; k < a.tree.components.size(); ++k)
        CHECK(a.tree.components[k].self_intersection ==
              b.tree.components[k].self_intersection);
}

TEST_CASE("curve-foliation coherence: the curve exponent divides the foliation one") {
    struct Item {
        OneForm w;
        BiPoly f;
    };
    std::vector<Item> items = {
        {OneForm::make(Y(), X()), X() * Y()},
        {OneForm::make(C(-3) * X() * X(), C(2) * Y()), Y() * Y() - X().pow(3)},
        {OneForm::make(C(-5) * X().pow(4), C(2) * Y()), Y() * Y() - X().pow(5)},
    };
    for (const auto& item : items) {
        int dw = find_regular_ramification(item.w).d;
        int dc = item.f == X() * Y()
                     ? 1
                     : curve_theorem_check(item.f, 8).d;
        CHECK(dw % dc == 0);
    }
}

TEST_CASE("no_ramification_error reports the best partial attempt") {
    // Forcing d_max = 1 on the cusp must fail with diagnostics.
    OneForm w = OneForm::make(C(-3) * X() * X(), C(2) * Y());
    try {
        find_regular_ramification(w, 1);
        CHECK(false);
    } catch (const no_ramification_error& e) {
        CHECK(e.d_max == 1);
        CHECK(std::string(e.what()).find("best partial") != std::string::npos);
    }
}

TEST_CASE("hamiltonian primitive recovery") {
    BiPoly f = Y() * Y() - X().pow(3);
    OneForm w = OneForm::make(f.derivative_x(), f.derivative_y());
    auto prim = detail::hamiltonian_primitive(w);
    REQUIRE(prim.has_value());
    CHECK(*prim == f);
    CHECK_FALSE(detail::hamiltonian_primitive(OneForm::make(Y(), -X())).has_value());
}
