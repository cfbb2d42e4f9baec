#include <doctest.h>

#include "folia/newton.hpp"
#include "folia/ramification.hpp"

using namespace folia;

namespace {
FieldPtr base() { return NumberField::gaussian_rationals(); }
BiPoly C(int n) { return BiPoly::constant(base(), Rat(n)); }
BiPoly X() { return BiPoly::var_x(base()); }
BiPoly Y() { return BiPoly::var_y(base()); }

// Exact substitution residual of a jet into f.
int residual_order(const BiPoly& f, const PuiseuxJet& jet, int window) {
    FieldPtr fl = jet.series.field();
    PowerSeries xt = PowerSeries::identity(fl, window).pow_series((unsigned)jet.ram);
    PowerSeries ys(fl, window);
    for (int k = 0; k < jet.series.truncation() && k < window; ++k)
        ys.set(k, jet.series.at(k));
    PowerSeries r = bipoly_eval_series(f, xt, ys);
    auto o = r.ord();
    return o ? *o : window;
}
} // namespace

TEST_CASE("newton_polygon: two-term cusp support") {
    auto p = newton_polygon(Y() * Y() - X().pow(3));
    REQUIRE(p.vertices.size() == 2);
    CHECK(p.vertices[0] == std::pair<int, int>(0, 2));
    CHECK(p.vertices[1] == std::pair<int, int>(3, 0));
    REQUIRE(p.edges.size() == 1);
    CHECK(p.edges[0].inclination() == Rat(3, 2));
}

TEST_CASE("newton_polygon: x + y has the unit edge") {
    // The support {(1,0),(0,1)} gives one edge of inclination 1.
    auto p = newton_polygon(X() + Y());
    REQUIRE(p.edges.size() == 1);
    CHECK(p.edges[0].inclination() == Rat(1));
    CHECK(p.vertices[0] == std::pair<int, int>(0, 1));
    CHECK(p.vertices[1] == std::pair<int, int>(1, 0));
}

TEST_CASE("newton_polygon: a single monomial has no edges") {
    // xy supports only (1,1): the polygon degenerates to one vertex.
    auto p = newton_polygon(X() * Y());
    CHECK(p.edges.empty());
    REQUIRE(p.vertices.size() == 1);
    CHECK(p.vertices[0] == std::pair<int, int>(1, 1));
}

TEST_CASE("newton_polygon: y^2 - x^6") {
    auto p = newton_polygon(Y() * Y() - X().pow(6));
    REQUIRE(p.edges.size() == 1);
    CHECK(p.edges[0].inclination() == Rat(3));
    CHECK(p.vertices[0] == std::pair<int, int>(0, 2));
    CHECK(p.vertices[1] == std::pair<int, int>(6, 0));
}

TEST_CASE("newton_polygon: edges come sorted by increasing inclination") {
    // (y - x)(y^2 - x^3) has the slope-1 edge followed by the 3/2 edge.
    auto p = newton_polygon((Y() - X()) * (Y() * Y() - X().pow(3)));
    REQUIRE(p.edges.size() == 2);
    CHECK(p.edges[0].inclination() == Rat(1));
    CHECK(p.edges[1].inclination() == Rat(3, 2));
    for (std::size_t k = 1; k < p.edges.size(); ++k)
        CHECK(p.edges[k - 1].inclination() < p.edges[k].inclination());
    // vertices are the extreme points of the lower-left hull
    REQUIRE(p.vertices.size() == 3);
    CHECK(p.vertices.front() == std::pair<int, int>(0, 3));
    CHECK(p.vertices.back() == std::pair<int, int>(4, 0));
}

TEST_CASE("ramification map type") {
    RamificationMap rho(3);
    CHECK_FALSE(rho.is_identity());
    CHECK(rho.composed_with(RamificationMap(2)).exponent == 6);
    auto [sx, sy] = rho.substitution(base());
    CHECK(sx == X().pow(3));
    CHECK(sy == Y());
    CHECK_THROWS_AS(RamificationMap(0), domain_error);
}

TEST_CASE("newton_puiseux: cusp y^2 - x^3 has one class with d = 2, y = t^3") {
    auto exp = newton_puiseux_expand(Y() * Y() - X().pow(3), 5);
    REQUIRE(exp.jets.size() == 1);
    const auto& j = exp.jets[0];
    CHECK(j.ram == 2);
    CHECK(j.exact);
    CHECK(j.series.at(3) == FieldElement::one(j.series.field()));
    for (int k = 0; k < j.series.truncation(); ++k)
        if (k != 3) CHECK(j.series.at(k).is_zero());
}

TEST_CASE("newton_puiseux: y^2 - 3xy + 2x^2 splits into two smooth jets") {
    auto exp = newton_puiseux_expand(Y() * Y() - C(3) * X() * Y() + C(2) * X() * X(), 3);
    REQUIRE(exp.jets.size() == 2);
    for (const auto& j : exp.jets) CHECK(j.ram == 1);
    std::vector<Rat> slopes;
    for (const auto& j : exp.jets) slopes.push_back(*j.series.at(1).as_rational());
    std::sort(slopes.begin(), slopes.end());
    CHECK(slopes[0] == Rat(1));
    CHECK(slopes[1] == Rat(2));
}

TEST_CASE("newton_puiseux: y^3 - x^2 gives d = 3, y = t^2") {
    auto exp = newton_puiseux_expand(Y().pow(3) - X() * X(), 5);
    REQUIRE(exp.jets.size() == 1);
    CHECK(exp.jets[0].ram == 3);
    CHECK(exp.jets[0].series.at(2) == FieldElement::one(exp.jets[0].series.field()));
}

TEST_CASE("newton_puiseux: jets satisfy f to the guaranteed order") {
    std::vector<BiPoly> fs = {
        Y() * Y() - X().pow(3),
        (Y() * Y() - X().pow(3)) * (Y() - X()),
        Y().pow(3) - X() * X(),
        Y() * Y() - X().pow(5),
        Y().pow(3) - X().pow(6),
    };
    for (const auto& f : fs) {
        auto exp = newton_puiseux_expand(f, 8);
        CHECK(!exp.jets.empty());
        for (const auto& j : exp.jets) {
            int window = j.guaranteed_t_order + 4;
            int got = residual_order(f, j, window);
            CHECK(got >= std::min(j.guaranteed_t_order, 8 * j.ram));
        }
    }
}

TEST_CASE("newton_puiseux: branch count matches the y-degree on y-general input") {
    // (y^2 - x^3)(y - x): y-degree 3 = 2 (cusp class) + 1 (smooth).
    auto f = (Y() * Y() - X().pow(3)) * (Y() - X());
    auto exp = newton_puiseux_expand(f, 6);
    int total = 0;
    for (const auto& j : exp.jets) total += j.ram;
    CHECK(total == f.deg_y());
    CHECK_FALSE(exp.vertical_branch);
}

TEST_CASE("newton_puiseux: vertical branch is peeled and reported") {
    auto exp = newton_puiseux_expand(X() * Y(), 4);
    CHECK(exp.vertical_branch);
    REQUIRE(exp.jets.size() == 1);
    CHECK(exp.jets[0].ram == 1);
    CHECK(exp.jets[0].series.is_zero());
}

TEST_CASE("ramification_exponent: lcm of branch indices") {
    auto cusp = newton_puiseux_expand(Y() * Y() - X().pow(3), 4).jets;
    CHECK(ramification_exponent(cusp) == 2);
    auto two_smooth =
        newton_puiseux_expand(Y() * Y() - C(3) * X() * Y() + C(2) * X() * X(), 4).jets;
    CHECK(ramification_exponent(two_smooth) == 1);
    std::vector<PuiseuxJet> mixed = {cusp[0],
                                     newton_puiseux_expand(Y().pow(3) - X() * X(), 4).jets[0]};
    CHECK(ramification_exponent(mixed) == 6);
}

TEST_CASE("after ramify_curve with the branch lcm, re-expansion is unramified") {
    std::vector<BiPoly> fs = {
        Y() * Y() - X().pow(3),
        Y().pow(3) - X() * X(),
        (Y() * Y() - X().pow(3)) * (Y() - X()),
        Y() * Y() - X().pow(5),
    };
    for (const auto& f : fs) {
        int d = ramification_exponent(newton_puiseux_expand(f, 8).jets);
        auto again = newton_puiseux_expand(ramify_curve(f, d), 8);
        for (const auto& j : again.jets) CHECK(j.ram == 1);
    }
}
