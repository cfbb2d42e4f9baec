#include <doctest.h>

#include "folia/bipoly.hpp"
#include "folia/roots.hpp"
#include "folia/series.hpp"

#include <random>

using namespace folia;

namespace {

FieldPtr base() { return NumberField::gaussian_rationals(); }

FieldElement fe(const FieldPtr& f, int n, int d = 1) {
    return FieldElement::from_rat(f, Rat(n, d));
}

// Tower Q(i)[sqrt 2][sqrt -3] used by the randomized drills.
FieldPtr deep_tower() {
    auto f0 = base();
    auto a1 = adjoin_quadratic_root(f0, FieldElement::zero(f0), fe(f0, -2));
    auto a2 = adjoin_quadratic_root(a1.field, FieldElement::zero(a1.field),
                                    fe(a1.field, 3));
    return a2.field;
}

} // namespace

TEST_CASE("gaussian rational arithmetic and canonical form") {
    Gaussian a(Rat(1, 2), Rat(-3, 4));
    Gaussian b(Rat(2), Rat(1));
    CHECK(a + b == Gaussian(Rat(5, 2), Rat(1, 4)));
    CHECK(a * a.inverse() == Gaussian(Rat(1)));
    CHECK((a * b) * b.inverse() == a);
    CHECK(Gaussian::unit_i() * Gaussian::unit_i() == Gaussian(Rat(-1)));
}

TEST_CASE("gaussian square roots") {
    // (1+i)^2 = 2i
    auto r = gaussian_sqrt(Gaussian(Rat(0), Rat(2)));
    REQUIRE(r.has_value());
    CHECK(*r * *r == Gaussian(Rat(0), Rat(2)));
    CHECK(gaussian_sqrt(Gaussian(Rat(-4))).has_value()); // 2i
    CHECK_FALSE(gaussian_sqrt(Gaussian(Rat(2))).has_value());
    CHECK_FALSE(gaussian_sqrt(Gaussian(Rat(1), Rat(1))).has_value());
}

TEST_CASE("adjoin_root: defining extension over the rationals") {
    auto f = base();
    // t^2 + 1 already has the root i in Q(i).
    auto r = adjoin_root(f, uni_to_bipoly({fe(f, 1), fe(f, 0), fe(f, 1)}, f));
    CHECK_FALSE(r.extended);
    CHECK(r.root * r.root == fe(f, -1));
}

TEST_CASE("adjoin_root: t^2 - 2 extends, sqrt 2 becomes available") {
    auto f = base();
    auto r = adjoin_root(f, uni_to_bipoly({fe(f, -2), fe(f, 0), fe(f, 1)}, f));
    CHECK(r.extended);
    CHECK(r.field->levels() == 1);
    CHECK(r.root * r.root == fe(r.field, 2));
}

TEST_CASE("adjoin_root: t^2 - 4 is reducible, root stays in the field") {
    auto f = base();
    auto r = adjoin_root(f, uni_to_bipoly({fe(f, -4), fe(f, 0), fe(f, 1)}, f));
    CHECK_FALSE(r.extended);
    CHECK((r.root == fe(f, 2) || r.root == fe(f, -2)));
}

TEST_CASE("tower depth is capped at two quadratic extensions") {
    auto f = deep_tower();
    CHECK(f->levels() == 2);
    CHECK(f->dim() == 4);
    CHECK_THROWS_AS(adjoin_quadratic_root(f, FieldElement::zero(f), fe(f, -5)),
                    tower_depth_error);
    // ... but a reducible quadratic is still fine: t^2 - 2 has a root there.
    auto r = adjoin_quadratic_root(f, FieldElement::zero(f), fe(f, -2));
    CHECK_FALSE(r.extended);
    CHECK(r.root * r.root == fe(f, 2));
}

TEST_CASE("field arithmetic: (a*b)*a^-1 == b for 1000 randomized elements") {
    auto f = deep_tower();
    std::mt19937 rng(20240811);
    std::uniform_int_distribution<int> num(-9, 9), den(1, 5);
    auto random_element = [&]() {
        GaussVec v(f->dim());
        for (auto& g : v) g = Gaussian(Rat(num(rng), den(rng)), Rat(num(rng), den(rng)));
        return FieldElement(f, v);
    };
    int done = 0;
    while (done < 1000) {
        FieldElement a = random_element(), b = random_element();
        if (a.is_zero()) continue;
        CHECK((a * b) * a.inverse() == b);
        ++done;
    }
}

TEST_CASE("square detection in towers") {
    auto f = deep_tower();
    // (1 + sqrt2)^2 = 3 + 2 sqrt2
    FieldElement s2 = FieldElement::generator(f, 0);
    FieldElement x = fe(f, 1) + s2;
    auto r = (x * x).sqrt();
    REQUIRE(r.has_value());
    CHECK(*r * *r == x * x);
    CHECK(fe(f, 8).sqrt().has_value());        // 2 sqrt2
    CHECK_FALSE(fe(f, 5).sqrt().has_value());  // sqrt5 not in Q(i, sqrt2, sqrt-3)
    CHECK(fe(f, -3).sqrt().has_value());       // the second generator
}

TEST_CASE("univariate_roots: basic root patterns") {
    auto f = base();
    SUBCASE("t^2 - 1") {
        auto r = univariate_roots(UniPoly{fe(f, -1), fe(f, 0), fe(f, 1)}, f);
        REQUIRE(r.roots.size() == 2);
        CHECK(r.roots[0].first == fe(f, -1));
        CHECK(r.roots[1].first == fe(f, 1));
        CHECK(r.roots[0].second == 1);
        CHECK_FALSE(r.unsupported);
    }
    SUBCASE("t^2: double root at zero") {
        auto r = univariate_roots(UniPoly{fe(f, 0), fe(f, 0), fe(f, 1)}, f);
        REQUIRE(r.roots.size() == 1);
        CHECK(r.roots[0].first.is_zero());
        CHECK(r.roots[0].second == 2);
    }
    SUBCASE("t^3 - 2: unsupported extension degree, no roots") {
        auto r = univariate_roots(UniPoly{fe(f, -2), fe(f, 0), fe(f, 0), fe(f, 1)}, f);
        CHECK(r.unsupported);
        CHECK(r.roots.empty());
        CHECK(r.unresolved.size() == 1);
    }
}

TEST_CASE("univariate_roots: substitution is exactly zero and factors divide") {
    auto f = base();
    // (t-1)^2 (t+3) (t^2 - 2) expanded
    UniPoly p{fe(f, 1)};
    auto mul_lin = [&](const Rat& c) {
        p = uni_mul(p, UniPoly{FieldElement::from_rat(f, c), fe(f, 1)});
    };
    mul_lin(Rat(-1));
    mul_lin(Rat(-1));
    mul_lin(Rat(3));
    p = uni_mul(p, UniPoly{fe(f, -2), fe(f, 0), fe(f, 1)});
    auto r = univariate_roots(p, f);
    CHECK_FALSE(r.unsupported);
    int total = 0;
    UniPoly prod{FieldElement::one(r.field)};
    for (auto& [root, mult] : r.roots) {
        CHECK(uni_eval(uni_promote(p, r.field), root).is_zero());
        total += mult;
        for (int k = 0; k < mult; ++k)
            prod = uni_mul(prod, UniPoly{-root, FieldElement::one(r.field)});
    }
    CHECK(total == uni_deg(p)); // 2 + 1 + 2 = 5
    auto [q, rem] = uni_divmod(uni_promote(p, r.field), prod);
    CHECK(uni_is_zero(rem));
}

TEST_CASE("bipoly degree, order and the zero-order sentinel") {
    auto f = base();
    BiPoly z(f);
    CHECK_FALSE(z.order().has_value());
    CHECK_FALSE(z.degree().has_value());
    auto x = BiPoly::var_x(f), y = BiPoly::var_y(f);
    BiPoly p = x * x + y * y * y;
    CHECK(p.order() == 2);
    CHECK(p.degree() == 3);
}

TEST_CASE("poly_translate: worked examples") {
    auto f = base();
    auto x = BiPoly::var_x(f), y = BiPoly::var_y(f);
    SUBCASE("x^2 by (1,0)") {
        BiPoly r = poly_translate(x * x, fe(f, 1), fe(f, 0));
        CHECK(r == x * x + fe(f, 2) * x + BiPoly::constant(f, Rat(1)));
    }
    SUBCASE("identity translation") {
        BiPoly p = x * y * y - fe(f, 7) * x;
        CHECK(poly_translate(p, fe(f, 0), fe(f, 0)) == p);
    }
    SUBCASE("xy by (1,1)") {
        BiPoly r = poly_translate(x * y, fe(f, 1), fe(f, 1));
        CHECK(r == x * y + x + y + BiPoly::constant(f, Rat(1)));
    }
}

TEST_CASE("poly_translate round trip is exact") {
    auto f = base();
    auto x = BiPoly::var_x(f), y = BiPoly::var_y(f);
    std::mt19937 rng(7);
    std::uniform_int_distribution<int> c(-5, 5);
    std::uniform_int_distribution<int> e(0, 3);
    for (int trial = 0; trial < 25; ++trial) {
        BiPoly p(f);
        for (int k = 0; k < 6; ++k) p.add_term(e(rng), e(rng), fe(f, c(rng)));
        FieldElement cx = fe(f, c(rng), 3), cy = fe(f, c(rng), 2);
        CHECK(poly_translate(poly_translate(p, cx, cy), -cx, -cy) == p);
    }
}

TEST_CASE("exact division and gcd") {
    auto f = base();
    auto x = BiPoly::var_x(f), y = BiPoly::var_y(f);
    BiPoly a = (x + y) * (x - y) * (x * x + y);
    BiPoly b = (x + y) * (x * x + y);
    BiPoly g = bipoly_gcd(a, b);
    auto q = exact_divide(a, g);
    REQUIRE(q.has_value());
    CHECK(*q * g == a);
    CHECK(divides(b, a * b));
    CHECK_FALSE(exact_divide(x * x + y, x + fe(f, 1) * y).has_value());
    CHECK(squarefree_part((x + y) * (x + y) * (y - x)) == (x + y) * (y - x));
    CHECK(is_squarefree((x + y) * (y - x)));
    CHECK_FALSE(is_squarefree((x + y) * (x + y)));
}

TEST_CASE("series truncation propagates as the minimum of the operands") {
    auto f = base();
    PowerSeries a(f, 8), b(f, 5);
    a.set(1, fe(f, 1));
    b.set(0, fe(f, 1));
    CHECK((a + b).truncation() == 5);
    CHECK((a * b).truncation() == 5);
    CHECK((a - b).truncation() == 5);
}

TEST_CASE("series inverse, composition and reversion are exact") {
    auto f = base();
    PowerSeries t = PowerSeries::identity(f, 10);
    PowerSeries one = PowerSeries::constant(f, fe(f, 1), 10);
    PowerSeries geo = (one - t).inverse();
    for (int k = 0; k < 10; ++k) CHECK(geo.at(k) == fe(f, 1));
    PowerSeries w = t + t * t * fe(f, -1); // t - t^2
    PowerSeries phi = w.reversion();
    PowerSeries check = w.compose(phi);
    CHECK(check.at(1) == fe(f, 1));
    for (int k = 2; k < 10; ++k) CHECK(check.at(k).is_zero());
    // square root of 1 + t
    PowerSeries s = (one + t).kth_root_with(fe(f, 1), 2);
    CHECK(s * s == (one + t));
}

TEST_CASE("field element ordering is a strict total order on samples") {
    auto f = deep_tower();
    std::vector<FieldElement> xs{fe(f, 0), fe(f, 1), fe(f, -1),
                                 FieldElement::generator(f, 0),
                                 FieldElement::generator(f, 1),
                                 FieldElement::unit_i(f)};
    for (const auto& a : xs)
        for (const auto& b : xs) {
            bool lt = FieldElement::total_less(a, b);
            bool gt = FieldElement::total_less(b, a);
            if (a == b) {
                CHECK_FALSE(lt);
                CHECK_FALSE(gt);
            } else {
                CHECK(lt != gt);
            }
        }
}

TEST_CASE("minimal polynomial over Q") {
    auto f = deep_tower();
    FieldElement s2 = FieldElement::generator(f, 0);
    auto mp = s2.minpoly_over_q();
    REQUIRE(mp.size() == 3);
    CHECK(mp[0] == Rat(-2));
    CHECK(mp[1] == Rat(0));
    CHECK(mp[2] == Rat(1));
    auto mpi = FieldElement::unit_i(f).minpoly_over_q();
    REQUIRE(mpi.size() == 3);
    CHECK(mpi[0] == Rat(1));
}
