#include "doctest.h"
#include "lowtwist/descent.hpp"
#include "lowtwist/search.hpp"

using namespace lowtwist;
using namespace lowtwist::curve;
using namespace lowtwist::descent;

namespace {

const CurveParams kCongruent = make_params(-1, 0);

}

TEST_CASE("decompose_general: worked examples") {
    Twist t5 = make_twist(kCongruent, 5);
    auto g = decompose_general(t5, make_point(t5, -20, 6, 25));
    CHECK(g.d0 == 1);
    CHECK(g.d1 == 5);
    CHECK(g.b1 == 1);
    CHECK(g.x1 == -4);
    CHECK(g.y == 6);
    // 1 * 36 = (-4)^3 - (-4) * 25
    CHECK(g.d0 * g.y * g.y == g.x1 * g.x1 * g.x1 - g.x1 * g.d1 * g.d1);

    // d = 1, z = 1 forces d1 = b1 = 1
    Twist t1 = make_twist(make_params(2, 3), 1);
    auto g1 = decompose_general(t1, make_point(t1, 3, 6, 1));
    CHECK(g1.d0 == 1);
    CHECK(g1.d1 == 1);
    CHECK(g1.b1 == 1);
    CHECK(g1.x1 == 3);
    CHECK(g1.y == 6);

    // z = d^2 exactly gives b1 = 1: family witness on d = 6
    Twist t6 = make_twist(kCongruent, 6);
    auto g6 = decompose_general(t6, make_point(t6, 2, 1, 1));
    CHECK(g6.b1 == 1);
    // and the d = 5 point (10:3:8): z = 8 = 1 * 2^3, d1 = 1, b1 = 2
    auto g58 = decompose_general(t5, make_point(t5, 10, 3, 8));
    CHECK(g58.d1 == 1);
    CHECK(g58.b1 == 2);
    CHECK(g58.x1 == 5);
    CHECK(g58.d0 == 5);
}

TEST_CASE("decompose_general: domain errors") {
    Twist t5 = make_twist(kCongruent, 5);
    CHECK_THROWS_AS(decompose_general(t5, make_point(t5, 1, 0, 1)), DomainError);
    CHECK_THROWS_AS(decompose_general(t5, infinity_point()), DomainError);
    CHECK_THROWS_AS(decompose_general(t5, make_point(t5, -20, -6, 25)), DomainError);
}

TEST_CASE("compose_general: examples and validation") {
    auto [t, p] = compose_general(kCongruent, {1, 5, 1, -4, 6});
    CHECK(t.d == 5);
    CHECK(p == make_point(t, -20, 6, 25));

    auto [t1, p1] = compose_general(make_params(2, 3), {1, 1, 1, 3, 6});
    CHECK(t1.d == 1);
    CHECK(p1.x == 3);
    CHECK(p1.z == 1);

    // d0 d1 = 4 not squarefree
    CHECK_THROWS_AS(compose_general(kCongruent, {2, 2, 1, 1, 1}), ValidationError);
    // equation failure
    CHECK_THROWS_AS(compose_general(kCongruent, {1, 5, 1, -4, 7}), ValidationError);
    // gcd failure
    CHECK_THROWS_AS(compose_general(kCongruent, {1, 5, 1, 10, 6}), ValidationError);
}

TEST_CASE("decompose_congruent: worked example d = 5") {
    Twist t5 = make_twist(kCongruent, 5);
    auto c = decompose_congruent(t5, make_point(t5, -20, 6, 25));
    CHECK(c.nu == -1);
    CHECK(c.d1 == 5);
    CHECK(c.d2 == 1);
    CHECK(c.d3 == 1);
    CHECK(c.d4 == 1);
    CHECK(c.b1 == 1);
    CHECK(c.b2 == 2);
    CHECK(c.b3 == 3);
    CHECK(c.b4 == 1);
    CHECK(c.shared2 == 1);
    // exact substitution into the system
    CHECK(c.d2 * c.b2 * c.b2 - c.nu * c.d1 * c.b1 * c.b1 == c.d3 * c.b3 * c.b3);  // 4 + 5 = 9
    CHECK(c.nu * c.d2 * c.b2 * c.b2 + c.d1 * c.b1 * c.b1 == c.d4 * c.b4 * c.b4);  // -4 + 5 = 1
    CHECK(c.d1 * c.d2 * c.d3 * c.d4 == 5);
}

TEST_CASE("decompose_congruent: sign and torsion paths") {
    Twist t6 = make_twist(kCongruent, 6);
    auto c = decompose_congruent(t6, make_point(t6, 2, 1, 1));
    CHECK(c.nu == 1);  // x > 0 forces nu = +1
    CHECK(c.d1 == 1);
    CHECK(c.d2 == 2);
    CHECK(c.d3 == 1);
    CHECK(c.d4 == 3);
    CHECK(c.shared2 == 1);

    Twist t5 = make_twist(kCongruent, 5);
    CHECK_THROWS_AS(decompose_congruent(t5, make_point(t5, 0, 0, 1)), DomainError);
    CHECK_THROWS_AS(decompose_congruent(t5, make_point(t5, 1, 0, 1)), DomainError);

    Twist t23 = make_twist(make_params(2, 3), 5);
    CHECK_THROWS_AS(decompose_congruent(t23, make_point(t23, 42, 45, 8)), DomainError);
}

TEST_CASE("decompose_congruent: 2-adic overlap on (7:4:1), d = 21") {
    // x1 = 7, d1 b1^2 = 1: the factors 6 and 8 have squarefree parts 6 and 2,
    // both even, so no tuple with d = d1 d2 d3 d4 exists; shared2 = 2 records
    // the overlap and the data still satisfies both system equations.
    Twist t21 = make_twist(kCongruent, 21);
    auto c = decompose_congruent(t21, make_point(t21, 7, 4, 1));
    CHECK(c.nu == 1);
    CHECK(c.d1 == 1);
    CHECK(c.d2 == 7);
    CHECK(c.d3 == 6);
    CHECK(c.d4 == 2);
    CHECK(c.b1 == 1);
    CHECK(c.b2 == 1);
    CHECK(c.b3 == 1);
    CHECK(c.b4 == 2);
    CHECK(c.shared2 == 2);
    CHECK(c.d1 * c.d2 * c.d3 * c.d4 == 4 * 21);
    CHECK(c.shared2 * c.b2 * c.b3 * c.b4 == 4);

    auto [t, p] = compose_congruent(c);
    CHECK(t.d == 21);
    CHECK(p == make_point(t21, 7, 4, 1));
}

TEST_CASE("compose_congruent: examples and validation") {
    auto [t, p] = compose_congruent({-1, 5, 1, 1, 1, 1, 2, 3, 1, 1});
    CHECK(t.d == 5);
    CHECK(p.x == -20);
    CHECK(p.y == 6);
    CHECK(p.z == 25);

    // (+1, (1,2,1,3), (1,1,1,1)): 2 - 1 = 1, 2 + 1 = 3 -> d = 6, point (2:1:1)
    auto [t6, p6] = compose_congruent({1, 1, 2, 1, 3, 1, 1, 1, 1, 1});
    CHECK(t6.d == 6);
    CHECK(p6 == make_point(t6, 2, 1, 1));

    // gcd(d1 b1, d2 b2) violated
    CHECK_THROWS_AS(compose_congruent({1, 2, 2, 1, 1, 1, 1, 1, 1, 1}), ValidationError);
    // wrong system equation
    CHECK_THROWS_AS(compose_congruent({1, 1, 2, 1, 3, 1, 1, 2, 1, 1}), ValidationError);
    // shared2 = 2 demands even d3, d4
    CHECK_THROWS_AS(compose_congruent({-1, 5, 1, 1, 1, 1, 2, 3, 1, 2}), ValidationError);
}

TEST_CASE("round trips over an enumerated sample") {
    search::SearchWindow w;
    w.X = 60;
    w.H = 60.0;
    for (const CurveParams& params :
         {kCongruent, make_params(2, 3), make_params(0, -2)}) {
        auto res = search::enumerate_low_points(params, w);
        CHECK(res.complete);
        CHECK(!res.records.empty());
        for (const auto& rec : res.records) {
            Twist t = make_twist(params, rec.d);
            auto g = decompose_general(t, rec.point);
            CHECK(g == rec.descent);
            auto [t2, p2] = compose_general(params, g);
            CHECK(t2.d == rec.d);
            CHECK(p2 == rec.point);
            if (params == kCongruent && rec.point.x != 0) {
                auto c = decompose_congruent(t, rec.point);
                auto [t3, p3] = compose_congruent(c);
                CHECK(t3.d == rec.d);
                CHECK(p3 == rec.point);
            }
        }
    }
}

TEST_CASE("uniqueness_audit: small bounds") {
    auto rep = uniqueness_audit(kCongruent, 30);
    CHECK(rep.points_checked > 0);
    CHECK(rep.violations.empty());
    CHECK(rep.congruent_checked > 0);
    CHECK(rep.obstructed_count > 0);  // (7:4:1) on d = 21 is in range

    auto rep1 = uniqueness_audit(kCongruent, 1);  // vacuous pass
    CHECK(rep1.points_checked == 0);
    CHECK(rep1.violations.empty());

    auto rep23 = uniqueness_audit(make_params(2, 3), 50);
    CHECK(rep23.points_checked > 0);
    CHECK(rep23.violations.empty());

    auto j = to_json(rep);
    CHECK(j["bound"] == 30);
    CHECK(j["violations"].empty());
}
