#include "doctest.h"
#include "lowtwist/curve.hpp"

using namespace lowtwist;
using namespace lowtwist::curve;

namespace {

const CurveParams kCongruent = make_params(-1, 0);

}

TEST_CASE("make_twist validation") {
    CHECK_THROWS_AS(make_params(0, 0), ValidationError);  // singular
    CHECK_THROWS_AS(make_twist(kCongruent, 12), ValidationError);
    CHECK_THROWS_AS(make_twist(kCongruent, 0), ValidationError);
    CHECK_NOTHROW(make_twist(kCongruent, 1));
    CHECK_NOTHROW(make_twist(kCongruent, 5));
}

TEST_CASE("make_point: validation and normalization") {
    Twist t5 = make_twist(kCongruent, 5);
    // 5 * 36 * 25 = 4500 = (-20)^3 - (-20) * 625
    TwistPoint p = make_point(t5, -20, 6, 25);
    CHECK(p.x == -20);
    CHECK(p.y == 6);
    CHECK(p.z == 25);

    TwistPoint inf = make_point(t5, 0, 1, 0);
    CHECK(inf.is_infinity());
    CHECK(inf == infinity_point());
    CHECK(make_point(t5, 0, -7, 0) == infinity_point());

    CHECK_THROWS_AS(make_point(t5, 1, 1, 1), ValidationError);
    CHECK_THROWS_AS(make_point(t5, 0, 0, 0), ValidationError);

    // common factors are stripped, z < 0 is flipped
    TwistPoint q = make_point(t5, -40, 12, 50);
    CHECK(q == p);
    TwistPoint r = make_point(t5, 20, -6, -25);
    CHECK(r == p);

    // y >= 0 representative on request
    TwistPoint neg = make_point(t5, -20, -6, 25);
    CHECK(descent_representative(neg) == p);
    CHECK(descent_representative(p) == p);
}

TEST_CASE("to_standard: examples") {
    Twist t5 = make_twist(kCongruent, 5);
    CHECK(to_standard(t5, infinity_point()).at_infinity);

    StandardPoint s = to_standard(t5, make_point(t5, -20, 6, 25));
    CHECK(s.X == mpq_class(-4));
    CHECK(s.Y == mpq_class(6));  // 36 = -64 + 100 on Y^2 = X^3 - 25X

    Twist t1 = make_twist(make_params(2, 3), 1);
    StandardPoint s1 = to_standard(t1, make_point(t1, 3, 6, 1));
    CHECK(s1.X == mpq_class(3));
    CHECK(s1.Y == mpq_class(6));

    // round trip back to the twist model
    CHECK(from_standard(t5, s) == make_point(t5, -20, 6, 25));
}

TEST_CASE("group law: identity, inverses, duplication oracle") {
    Twist t5 = make_twist(kCongruent, 5);
    StandardPoint P = to_standard(t5, make_point(t5, -20, 6, 25));
    StandardPoint O{0, 0, true};

    CHECK(add(t5, P, O) == P);
    CHECK(add(t5, O, P) == P);
    CHECK(add(t5, P, negate(P)).at_infinity);

    // duplication formula oracle: x(2P) = (x^4 - 2ax^2 - 8bx + a^2) / (4(x^3 + ax + b))
    StandardPoint D2 = add(t5, P, P);
    mpq_class a(-25), b(0), x = P.X;
    mpq_class num = x * x * x * x - 2 * a * x * x - 8 * b * x + a * a;
    mpq_class den = 4 * (x * x * x + a * x + b);
    mpq_class expect = num / den;
    CHECK(D2.X == expect);
    CHECK(D2.X == mpq_class(1681, 144));
    // on-curve
    CHECK(D2.Y * D2.Y == D2.X * D2.X * D2.X + a * D2.X + b);

    CHECK(mul(t5, 2, P) == D2);
    CHECK(mul(t5, 1, P) == P);
    CHECK(mul(t5, 0, P).at_infinity);
    CHECK(mul(t5, -1, P) == negate(P));
}

TEST_CASE("group law: associativity on multiples") {
    Twist t5 = make_twist(kCongruent, 5);
    StandardPoint P = to_standard(t5, make_point(t5, -20, 6, 25));
    StandardPoint T = to_standard(t5, make_point(t5, 1, 0, 1));

    for (int i = 1; i <= 3; ++i) {
        for (int j = 1; j <= 3; ++j) {
            StandardPoint A1 = mul(t5, i, P), B1 = mul(t5, j, P);
            CHECK(add(t5, add(t5, A1, B1), T) == add(t5, A1, add(t5, B1, T)));
        }
    }
    // mixed with 2-torsion on both sides
    CHECK(add(t5, T, T).at_infinity);
}

TEST_CASE("is_torsion") {
    Twist t5 = make_twist(kCongruent, 5);
    CHECK(is_torsion(t5, infinity_point()));
    CHECK(is_torsion(t5, make_point(t5, 1, 0, 1)));
    CHECK(is_torsion(t5, make_point(t5, 0, 0, 1)));
    CHECK(is_torsion(t5, make_point(t5, -1, 0, 1)));
    CHECK_FALSE(is_torsion(t5, make_point(t5, -20, 6, 25)));

    // y = 0 points are torsion on every congruent twist
    for (unsigned long d : {1, 2, 3, 6, 7}) {
        Twist t = make_twist(kCongruent, d);
        CHECK(is_torsion(t, make_point(t, 0, 0, 1)));
        CHECK(is_torsion(t, make_point(t, 1, 0, 1)));
        CHECK(is_torsion(t, make_point(t, -1, 0, 1)));
    }
}
