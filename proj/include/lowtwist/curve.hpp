#ifndef LOWTWIST_CURVE_HPP
#define LOWTWIST_CURVE_HPP

#include <gmpxx.h>

#include "lowtwist/errors.hpp"

namespace lowtwist::curve {

// y^2 = x^3 + A x + B with nonzero discriminant.
struct CurveParams {
    mpz_class A;
    mpz_class B;
    friend bool operator==(const CurveParams&, const CurveParams&) = default;
};

// Quadratic twist d y^2 = x^3 + A x + B, d >= 1 squarefree.
struct Twist {
    CurveParams params;
    mpz_class d;
    friend bool operator==(const Twist&, const Twist&) = default;
};

// Primitive projective point on d y^2 z = x^3 + A x z^2 + B z^3.
// Normalization: gcd(x,y,z) = 1, z >= 1 for finite points, (0:1:0) at
// infinity. Finite representatives are unique; y may carry either sign.
struct TwistPoint {
    mpz_class x;
    mpz_class y;
    mpz_class z;
    bool is_infinity() const { return z == 0; }
    friend bool operator==(const TwistPoint&, const TwistPoint&) = default;
    friend auto operator<=>(const TwistPoint& a, const TwistPoint& b) {
        if (int c = cmp(a.x, b.x); c != 0) return c <=> 0;
        if (int c = cmp(a.y, b.y); c != 0) return c <=> 0;
        return cmp(a.z, b.z) <=> 0;
    }
};

// Affine rational point on the integral model Y^2 = X^3 + A d^2 X + B d^3,
// reached from the twist by (X, Y) = (d x / z, d^2 y / z). The group law runs
// here in exact rational arithmetic.
struct StandardPoint {
    mpq_class X;
    mpq_class Y;
    bool at_infinity = false;
    friend bool operator==(const StandardPoint&, const StandardPoint&) = default;
};

mpz_class discriminant_quantity(const CurveParams& p);  // 4A^3 + 27B^2

CurveParams make_params(const mpz_class& A, const mpz_class& B);
Twist make_twist(const CurveParams& params, const mpz_class& d);

// Normalizes and validates an arbitrary projective triple.
TwistPoint make_point(const Twist& t, const mpz_class& x, const mpz_class& y, const mpz_class& z);
TwistPoint infinity_point();

bool on_curve(const Twist& t, const mpz_class& x, const mpz_class& y, const mpz_class& z);

// The representative with y >= 0 (replacing P by -P if necessary); descent
// preconditions additionally demand y >= 1.
TwistPoint descent_representative(const TwistPoint& p);
TwistPoint negate_point(const TwistPoint& p);

StandardPoint to_standard(const Twist& t, const TwistPoint& p);
TwistPoint from_standard(const Twist& t, const StandardPoint& p);

StandardPoint add(const Twist& t, const StandardPoint& p, const StandardPoint& q);
StandardPoint negate(const StandardPoint& p);
StandardPoint mul(const Twist& t, const mpz_class& n, const StandardPoint& p);

// Mazur: a rational point is torsion iff n P = O for some n <= 12.
bool is_torsion(const Twist& t, const TwistPoint& p);

}

#endif
