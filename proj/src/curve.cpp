#include "lowtwist/curve.hpp"

#include <string>

#include "lowtwist/arith.hpp"

namespace lowtwist::curve {

namespace {

// a = A d^2, b = B d^3: coefficients of the standard model of the twist.
void standard_coeffs(const Twist& t, mpz_class& a, mpz_class& b) {
    a = t.params.A * t.d * t.d;
    b = t.params.B * t.d * t.d * t.d;
}

bool on_standard(const Twist& t, const StandardPoint& p) {
    if (p.at_infinity) return true;
    mpz_class a, b;
    standard_coeffs(t, a, b);
    return p.Y * p.Y == p.X * p.X * p.X + a * p.X + b;
}

}  // namespace

mpz_class discriminant_quantity(const CurveParams& p) {
    return 4 * p.A * p.A * p.A + 27 * p.B * p.B;
}

CurveParams make_params(const mpz_class& A, const mpz_class& B) {
    CurveParams p{A, B};
    if (discriminant_quantity(p) == 0)
        throw ValidationError("curve: 4A^3 + 27B^2 = 0 (singular)");
    return p;
}

Twist make_twist(const CurveParams& params, const mpz_class& d) {
    if (discriminant_quantity(params) == 0)
        throw ValidationError("curve: 4A^3 + 27B^2 = 0 (singular)");
    if (d < 1)
        throw ValidationError("twist: d must be >= 1");
    if (!arith::is_squarefree(d))
        throw ValidationError("twist: d must be squarefree");
    return Twist{params, d};
}

bool on_curve(const Twist& t, const mpz_class& x, const mpz_class& y, const mpz_class& z) {
    return t.d * y * y * z == x * x * x + t.params.A * x * z * z + t.params.B * z * z * z;
}

TwistPoint infinity_point() { return TwistPoint{0, 1, 0}; }

TwistPoint make_point(const Twist& t, const mpz_class& x, const mpz_class& y, const mpz_class& z) {
    if (x == 0 && y == 0 && z == 0)
        throw ValidationError("point: (0,0,0) is not projective");
    mpz_class g;
    mpz_gcd(g.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t());
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), z.get_mpz_t());
    TwistPoint p{x / g, y / g, z / g};
    if (p.z < 0) {
        p.x = -p.x;
        p.y = -p.y;
        p.z = -p.z;
    }
    if (p.z == 0) {
        // d y^2 z = x^3 + ... forces x = 0 at infinity
        if (p.x != 0)
            throw ValidationError("point: (" + p.x.get_str() + ":" + p.y.get_str() + ":0) not on curve");
        p.y = 1;
        return p;
    }
    if (!on_curve(t, p.x, p.y, p.z))
        throw ValidationError("point: (" + p.x.get_str() + ":" + p.y.get_str() + ":" + p.z.get_str() +
                              ") not on twist d=" + t.d.get_str());
    return p;
}

TwistPoint negate_point(const TwistPoint& p) {
    if (p.is_infinity()) return p;
    return TwistPoint{p.x, -p.y, p.z};
}

TwistPoint descent_representative(const TwistPoint& p) {
    if (!p.is_infinity() && p.y < 0) return negate_point(p);
    return p;
}

StandardPoint to_standard(const Twist& t, const TwistPoint& p) {
    if (p.is_infinity()) return StandardPoint{0, 0, true};
    StandardPoint s;
    s.X = mpq_class(t.d * p.x, p.z);
    s.X.canonicalize();
    s.Y = mpq_class(t.d * t.d * p.y, p.z);
    s.Y.canonicalize();
    if (!on_standard(t, s))
        throw InternalConsistencyError("to_standard: image not on the standard model");
    return s;
}

TwistPoint from_standard(const Twist& t, const StandardPoint& p) {
    if (p.at_infinity) return infinity_point();
    mpq_class xq = p.X / t.d;
    mpq_class yq = p.Y / (t.d * t.d);
    xq.canonicalize();
    yq.canonicalize();
    // common denominator z = lcm of the two reduced denominators
    mpz_class z;
    mpz_lcm(z.get_mpz_t(), xq.get_den().get_mpz_t(), yq.get_den().get_mpz_t());
    mpz_class x = xq.get_num() * (z / xq.get_den());
    mpz_class y = yq.get_num() * (z / yq.get_den());
    return make_point(t, x, y, z);
}

StandardPoint negate(const StandardPoint& p) {
    if (p.at_infinity) return p;
    return StandardPoint{p.X, -p.Y, false};
}

StandardPoint add(const Twist& t, const StandardPoint& p, const StandardPoint& q) {
    if (p.at_infinity) return q;
    if (q.at_infinity) return p;
    mpz_class a, b;
    standard_coeffs(t, a, b);
    mpq_class lambda;
    if (p.X == q.X) {
        if (p.Y != q.Y || p.Y == 0) return StandardPoint{0, 0, true};  // P + (-P)
        // tangent: (3X^2 + a) / (2Y)
        lambda = (3 * p.X * p.X + a) / (2 * p.Y);
    } else {
        lambda = (q.Y - p.Y) / (q.X - p.X);
    }
    lambda.canonicalize();
    StandardPoint r;
    r.X = lambda * lambda - p.X - q.X;
    r.Y = lambda * (p.X - r.X) - p.Y;
    r.X.canonicalize();
    r.Y.canonicalize();
    r.at_infinity = false;
    return r;
}

StandardPoint mul(const Twist& t, const mpz_class& n, const StandardPoint& p) {
    mpz_class k = n;
    StandardPoint base = p;
    if (k < 0) {
        k = -k;
        base = negate(base);
    }
    StandardPoint acc{0, 0, true};
    unsigned long bits = (k == 0) ? 0 : mpz_sizeinbase(k.get_mpz_t(), 2);
    for (long i = static_cast<long>(bits) - 1; i >= 0; --i) {
        acc = add(t, acc, acc);
        if (mpz_tstbit(k.get_mpz_t(), static_cast<unsigned long>(i)))
            acc = add(t, acc, base);
    }
    return acc;
}

bool is_torsion(const Twist& t, const TwistPoint& p) {
    if (p.is_infinity()) return true;
    if (p.y == 0) return true;  // 2-torsion
    StandardPoint base = to_standard(t, p);
    StandardPoint acc = base;
    for (int n = 2; n <= 12; ++n) {
        acc = add(t, acc, base);
        if (acc.at_infinity) return true;
    }
    return false;
}

}  // namespace lowtwist::curve
