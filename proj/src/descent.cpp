#include "lowtwist/descent.hpp"

#include <cstdint>

#include "lowtwist/arith.hpp"

namespace lowtwist::descent {

using curve::CurveParams;
using curve::Twist;
using curve::TwistPoint;

namespace {

mpz_class gcd(const mpz_class& a, const mpz_class& b) {
    mpz_class g;
    mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return g;
}

bool is_cube_of(const mpz_class& n, mpz_class& root) {
    if (mpz_root(root.get_mpz_t(), n.get_mpz_t(), 3))
        return true;
    return false;
}

void require(bool cond, const std::string& what) {
    if (!cond) throw ValidationError("descent: " + what);
}

}  // namespace

GeneralDescentData decompose_general(const Twist& t, const TwistPoint& p) {
    if (p.is_infinity() || p.y == 0)
        throw DomainError("decompose_general: point must have y >= 1 (2-torsion rejected)");
    if (p.y < 0)
        throw DomainError("decompose_general: take the y >= 1 representative first");

    // Mirror of the constructive proof; every intermediate divisibility is
    // asserted since the chain is what guarantees uniqueness.
    GeneralDescentData r;
    r.y = p.y;
    r.d1 = gcd(t.d, p.z);
    r.d0 = t.d / r.d1;
    if (!mpz_divisible_p(p.x.get_mpz_t(), r.d1.get_mpz_t()))
        throw InternalConsistencyError("decompose_general: d1 | x fails");
    mpz_class x0 = p.x / r.d1;
    mpz_class z0 = p.z / r.d1;
    if (!mpz_divisible_p(z0.get_mpz_t(), r.d1.get_mpz_t()))
        throw InternalConsistencyError("decompose_general: d1 | z0 fails");
    mpz_class z1 = z0 / r.d1;
    r.b1 = gcd(x0, z1);
    mpz_class cube;
    if (!is_cube_of(z1, cube) || cube != r.b1)
        throw InternalConsistencyError("decompose_general: z1 is not b1^3");
    r.x1 = x0 / r.b1;

    if (r.d0 * r.y * r.y !=
        r.x1 * r.x1 * r.x1 + t.params.A * r.x1 * r.d1 * r.d1 * r.b1 * r.b1 * r.b1 * r.b1 +
            t.params.B * r.d1 * r.d1 * r.d1 * r.b1 * r.b1 * r.b1 * r.b1 * r.b1 * r.b1)
        throw InternalConsistencyError("decompose_general: descent equation fails");
    if (gcd(r.x1, r.d1 * r.b1) != 1)
        throw InternalConsistencyError("decompose_general: gcd(x1, d1 b1) != 1");
    return r;
}

std::pair<Twist, TwistPoint> compose_general(const CurveParams& params,
                                             const GeneralDescentData& data) {
    require(data.d0 >= 1 && data.d1 >= 1 && data.b1 >= 1, "d0, d1, b1 must be >= 1");
    require(data.y >= 1, "y must be >= 1");
    mpz_class d = data.d0 * data.d1;
    require(arith::is_squarefree(d), "d0 d1 = " + d.get_str() + " not squarefree");
    require(gcd(data.x1, data.d1 * data.b1) == 1, "gcd(x1, d1 b1) != 1");
    mpz_class b1sq = data.b1 * data.b1;
    mpz_class rhs = data.x1 * data.x1 * data.x1 +
                    params.A * data.x1 * data.d1 * data.d1 * b1sq * b1sq +
                    params.B * data.d1 * data.d1 * data.d1 * b1sq * b1sq * b1sq;
    require(data.d0 * data.y * data.y == rhs, "descent equation d0 y^2 = x1^3 + ... fails");

    Twist t = curve::make_twist(params, d);
    mpz_class x = data.d1 * data.b1 * data.x1;
    mpz_class z = data.d1 * data.d1 * data.b1 * data.b1 * data.b1;
    TwistPoint p = curve::make_point(t, x, data.y, z);
    if (p.x != x || p.y != data.y || p.z != z)
        throw InternalConsistencyError("compose_general: built point was not primitive");
    return {t, p};
}

CongruentDescentData decompose_congruent(const Twist& t, const TwistPoint& p) {
    if (t.params.A != -1 || t.params.B != 0)
        throw DomainError("decompose_congruent: requires (A,B) = (-1,0)");
    if (p.is_infinity() || p.x == 0 || p.y == 0)
        throw DomainError("decompose_congruent: torsion point (x = 0 or y = 0)");
    if (p.y < 0)
        throw DomainError("decompose_congruent: take the y >= 1 representative first");

    GeneralDescentData g = decompose_general(t, p);
    CongruentDescentData r;
    r.d1 = g.d1;
    r.b1 = g.b1;
    r.nu = sgn(g.x1);

    // d0 y^2 = x1 (x1 - d1 b1^2)(x1 + d1 b1^2); each factor splits as
    // squarefree times square. Sign pattern is (nu, nu, +): the product is
    // positive and x1 + d1 b1^2 > x1 > x1 - d1 b1^2, so x1 + d1 b1^2 = 0
    // would force product <= 0, impossible for y >= 1.
    mpz_class m = g.d1 * g.b1 * g.b1;
    mpz_class f2 = r.nu * g.x1;
    mpz_class f3 = r.nu * (g.x1 - m);
    mpz_class f4 = g.x1 + m;
    if (f2 <= 0 || f3 <= 0 || f4 <= 0)
        throw InternalConsistencyError("decompose_congruent: factor sign pattern (nu,nu,+) fails");

    auto s2 = arith::squarefree_split(f2);
    auto s3 = arith::squarefree_split(f3);
    auto s4 = arith::squarefree_split(f4);
    r.d2 = s2.squarefree;
    r.b2 = s2.root;
    r.d3 = s3.squarefree;
    r.b3 = s3.root;
    r.d4 = s4.squarefree;
    r.b4 = s4.root;

    mpz_class prod = r.d2 * r.d3 * r.d4;
    if (prod == g.d0) {
        r.shared2 = 1;
    } else if (prod == 4 * g.d0) {
        r.shared2 = 2;  // both split parts even: the odd 2-adic excess case
    } else {
        throw InternalConsistencyError("decompose_congruent: d2 d3 d4 != d0 or 4 d0");
    }
    if (g.y != r.shared2 * r.b2 * r.b3 * r.b4)
        throw InternalConsistencyError("decompose_congruent: y != shared2 * b2 b3 b4");
    if (gcd(r.d1 * r.b1, r.d2 * r.b2) != 1)
        throw InternalConsistencyError("decompose_congruent: gcd(d1 b1, d2 b2) != 1");
    return r;
}

std::pair<Twist, TwistPoint> compose_congruent(const CongruentDescentData& data) {
    require(data.nu == 1 || data.nu == -1, "nu must be +-1");
    require(data.shared2 == 1 || data.shared2 == 2, "shared2 must be 1 or 2");
    for (const mpz_class* v : {&data.d1, &data.d2, &data.d3, &data.d4,
                               &data.b1, &data.b2, &data.b3, &data.b4})
        require(*v >= 1, "d_i, b_i must be >= 1");
    for (const mpz_class* v : {&data.d1, &data.d2, &data.d3, &data.d4})
        require(arith::is_squarefree(*v), "d_i must be squarefree");

    mpz_class lhs1 = data.d2 * data.b2 * data.b2 - data.nu * data.d1 * data.b1 * data.b1;
    require(lhs1 == data.d3 * data.b3 * data.b3,
            "first system equation d2 b2^2 - nu d1 b1^2 = d3 b3^2 fails");
    mpz_class lhs2 = data.nu * data.d2 * data.b2 * data.b2 + data.d1 * data.b1 * data.b1;
    require(lhs2 == data.d4 * data.b4 * data.b4,
            "second system equation nu d2 b2^2 + d1 b1^2 = d4 b4^2 fails");
    require(gcd(data.d1 * data.b1, data.d2 * data.b2) == 1, "gcd(d1 b1, d2 b2) != 1");

    mpz_class prod = data.d1 * data.d2 * data.d3 * data.d4;
    mpz_class sq = mpz_class(data.shared2) * data.shared2;
    require(mpz_divisible_p(prod.get_mpz_t(), sq.get_mpz_t()), "shared2^2 | d1 d2 d3 d4 fails");
    mpz_class d = prod / sq;
    require(arith::is_squarefree(d), "d1 d2 d3 d4 / shared2^2 = " + d.get_str() + " not squarefree");
    if (data.shared2 == 2)
        require(mpz_even_p(data.d3.get_mpz_t()) && mpz_even_p(data.d4.get_mpz_t()),
                "shared2 = 2 requires d3 and d4 both even");

    Twist t = curve::make_twist(curve::CurveParams{-1, 0}, d);
    mpz_class x = data.nu * data.d1 * data.d2 * data.b1 * data.b2 * data.b2;
    mpz_class y = data.shared2 * data.b2 * data.b3 * data.b4;
    mpz_class z = data.d1 * data.d1 * data.b1 * data.b1 * data.b1;
    TwistPoint p = curve::make_point(t, x, y, z);
    if (p.x != x || p.y != y || p.z != z)
        throw InternalConsistencyError("compose_congruent: built point was not primitive");
    return {t, p};
}

namespace {

// All (d0, d1, b1, x1) with x = d1 b1 x1, z = d1^2 b1^3, d = d0 d1 and the
// lemma's side conditions; used by the audit as the independent oracle.
uint64_t count_general_tuples(const CurveParams& params, const mpz_class& d,
                              const TwistPoint& p, const GeneralDescentData& expect,
                              bool& matches) {
    uint64_t found = 0;
    matches = false;
    for (mpz_class d1 = 1; d1 * d1 <= p.z && d1 <= d; ++d1) {
        if (!mpz_divisible_p(d.get_mpz_t(), d1.get_mpz_t())) continue;
        mpz_class d0 = d / d1;
        mpz_class z1 = p.z;
        if (!mpz_divisible_p(z1.get_mpz_t(), mpz_class(d1 * d1).get_mpz_t())) continue;
        z1 /= d1 * d1;
        mpz_class b1;
        if (!mpz_root(b1.get_mpz_t(), z1.get_mpz_t(), 3) ) continue;
        if (b1 * b1 * b1 != z1) continue;
        mpz_class db = d1 * b1;
        if (!mpz_divisible_p(p.x.get_mpz_t(), db.get_mpz_t())) continue;
        mpz_class x1 = p.x / db;
        mpz_class g;
        mpz_gcd(g.get_mpz_t(), x1.get_mpz_t(), db.get_mpz_t());
        if (g != 1) continue;
        if (!arith::is_squarefree(d0 * d1)) continue;
        mpz_class b1sq = b1 * b1;
        mpz_class rhs = x1 * x1 * x1 + params.A * x1 * d1 * d1 * b1sq * b1sq +
                        params.B * d1 * d1 * d1 * b1sq * b1sq * b1sq;
        if (d0 * p.y * p.y != rhs) continue;
        ++found;
        GeneralDescentData cand{d0, d1, b1, x1, p.y};
        if (cand == expect) matches = true;
    }
    return found;
}

// All congruent tuples in the extended space (shared2 in {1,2}).
uint64_t count_congruent_tuples(const mpz_class& d, const TwistPoint& p,
                                const CongruentDescentData& expect, bool& matches) {
    uint64_t found = 0;
    matches = false;
    int nu = sgn(p.x);
    for (int shared2 : {1, 2}) {
        // z = d1^2 b1^3 and x = nu d1 d2 b1 b2^2 determine candidates by
        // divisor scans; the equations then pin everything.
        for (mpz_class d1 = 1; d1 * d1 <= p.z; ++d1) {
            mpz_class z1 = p.z;
            if (!mpz_divisible_p(z1.get_mpz_t(), mpz_class(d1 * d1).get_mpz_t())) continue;
            z1 /= d1 * d1;
            mpz_class b1;
            if (!mpz_root(b1.get_mpz_t(), z1.get_mpz_t(), 3)) continue;
            if (b1 * b1 * b1 != z1) continue;
            mpz_class db = d1 * b1;
            if (!mpz_divisible_p(p.x.get_mpz_t(), db.get_mpz_t())) continue;
            mpz_class x1 = p.x / db;  // nu d2 b2^2
            mpz_class ax1 = abs(x1);
            for (mpz_class b2 = 1; b2 * b2 <= ax1; ++b2) {
                if (!mpz_divisible_p(ax1.get_mpz_t(), mpz_class(b2 * b2).get_mpz_t())) continue;
                mpz_class d2 = ax1 / (b2 * b2);
                if (!arith::is_squarefree(d2)) continue;
                mpz_class m = d1 * b1 * b1;
                mpz_class v3 = d2 * b2 * b2 - nu * m;   // d3 b3^2
                mpz_class v4 = nu * d2 * b2 * b2 + m;   // d4 b4^2
                if (v3 <= 0 || v4 <= 0) continue;
                for (mpz_class b3 = 1; b3 * b3 <= v3; ++b3) {
                    if (!mpz_divisible_p(v3.get_mpz_t(), mpz_class(b3 * b3).get_mpz_t())) continue;
                    mpz_class d3 = v3 / (b3 * b3);
                    if (!arith::is_squarefree(d3)) continue;
                    for (mpz_class b4 = 1; b4 * b4 <= v4; ++b4) {
                        if (!mpz_divisible_p(v4.get_mpz_t(), mpz_class(b4 * b4).get_mpz_t())) continue;
                        mpz_class d4 = v4 / (b4 * b4);
                        if (!arith::is_squarefree(d4)) continue;
                        if (p.y != shared2 * b2 * b3 * b4) continue;
                        mpz_class g;
                        mpz_class u = d1 * b1, v = d2 * b2;
                        mpz_gcd(g.get_mpz_t(), u.get_mpz_t(), v.get_mpz_t());
                        if (g != 1) continue;
                        mpz_class prod = d1 * d2 * d3 * d4;
                        if (prod != d * shared2 * shared2) continue;
                        if (shared2 == 2 &&
                            !(mpz_even_p(d3.get_mpz_t()) && mpz_even_p(d4.get_mpz_t())))
                            continue;
                        ++found;
                        CongruentDescentData cand{nu, d1, d2, d3, d4, b1, b2, b3, b4, shared2};
                        if (cand == expect) matches = true;
                    }
                }
            }
        }
    }
    return found;
}

}  // namespace

AuditReport uniqueness_audit(const CurveParams& params, uint64_t bound) {
    AuditReport rep;
    rep.bound = bound;
    rep.params = params;
    const bool congruent_curve = (params.A == -1 && params.B == 0);

    long b = static_cast<long>(bound);
    for (long z = 1; z <= b; ++z) {
        for (long y = 1; y <= b; ++y) {
            for (long x = -b; x <= b; ++x) {
                mpz_class t = mpz_class(x) * x * x + params.A * x * mpz_class(z) * z +
                              params.B * mpz_class(z) * z * z;
                mpz_class yz = mpz_class(y) * y * z;
                if (t <= 0) continue;
                if (!mpz_divisible_p(t.get_mpz_t(), yz.get_mpz_t())) continue;
                mpz_class d = t / yz;
                if (d < 1 || !arith::is_squarefree(d)) continue;
                mpz_class g;
                mpz_gcd(g.get_mpz_t(), mpz_class(x).get_mpz_t(), mpz_class(y).get_mpz_t());
                mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), mpz_class(z).get_mpz_t());
                if (g != 1) continue;

                Twist tw = curve::make_twist(params, d);
                TwistPoint p = curve::make_point(tw, x, y, z);
                ++rep.points_checked;

                GeneralDescentData got = decompose_general(tw, p);
                bool match = false;
                uint64_t n = count_general_tuples(params, d, p, got, match);
                if (n != 1 || !match)
                    rep.violations.push_back(
                        {d, p, 1, n, n == 1 ? "tuple differs from decompose_general" : "tuple count != 1"});

                if (congruent_curve && p.x != 0) {
                    ++rep.congruent_checked;
                    CongruentDescentData cg = decompose_congruent(tw, p);
                    if (cg.shared2 == 2) ++rep.obstructed_count;
                    bool cmatch = false;
                    uint64_t cn = count_congruent_tuples(d, p, cg, cmatch);
                    if (cn != 1 || !cmatch)
                        rep.violations.push_back(
                            {d, p, 2, cn,
                             cn == 1 ? "tuple differs from decompose_congruent" : "tuple count != 1"});
                }
            }
        }
    }
    return rep;
}

nlohmann::ordered_json to_json(const AuditReport& report) {
    nlohmann::ordered_json j;
    j["bound"] = report.bound;
    j["curves_tested"] = nlohmann::ordered_json::array(
        {{{"A", report.params.A.get_str()}, {"B", report.params.B.get_str()}}});
    j["points_checked"] = report.points_checked;
    j["congruent_checked"] = report.congruent_checked;
    j["obstructed_count"] = report.obstructed_count;
    auto viol = nlohmann::ordered_json::array();
    for (const auto& v : report.violations) {
        viol.push_back({{"d", v.d.get_str()},
                        {"x", v.point.x.get_str()},
                        {"y", v.point.y.get_str()},
                        {"z", v.point.z.get_str()},
                        {"lemma", v.lemma},
                        {"tuples_found", v.tuples_found},
                        {"detail", v.detail}});
    }
    j["violations"] = viol;
    return j;
}

}  // namespace lowtwist::descent
