#ifndef LOWTWIST_DESCENT_HPP
#define LOWTWIST_DESCENT_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "lowtwist/curve.hpp"

namespace lowtwist::descent {

// Unique rewriting of a finite point (x:y:z), y >= 1, on the twist d:
//   x = d1 b1 x1,  z = d1^2 b1^3,  d = d0 d1,
//   d0 y^2 = x1^3 + A x1 d1^2 b1^4 + B d1^3 b1^6,
// with d0 d1 squarefree and gcd(x1, d1 b1) = 1.
struct GeneralDescentData {
    mpz_class d0;
    mpz_class d1;
    mpz_class b1;
    mpz_class x1;
    mpz_class y;
    friend bool operator==(const GeneralDescentData&, const GeneralDescentData&) = default;
};

// Complete 2-descent data for (A,B) = (-1,0):
//   x = nu d1 d2 b1 b2^2,  z = d1^2 b1^3,
//   d2 b2^2 - nu d1 b1^2 = d3 b3^2,
//   nu d2 b2^2 + d1 b1^2 = d4 b4^2,
// all d_i squarefree, gcd(d1 b1, d2 b2) = 1.
//
// shared2 records the 2-adic overlap between the last two factors. For most
// points shared2 = 1 and then d = d1 d2 d3 d4 (squarefree) and y = b2 b3 b4,
// the textbook shape. When x1 and d1 b1^2 are both odd with v2(x1^2 - d1^2 b1^4)
// odd, the squarefree parts of x1 -+ d1 b1^2 are both even and no tuple of the
// textbook shape exists; then shared2 = 2, d1 d2 d3 d4 = 4 d and
// y = 2 b2 b3 b4. Smallest such point: (7:4:1) on d = 21.
struct CongruentDescentData {
    int nu = 1;
    mpz_class d1, d2, d3, d4;
    mpz_class b1, b2, b3, b4;
    int shared2 = 1;
    friend bool operator==(const CongruentDescentData&, const CongruentDescentData&) = default;
};

GeneralDescentData decompose_general(const curve::Twist& t, const curve::TwistPoint& p);
std::pair<curve::Twist, curve::TwistPoint> compose_general(const curve::CurveParams& params,
                                                           const GeneralDescentData& data);

CongruentDescentData decompose_congruent(const curve::Twist& t, const curve::TwistPoint& p);
std::pair<curve::Twist, curve::TwistPoint> compose_congruent(const CongruentDescentData& data);

struct AuditViolation {
    mpz_class d;
    curve::TwistPoint point;
    int lemma = 1;  // 1 = general, 2 = congruent
    uint64_t tuples_found = 0;
    std::string detail;
};

struct AuditReport {
    uint64_t bound = 0;
    curve::CurveParams params;
    uint64_t points_checked = 0;
    uint64_t congruent_checked = 0;
    uint64_t obstructed_count = 0;  // shared2 = 2 points (congruent case)
    std::vector<AuditViolation> violations;
};

// Exhaustive over primitive on-curve triples |x|, y, z <= bound (d derived
// from the curve equation): for each point, enumerates every tuple satisfying
// the descent constraints and checks that exactly one exists and that it
// matches decompose_*'s output.
AuditReport uniqueness_audit(const curve::CurveParams& params, uint64_t bound);

nlohmann::ordered_json to_json(const AuditReport& report);

}

#endif
