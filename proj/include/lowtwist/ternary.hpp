#ifndef LOWTWIST_TERNARY_HPP
#define LOWTWIST_TERNARY_HPP

#include <array>
#include <cstdint>
#include <functional>
#include <vector>

#include "lowtwist/errors.hpp"

namespace lowtwist::ternary {

// f1 u1 v1^2 + f2 u2 v2^2 + f3 u3 v3^2 = 0, coefficients pairwise coprime.
struct TernaryForm {
    int64_t f1 = 1, f2 = 1, f3 = 1;
};

struct BoxBounds {
    double U1 = 1, U2 = 1, U3 = 1;
    double V1 = 1, V2 = 1, V3 = 1;
};

TernaryForm make_form(int64_t f1, int64_t f2, int64_t f3);  // ValidationError
BoxBounds make_box(double U1, double U2, double U3, double V1, double V2, double V3);

struct CountOptions {
    int workers = 1;
    uint64_t budget = 8'000'000'000ULL;  // inner loop iterations
    // optional side-condition filter on (u, v); nullptr counts the plain form
    std::function<bool(const std::array<int64_t, 3>&, const std::array<int64_t, 3>&)> filter;
};

// Exact count of solutions with all coordinates nonzero, |u_i| <= U_i,
// |v_i| <= V_i, gcd(u_i v_i, u_j v_j) = 1 pairwise. Enumerates
// (v1, v2, v3, u1, u2) and solves for u3 by exact division.
uint64_t count_solutions(const TernaryForm& f, const BoxBounds& box, const CountOptions& opts = {});

// (U1 U2 U3)^{2/3+eps} (V1 V2 V3)^{1/3}
double bound_value(const TernaryForm& f, const BoxBounds& box, double eps);

struct ScanRow {
    double scale = 0;
    BoxBounds box;
    uint64_t count = 0;
    double bound = 0;
    double ratio = 0;
};

struct ScanReport {
    std::vector<ScanRow> rows;
    double max_ratio = 0;
    double eps = 0;
};

// Cubes U_i = V_i = scale per entry of scale_list.
ScanReport exponent_scan(const TernaryForm& f, const std::vector<double>& scales,
                         double eps = 0.05, const CountOptions& opts = {});

}

#endif
