#include "lowtwist/ternary.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "lowtwist/parallel.hpp"

namespace lowtwist::ternary {

namespace {

using i128 = __int128;

uint64_t gcd_u64(uint64_t a, uint64_t b) {
    while (b) {
        uint64_t t = a % b;
        a = b;
        b = t;
    }
    return a;
}

int64_t ifloor(double v) { return static_cast<int64_t>(std::floor(v)); }

}  // namespace

TernaryForm make_form(int64_t f1, int64_t f2, int64_t f3) {
    if (f1 == 0 || f2 == 0 || f3 == 0)
        throw ValidationError("ternary: coefficients must be nonzero");
    auto g = [](int64_t a, int64_t b) {
        return gcd_u64(static_cast<uint64_t>(std::llabs(a)), static_cast<uint64_t>(std::llabs(b)));
    };
    if (g(f1, f2) != 1 || g(f1, f3) != 1 || g(f2, f3) != 1)
        throw ValidationError("ternary: coefficients must be pairwise coprime");
    return TernaryForm{f1, f2, f3};
}

BoxBounds make_box(double U1, double U2, double U3, double V1, double V2, double V3) {
    for (double v : {U1, U2, U3, V1, V2, V3})
        if (!(v >= 1.0))
            throw ValidationError("ternary: box bounds must all be >= 1");
    return BoxBounds{U1, U2, U3, V1, V2, V3};
}

uint64_t count_solutions(const TernaryForm& f, const BoxBounds& box, const CountOptions& opts) {
    make_form(f.f1, f.f2, f.f3);
    make_box(box.U1, box.U2, box.U3, box.V1, box.V2, box.V3);

    const int64_t u1m = ifloor(box.U1), u2m = ifloor(box.U2), u3m = ifloor(box.U3);
    const int64_t v1m = ifloor(box.V1), v2m = ifloor(box.V2), v3m = ifloor(box.V3);

    // loop iterations: v1 v2 v3 u1 u2, each over nonzero signed values
    double est = 32.0 * double(v1m) * v2m * v3m * double(u1m) * u2m;
    if (est > static_cast<double>(opts.budget))
        throw ResourceError("count_solutions: box volume exceeds the iteration budget");

    const bool filtered = static_cast<bool>(opts.filter);

    // Without a filter the equation and side conditions only see v_i^2 and
    // |v_i|, so each solution with v_i > 0 stands for 8 sign choices.
    std::vector<uint64_t> partial(static_cast<size_t>(v1m), 0);
    parallel_items(filtered ? 1 : opts.workers, static_cast<uint64_t>(v1m), [&](int, uint64_t idx) {
        int64_t v1 = static_cast<int64_t>(idx) + 1;
        uint64_t local = 0;
        const i128 f3w = f.f3;
        for (int64_t v2 = 1; v2 <= v2m; ++v2) {
            for (int64_t v3 = 1; v3 <= v3m; ++v3) {
                const i128 q3 = f3w * v3 * v3;
                for (int64_t u1 = -u1m; u1 <= u1m; ++u1) {
                    if (u1 == 0) continue;
                    const i128 s1 = static_cast<i128>(f.f1) * u1 * v1 * v1;
                    for (int64_t u2 = -u2m; u2 <= u2m; ++u2) {
                        if (u2 == 0) continue;
                        i128 s = s1 + static_cast<i128>(f.f2) * u2 * v2 * v2;
                        if (s % q3) continue;
                        i128 u3w = -s / q3;
                        if (u3w == 0 || u3w > u3m || u3w < -u3m) continue;
                        int64_t u3 = static_cast<int64_t>(u3w);
                        uint64_t a = static_cast<uint64_t>(std::llabs(u1)) * v1;
                        uint64_t b = static_cast<uint64_t>(std::llabs(u2)) * v2;
                        uint64_t c = static_cast<uint64_t>(std::llabs(u3)) * v3;
                        if (gcd_u64(a, b) != 1 || gcd_u64(a, c) != 1 || gcd_u64(b, c) != 1)
                            continue;
                        if (!filtered) {
                            local += 8;
                        } else {
                            // sign-expand v explicitly for the filter
                            for (int s1v : {-1, 1})
                                for (int s2v : {-1, 1})
                                    for (int s3v : {-1, 1})
                                        if (opts.filter({u1, u2, u3},
                                                        {s1v * v1, s2v * v2, s3v * v3}))
                                            ++local;
                        }
                    }
                }
            }
        }
        partial[idx] = local;
    });
    return std::accumulate(partial.begin(), partial.end(), uint64_t{0});
}

double bound_value(const TernaryForm& f, const BoxBounds& box, double eps) {
    (void)f;
    if (eps < 0) throw ValidationError("ternary: eps must be >= 0");
    return std::pow(box.U1 * box.U2 * box.U3, 2.0 / 3.0 + eps) *
           std::pow(box.V1 * box.V2 * box.V3, 1.0 / 3.0);
}

ScanReport exponent_scan(const TernaryForm& f, const std::vector<double>& scales, double eps,
                         const CountOptions& opts) {
    if (scales.empty()) throw ValidationError("exponent_scan: empty scale list");
    ScanReport rep;
    rep.eps = eps;
    for (double s : scales) {
        ScanRow row;
        row.scale = s;
        row.box = make_box(s, s, s, s, s, s);
        row.count = count_solutions(f, row.box, opts);
        row.bound = bound_value(f, row.box, eps);
        row.ratio = static_cast<double>(row.count) / row.bound;
        rep.max_ratio = std::max(rep.max_ratio, row.ratio);
        rep.rows.push_back(row);
    }
    return rep;
}

}  // namespace lowtwist::ternary
