#include "lowtwist/search.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numeric>

#include "lowtwist/arith.hpp"
#include "lowtwist/parallel.hpp"

namespace lowtwist::search {

using curve::CurveParams;
using curve::Twist;
using curve::TwistPoint;

namespace {

using i128 = __int128;

struct ScanBounds {
    uint64_t m_cap = 0;   // cap on max(|x1|, d1 b1^2)   (alpha mode)
    uint64_t h_cap = 0;   // cap on max(|x|, z)          (H mode)
    bool h_mode = false;
    uint64_t X = 1;       // twist cap: d0 <= X / d1
};

struct RawCandidate {
    uint64_t d1, b1, d0, y;
    int64_t x1;
    i128 t;
};

// t = x1^3 + A x1 (d1 b1^2)^2 + B (d1 b1^2)^3 in 128-bit arithmetic.
// With the desk-scale window caps this cannot overflow (checked by caller).
i128 descent_rhs(int64_t A, int64_t B, int64_t x1, uint64_t m) {
    i128 xm = x1;
    i128 mm = static_cast<i128>(m) * m;
    return xm * xm * xm + static_cast<i128>(A) * xm * mm + static_cast<i128>(B) * mm * static_cast<i128>(m);
}

bool split_t_capped(i128 t, uint64_t cap, uint64_t& s, uint64_t& q) {
    if (t <= static_cast<i128>(UINT64_MAX))
        return arith::squarefree_split_capped(static_cast<uint64_t>(t), cap, s, q);
    // rare: fall back to mpz
    i128 v = t;
    mpz_class big = mpz_class(static_cast<unsigned long>(v >> 64)) * (mpz_class(1) << 64) +
                    mpz_class(static_cast<unsigned long>(v & 0xffffffffffffffffULL));
    auto sp = arith::squarefree_split(big);
    if (sp.squarefree > cap) return false;
    if (!mpz_fits_ulong_p(sp.root.get_mpz_t()))
        throw RangeError("search: squarefree split exceeds the fast-path range");
    s = mpz_get_ui(sp.squarefree.get_mpz_t());
    q = mpz_get_ui(sp.root.get_mpz_t());
    return true;
}

uint64_t gcd_u64(uint64_t a, uint64_t b) {
    while (b) {
        uint64_t t = a % b;
        a = b;
        b = t;
    }
    return a;
}

int64_t mpz_to_i64(const mpz_class& v, const char* what) {
    if (!v.fits_slong_p())
        throw RangeError(std::string("search: ") + what + " outside the fast-path range");
    return v.get_si();
}

// Per-(d1) candidate scan. Calls sink(candidate) for every triple passing the
// exact arithmetic filters; the caller applies torsion and height filters.
template <typename Sink>
uint64_t scan_d1_block(int64_t A, int64_t B, uint64_t d1, const ScanBounds& sb, Sink&& sink) {
    uint64_t candidates = 0;
    for (uint64_t b1 = 1;; ++b1) {
        uint64_t m = d1 * b1 * b1;  // d1 b1^2
        uint64_t xmax;
        if (sb.h_mode) {
            // z = d1^2 b1^3 <= H and |x| = d1 b1 |x1| <= H
            if (static_cast<i128>(d1) * d1 * b1 * b1 * b1 > static_cast<i128>(sb.h_cap)) break;
            xmax = sb.h_cap / (d1 * b1);
        } else {
            if (m > sb.m_cap) break;
            xmax = sb.m_cap;
        }
        uint64_t db = d1 * b1;
        const uint64_t d0_cap = sb.X / d1;
        for (int64_t x1 = -static_cast<int64_t>(xmax); x1 <= static_cast<int64_t>(xmax); ++x1) {
            ++candidates;
            uint64_t ax1 = static_cast<uint64_t>(x1 < 0 ? -x1 : x1);
            if (gcd_u64(ax1, db) != 1) continue;
            i128 t = descent_rhs(A, B, x1, m);
            if (t < 1) continue;
            uint64_t d0, y;
            if (!split_t_capped(t, d0_cap, d0, y)) continue;  // d = d0 d1 <= X
            if (gcd_u64(d0, d1) != 1) continue;
            sink(RawCandidate{d1, b1, d0, y, x1, t});
        }
    }
    return candidates;
}

// Count of triples in one d1 block, for the deterministic budget prefix.
uint64_t block_cost(uint64_t d1, const ScanBounds& sb) {
    uint64_t cost = 0;
    for (uint64_t b1 = 1;; ++b1) {
        uint64_t xmax;
        if (sb.h_mode) {
            if (static_cast<i128>(d1) * d1 * b1 * b1 * b1 > static_cast<i128>(sb.h_cap)) break;
            xmax = sb.h_cap / (d1 * b1);
        } else {
            if (d1 * b1 * b1 > sb.m_cap) break;
            xmax = sb.m_cap;
        }
        cost += 2 * xmax + 1;
    }
    return cost;
}

struct ExactSortKey {
    // (d, max(|x|,z), x, y): integer comparisons only, so the order cannot
    // depend on floating rounding or the worker schedule
    static bool less(const PointRecord& a, const PointRecord& b) {
        if (int c = cmp(a.d, b.d); c != 0) return c < 0;
        mpz_class ma = abs(a.point.x) > a.point.z ? abs(a.point.x) : a.point.z;
        mpz_class mb = abs(b.point.x) > b.point.z ? abs(b.point.x) : b.point.z;
        if (int c = cmp(ma, mb); c != 0) return c < 0;
        if (int c = cmp(a.point.x, b.point.x); c != 0) return c < 0;
        return cmp(a.point.y, b.point.y) < 0;
    }
};

PointRecord build_record(const CurveParams& params, const RawCandidate& c, int n_iter,
                         const Twist& tw) {
    PointRecord rec;
    rec.d = tw.d;
    mpz_class x = mpz_class(c.d1) * c.b1 * c.x1;
    mpz_class z = mpz_class(c.d1) * c.d1 * mpz_class(c.b1) * c.b1 * c.b1;
    rec.point = curve::make_point(tw, x, mpz_class(c.y), z);
    rec.h_x = heights::naive_height_x(rec.point).value;
    heights::CanonicalHeightOptions ho;
    ho.n_iter = n_iter;
    ho.skip_torsion_check = true;  // caller filtered torsion already
    rec.h_hat = heights::canonical_height(tw, rec.point, ho).value;
    rec.descent = descent::GeneralDescentData{mpz_class(c.d0), mpz_class(c.d1), mpz_class(c.b1),
                                              mpz_class(c.x1), mpz_class(c.y)};
    (void)params;
    return rec;
}

}  // namespace

EnumerationResult enumerate_low_points(const CurveParams& params, const SearchWindow& w,
                                       const SearchOptions& opts) {
    if (w.X < 1) throw ValidationError("search: X must be >= 1");
    if (w.alpha.has_value() == w.H.has_value())
        throw ValidationError("search: exactly one of alpha / H must be set");
    if (w.alpha && *w.alpha <= 0) throw ValidationError("search: alpha must be > 0");
    if (w.H && *w.H < 1) throw ValidationError("search: H must be >= 1");
    curve::make_params(params.A, params.B);  // reject singular curves

    int64_t A = mpz_to_i64(params.A, "A");
    int64_t B = mpz_to_i64(params.B, "B");

    ScanBounds sb;
    sb.X = w.X;
    double cap_half = 0.0;  // half-scale canonical height cap at X
    if (w.H) {
        if (*w.H > 4e6) throw ResourceError("search: H exceeds the fast path");
        sb.h_mode = true;
        sb.h_cap = static_cast<uint64_t>(*w.H);
    } else {
        cap_half = (0.125 + *w.alpha) * std::log(static_cast<double>(w.X));
        double m = std::exp(2.0 * (cap_half + opts.gap_guard));
        if (m > 4e6) throw ResourceError("search: alpha window bound exceeds the fast path");
        sb.m_cap = static_cast<uint64_t>(m) + 1;
    }
    uint64_t d1_lim = sb.h_mode ? static_cast<uint64_t>(std::floor(std::sqrt(static_cast<double>(sb.h_cap)))) + 1
                                : sb.m_cap;
    d1_lim = std::min(d1_lim, w.X);

    const auto sf = arith::squarefree_sieve(d1_lim);

    // budget: keep a prefix of d1 blocks so the cut is schedule-independent
    std::vector<uint64_t> d1_list;
    uint64_t est = 0;
    EnumerationResult out;
    for (uint64_t d1 = opts.resume_d1; d1 <= d1_lim; ++d1) {
        if (!sf[d1]) continue;
        uint64_t c = block_cost(d1, sb);
        if (c == 0) continue;
        if (est + c > opts.budget) {
            out.complete = false;
            out.resume_d1 = d1;
            break;
        }
        est += c;
        d1_list.push_back(d1);
    }

    std::vector<std::vector<PointRecord>> slots(d1_list.size());
    std::vector<uint64_t> cand_counts(d1_list.size(), 0);

    parallel_items(opts.workers, d1_list.size(), [&](int, uint64_t i) {
        uint64_t d1 = d1_list[i];
        std::vector<PointRecord>& local = slots[i];
        cand_counts[i] = scan_d1_block(A, B, d1, sb, [&](const RawCandidate& c) {
            Twist tw = curve::Twist{params, mpz_class(c.d0) * c.d1};
            mpz_class x = mpz_class(c.d1) * c.b1 * c.x1;
            mpz_class z = mpz_class(c.d1) * c.d1 * mpz_class(c.b1) * c.b1 * c.b1;
            TwistPoint p{x, mpz_class(c.y), z};
            if (!sb.h_mode) {
                // adaptive height filter at increasing precision; torsion
                // collapses to 0 here and is culled by the exact test below
                double thr = (0.125 + *w.alpha) * heights::log_mpz(tw.d);
                heights::CanonicalHeightOptions ho;
                ho.skip_torsion_check = true;
                bool accept = false;
                for (int n = 4;; n += 2) {
                    ho.n_iter = n;
                    auto h = heights::canonical_height(tw, p, ho);
                    if (n >= 12 || opts.n_iter <= n) {
                        accept = 0.5 * h.value <= thr;
                        break;
                    }
                    // doubled error bands: escalate unless clearly separated
                    if (0.5 * (h.value - 2 * h.abs_error) > thr) break;
                    if (0.5 * (h.value + 2 * h.abs_error) <= thr) {
                        accept = true;
                        break;
                    }
                }
                if (!accept) return;
            }
            if (curve::is_torsion(tw, p)) return;
            local.push_back(build_record(params, c, opts.n_iter, tw));
        });
    });

    for (size_t i = 0; i < slots.size(); ++i) {
        out.candidates += cand_counts[i];
        for (auto& r : slots[i]) out.records.push_back(std::move(r));
    }
    std::sort(out.records.begin(), out.records.end(), ExactSortKey::less);
    return out;
}

uint64_t count_N_star(const CurveParams& params, uint64_t X, double alpha,
                      const SearchOptions& opts) {
    SearchWindow w;
    w.X = X;
    w.alpha = alpha;
    auto res = enumerate_low_points(params, w, opts);
    if (!res.complete) throw ResourceError("count_N_star: enumeration budget exceeded");
    return 2 * res.records.size();  // +-P are distinct points
}

uint64_t count_N(const CurveParams& params, uint64_t X, double alpha, const SearchOptions& opts) {
    SearchWindow w;
    w.X = X;
    w.alpha = alpha;
    auto res = enumerate_low_points(params, w, opts);
    if (!res.complete) throw ResourceError("count_N: enumeration budget exceeded");
    uint64_t n = 0;
    const mpz_class* last = nullptr;
    for (const auto& r : res.records) {
        if (!last || *last != r.d) ++n;
        last = &r.d;
    }
    uint64_t nstar = 2 * res.records.size();
    if (n > nstar) throw InternalConsistencyError("count_N: N > N*");
    return n;
}

EtaResult eta(const CurveParams& params, const mpz_class& d, double cap_log,
              const SearchOptions& opts) {
    if (!arith::is_squarefree(d)) throw ValidationError("eta: d must be squarefree");
    EtaResult out;
    out.d = d;
    out.cap_log = cap_log;
    if (cap_log <= 0) return out;  // exceeds_cap immediately

    int64_t A = mpz_to_i64(params.A, "A");
    int64_t B = mpz_to_i64(params.B, "B");
    if (!mpz_fits_ulong_p(d.get_mpz_t())) throw RangeError("eta: d outside the fast-path range");
    uint64_t du = mpz_get_ui(d.get_mpz_t());
    double mcapd = std::exp(cap_log + 2.0 * opts.gap_guard);
    if (mcapd > 4e6) throw ResourceError("eta: cap exceeds the fast path");
    uint64_t mcap = static_cast<uint64_t>(mcapd) + 1;
    const Twist tw = curve::make_twist(params, d);

    // d1 runs over divisors of d; d0 = d / d1 is then fixed and t must equal
    // d0 y^2 exactly, so no factorization is needed in the loop.
    std::vector<PointRecord> hits;
    for (uint64_t d1 = 1; d1 <= du; ++d1) {
        if (du % d1) continue;
        uint64_t d0 = du / d1;
        for (uint64_t b1 = 1; d1 * b1 * b1 <= mcap; ++b1) {
            uint64_t m = d1 * b1 * b1;
            uint64_t db = d1 * b1;
            for (int64_t x1 = -static_cast<int64_t>(mcap); x1 <= static_cast<int64_t>(mcap); ++x1) {
                uint64_t ax1 = static_cast<uint64_t>(x1 < 0 ? -x1 : x1);
                if (gcd_u64(ax1, db) != 1) continue;
                i128 t = descent_rhs(A, B, x1, m);
                if (t < 1) continue;
                if (t % static_cast<i128>(d0)) continue;
                i128 y2 = t / static_cast<i128>(d0);
                if (y2 > static_cast<i128>(UINT64_MAX)) continue;
                uint64_t y2u = static_cast<uint64_t>(y2);
                uint64_t y = static_cast<uint64_t>(std::sqrt(static_cast<double>(y2u)));
                while (y > 0 && static_cast<i128>(y) * y > static_cast<i128>(y2u)) --y;
                while (static_cast<i128>(y + 1) * (y + 1) <= static_cast<i128>(y2u)) ++y;
                if (y * y != y2u || y == 0) continue;
                if (gcd_u64(d0, d1) != 1) continue;
                mpz_class x = mpz_class(d1) * b1 * x1;
                mpz_class z = mpz_class(d1) * d1 * mpz_class(b1) * b1 * b1;
                TwistPoint p{x, mpz_class(y), z};
                if (curve::is_torsion(tw, p)) continue;
                RawCandidate c{d1, b1, d0, y, x1, t};
                PointRecord rec = build_record(params, c, opts.n_iter, tw);
                if (rec.h_hat <= cap_log) hits.push_back(std::move(rec));
            }
        }
    }
    if (hits.empty()) return out;  // exceeds_cap
    std::sort(hits.begin(), hits.end(), [](const PointRecord& a, const PointRecord& b) {
        if (a.h_hat != b.h_hat) return a.h_hat < b.h_hat;
        return ExactSortKey::less(a, b);
    });
    out.status = EtaStatus::found;
    out.eta_log = hits.front().h_hat;
    out.witness = hits.front();
    out.lower_bound_slack = std::max(0.0, 0.125 * heights::log_mpz(d) - *out.eta_log);
    return out;
}

std::vector<FamilyRecord> minimal_family(const CurveParams& params, uint64_t d1_max,
                                         uint64_t x1_max, const SearchOptions& opts) {
    if (d1_max < 1 || x1_max < 1) throw ValidationError("minimal_family: bounds must be >= 1");
    curve::make_params(params.A, params.B);
    int64_t A = mpz_to_i64(params.A, "A");
    int64_t B = mpz_to_i64(params.B, "B");

    std::vector<std::vector<FamilyRecord>> slots(d1_max);
    parallel_items(opts.workers, d1_max, [&](int, uint64_t i) {
        uint64_t d1 = i + 1;
        auto& local = slots[i];
        if (!arith::is_squarefree_u64(d1)) return;
        for (uint64_t x1 = 1; x1 <= x1_max; ++x1) {
            if (gcd_u64(x1, d1) != 1) continue;
            i128 t = descent_rhs(A, B, static_cast<int64_t>(x1), d1);
            if (t < 1) continue;  // t <= 0 skipped
            if (t > static_cast<i128>(UINT64_MAX)) continue;
            uint64_t tu = static_cast<uint64_t>(t);
            // d = d1 t squarefree <=> d1, t both squarefree and coprime
            if (!arith::is_squarefree_u64(tu)) continue;
            if (gcd_u64(tu, d1) != 1) continue;
            mpz_class d = mpz_class(d1) * tu;
            Twist tw{params, d};
            FamilyRecord fr;
            fr.d = d;
            RawCandidate c{d1, 1, tu, 1, static_cast<int64_t>(x1), t};
            fr.record = build_record(params, c, opts.n_iter, tw);
            fr.eta_ratio = std::exp(fr.record.h_hat) / std::pow(mpz_get_d(d.get_mpz_t()), 0.125);
            local.push_back(std::move(fr));
        }
    });
    std::vector<FamilyRecord> out;
    for (auto& s : slots)
        for (auto& fr : s) out.push_back(std::move(fr));
    std::sort(out.begin(), out.end(), [](const FamilyRecord& a, const FamilyRecord& b) {
        if (int c = cmp(a.d, b.d); c != 0) return c < 0;
        return ExactSortKey::less(a.record, b.record);
    });
    return out;
}

FitResult fit_exponent(const std::vector<std::pair<double, double>>& series) {
    FitResult fit;
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < series.size(); ++i) {
        if (series[i].second > 0 && series[i].first > 0) {
            xs.push_back(std::log(series[i].first));
            ys.push_back(std::log(series[i].second));
        } else {
            fit.dropped.push_back(i);
        }
    }
    fit.n_used = static_cast<int>(xs.size());
    if (fit.n_used < 3)
        throw DomainError("fit_exponent: need at least 3 positive entries");
    double n = static_cast<double>(xs.size());
    double sx = std::accumulate(xs.begin(), xs.end(), 0.0);
    double sy = std::accumulate(ys.begin(), ys.end(), 0.0);
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    fit.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    fit.intercept = (sy - fit.slope * sx) / n;
    double ss = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        double r = ys[i] - (fit.slope * xs[i] + fit.intercept);
        ss += r * r;
    }
    fit.residual = std::sqrt(ss / n);
    return fit;
}

}  // namespace lowtwist::search
