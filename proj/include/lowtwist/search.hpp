#ifndef LOWTWIST_SEARCH_HPP
#define LOWTWIST_SEARCH_HPP

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "lowtwist/curve.hpp"
#include "lowtwist/descent.hpp"
#include "lowtwist/heights.hpp"

namespace lowtwist::search {

// Exactly one of alpha / H is set. H caps exp h_x absolutely; alpha caps the
// canonical height per twist at d^{1/8 + alpha} (threshold applied on the
// half-scale height, i.e. h_hat / 2 <= (1/8 + alpha) log d; see README on
// the height normalization).
struct SearchWindow {
    uint64_t X = 1;
    std::optional<double> alpha;
    std::optional<double> H;
};

struct PointRecord {
    mpz_class d;
    curve::TwistPoint point;
    double h_x = 0.0;
    double h_hat = 0.0;
    descent::GeneralDescentData descent;
};

struct SearchOptions {
    int workers = 1;
    // inclusion guard for the canonical-height window, on the half-scale
    // (h_hat/2) height; the loop bound is exp(2 (cap + gap_guard)). The
    // measured gap for the curves exercised here stays below 0.2.
    double gap_guard = 1.0;
    int n_iter = 8;
    // enumeration budget: max candidate triples, rounded to whole d1 blocks
    // so that resumption and worker count cannot change the cut
    uint64_t budget = UINT64_MAX;
    uint64_t resume_d1 = 1;  // first d1 block to process
};

struct EnumerationResult {
    std::vector<PointRecord> records;  // sorted by (d, max(|x|,z), x, y)
    bool complete = true;
    uint64_t resume_d1 = 0;  // next unprocessed d1 block when !complete
    uint64_t candidates = 0;
};

// All non-torsion points (one representative per +-pair, y >= 1) on squarefree
// twists d <= X inside the window, generated through the descent
// parametrization: triples (d1, b1, x1) with t = x1^3 + A x1 d1^2 b1^4
// + B d1^3 b1^6 >= 1, (d0, y) the squarefree split of t, gcd(x1, d1 b1) = 1,
// gcd(d0, d1) = 1.
EnumerationResult enumerate_low_points(const curve::CurveParams& params, const SearchWindow& w,
                                       const SearchOptions& opts = {});

// Eq-(7)-style count: non-torsion points with half-scale height below
// (1/8 + alpha) log d, both signs counted (factor 2).
uint64_t count_N_star(const curve::CurveParams& params, uint64_t X, double alpha,
                      const SearchOptions& opts = {});
// Eq-(6)-style count: number of distinct d with such a point. Always <= N*.
uint64_t count_N(const curve::CurveParams& params, uint64_t X, double alpha,
                 const SearchOptions& opts = {});

enum class EtaStatus { found, exceeds_cap, rank_zero_up_to_cap };

struct EtaResult {
    mpz_class d;
    EtaStatus status = EtaStatus::exceeds_cap;
    std::optional<double> eta_log;          // min h_hat (full-scale), iff found
    std::optional<PointRecord> witness;
    double cap_log = 0.0;
    double lower_bound_slack = 0.0;  // max(0, (1/8) log d - eta_log)
};

// Minimal canonical height over non-torsion points with h_hat <= cap_log,
// by exhausting the parametrized search space for the cap (with guard band).
EtaResult eta(const curve::CurveParams& params, const mpz_class& d, double cap_log,
              const SearchOptions& opts = {});

struct FamilyRecord {
    mpz_class d;
    PointRecord record;
    double eta_ratio = 0.0;  // exp(h_hat) / d^{1/8}
};

// The sharpness family: witnesses (d1 x1 : 1 : d1^2) with t = x1^3 + A x1 d1^2
// + B d1^3 >= 1 squarefree, gcd(x1, d1) = 1, d = d1 t squarefree.
std::vector<FamilyRecord> minimal_family(const curve::CurveParams& params, uint64_t d1_max,
                                         uint64_t x1_max, const SearchOptions& opts = {});

struct FitResult {
    double slope = 0.0;
    double intercept = 0.0;
    double residual = 0.0;  // RMS of log-log fit residuals
    int n_used = 0;
    std::vector<std::size_t> dropped;  // indices of non-positive entries
};

// Least squares of log(count) against log(X); entries with count <= 0 are
// dropped and recorded.
FitResult fit_exponent(const std::vector<std::pair<double, double>>& series);

}

#endif
