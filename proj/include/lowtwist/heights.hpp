#ifndef LOWTWIST_HEIGHTS_HPP
#define LOWTWIST_HEIGHTS_HPP

#include <cstddef>
#include <utility>
#include <vector>

#include "lowtwist/curve.hpp"

namespace lowtwist::heights {

// Natural-log scale height with an explicit error bound.
struct HeightValue {
    double value = 0.0;
    double abs_error = 0.0;
};

struct CanonicalHeightOptions {
    int n_iter = 8;
    // cap on decimal digits of the iterated coordinates; exceeding it raises
    // ResourceError carrying the partial estimate
    std::size_t digit_budget = 2'000'000;
    bool skip_torsion_check = false;  // callers that already know P is non-torsion
};

// h_x(x:y:z) = log max(|x|, z) on the normalized primitive representative,
// 0 at infinity. Exact up to floating rounding.
HeightValue naive_height_x(const curve::TwistPoint& p);

// Canonical height by the duplication limit on the standard model,
//   hhat(P) = lim 4^{-n} h(x(2^n P)),
// with h the height of the x-coordinate in lowest terms. This is the
// PARI/GP normalization: hhat = h_x + O(1) and hhat(2P) = 4 hhat(P).
// Torsion points return exactly 0. The tail after n steps is reported as
// C * 4^{-n} with C the observed |hhat - h_x/2| plus 1.
HeightValue canonical_height(const curve::Twist& t, const curve::TwistPoint& p,
                             const CanonicalHeightOptions& opts = {});

struct GapReport {
    double max_gap = 0.0;
    double min_gap = 0.0;
    std::size_t sample_size = 0;
};

// Spread of hhat - (1/2) h_x over a sample: the empirical view of the
// bounded-difference property linking the two heights.
GapReport height_gap_scan(
    const std::vector<std::pair<curve::Twist, std::vector<curve::TwistPoint>>>& samples,
    const CanonicalHeightOptions& opts = {});

// log of an mpz via mantissa + exponent; exact to double rounding.
double log_mpz(const mpz_class& n);

}

#endif
