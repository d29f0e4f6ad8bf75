#include "lowtwist/pell.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include <mpfr.h>

#include "lowtwist/arith.hpp"
#include "lowtwist/parallel.hpp"

namespace lowtwist::pell {

namespace {

uint64_t isqrt_u64(uint64_t n) {
    uint64_t r = static_cast<uint64_t>(std::sqrt(static_cast<double>(n)));
    while (r > 0 && r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    return r;
}

// minimal (x, y), y >= 1, with x^2 - m y^2 = +-1, by the classical continued
// fraction of sqrt(m); the first Q = 1 return ends the period and lands on
// the fundamental solution, of norm (-1)^period.
struct PellPM1 {
    mpz_class x, y;
    int norm;
};

PellPM1 pell_min_pm1(uint64_t m, std::size_t digit_budget, double* log_from_cf) {
    uint64_t a0 = isqrt_u64(m);
    if (a0 * a0 == m) throw DomainError("pell: radicand is a perfect square");
    uint64_t P = 0, Q = 1, a = a0;
    mpz_class pm1 = 1, p0 = a0, qm1 = 0, q0 = 1;
    const double sq = std::sqrt(static_cast<double>(m));
    double logsum = 0.0;
    int i = 0;
    while (true) {
        ++i;
        P = a * Q - P;
        Q = (m - P * P) / Q;
        a = (a0 + P) / Q;
        // complete quotient alpha_i = (P + sqrt(m)) / Q; log eps accumulates
        logsum += std::log((static_cast<double>(P) + sq) / static_cast<double>(Q));
        if (Q == 1) {
            int norm = (i % 2 == 0) ? 1 : -1;
            if (log_from_cf) *log_from_cf = logsum;
            return {p0, q0, norm};
        }
        mpz_class p1 = a * p0 + pm1;
        mpz_class q1 = a * q0 + qm1;
        pm1 = p0;
        p0 = p1;
        qm1 = q0;
        q0 = q1;
        if (mpz_sizeinbase(p0.get_mpz_t(), 10) > digit_budget)
            throw ResourceError("pell: unit digit budget exceeded", logsum, true);
    }
}

double log_unit(uint64_t D, const mpz_class& t, const mpz_class& u) {
    // log((t + u sqrt(D)) / 2) without forming the sum: both terms positive,
    // so log t + log1p(u sqrt(D)/t) loses nothing to cancellation.
    signed long et, eu;
    double mt = mpz_get_d_2exp(&et, t.get_mpz_t());
    double mu = mpz_get_d_2exp(&eu, u.get_mpz_t());
    double log_t = std::log(mt) + static_cast<double>(et) * M_LN2;
    double log_us = std::log(mu) + static_cast<double>(eu) * M_LN2 +
                    0.5 * std::log(static_cast<double>(D));
    double r = std::exp(log_us - log_t);
    return log_t + std::log1p(r) - M_LN2;
}

}  // namespace

bool is_fundamental_discriminant(const mpz_class& D) {
    if (D <= 1) return false;
    if (!mpz_fits_ulong_p(D.get_mpz_t())) throw RangeError("pell: D outside the supported range");
    unsigned long d = mpz_get_ui(D.get_mpz_t());
    if (d % 4 == 1) return arith::is_squarefree_u64(d);
    if (d % 4 == 0) {
        unsigned long m = d / 4;
        return (m % 4 == 2 || m % 4 == 3) && arith::is_squarefree_u64(m);
    }
    return false;
}

FundamentalUnit fundamental_unit(uint64_t D, const UnitOptions& opts) {
    if (!is_fundamental_discriminant(mpz_class(static_cast<unsigned long>(D))))
        throw DomainError("fundamental_unit: D is not a fundamental discriminant");

    FundamentalUnit out;
    if (D % 4 == 0) {
        auto s = pell_min_pm1(D / 4, opts.digit_budget, nullptr);
        out.t = 2 * s.x;
        out.u = s.y;
        out.norm = s.norm;
    } else {
        auto s = pell_min_pm1(D, opts.digit_budget, nullptr);
        // check for the half-integer unit eps with eps^3 = x + y sqrt(D):
        // traces give 2x = t^3 - 3 N t with N = N(eps) = norm of the cube
        mpz_class two_x = 2 * s.x;
        mpz_class tc;
        mpz_root(tc.get_mpz_t(), two_x.get_mpz_t(), 3);
        bool half_found = false;
        for (mpz_class t = tc - 2; t <= tc + 2; ++t) {
            if (t < 1 || mpz_even_p(t.get_mpz_t())) continue;
            if (t * t * t - 3 * s.norm * t != two_x) continue;
            mpz_class u2 = t * t - 4 * s.norm;
            if (!mpz_divisible_ui_p(u2.get_mpz_t(), D)) continue;
            u2 /= static_cast<unsigned long>(D);
            mpz_class u;
            if (!mpz_perfect_square_p(u2.get_mpz_t())) continue;
            mpz_sqrt(u.get_mpz_t(), u2.get_mpz_t());
            if (mpz_even_p(u.get_mpz_t())) continue;
            out.t = t;
            out.u = u;
            out.norm = s.norm;
            half_found = true;
            break;
        }
        if (!half_found) {
            out.t = 2 * s.x;
            out.u = 2 * s.y;
            out.norm = s.norm;
        }
    }
    // Pell identity, exact
    mpz_class lhs = out.t * out.t - mpz_class(static_cast<unsigned long>(D)) * out.u * out.u;
    if (lhs != 4 * out.norm)
        throw InternalConsistencyError("fundamental_unit: t^2 - D u^2 != 4 N");
    out.log_eps = log_unit(D, out.t, out.u);
    return out;
}

namespace {

// chi_D(a) for a = 0..D-1 via complete multiplicativity over a smallest-
// prime-factor sieve; kronecker is only evaluated at primes.
std::vector<int8_t> character_table(uint64_t D) {
    std::vector<uint32_t> spf(D, 0);
    for (uint32_t i = 2; i < D; ++i) {
        if (spf[i]) continue;
        for (uint64_t j = i; j < D; j += i)
            if (!spf[j]) spf[j] = i;
    }
    std::vector<int8_t> chi(D, 0);
    if (D > 1) chi[1] = 1;
    mpz_class Dz(static_cast<unsigned long>(D));
    for (uint32_t a = 2; a < D; ++a) {
        if (spf[a] == a) {
            chi[a] = static_cast<int8_t>(arith::kronecker(Dz, mpz_class(a)));
        } else {
            chi[a] = static_cast<int8_t>(chi[spf[a]] * chi[a / spf[a]]);
        }
    }
    return chi;
}

constexpr long double kPiL = 3.141592653589793238462643383279502884L;

// -sum chi(a) log sin(pi a / D) at long double precision.
long double character_log_sin_sum(uint64_t D, const std::vector<int8_t>& chi) {
    long double s = 0.0L;
    const long double pi_over = kPiL / static_cast<long double>(D);
    for (uint64_t a = 1; a < D; ++a) {
        if (!chi[a]) continue;
        long double term = logl(sinl(pi_over * static_cast<long double>(a)));
        s -= static_cast<long double>(chi[a]) * term;
    }
    return s;
}

// same sum with mpfr at the given precision
double character_log_sin_sum_mpfr(uint64_t D, const std::vector<int8_t>& chi, mpfr_prec_t prec) {
    mpfr_t sum, term, pi, x;
    mpfr_inits2(prec, sum, term, pi, x, static_cast<mpfr_ptr>(nullptr));
    mpfr_set_zero(sum, 1);
    mpfr_const_pi(pi, MPFR_RNDN);
    for (uint64_t a = 1; a < D; ++a) {
        if (!chi[a]) continue;
        mpfr_mul_ui(x, pi, a, MPFR_RNDN);
        mpfr_div_ui(x, x, D, MPFR_RNDN);
        mpfr_sin(x, x, MPFR_RNDN);
        mpfr_log(term, x, MPFR_RNDN);
        if (chi[a] > 0)
            mpfr_sub(sum, sum, term, MPFR_RNDN);
        else
            mpfr_add(sum, sum, term, MPFR_RNDN);
    }
    double out = mpfr_get_d(sum, MPFR_RNDN);
    mpfr_clears(sum, term, pi, x, static_cast<mpfr_ptr>(nullptr));
    return out;
}

}  // namespace

uint32_t class_number(uint64_t D) {
    if (!is_fundamental_discriminant(mpz_class(static_cast<unsigned long>(D))))
        throw DomainError("class_number: D is not a fundamental discriminant");
    FundamentalUnit eps = fundamental_unit(D);
    auto chi = character_table(D);

    double sum = static_cast<double>(character_log_sin_sum(D, chi));
    for (int attempt = 0;; ++attempt) {
        double h = sum / (2.0 * eps.log_eps);
        double slack = std::fabs(h - std::round(h));
        if (slack < 0.05 && h > 0.5)
            return static_cast<uint32_t>(std::llround(h));
        if (attempt == 0)
            sum = character_log_sin_sum_mpfr(D, chi, 128);
        else if (attempt == 1)
            sum = character_log_sin_sum_mpfr(D, chi, 256);
        else
            throw PrecisionError("class_number: rounding slack >= 0.05 at max precision");
    }
}

PellData pell_data(uint64_t D) {
    FundamentalUnit eps = fundamental_unit(D);
    PellData out;
    out.D = D;
    out.t = eps.t;
    out.u = eps.u;
    out.log_eps = eps.log_eps;
    out.h = class_number(D);
    return out;
}

std::vector<uint64_t> fundamental_discriminants(uint64_t X) {
    std::vector<uint64_t> out;
    if (X < 5) return out;
    auto sf = arith::squarefree_sieve(X);
    for (uint64_t d = 5; d <= X; ++d) {
        if (d % 4 == 1 && sf[d]) out.push_back(d);
        else if (d % 4 == 0) {
            uint64_t m = d / 4;
            if ((m % 4 == 2 || m % 4 == 3) && sf[m]) out.push_back(d);
        }
    }
    return out;
}

SiegelResult siegel_average(uint64_t X, const PellRunOptions& opts) {
    if (X == 0) throw DomainError("siegel_average: X must be >= 1");
    SiegelResult out;
    out.X = X;
    auto ds = fundamental_discriminants(X);
    out.n_discriminants = ds.size();
    // per-D values land in fixed slots; the final sum is sequential, so the
    // result does not depend on the worker count
    std::vector<double> vals(ds.size(), 0.0);
    parallel_items(opts.workers, ds.size(), [&](int, uint64_t i) {
        PellData pd = pell_data(ds[i]);
        vals[i] = static_cast<double>(pd.h) * pd.log_eps;
    });
    double s = 0.0;
    for (double v : vals) s += v;
    out.sum = s;
    out.ratio = s / std::pow(static_cast<double>(X), 1.5);
    return out;
}

ConjAResult conjA_frequency(uint64_t X, double eps, const PellRunOptions& opts) {
    if (X == 0) throw DomainError("conjA_frequency: X must be >= 1");
    ConjAResult out;
    out.X = X;
    out.eps = eps;
    auto ds = fundamental_discriminants(X);
    if (ds.empty()) {
        out.fraction = 0.0;
        return out;
    }
    std::vector<uint8_t> exceed(ds.size(), 0);
    parallel_items(opts.workers, ds.size(), [&](int, uint64_t i) {
        FundamentalUnit u = fundamental_unit(ds[i]);
        double threshold = std::pow(static_cast<double>(ds[i]), 0.5 - eps);
        exceed[i] = u.log_eps > threshold ? 1 : 0;
    });
    uint64_t total = 0;
    for (uint64_t lo = 4; lo < X; lo *= 2) {
        uint64_t hi = std::min(X, lo * 2);
        ConjABlock blk{lo, hi, 0, 0};
        for (size_t i = 0; i < ds.size(); ++i) {
            if (ds[i] > lo && ds[i] <= hi) {
                ++blk.n;
                blk.exceed += exceed[i];
            }
        }
        if (blk.n) out.blocks.push_back(blk);
        if (hi == X) break;
    }
    for (uint8_t e : exceed) total += e;
    out.fraction = static_cast<double>(total) / static_cast<double>(ds.size());
    return out;
}

}  // namespace lowtwist::pell
