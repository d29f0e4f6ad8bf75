#include "lowtwist/heights.hpp"

#include <cmath>
#include <cstdint>
#include <vector>

#include "lowtwist/arith.hpp"

namespace lowtwist::heights {

double log_mpz(const mpz_class& n) {
    signed long exp;
    double mant = mpz_get_d_2exp(&exp, n.get_mpz_t());
    return std::log(std::fabs(mant)) + static_cast<double>(exp) * M_LN2;
}

HeightValue naive_height_x(const curve::TwistPoint& p) {
    if (p.is_infinity()) return {0.0, 0.0};
    mpz_class m = abs(p.x) > p.z ? abs(p.x) : p.z;
    return {log_mpz(m), 0.0};
}

namespace {

// Prime support of 2(4a^3 + 27b^2) for a = A d^2, b = B d^3. For reduced p/q
// the duplication image
//   num = p^4 - 2 a p^2 q^2 - 8 b p q^3 + a^2 q^4
//   den = 4 q (p^3 + a p q^2 + b q^3)
// has gcd dividing the resultant of the two homogeneous forms, whose prime
// support lies in these primes; stripping them keeps the fraction reduced
// without a full-width gcd. Since 4a^3 + 27b^2 = d^6 (4A^3 + 27B^2), the
// support is that of 2 (4A^3 + 27B^2) together with the primes of d.
std::vector<mpz_class> resultant_primes(const curve::Twist& t) {
    mpz_class r = 2 * curve::discriminant_quantity(t.params);
    std::vector<mpz_class> out;
    for (const auto& pp : arith::factor(abs(r)).factors) out.push_back(pp.prime);
    for (const auto& pp : arith::factor(t.d).factors) {
        bool seen = false;
        for (const auto& q : out)
            if (q == pp.prime) seen = true;
        if (!seen) out.push_back(pp.prime);
    }
    return out;
}

}  // namespace

HeightValue canonical_height(const curve::Twist& t, const curve::TwistPoint& p,
                             const CanonicalHeightOptions& opts) {
    if (p.is_infinity()) return {0.0, 0.0};
    if (!opts.skip_torsion_check && curve::is_torsion(t, p)) return {0.0, 0.0};

    mpz_class a = t.params.A * t.d * t.d;
    mpz_class b = t.params.B * t.d * t.d * t.d;
    const auto rp = resultant_primes(t);

    // X0 = d x / z in lowest terms
    mpz_class num = t.d * p.x, den = p.z, g;
    mpz_gcd(g.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    num /= g;
    den /= g;

    const double h0 = naive_height_x(p).value;
    double est = 0.0;
    mpz_class n2, d2;
    for (int i = 0; i < opts.n_iter; ++i) {
        if (mpz_sizeinbase(num.get_mpz_t(), 10) > opts.digit_budget)
            throw ResourceError("canonical_height: digit budget exceeded", est, true);
        n2 = num * num * num * num - 2 * a * num * num * den * den -
             8 * b * num * den * den * den + a * a * den * den * den * den;
        d2 = 4 * den * (num * num * num + a * num * den * den + b * den * den * den);
        if (d2 == 0) return {0.0, 0.0};  // hit 2-torsion: torsion orbit
        for (const auto& pr : rp) {
            while (mpz_divisible_p(n2.get_mpz_t(), pr.get_mpz_t()) &&
                   mpz_divisible_p(d2.get_mpz_t(), pr.get_mpz_t())) {
                mpz_divexact(n2.get_mpz_t(), n2.get_mpz_t(), pr.get_mpz_t());
                mpz_divexact(d2.get_mpz_t(), d2.get_mpz_t(), pr.get_mpz_t());
            }
        }
        if (d2 < 0) {
            n2 = -n2;
            d2 = -d2;
        }
        num = n2;
        den = d2;
        est = log_mpz(abs(num) > den ? abs(num) : den) / std::pow(4.0, i + 1);
    }
    double tail_c = std::fabs(est - 0.5 * h0) + 1.0;
    return {est, tail_c / std::pow(4.0, opts.n_iter)};
}

GapReport height_gap_scan(
    const std::vector<std::pair<curve::Twist, std::vector<curve::TwistPoint>>>& samples,
    const CanonicalHeightOptions& opts) {
    GapReport rep;
    bool first = true;
    for (const auto& [twist, pts] : samples) {
        for (const auto& p : pts) {
            double gap = canonical_height(twist, p, opts).value - 0.5 * naive_height_x(p).value;
            if (first) {
                rep.max_gap = rep.min_gap = gap;
                first = false;
            } else {
                rep.max_gap = std::max(rep.max_gap, gap);
                rep.min_gap = std::min(rep.min_gap, gap);
            }
            ++rep.sample_size;
        }
    }
    if (rep.sample_size == 0)
        throw DomainError("height_gap_scan: empty sample");
    return rep;
}

}  // namespace lowtwist::heights
