#ifndef LOWTWIST_PELL_HPP
#define LOWTWIST_PELL_HPP

#include <cstdint>
#include <vector>

#include <gmpxx.h>

#include "lowtwist/errors.hpp"

namespace lowtwist::pell {

// D > 1 and either D = 1 mod 4 squarefree, or D = 4m with m = 2,3 mod 4
// squarefree.
bool is_fundamental_discriminant(const mpz_class& D);

// eps_D = (t + u sqrt(D)) / 2, the smallest unit > 1 of the real quadratic
// order of discriminant D; t^2 - D u^2 = +-4 exactly.
struct FundamentalUnit {
    mpz_class t;
    mpz_class u;
    double log_eps = 0.0;  // error well below 1e-12
    int norm = 1;          // sign of t^2 - D u^2 over 4
};

struct UnitOptions {
    std::size_t digit_budget = 200'000;  // decimal digits of (t, u)
};

// Continued-fraction expansion of sqrt(radicand) on exact integer triples;
// for odd D the half-integer unit is recovered from the cube-root relation
// 2x = t^3 - 3 N(eps) t between the orders Z[sqrt(D)] and O_D.
FundamentalUnit fundamental_unit(uint64_t D, const UnitOptions& opts = {});

// Dirichlet formula: h = -sum_{a<D} chi_D(a) log sin(pi a / D) / (2 log eps_D),
// chi_D = kronecker(D, .); the sum is exact and finite, the rounding slack is
// asserted < 0.05 and the precision is raised on failure.
uint32_t class_number(uint64_t D);

struct PellData {
    uint64_t D = 0;
    mpz_class t;
    mpz_class u;
    double log_eps = 0.0;
    uint32_t h = 0;
};

PellData pell_data(uint64_t D);

struct PellRunOptions {
    int workers = 1;
};

struct SiegelResult {
    uint64_t X = 0;
    double sum = 0.0;    // sum of h(D) log eps_D over fundamental D <= X
    double ratio = 0.0;  // sum / X^{3/2}
    uint64_t n_discriminants = 0;
};

SiegelResult siegel_average(uint64_t X, const PellRunOptions& opts = {});

struct ConjABlock {
    uint64_t lo = 0, hi = 0;   // dyadic block (lo, hi]
    uint64_t n = 0, exceed = 0;
};

struct ConjAResult {
    uint64_t X = 0;
    double eps = 0.0;
    double fraction = 0.0;  // fraction of fundamental D <= X with log eps_D > D^{1/2-eps}
    std::vector<ConjABlock> blocks;
};

ConjAResult conjA_frequency(uint64_t X, double eps, const PellRunOptions& opts = {});

// All fundamental discriminants <= X, ascending.
std::vector<uint64_t> fundamental_discriminants(uint64_t X);

}

#endif
