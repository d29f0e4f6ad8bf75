#ifndef LOWTWIST_ARITH_HPP
#define LOWTWIST_ARITH_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "lowtwist/errors.hpp"

namespace lowtwist::arith {

// Supported input range for the factorization-backed operations: 1 <= n < 2^96.
inline constexpr unsigned kMaxInputBits = 96;

struct PrimePower {
    mpz_class prime;
    unsigned exponent = 0;
    friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

// value = prod prime^exponent, primes strictly increasing, all certified prime.
struct Factorization {
    mpz_class value;
    std::vector<PrimePower> factors;
};

// n = squarefree * root^2 with squarefree ... squarefree.
struct SquarefreeSplit {
    mpz_class squarefree;
    mpz_class root;
};

Factorization factor(const mpz_class& n);
SquarefreeSplit squarefree_split(const mpz_class& n);
bool is_squarefree(const mpz_class& n);

// Kronecker symbol (a|n), fully multiplicative in both arguments. n == 0 is
// rejected rather than given the gcd-style extension.
int kronecker(const mpz_class& a, const mpz_class& n);

// Primality: deterministic Miller-Rabin base set below 3.3e24, strengthened
// with a strong Lucas test above (BPSW; no counterexample known).
bool is_prime(const mpz_class& n);

// Shared read-only prime table (primes < 2^20), built on first use.
const std::vector<uint32_t>& small_primes();

// flags[i] == true iff i is squarefree, for 0 <= i <= limit.
std::vector<bool> squarefree_sieve(uint64_t limit);

// uint64 fast paths for the hot enumeration loops.
bool is_prime_u64(uint64_t n);
std::vector<std::pair<uint64_t, unsigned>> factor_u64(uint64_t n);
std::pair<uint64_t, uint64_t> squarefree_split_u64(uint64_t n);  // (s, q)
bool is_squarefree_u64(uint64_t n);
// split with an early bailout once the squarefree part must exceed cap
bool squarefree_split_capped(uint64_t n, uint64_t cap, uint64_t& s_out, uint64_t& q_out);

}

#endif
