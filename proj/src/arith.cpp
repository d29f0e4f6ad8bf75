#include "lowtwist/arith.hpp"

#include <algorithm>
#include <cstdint>
#include <map>

namespace lowtwist::arith {

namespace {

constexpr uint32_t kSieveLimit = 1u << 20;

std::vector<uint32_t> build_small_primes() {
    std::vector<bool> composite(kSieveLimit, false);
    std::vector<uint32_t> primes;
    for (uint32_t p = 2; p < kSieveLimit; ++p) {
        if (composite[p]) continue;
        primes.push_back(p);
        for (uint64_t m = uint64_t(p) * p; m < kSieveLimit; m += p)
            composite[m] = true;
    }
    return primes;
}

uint64_t mulmod_u64(uint64_t a, uint64_t b, uint64_t m) {
    return static_cast<uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

uint64_t powmod_u64(uint64_t a, uint64_t e, uint64_t m) {
    uint64_t r = 1;
    a %= m;
    while (e) {
        if (e & 1) r = mulmod_u64(r, a, m);
        a = mulmod_u64(a, a, m);
        e >>= 1;
    }
    return r;
}

uint64_t gcd_u64(uint64_t a, uint64_t b) {
    while (b) {
        uint64_t t = a % b;
        a = b;
        b = t;
    }
    return a;
}

// Brent's variant of Pollard rho; n must be odd composite, not a prime power
// caught by the caller's primality test.
uint64_t rho_brent_u64(uint64_t n) {
    if (n % 2 == 0) return 2;
    uint64_t c = 1;
    while (true) {
        uint64_t x = 2, y = 2, d = 1, q = 1;
        uint64_t ys = y;
        const unsigned m = 128;
        unsigned r = 1;
        while (d == 1) {
            x = y;
            for (unsigned i = 0; i < r; ++i) y = (mulmod_u64(y, y, n) + c) % n;
            for (unsigned k = 0; k < r && d == 1; k += m) {
                ys = y;
                for (unsigned i = 0; i < std::min<unsigned>(m, r - k); ++i) {
                    y = (mulmod_u64(y, y, n) + c) % n;
                    q = mulmod_u64(q, x > y ? x - y : y - x, n);
                }
                d = gcd_u64(q, n);
            }
            r <<= 1;
        }
        if (d == n) {
            // backtrack step by step
            do {
                ys = (mulmod_u64(ys, ys, n) + c) % n;
                d = gcd_u64(x > ys ? x - ys : ys - x, n);
            } while (d == 1);
        }
        if (d != n) return d;
        ++c;  // rare cycle degeneracy; retry with a new increment
    }
}

// Deterministic Miller-Rabin witness set for the 64-bit range.
constexpr uint64_t kWitnesses64[] = {2, 325, 9375, 28178, 450775, 9780504, 1795265022};

bool miller_rabin_u64(uint64_t n, uint64_t a) {
    a %= n;
    if (a == 0) return true;
    uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    uint64_t x = powmod_u64(a, d, n);
    if (x == 1 || x == n - 1) return true;
    for (int i = 1; i < s; ++i) {
        x = mulmod_u64(x, x, n);
        if (x == n - 1) return true;
    }
    return false;
}

void factor_u64_into(uint64_t n, std::map<uint64_t, unsigned>& out) {
    if (n == 1) return;
    if (is_prime_u64(n)) {
        ++out[n];
        return;
    }
    uint64_t d = rho_brent_u64(n);
    factor_u64_into(d, out);
    factor_u64_into(n / d, out);
}

// --- mpz-side primality for the >64-bit tail of the supported range ---

// First 13 primes: deterministic below 3.317e24 (covers ~2^81).
constexpr unsigned kMpzMrBases[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41};

bool miller_rabin_mpz(const mpz_class& n, unsigned a) {
    mpz_class nm1 = n - 1, d = nm1;
    unsigned long s = mpz_scan1(d.get_mpz_t(), 0);
    mpz_fdiv_q_2exp(d.get_mpz_t(), d.get_mpz_t(), s);
    mpz_class x, base(a);
    mpz_powm(x.get_mpz_t(), base.get_mpz_t(), d.get_mpz_t(), n.get_mpz_t());
    if (x == 1 || x == nm1) return true;
    for (unsigned long i = 1; i < s; ++i) {
        x = (x * x) % n;
        if (x == nm1) return true;
    }
    return false;
}

// Strong Lucas test with Selfridge's parameter choice (method A).
bool strong_lucas_mpz(const mpz_class& n) {
    if (mpz_perfect_square_p(n.get_mpz_t())) return false;
    long d_abs = 5;
    int sign = 1;
    mpz_class D;
    while (true) {
        D = sign * d_abs;
        int j = mpz_jacobi(D.get_mpz_t(), n.get_mpz_t());
        if (j == -1) break;
        if (j == 0 && mpz_cmpabs(D.get_mpz_t(), n.get_mpz_t()) != 0) return false;
        d_abs += 2;
        sign = -sign;
    }
    mpz_class Q = (1 - D) / 4;
    mpz_class np1 = n + 1, dd = np1;
    unsigned long s = mpz_scan1(dd.get_mpz_t(), 0);
    mpz_fdiv_q_2exp(dd.get_mpz_t(), dd.get_mpz_t(), s);

    // Lucas sequences U_d, V_d via binary ladder on (U, V, Q^k).
    mpz_class U = 0, V = 2, Qk = 1;
    mpz_class U2, V2, t;
    long bits = mpz_sizeinbase(dd.get_mpz_t(), 2);
    for (long i = bits - 1; i >= 0; --i) {
        // (U, V) -> (U V, V^2 - 2 Q^k), k doubles
        U2 = (U * V) % n;
        V2 = (V * V - 2 * Qk) % n;
        Qk = (Qk * Qk) % n;
        U = U2;
        V = V2;
        if (mpz_tstbit(dd.get_mpz_t(), i)) {
            // advance index by one: U' = (P U + V)/2, V' = (D U + P V)/2, P = 1
            t = U + V;
            if (mpz_odd_p(t.get_mpz_t())) t += n;
            t /= 2;
            V2 = D * U + V;
            if (mpz_odd_p(V2.get_mpz_t())) V2 += n;
            V2 /= 2;
            U = t % n;
            V = V2 % n;
            Qk = (Qk * Q) % n;
        }
    }
    if (U % n == 0 || V % n == 0) return true;
    for (unsigned long r = 1; r < s; ++r) {
        V = (V * V - 2 * Qk) % n;
        if (V % n == 0) return true;
        Qk = (Qk * Qk) % n;
    }
    return false;
}

// 3.317e24: bound below which the 13-base Miller-Rabin set is a proof.
const mpz_class& mr_proof_bound() {
    static const mpz_class bound("3317044064679887385961980");
    return bound;
}

void factor_mpz_into(const mpz_class& n, std::map<mpz_class, unsigned>& out);

mpz_class rho_brent_mpz(const mpz_class& n) {
    gmp_randclass rng(gmp_randinit_default);
    rng.seed(0xb5297a4dUL);
    for (unsigned attempt = 0;; ++attempt) {
        mpz_class c = attempt + 1;
        mpz_class x = rng.get_z_range(n), y = x, d = 1, q = 1, ys;
        const unsigned m = 128;
        unsigned long r = 1;
        auto step = [&](mpz_class& v) { v = (v * v + c) % n; };
        while (d == 1) {
            x = y;
            for (unsigned long i = 0; i < r; ++i) step(y);
            for (unsigned long k = 0; k < r && d == 1; k += m) {
                ys = y;
                unsigned long lim = std::min<unsigned long>(m, r - k);
                for (unsigned long i = 0; i < lim; ++i) {
                    step(y);
                    q = (q * abs(x - y)) % n;
                }
                mpz_gcd(d.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
            }
            r <<= 1;
        }
        if (d == n) {
            do {
                step(ys);
                mpz_class diff = abs(x - ys);
                mpz_gcd(d.get_mpz_t(), diff.get_mpz_t(), n.get_mpz_t());
            } while (d == 1);
        }
        if (d != n) return d;
    }
}

void factor_mpz_into(const mpz_class& n, std::map<mpz_class, unsigned>& out) {
    if (n == 1) return;
    if (is_prime(n)) {
        ++out[n];
        return;
    }
    mpz_class d = rho_brent_mpz(n);
    factor_mpz_into(d, out);
    factor_mpz_into(n / d, out);
}

void check_range(const mpz_class& n) {
    if (n < 1)
        throw RangeError("arith: input must be >= 1");
    if (mpz_sizeinbase(n.get_mpz_t(), 2) > kMaxInputBits)
        throw RangeError("arith: input exceeds the 2^96 supported range");
}

}  // namespace

const std::vector<uint32_t>& small_primes() {
    static const std::vector<uint32_t> primes = build_small_primes();
    return primes;
}

bool is_prime_u64(uint64_t n) {
    if (n < 2) return false;
    for (uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n % p == 0) return n == p;
    }
    if (n < 41ull * 41ull) return true;
    for (uint64_t a : kWitnesses64)
        if (!miller_rabin_u64(n, a)) return false;
    return true;
}

std::vector<std::pair<uint64_t, unsigned>> factor_u64(uint64_t n) {
    std::map<uint64_t, unsigned> acc;
    const auto& primes = small_primes();
    for (uint32_t p : primes) {
        if (uint64_t(p) * p > n) break;
        while (n % p == 0) {
            n /= p;
            ++acc[p];
        }
    }
    if (n > 1) {
        if (n < uint64_t(kSieveLimit) * kSieveLimit)
            ++acc[n];  // below the table square, no prime factor was missed
        else
            factor_u64_into(n, acc);
    }
    return {acc.begin(), acc.end()};
}

std::pair<uint64_t, uint64_t> squarefree_split_u64(uint64_t n) {
    uint64_t s = 1, q = 1;
    for (auto [p, e] : factor_u64(n)) {
        if (e & 1) s *= p;
        for (unsigned i = 0; i < e / 2; ++i) q *= p;
    }
    return {s, q};
}

bool squarefree_split_capped(uint64_t n, uint64_t cap, uint64_t& s_out, uint64_t& q_out) {
    // s q^2 = n with s squarefree; gives up as soon as the squarefree part
    // provably exceeds cap (every odd-exponent prime found so far divides s,
    // so the partial product is a lower bound). The hot enumeration loops
    // discard almost every candidate here after a handful of divisions.
    uint64_t s = 1, q = 1, m = n;
    const auto& primes = small_primes();
    for (uint32_t p : primes) {
        if (uint64_t(p) * p > m) break;
        if (m % p == 0) {
            unsigned e = 0;
            do {
                m /= p;
                ++e;
            } while (m % p == 0);
            if (e & 1) s *= p;
            for (unsigned i = 0; i < e / 2; ++i) q *= p;
            if (s > cap) return false;
        }
    }
    if (m > 1) {
        if (m < uint64_t(kSieveLimit) * kSieveLimit) {
            s *= m;  // prime: all factors up to sqrt were removed
        } else {
            for (auto [p, e] : factor_u64(m)) {
                if (e & 1) s *= p;
                for (unsigned i = 0; i < e / 2; ++i) q *= p;
            }
        }
        if (s > cap) return false;
    }
    s_out = s;
    q_out = q;
    return true;
}

bool is_squarefree_u64(uint64_t n) {
    for (auto [p, e] : factor_u64(n))
        if (e > 1) return false;
    return true;
}

bool is_prime(const mpz_class& n) {
    if (n < 2) return false;
    if (mpz_fits_ulong_p(n.get_mpz_t())) return is_prime_u64(mpz_get_ui(n.get_mpz_t()));
    for (unsigned a : kMpzMrBases)
        if (!miller_rabin_mpz(n, a)) return false;
    if (n < mr_proof_bound()) return true;
    return strong_lucas_mpz(n);
}

Factorization factor(const mpz_class& n) {
    check_range(n);
    Factorization out;
    out.value = n;
    if (n == 1) return out;

    if (mpz_fits_ulong_p(n.get_mpz_t())) {
        for (auto [p, e] : factor_u64(mpz_get_ui(n.get_mpz_t())))
            out.factors.push_back({mpz_class(static_cast<unsigned long>(p)), e});
        return out;
    }

    mpz_class rem = n;
    std::map<mpz_class, unsigned> acc;
    for (uint32_t p : small_primes()) {
        if (mpz_divisible_ui_p(rem.get_mpz_t(), p)) {
            unsigned e = 0;
            do {
                mpz_divexact_ui(rem.get_mpz_t(), rem.get_mpz_t(), p);
                ++e;
            } while (mpz_divisible_ui_p(rem.get_mpz_t(), p));
            acc[mpz_class(p)] = e;
        }
        if (mpz_fits_ulong_p(rem.get_mpz_t())) break;
    }
    if (rem > 1) {
        if (mpz_fits_ulong_p(rem.get_mpz_t())) {
            for (auto [p, e] : factor_u64(mpz_get_ui(rem.get_mpz_t())))
                acc[mpz_class(static_cast<unsigned long>(p))] += e;
        } else {
            factor_mpz_into(rem, acc);
        }
    }
    for (auto& [p, e] : acc) out.factors.push_back({p, e});
    return out;
}

SquarefreeSplit squarefree_split(const mpz_class& n) {
    Factorization f = factor(n);
    SquarefreeSplit out{1, 1};
    for (const auto& pp : f.factors) {
        if (pp.exponent & 1) out.squarefree *= pp.prime;
        for (unsigned i = 0; i < pp.exponent / 2; ++i) out.root *= pp.prime;
    }
    return out;
}

bool is_squarefree(const mpz_class& n) {
    check_range(n);
    if (mpz_fits_ulong_p(n.get_mpz_t())) return is_squarefree_u64(mpz_get_ui(n.get_mpz_t()));
    for (const auto& pp : factor(n).factors)
        if (pp.exponent > 1) return false;
    return true;
}

int kronecker(const mpz_class& a, const mpz_class& n) {
    if (n == 0)
        throw DomainError("kronecker: modulus must be nonzero");
    return mpz_kronecker(a.get_mpz_t(), n.get_mpz_t());
}

std::vector<bool> squarefree_sieve(uint64_t limit) {
    std::vector<bool> flags(limit + 1, true);
    flags[0] = false;
    for (uint64_t p = 2; p * p <= limit; ++p) {
        uint64_t pp = p * p;
        for (uint64_t m = pp; m <= limit; m += pp) flags[m] = false;
    }
    return flags;
}

}  // namespace lowtwist::arith
