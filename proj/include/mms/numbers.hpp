#pragma once
// Shared number-theory helpers: checked integer powers, primality and
// smoothness tests, prime sieves, and certified rational enclosures of
// natural logarithms (used by the k-th power threshold formula).

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace mms {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
    return splitmix64(splitmix64(a) ^ b);
}

// v^e without silent overflow; throws std::overflow_error instead.
inline std::int64_t checked_pow_i64(std::int64_t v, unsigned e) {
    std::int64_t result = 1;
    for (unsigned i = 0; i < e; ++i) {
        __int128 wide = static_cast<__int128>(result) * v;
        if (wide > INT64_MAX || wide < INT64_MIN)
            throw std::overflow_error("integer power overflows 64 bits");
        result = static_cast<std::int64_t>(wide);
    }
    return result;
}

inline mpz_class pow_mpz(const mpz_class& v, unsigned e) {
    mpz_class result;
    mpz_pow_ui(result.get_mpz_t(), v.get_mpz_t(), e);
    return result;
}

// Trial division; fine for the desk-scale values this library handles.
inline bool is_prime_i64(std::int64_t n) {
    if (n < 2) return false;
    if (n < 4) return true;
    if (n % 2 == 0) return false;
    for (std::int64_t d = 3; d * d <= n; d += 2)
        if (n % d == 0) return false;
    return true;
}

inline std::vector<std::int64_t> primes_up_to(std::int64_t n) {
    std::vector<std::int64_t> primes;
    if (n < 2) return primes;
    std::vector<bool> composite(static_cast<std::size_t>(n) + 1, false);
    for (std::int64_t p = 2; p <= n; ++p) {
        if (composite[static_cast<std::size_t>(p)]) continue;
        primes.push_back(p);
        for (std::int64_t q = p * p; q <= n; q += p)
            composite[static_cast<std::size_t>(q)] = true;
    }
    return primes;
}

// Every prime factor of |v| is <= q.  Zero is not smooth: every prime
// divides 0, so the defining implication fails for any finite bound.
inline bool is_smooth_i64(std::int64_t v, std::int64_t q) {
    if (q < 2) throw std::domain_error("smoothness bound must be >= 2");
    if (v == 0) return false;
    std::uint64_t n = v < 0 ? static_cast<std::uint64_t>(-(v + 1)) + 1
                            : static_cast<std::uint64_t>(v);
    while (n % 2 == 0) n /= 2;
    if (q >= 3) {
        for (std::uint64_t d = 3; d * d <= n && d <= static_cast<std::uint64_t>(q); d += 2)
            while (n % d == 0) n /= d;
    }
    // Whatever remains is 1 or a prime factor > sqrt cutoff.
    return n == 1 || n <= static_cast<std::uint64_t>(q);
}

// ---------------------------------------------------------------------------
// Certified natural logarithm enclosures.
//
// ln k is evaluated as a*ln 2 + 2*atanh((m-1)/(m+1)) with m = k/2^a in [1,2),
// so both atanh arguments lie in [0,1/3] and the series
//     atanh(t) = sum_{n>=0} t^(2n+1)/(2n+1)
// converges geometrically with an elementary tail bound
//     0 <= tail(T) <= t^(2T+1) / ((2T+1)(1-t^2)).
// All arithmetic is exact rational, so [lo,hi] genuinely encloses ln k.
// ---------------------------------------------------------------------------

struct RationalInterval {
    mpq_class lo;
    mpq_class hi;
};

inline RationalInterval atanh_interval(const mpq_class& t, int terms) {
    mpq_class sum = 0;
    mpq_class t2 = t * t;
    mpq_class power = t;
    for (int n = 0; n < terms; ++n) {
        sum += power / (2 * n + 1);
        power *= t2;
    }
    // power now equals t^(2*terms+1)
    mpq_class tail = power / ((2 * terms + 1) * (1 - t2));
    return {sum, sum + tail};
}

inline RationalInterval ln_interval(const mpz_class& k, int terms) {
    if (k < 1) throw std::domain_error("ln_interval requires k >= 1");
    unsigned long a = mpz_sizeinbase(k.get_mpz_t(), 2) - 1;  // floor(log2 k)
    mpz_class two_a = 1;
    mpz_mul_2exp(two_a.get_mpz_t(), two_a.get_mpz_t(), a);
    mpq_class m(k, two_a);
    m.canonicalize();
    RationalInterval ln2 = atanh_interval(mpq_class(1, 3), terms);
    RationalInterval lnm = atanh_interval((m - 1) / (m + 1), terms);
    return {2 * (static_cast<long>(a) * ln2.lo + lnm.lo),
            2 * (static_cast<long>(a) * ln2.hi + lnm.hi)};
}

inline mpz_class ceil_mpq(const mpq_class& q) {
    mpz_class result;
    mpz_cdiv_q(result.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return result;
}

// Smallest integer >= k*(ln k + addend), certified by interval refinement.
// The enclosed value is irrational for integer k >= 2, so the enclosure
// eventually separates it from every integer.
inline mpz_class certified_ceil_k_log(const mpz_class& k, const mpq_class& addend) {
    for (int terms = 8; terms <= 4096; terms *= 2) {
        RationalInterval ln = ln_interval(k, terms);
        mpz_class lo = ceil_mpq(mpq_class(k) * (ln.lo + addend));
        mpz_class hi = ceil_mpq(mpq_class(k) * (ln.hi + addend));
        if (lo == hi) return lo;
    }
    throw std::runtime_error("log enclosure failed to certify a ceiling");
}

}  // namespace mms
