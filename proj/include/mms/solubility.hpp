#pragma once
// Evidence for the local solubility side conditions: searches for
// nonsingular real and p-adic solutions of a diagonal system.
//
// A p-adic witness here is an integer point x with
//     C x^{o k} == 0  (mod p^(2 tau + 1))  for all k in E,
// where tau is the p-valuation of the gcd of the maximal minors of the
// stacked Jacobian (rows k*c_{i,j}*x_j^(k-1)).  By the multivariate Hensel
// lemma such a point lifts to a genuine p-adic solution with Jacobian of
// full rank r*|E|.  When p divides no exponent, tau = 0 candidates reduce
// to the classical test: congruence mod p plus full Jacobian rank mod p.
// When p divides some exponent (p = 2 with squares present, say), the
// Jacobian rows for that exponent vanish mod p and only the valuation
// criterion can certify, so the search works modulo p^(2*max_val+1).
//
// Real witnesses are evidence only: exact integer solutions with full-rank
// Jacobian when a small box contains one, otherwise a Gauss-Newton descent
// reported with its residual and smallest Jacobian singular value.

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <vector>

#include <gmpxx.h>

#include "mms/counting.hpp"
#include "mms/diagonal_system.hpp"
#include "mms/errors.hpp"
#include "mms/int_matrix.hpp"
#include "mms/numbers.hpp"
#include "mms/rank.hpp"

namespace mms {

struct SolubilityOptions {
    std::uint64_t attempts = 100000;        // randomized candidates per prime
    std::uint64_t exhaustive_limit = 1000000;  // full residue scan when p^s below this
    std::uint64_t seed = 0;
};

struct PadicWitness {
    std::vector<mpz_class> point;  // integer representative
    unsigned tau = 0;
    mpz_class modulus;  // p^(2 tau + 1)
};

struct PadicResult {
    std::int64_t prime = 0;
    std::optional<PadicWitness> witness;
    bool search_exhaustive = false;  // the stated search space was fully scanned
};

struct RealWitness {
    std::vector<mpq_class> point;
    double residual = 0.0;
    double jacobian_sigma_min = 0.0;
    bool exact = false;  // integer point satisfying the system exactly
};

namespace detail {

inline unsigned valuation(mpz_class v, std::int64_t p) {
    unsigned count = 0;
    while (v % p == 0) {
        v /= p;
        ++count;
    }
    return count;
}

inline IntMatrix jacobian_at(const DiagonalSystem& sys, const std::vector<mpz_class>& x) {
    int r = sys.num_rows();
    int s = sys.num_vars();
    int ne = static_cast<int>(sys.exponents.size());
    IntMatrix j(r * ne, s);
    for (int e = 0; e < ne; ++e) {
        unsigned k = sys.exponents[static_cast<std::size_t>(e)];
        for (int i = 0; i < r; ++i)
            for (int col = 0; col < s; ++col)
                j.at(e * r + i, col) = static_cast<long>(k) * sys.coefficients.at(i, col) *
                                       pow_mpz(x[static_cast<std::size_t>(col)], k - 1);
    }
    return j;
}

inline std::vector<mpz_class> residuals_at(const DiagonalSystem& sys,
                                           const std::vector<mpz_class>& x) {
    int r = sys.num_rows();
    int s = sys.num_vars();
    std::vector<mpz_class> res;
    res.reserve(sys.exponents.size() * static_cast<std::size_t>(r));
    for (unsigned k : sys.exponents)
        for (int i = 0; i < r; ++i) {
            mpz_class sum = 0;
            for (int col = 0; col < s; ++col)
                sum += sys.coefficients.at(i, col) * pow_mpz(x[static_cast<std::size_t>(col)], k);
            res.push_back(sum);
        }
    return res;
}

inline bool congruent_zero(const std::vector<mpz_class>& values, const mpz_class& modulus) {
    for (const mpz_class& v : values)
        if (v % modulus != 0) return false;
    return true;
}

// Rank of an integer matrix reduced mod p (p < 2^31), by Gaussian
// elimination over the prime field.
inline int rank_mod_p(const IntMatrix& m, std::int64_t p) {
    int rows = m.rows(), cols = m.cols();
    std::vector<std::int64_t> a(static_cast<std::size_t>(rows) * cols);
    for (int i = 0; i < rows; ++i)
        for (int col = 0; col < cols; ++col) {
            mpz_class red = m.at(i, col) % p;
            if (red < 0) red += p;
            a[static_cast<std::size_t>(i) * cols + col] = red.get_si();
        }
    auto inv_mod = [&](std::int64_t v) {
        std::int64_t result = 1, base = v % p, e = p - 2;
        while (e > 0) {
            if (e & 1) result = result * base % p;
            base = base * base % p;
            e >>= 1;
        }
        return result;
    };
    int rank = 0;
    for (int col = 0; col < cols && rank < rows; ++col) {
        int pivot = -1;
        for (int i = rank; i < rows; ++i)
            if (a[static_cast<std::size_t>(i) * cols + col] != 0) { pivot = i; break; }
        if (pivot < 0) continue;
        if (pivot != rank)
            for (int t = col; t < cols; ++t)
                std::swap(a[static_cast<std::size_t>(pivot) * cols + t],
                          a[static_cast<std::size_t>(rank) * cols + t]);
        std::int64_t inv = inv_mod(a[static_cast<std::size_t>(rank) * cols + col]);
        for (int i = rank + 1; i < rows; ++i) {
            std::int64_t f = a[static_cast<std::size_t>(i) * cols + col] * inv % p;
            if (f == 0) continue;
            for (int t = col; t < cols; ++t)
                a[static_cast<std::size_t>(i) * cols + t] =
                    ((a[static_cast<std::size_t>(i) * cols + t] -
                      f * a[static_cast<std::size_t>(rank) * cols + t]) % p + p) % p;
        }
        ++rank;
    }
    return rank;
}

// p-valuation of the gcd of the maximal minors of an m x s integer matrix
// (m <= s), or nullopt when the rank over Q is below m.  Repeatedly pivots
// on a minimum-valuation entry; the pivot valuations sum to the answer.
inline std::optional<unsigned> min_minor_valuation(const IntMatrix& j, std::int64_t p) {
    int m = j.rows();
    int s = j.cols();
    if (m > s) return std::nullopt;
    std::vector<mpq_class> a(static_cast<std::size_t>(m) * s);
    for (int i = 0; i < m; ++i)
        for (int col = 0; col < s; ++col) a[static_cast<std::size_t>(i) * s + col] = j.at(i, col);
    auto vp = [&](const mpq_class& q) -> long {
        return static_cast<long>(valuation(q.get_num(), p)) -
               static_cast<long>(valuation(q.get_den(), p));
    };
    std::vector<bool> row_done(static_cast<std::size_t>(m), false);
    std::vector<bool> col_done(static_cast<std::size_t>(s), false);
    unsigned tau = 0;
    for (int step = 0; step < m; ++step) {
        int pi = -1, pj = -1;
        long best = 0;
        for (int i = 0; i < m; ++i) {
            if (row_done[static_cast<std::size_t>(i)]) continue;
            for (int col = 0; col < s; ++col) {
                if (col_done[static_cast<std::size_t>(col)]) continue;
                const mpq_class& v = a[static_cast<std::size_t>(i) * s + col];
                if (v == 0) continue;
                long val = vp(v);
                if (pi < 0 || val < best) {
                    pi = i;
                    pj = col;
                    best = val;
                }
            }
        }
        if (pi < 0) return std::nullopt;
        tau += static_cast<unsigned>(best);
        const mpq_class pivot = a[static_cast<std::size_t>(pi) * s + pj];
        for (int i = 0; i < m; ++i) {
            if (i == pi || row_done[static_cast<std::size_t>(i)]) continue;
            mpq_class factor = a[static_cast<std::size_t>(i) * s + pj] / pivot;
            if (factor == 0) continue;
            for (int col = 0; col < s; ++col) {
                if (col_done[static_cast<std::size_t>(col)]) continue;
                a[static_cast<std::size_t>(i) * s + col] -= factor * a[static_cast<std::size_t>(pi) * s + col];
            }
        }
        row_done[static_cast<std::size_t>(pi)] = true;
        col_done[static_cast<std::size_t>(pj)] = true;
    }
    return tau;
}

// Hensel certificate check for a candidate integer point.  Rejection order
// matters for throughput: the congruence mod p is cheap and kills almost
// every random candidate; full rank mod p settles tau = 0 without the
// rational elimination.
inline std::optional<PadicWitness> certify_padic(const DiagonalSystem& sys,
                                                 const std::vector<mpz_class>& x,
                                                 std::int64_t p) {
    std::vector<mpz_class> residuals = residuals_at(sys, x);
    if (!congruent_zero(residuals, mpz_class(p))) return std::nullopt;
    IntMatrix jac = jacobian_at(sys, x);
    int m = jac.rows();
    std::optional<unsigned> tau;
    if (rank_mod_p(jac, p) == m)
        tau = 0;
    else
        tau = min_minor_valuation(jac, p);
    if (!tau) return std::nullopt;
    mpz_class modulus = pow_mpz(mpz_class(p), 2 * *tau + 1);
    if (!congruent_zero(residuals, modulus)) return std::nullopt;
    PadicWitness w;
    w.point = x;
    w.tau = *tau;
    w.modulus = modulus;
    return w;
}

// Exact integer solutions to try as certificates: the zero and all-ones
// vectors whenever they solve the system (the zero vector always does, and
// it is the nonsingular point of choice for purely linear systems), then
// everything in the largest small box the enumeration budget allows.
inline std::vector<std::vector<mpz_class>> small_exact_solutions(const DiagonalSystem& sys,
                                                                 std::uint64_t limit) {
    int s = sys.num_vars();
    auto solves_exactly = [&](const std::vector<mpz_class>& x) {
        for (const mpz_class& v : residuals_at(sys, x))
            if (v != 0) return false;
        return true;
    };
    std::vector<std::vector<mpz_class>> out;
    for (long constant : {0L, 1L}) {
        std::vector<mpz_class> x(static_cast<std::size_t>(s), constant);
        if (solves_exactly(x)) out.push_back(std::move(x));
    }
    std::int64_t box = 0;
    for (std::int64_t b = 1; b <= 3; ++b) {
        double size = s * std::log2(2.0 * b + 1.0);
        if (size <= std::log2(static_cast<double>(limit))) box = b;
    }
    if (box == 0) return out;
    CountOptions opts;
    opts.enumeration_budget = limit;
    for (const auto& x : enumerate_solutions(sys, box, Filter::none(), opts)) {
        std::vector<mpz_class> z(x.begin(), x.end());
        out.push_back(std::move(z));
    }
    return out;
}

inline double sigma_min(const std::vector<std::vector<double>>& j) {
    // Smallest singular value via the smallest eigenvalue of J J^T,
    // cyclic Jacobi iteration on the small symmetric Gram matrix.
    std::size_t m = j.size();
    if (m == 0) return 0.0;
    std::size_t s = j[0].size();
    std::vector<std::vector<double>> g(m, std::vector<double>(m, 0.0));
    for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = 0; b < m; ++b)
            for (std::size_t t = 0; t < s; ++t) g[a][b] += j[a][t] * j[b][t];
    for (int sweep = 0; sweep < 64; ++sweep) {
        double off = 0.0;
        for (std::size_t a = 0; a < m; ++a)
            for (std::size_t b = a + 1; b < m; ++b) off += g[a][b] * g[a][b];
        if (off < 1e-24) break;
        for (std::size_t a = 0; a < m; ++a)
            for (std::size_t b = a + 1; b < m; ++b) {
                if (std::fabs(g[a][b]) < 1e-300) continue;
                double theta = 0.5 * std::atan2(2.0 * g[a][b], g[b][b] - g[a][a]);
                double c = std::cos(theta), sn = std::sin(theta);
                for (std::size_t t = 0; t < m; ++t) {
                    double ga = g[a][t], gb = g[b][t];
                    g[a][t] = c * ga - sn * gb;
                    g[b][t] = sn * ga + c * gb;
                }
                for (std::size_t t = 0; t < m; ++t) {
                    double ga = g[t][a], gb = g[t][b];
                    g[t][a] = c * ga - sn * gb;
                    g[t][b] = sn * ga + c * gb;
                }
            }
    }
    double lambda_min = g[0][0];
    for (std::size_t a = 1; a < m; ++a) lambda_min = std::min(lambda_min, g[a][a]);
    return std::sqrt(std::max(lambda_min, 0.0));
}

inline std::vector<std::vector<double>> jacobian_double(const DiagonalSystem& sys,
                                                        const std::vector<double>& x) {
    int r = sys.num_rows();
    int s = sys.num_vars();
    std::vector<std::vector<double>> j;
    for (unsigned k : sys.exponents)
        for (int i = 0; i < r; ++i) {
            std::vector<double> row(static_cast<std::size_t>(s));
            for (int col = 0; col < s; ++col)
                row[static_cast<std::size_t>(col)] =
                    k * sys.coefficients.at(i, col).get_d() *
                    std::pow(x[static_cast<std::size_t>(col)], static_cast<int>(k) - 1);
            j.push_back(std::move(row));
        }
    return j;
}

inline std::vector<double> residuals_double(const DiagonalSystem& sys,
                                            const std::vector<double>& x) {
    int r = sys.num_rows();
    int s = sys.num_vars();
    std::vector<double> res;
    for (unsigned k : sys.exponents)
        for (int i = 0; i < r; ++i) {
            double sum = 0;
            for (int col = 0; col < s; ++col)
                sum += sys.coefficients.at(i, col).get_d() *
                       std::pow(x[static_cast<std::size_t>(col)], static_cast<int>(k));
            res.push_back(sum);
        }
    return res;
}

// Solve (A) y = b for small symmetric A by Gaussian elimination; false if
// numerically singular.
inline bool solve_dense(std::vector<std::vector<double>> a, std::vector<double> b,
                        std::vector<double>& y) {
    std::size_t m = a.size();
    for (std::size_t col = 0; col < m; ++col) {
        std::size_t pivot = col;
        for (std::size_t i = col + 1; i < m; ++i)
            if (std::fabs(a[i][col]) > std::fabs(a[pivot][col])) pivot = i;
        if (std::fabs(a[pivot][col]) < 1e-12) return false;
        std::swap(a[pivot], a[col]);
        std::swap(b[pivot], b[col]);
        for (std::size_t i = 0; i < m; ++i) {
            if (i == col) continue;
            double f = a[i][col] / a[col][col];
            for (std::size_t t = col; t < m; ++t) a[i][t] -= f * a[col][t];
            b[i] -= f * b[col];
        }
    }
    y.resize(m);
    for (std::size_t i = 0; i < m; ++i) y[i] = b[i] / a[i][i];
    return true;
}

}  // namespace detail

// Searches for a Hensel-certified p-adic witness: exact small solutions
// first, then the appropriate residue search.  A missing witness is a
// search failure, never a proof of insolubility.
inline PadicResult padic_nonsingular_solution(const DiagonalSystem& sys, std::int64_t p,
                                              const SolubilityOptions& options = {}) {
    if (!is_prime_i64(p)) throw std::domain_error("padic search: modulus must be prime");
    PadicResult result;
    result.prime = p;
    int s = sys.num_vars();
    int m = sys.num_constraints();
    if (m > s) return result;  // Jacobian rank m is unreachable

    for (const auto& x : detail::small_exact_solutions(sys, options.exhaustive_limit)) {
        if (auto w = detail::certify_padic(sys, x, p)) {
            result.witness = w;
            return result;
        }
    }

    unsigned gamma = 0;
    for (unsigned k : sys.exponents)
        gamma = std::max(gamma, detail::valuation(mpz_class(k), p));
    mpz_class modulus = pow_mpz(mpz_class(p), 2 * gamma + 1);

    double space = s * std::log2(modulus.get_d());
    if (space <= std::log2(static_cast<double>(options.exhaustive_limit))) {
        // Full scan of (Z/p^(2 gamma + 1))^s.
        std::vector<mpz_class> x(static_cast<std::size_t>(s), 0);
        std::function<bool(int)> scan = [&](int j) -> bool {
            if (j == s) {
                if (auto w = detail::certify_padic(sys, x, p)) {
                    result.witness = w;
                    return true;
                }
                return false;
            }
            for (mpz_class v = 0; v < modulus; ++v) {
                x[static_cast<std::size_t>(j)] = v;
                if (scan(j + 1)) return true;
            }
            return false;
        };
        scan(0);
        result.search_exhaustive = true;
        return result;
    }

    std::mt19937_64 rng(mix_seed(options.seed, static_cast<std::uint64_t>(p)));
    std::uint64_t mod_u = modulus.get_ui();
    std::vector<mpz_class> x(static_cast<std::size_t>(s));
    for (std::uint64_t attempt = 0; attempt < options.attempts; ++attempt) {
        for (int j = 0; j < s; ++j)
            x[static_cast<std::size_t>(j)] = static_cast<unsigned long>(rng() % mod_u);
        if (auto w = detail::certify_padic(sys, x, p)) {
            result.witness = w;
            return result;
        }
    }
    return result;
}

// Real witness: an exact small integer solution with full-rank Jacobian
// when one exists in the search box, otherwise Gauss-Newton descent from
// seeded random starts.  Reported as evidence, never as a certificate.
inline std::optional<RealWitness> real_nonsingular_solution(const DiagonalSystem& sys,
                                                            const SolubilityOptions& options = {}) {
    int s = sys.num_vars();
    int m = sys.num_constraints();
    if (m > s) return std::nullopt;

    for (const auto& x : detail::small_exact_solutions(sys, options.exhaustive_limit)) {
        IntMatrix j = detail::jacobian_at(sys, x);
        if (rank(j) == m) {
            RealWitness w;
            for (const mpz_class& v : x) w.point.emplace_back(v);
            w.residual = 0.0;
            w.exact = true;
            std::vector<double> xd;
            for (const mpz_class& v : x) xd.push_back(v.get_d());
            w.jacobian_sigma_min = detail::sigma_min(detail::jacobian_double(sys, xd));
            return w;
        }
    }

    std::mt19937_64 rng(mix_seed(options.seed, 0x7ea1));
    std::uniform_real_distribution<double> uniform(-3.0, 3.0);
    const double residual_tol = 1e-9;
    const double sigma_tol = 1e-6;
    std::uint64_t restarts = std::max<std::uint64_t>(1, options.attempts / 200);
    for (std::uint64_t restart = 0; restart < restarts; ++restart) {
        std::vector<double> x(static_cast<std::size_t>(s));
        for (double& v : x) v = uniform(rng);
        // Run the descent to its fixed point rather than stopping at the
        // first small residual: a trajectory collapsing into a singular
        // solution keeps shrinking the Jacobian, so the final sigma test
        // separates it from convergence to a nonsingular one.
        bool alive = true;
        for (int iter = 0; iter < 150 && alive; ++iter) {
            std::vector<double> r = detail::residuals_double(sys, x);
            std::vector<std::vector<double>> j = detail::jacobian_double(sys, x);
            // Gauss-Newton minimal-norm step: delta = -J^T (J J^T)^-1 r.
            std::size_t mm = j.size();
            std::vector<std::vector<double>> gram(mm, std::vector<double>(mm, 0.0));
            for (std::size_t a = 0; a < mm; ++a)
                for (std::size_t b = 0; b < mm; ++b)
                    for (int t = 0; t < s; ++t)
                        gram[a][b] += j[a][static_cast<std::size_t>(t)] * j[b][static_cast<std::size_t>(t)];
            std::vector<double> rhs(mm);
            for (std::size_t a = 0; a < mm; ++a) rhs[a] = -r[a];
            std::vector<double> y;
            if (!detail::solve_dense(gram, rhs, y)) {
                alive = false;  // Jacobian degenerated; restart
                break;
            }
            for (int t = 0; t < s; ++t) {
                double step = 0.0;
                for (std::size_t a = 0; a < mm; ++a) step += j[a][static_cast<std::size_t>(t)] * y[a];
                x[static_cast<std::size_t>(t)] += step;
            }
        }
        if (!alive) continue;
        double sigma = detail::sigma_min(detail::jacobian_double(sys, x));
        if (sigma < sigma_tol) continue;
        RealWitness w;
        w.exact = false;
        w.jacobian_sigma_min = sigma;
        // Dyadic rationalization of the numeric point.
        for (double v : x) {
            mpz_class num(static_cast<long>(std::llround(v * 1099511627776.0)));
            w.point.push_back(mpq_class(num, mpz_class(1099511627776L)));  // 2^40
        }
        std::vector<double> xr;
        for (const mpq_class& v : w.point) xr.push_back(v.get_d());
        std::vector<double> rr = detail::residuals_double(sys, xr);
        double worst = 0.0;
        for (double v : rr) worst = std::max(worst, std::fabs(v));
        if (worst > residual_tol) continue;
        w.residual = worst;
        return w;
    }
    return std::nullopt;
}

struct SolubilityReport {
    std::vector<PadicResult> padic;
    std::optional<RealWitness> real;
    bool evidence_positive = false;
};

// Runs both searches for every prime up to the bound.  Evidence-positive
// requires a real witness and a certified witness at every tested prime.
inline SolubilityReport solubility_report(const DiagonalSystem& sys, std::int64_t prime_bound,
                                          const SolubilityOptions& options = {}) {
    if (prime_bound < 2) throw std::domain_error("solubility_report: prime bound must be >= 2");
    SolubilityReport report;
    report.real = real_nonsingular_solution(sys, options);
    bool all_primes = true;
    for (std::int64_t p : primes_up_to(prime_bound)) {
        PadicResult r = padic_nonsingular_solution(sys, p, options);
        all_primes = all_primes && r.witness.has_value();
        report.padic.push_back(std::move(r));
    }
    report.evidence_positive = report.real.has_value() && all_primes;
    return report;
}

}  // namespace mms
