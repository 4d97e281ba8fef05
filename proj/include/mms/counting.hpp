#pragma once
// Counting and enumerating solutions of diagonal systems with entries in
// [-P, P], under per-entry filters (smoothness, primality) and pairwise
// distinctness.
//
// Enumeration walks the variables with interval pruning on every
// constraint.  Counting splits the variables in half and matches partial
// power-sum vectors through a hash table, which costs roughly the square
// root of enumeration.  Distinct counts are exact: they come from Mobius
// inversion over the set-partition lattice, where the count for "these
// variables coincide" is the count of the system with the corresponding
// columns merged.
//
// The square searcher backtracks over cells in an order that finishes
// rows, columns and diagonals as early as possible, so the line-sum
// constraints propagate long before a square is complete.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include <gmpxx.h>

#include "mms/diagonal_system.hpp"
#include "mms/errors.hpp"
#include "mms/int_matrix.hpp"
#include "mms/magic_system.hpp"
#include "mms/numbers.hpp"

namespace mms {

struct CountOptions {
    std::uint64_t enumeration_budget = 1000000000;  // assignments, full box
    std::uint64_t table_budget = 1u << 24;          // hash entries, half box
    int partition_vars_limit = 12;                  // Bell-number guard
};

namespace detail {

// Admissible values for one variable under the per-entry filter, ascending.
inline std::vector<std::int64_t> value_domain(std::int64_t p, const Filter& filter) {
    if (p < 0) throw std::domain_error("height bound must be >= 0");
    std::vector<std::int64_t> domain;
    for (std::int64_t v = -p; v <= p; ++v) {
        switch (filter.kind) {
            case Filter::Kind::smooth:
                if (!is_smooth_i64(v, filter.smooth_bound)) continue;
                break;
            case Filter::Kind::prime:
                if (!is_prime_i64(v < 0 ? -v : v)) continue;
                break;
            default:
                break;
        }
        domain.push_back(v);
    }
    return domain;
}

// Largest |coefficient| of the system.
inline mpz_class max_abs_coefficient(const IntMatrix& c) {
    mpz_class best = 0;
    for (const mpz_class& v : c.entries()) {
        mpz_class a = abs(v);
        if (a > best) best = a;
    }
    return best;
}

// Partial power sums must stay inside int64; reject heights where they
// might not.
inline void check_sum_bounds(const DiagonalSystem& sys, std::int64_t p) {
    mpz_class worst = max_abs_coefficient(sys.coefficients);
    worst *= sys.num_vars();
    worst *= pow_mpz(mpz_class(p < 1 ? 1 : p), sys.exponents.back());
    if (!worst.fits_slong_p())
        throw std::overflow_error(
            "height too large for 64-bit partial sums; reduce P");
}

struct PowerTable {
    // pow[value_index][exponent_index]
    std::vector<std::vector<std::int64_t>> pow;

    PowerTable(const std::vector<std::int64_t>& domain, const std::vector<unsigned>& exps) {
        pow.resize(domain.size());
        for (std::size_t i = 0; i < domain.size(); ++i) {
            pow[i].reserve(exps.size());
            for (unsigned k : exps) pow[i].push_back(checked_pow_i64(domain[i], k));
        }
    }
};

struct VecHash {
    std::size_t operator()(const std::vector<std::int64_t>& v) const {
        std::uint64_t h = 0x9e3779b97f4a7c15ull;
        for (std::int64_t x : v) {
            h ^= static_cast<std::uint64_t>(x) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
            h *= 0xff51afd7ed558ccdull;
        }
        return static_cast<std::size_t>(h);
    }
};

// Count solutions by meeting in the middle: hash the partial power-sum
// vectors of the first half, stream the second half against the negation.
inline mpz_class mitm_count(const IntMatrix& c, const std::vector<unsigned>& exps,
                            const std::vector<std::int64_t>& domain,
                            const CountOptions& options) {
    int s = c.cols();
    int r = c.rows();
    int ne = static_cast<int>(exps.size());
    int half = s / 2;
    if (domain.empty()) return 0;

    double log_table = half * std::log2(static_cast<double>(domain.size()));
    if (log_table > std::log2(static_cast<double>(options.table_budget)))
        throw BudgetError("meet-in-the-middle table exceeds budget; reduce P");

    PowerTable powers(domain, exps);
    std::vector<std::int64_t> coeff(static_cast<std::size_t>(r) * s);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < s; ++j) coeff[static_cast<std::size_t>(i) * s + j] = c.at(i, j).get_si();

    int dims = r * ne;
    std::vector<std::int64_t> sums(static_cast<std::size_t>(dims), 0);
    std::unordered_map<std::vector<std::int64_t>, mpz_class, VecHash> table;

    std::function<void(int)> build = [&](int j) {
        if (j == half) {
            table[sums] += 1;
            return;
        }
        for (std::size_t vi = 0; vi < domain.size(); ++vi) {
            for (int i = 0; i < r; ++i)
                for (int e = 0; e < ne; ++e)
                    sums[static_cast<std::size_t>(i * ne + e)] +=
                        coeff[static_cast<std::size_t>(i) * s + j] * powers.pow[vi][static_cast<std::size_t>(e)];
            build(j + 1);
            for (int i = 0; i < r; ++i)
                for (int e = 0; e < ne; ++e)
                    sums[static_cast<std::size_t>(i * ne + e)] -=
                        coeff[static_cast<std::size_t>(i) * s + j] * powers.pow[vi][static_cast<std::size_t>(e)];
        }
    };
    build(0);

    mpz_class total = 0;
    std::vector<std::int64_t> key(static_cast<std::size_t>(dims));
    std::function<void(int)> probe = [&](int j) {
        if (j == s) {
            for (int d = 0; d < dims; ++d) key[static_cast<std::size_t>(d)] = -sums[static_cast<std::size_t>(d)];
            auto it = table.find(key);
            if (it != table.end()) total += it->second;
            return;
        }
        for (std::size_t vi = 0; vi < domain.size(); ++vi) {
            for (int i = 0; i < r; ++i)
                for (int e = 0; e < ne; ++e)
                    sums[static_cast<std::size_t>(i * ne + e)] +=
                        coeff[static_cast<std::size_t>(i) * s + j] * powers.pow[vi][static_cast<std::size_t>(e)];
            probe(j + 1);
            for (int i = 0; i < r; ++i)
                for (int e = 0; e < ne; ++e)
                    sums[static_cast<std::size_t>(i * ne + e)] -=
                        coeff[static_cast<std::size_t>(i) * s + j] * powers.pow[vi][static_cast<std::size_t>(e)];
        }
    };
    std::fill(sums.begin(), sums.end(), 0);
    probe(half);
    return total;
}

// Sum over set partitions of the variable set: mu * count(merged system),
// where mu of a partition with blocks B is prod (-1)^(|B|-1) (|B|-1)!.
// This inverts "coordinates within each block coincide" down to "all
// coordinates pairwise distinct".
inline mpz_class distinct_count_mobius(const IntMatrix& c, const std::vector<unsigned>& exps,
                                       const std::vector<std::int64_t>& domain,
                                       const CountOptions& options) {
    int s = c.cols();
    if (s > options.partition_vars_limit)
        throw BudgetError("distinct counting via partition lattice limited to " +
                          std::to_string(options.partition_vars_limit) + " variables");
    mpz_class result = 0;
    std::vector<std::vector<int>> blocks;  // current partition, 0-based vars
    std::function<void(int)> recurse = [&](int var) {
        if (var == s) {
            IntMatrix merged(c.rows(), static_cast<int>(blocks.size()));
            mpz_class mu = 1;
            for (std::size_t b = 0; b < blocks.size(); ++b) {
                for (int i = 0; i < c.rows(); ++i) {
                    mpz_class sum = 0;
                    for (int v : blocks[b]) sum += c.at(i, v);
                    merged.at(i, static_cast<int>(b)) = sum;
                }
                std::size_t size = blocks[b].size();
                if (size % 2 == 0) mu = -mu;
                for (std::size_t f = 2; f < size; ++f) mu *= static_cast<long>(f);
            }
            result += mu * mitm_count(merged, exps, domain, options);
            return;
        }
        for (std::size_t b = 0; b < blocks.size(); ++b) {
            blocks[b].push_back(var);
            recurse(var + 1);
            blocks[b].pop_back();
        }
        blocks.push_back({var});
        recurse(var + 1);
        blocks.pop_back();
    };
    recurse(0);
    return result;
}

}  // namespace detail

// True when every prime factor of every entry is at most q; entry 0 fails
// (every prime divides it), entries of absolute value 1 pass vacuously.
inline bool smooth_filter(const std::vector<std::int64_t>& x, std::int64_t q) {
    for (std::int64_t v : x)
        if (!is_smooth_i64(v, q)) return false;
    return true;
}

// All solutions with max |x_j| <= P passing the filter, in lexicographic
// order.  Intended for small boxes; throws BudgetError when the full box
// exceeds the enumeration budget.
inline std::vector<std::vector<std::int64_t>> enumerate_solutions(
    const DiagonalSystem& sys, std::int64_t p, const Filter& filter,
    const CountOptions& options = {}) {
    detail::check_sum_bounds(sys, p);
    const IntMatrix& c = sys.coefficients;
    int s = c.cols();
    int r = c.rows();
    int ne = static_cast<int>(sys.exponents.size());

    Filter entry_filter = filter.kind == Filter::Kind::distinct ? Filter::none() : filter;
    std::vector<std::int64_t> domain = detail::value_domain(p, entry_filter);
    if (domain.empty()) return {};

    double log_box = s * std::log2(static_cast<double>(domain.size()));
    if (log_box > std::log2(static_cast<double>(options.enumeration_budget)))
        throw BudgetError("enumeration box exceeds budget; use count_solutions instead");

    detail::PowerTable powers(domain, sys.exponents);
    std::vector<std::int64_t> coeff(static_cast<std::size_t>(r) * s);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < s; ++j) coeff[static_cast<std::size_t>(i) * s + j] = c.at(i, j).get_si();

    // Reach bounds: for constraint (i,e), the least and greatest achievable
    // contribution of variables j..s-1.
    int dims = r * ne;
    std::vector<std::int64_t> vmin(static_cast<std::size_t>(ne), INT64_MAX);
    std::vector<std::int64_t> vmax(static_cast<std::size_t>(ne), INT64_MIN);
    for (std::size_t vi = 0; vi < domain.size(); ++vi)
        for (int e = 0; e < ne; ++e) {
            vmin[static_cast<std::size_t>(e)] = std::min(vmin[static_cast<std::size_t>(e)], powers.pow[vi][static_cast<std::size_t>(e)]);
            vmax[static_cast<std::size_t>(e)] = std::max(vmax[static_cast<std::size_t>(e)], powers.pow[vi][static_cast<std::size_t>(e)]);
        }
    std::vector<std::int64_t> suffix_min(static_cast<std::size_t>(dims) * (s + 1), 0);
    std::vector<std::int64_t> suffix_max(static_cast<std::size_t>(dims) * (s + 1), 0);
    for (int j = s - 1; j >= 0; --j)
        for (int i = 0; i < r; ++i)
            for (int e = 0; e < ne; ++e) {
                std::int64_t cf = coeff[static_cast<std::size_t>(i) * s + j];
                std::int64_t lo = cf >= 0 ? cf * vmin[static_cast<std::size_t>(e)] : cf * vmax[static_cast<std::size_t>(e)];
                std::int64_t hi = cf >= 0 ? cf * vmax[static_cast<std::size_t>(e)] : cf * vmin[static_cast<std::size_t>(e)];
                std::size_t d = static_cast<std::size_t>(i * ne + e);
                suffix_min[d * (s + 1) + j] = suffix_min[d * (s + 1) + j + 1] + lo;
                suffix_max[d * (s + 1) + j] = suffix_max[d * (s + 1) + j + 1] + hi;
            }

    bool need_distinct = filter.kind == Filter::Kind::distinct;
    std::vector<char> used(static_cast<std::size_t>(2 * p + 1), 0);
    std::vector<std::int64_t> sums(static_cast<std::size_t>(dims), 0);
    std::vector<std::int64_t> assignment(static_cast<std::size_t>(s), 0);
    std::vector<std::vector<std::int64_t>> solutions;

    std::function<void(int)> recurse = [&](int j) {
        if (j == s) {
            solutions.push_back(assignment);
            return;
        }
        for (std::size_t vi = 0; vi < domain.size(); ++vi) {
            std::int64_t v = domain[vi];
            if (need_distinct) {
                std::size_t slot = static_cast<std::size_t>(v + p);
                if (used[slot]) continue;
                used[slot] = 1;
            }
            bool feasible = true;
            for (int i = 0; i < r && feasible; ++i)
                for (int e = 0; e < ne; ++e) {
                    std::size_t d = static_cast<std::size_t>(i * ne + e);
                    std::int64_t partial =
                        sums[d] + coeff[static_cast<std::size_t>(i) * s + j] * powers.pow[vi][static_cast<std::size_t>(e)];
                    if (partial + suffix_min[d * (s + 1) + j + 1] > 0 ||
                        partial + suffix_max[d * (s + 1) + j + 1] < 0) {
                        feasible = false;
                        break;
                    }
                }
            if (feasible) {
                for (int i = 0; i < r; ++i)
                    for (int e = 0; e < ne; ++e)
                        sums[static_cast<std::size_t>(i * ne + e)] +=
                            coeff[static_cast<std::size_t>(i) * s + j] * powers.pow[vi][static_cast<std::size_t>(e)];
                assignment[static_cast<std::size_t>(j)] = v;
                recurse(j + 1);
                for (int i = 0; i < r; ++i)
                    for (int e = 0; e < ne; ++e)
                        sums[static_cast<std::size_t>(i * ne + e)] -=
                            coeff[static_cast<std::size_t>(i) * s + j] * powers.pow[vi][static_cast<std::size_t>(e)];
            }
            if (need_distinct) used[static_cast<std::size_t>(v + p)] = 0;
        }
    };
    recurse(0);
    return solutions;
}

// Counts by meet-in-the-middle; for the distinct filter the total is
// counted directly and the distinct count obtained by Mobius inversion
// over merged systems.  Agrees exactly with enumeration wherever both run.
inline CountReport count_solutions(const DiagonalSystem& sys, std::int64_t p,
                                   const Filter& filter, const CountOptions& options = {}) {
    detail::check_sum_bounds(sys, p);
    CountReport report;
    report.height = p;
    report.filter = filter.to_string();
    Filter entry_filter = filter.kind == Filter::Kind::distinct ? Filter::none() : filter;
    std::vector<std::int64_t> domain = detail::value_domain(p, entry_filter);
    report.total = detail::mitm_count(sys.coefficients, sys.exponents, domain, options);
    report.method = "meet-in-middle";
    if (filter.kind == Filter::Kind::distinct) {
        report.distinct_count =
            detail::distinct_count_mobius(sys.coefficients, sys.exponents, domain, options);
        report.method = "meet-in-middle+mobius";
    }
    return report;
}

// The collision identity: solutions with x_i = x_j are in bijection with
// solutions of the system whose i-th and j-th columns are merged.  The left
// side is enumerated directly, the right side counted independently.
inline bool collision_identity_check(const DiagonalSystem& sys, std::int64_t p, int i, int j,
                                     const CountOptions& options = {}) {
    if (i < 1 || j > sys.num_vars() || i >= j)
        throw std::invalid_argument("collision_identity_check: needs 1 <= i < j <= s");
    std::vector<std::vector<std::int64_t>> all = enumerate_solutions(sys, p, Filter::none(), options);
    mpz_class lhs = 0;
    for (const auto& x : all)
        if (x[static_cast<std::size_t>(i - 1)] == x[static_cast<std::size_t>(j - 1)]) ++lhs;
    DiagonalSystem merged(merge_columns(sys.coefficients, i, j), sys.exponents);
    mpz_class rhs = count_solutions(merged, p, Filter::none(), options).total;
    return lhs == rhs;
}

// Predicted growth exponents of the solution count in the height bound.
inline mpq_class expected_exponent_multimagic(long r, long s, unsigned degree) {
    if (r < 1 || s < 1 || degree < 1)
        throw std::domain_error("expected_exponent: parameters must be positive");
    mpq_class penalty(r * static_cast<long>(degree) * (degree + 1), 2);
    penalty.canonicalize();
    return mpq_class(s) - penalty;
}

inline mpq_class expected_exponent_single(long r, long s, unsigned k) {
    if (r < 1 || s < 1 || k < 1)
        throw std::domain_error("expected_exponent: parameters must be positive");
    return mpq_class(s - r * static_cast<long>(k));
}

struct FitPoint {
    std::int64_t height = 0;
    mpz_class count;
    bool used = false;
};

struct ExponentFit {
    double slope = 0.0;
    double residual_rms = 0.0;
    bool degenerate = false;  // fewer than two usable points, or no growth at all
    std::vector<FitPoint> points;
};

// Least-squares slope of log(count) against log(height); zero counts are
// dropped and flagged.
inline ExponentFit exponent_fit(const DiagonalSystem& sys, const std::vector<std::int64_t>& heights,
                                const Filter& filter, const CountOptions& options = {}) {
    if (heights.size() < 3)
        throw std::invalid_argument("exponent_fit: need at least three heights");
    for (std::size_t t = 1; t < heights.size(); ++t)
        if (heights[t] <= heights[t - 1])
            throw std::invalid_argument("exponent_fit: heights must be strictly ascending");
    ExponentFit fit;
    std::vector<double> xs, ys;
    for (std::int64_t p : heights) {
        CountReport r = count_solutions(sys, p, filter, options);
        mpz_class count = filter.kind == Filter::Kind::distinct ? *r.distinct_count : r.total;
        FitPoint point{p, count, count > 0};
        if (point.used) {
            xs.push_back(std::log(static_cast<double>(p)));
            ys.push_back(std::log(count.get_d()));
        }
        fit.points.push_back(std::move(point));
    }
    if (xs.size() < 2 ||
        std::all_of(ys.begin(), ys.end(), [&](double y) { return y == ys.front(); })) {
        fit.degenerate = true;
        return fit;
    }
    double n = static_cast<double>(xs.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t t = 0; t < xs.size(); ++t) {
        sx += xs[t];
        sy += ys[t];
        sxx += xs[t] * xs[t];
        sxy += xs[t] * ys[t];
    }
    fit.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    double intercept = (sy - fit.slope * sx) / n;
    double ss = 0;
    for (std::size_t t = 0; t < xs.size(); ++t) {
        double resid = ys[t] - (fit.slope * xs[t] + intercept);
        ss += resid * resid;
    }
    fit.residual_rms = std::sqrt(ss / n);
    return fit;
}

// ---------------------------------------------------------------------------
// Square verification and search.
// ---------------------------------------------------------------------------

struct PowerCheck {
    unsigned exponent = 1;
    bool magic = false;
    std::optional<mpz_class> constant;        // common line sum when magic
    std::optional<std::string> violation;     // first failing line otherwise
};

struct SquareReport {
    int order = 0;
    bool all_magic = false;
    int distinct_entries = 0;
    std::vector<PowerCheck> checks;  // k = 1..K
};

// Checks all row, column and diagonal sums of the entrywise k-th powers for
// k = 1..K; reports the first violated line per power.
inline SquareReport verify_square(const Square& z, unsigned degree) {
    if (degree < 1) throw std::domain_error("verify_square: degree must be >= 1");
    int n = z.order;
    SquareReport report;
    report.order = n;
    report.all_magic = true;
    {
        std::vector<mpz_class> sorted(z.cells.begin(), z.cells.end());
        std::sort(sorted.begin(), sorted.end());
        report.distinct_entries = static_cast<int>(
            std::unique(sorted.begin(), sorted.end()) - sorted.begin());
    }
    for (unsigned k = 1; k <= degree; ++k) {
        PowerCheck check;
        check.exponent = k;
        std::vector<std::pair<std::string, mpz_class>> sums;
        for (int i = 1; i <= n; ++i) {
            mpz_class sum = 0;
            for (int j = 1; j <= n; ++j) sum += pow_mpz(z.at(i, j), k);
            sums.emplace_back("row " + std::to_string(i), sum);
        }
        for (int j = 1; j <= n; ++j) {
            mpz_class sum = 0;
            for (int i = 1; i <= n; ++i) sum += pow_mpz(z.at(i, j), k);
            sums.emplace_back("column " + std::to_string(j), sum);
        }
        mpz_class main_sum = 0, anti_sum = 0;
        for (int i = 1; i <= n; ++i) {
            main_sum += pow_mpz(z.at(i, i), k);
            anti_sum += pow_mpz(z.at(i, n + 1 - i), k);
        }
        sums.emplace_back("main diagonal", main_sum);
        sums.emplace_back("antidiagonal", anti_sum);

        check.magic = true;
        for (const auto& [name, sum] : sums)
            if (sum != sums.front().second) {
                check.magic = false;
                check.violation = name;
                break;
            }
        if (check.magic) check.constant = sums.front().second;
        report.all_magic = report.all_magic && check.magic;
        report.checks.push_back(std::move(check));
    }
    return report;
}

struct SquareSearchOptions {
    std::uint64_t node_budget = 100000000;
    std::uint64_t max_results = UINT64_MAX;
};

struct SquareSearchResult {
    std::vector<Square> squares;
    bool complete = true;
    std::uint64_t nodes = 0;
};

namespace detail {

// Cell order that finishes lines as early as possible: repeatedly take the
// cell whose tightest line has fewest unfilled cells, preferring cells on
// more lines, then row-major position.
inline std::vector<int> square_cell_order(int n) {
    int cells = n * n;
    int lines = 2 * n + 2;
    std::vector<std::vector<int>> lines_of(static_cast<std::size_t>(cells));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            std::vector<int>& ls = lines_of[static_cast<std::size_t>(i * n + j)];
            ls.push_back(i);
            ls.push_back(n + j);
            if (i == j) ls.push_back(2 * n);
            if (i + j == n - 1) ls.push_back(2 * n + 1);
        }
    std::vector<int> unfilled(static_cast<std::size_t>(lines), n);
    std::vector<bool> taken(static_cast<std::size_t>(cells), false);
    std::vector<int> order;
    order.reserve(static_cast<std::size_t>(cells));
    for (int step = 0; step < cells; ++step) {
        int best = -1;
        int best_tightness = INT32_MAX;
        std::size_t best_lines = 0;
        for (int cell = 0; cell < cells; ++cell) {
            if (taken[static_cast<std::size_t>(cell)]) continue;
            int tight = INT32_MAX;
            for (int l : lines_of[static_cast<std::size_t>(cell)])
                tight = std::min(tight, unfilled[static_cast<std::size_t>(l)]);
            std::size_t nlines = lines_of[static_cast<std::size_t>(cell)].size();
            if (tight < best_tightness ||
                (tight == best_tightness && nlines > best_lines)) {
                best = cell;
                best_tightness = tight;
                best_lines = nlines;
            }
        }
        taken[static_cast<std::size_t>(best)] = true;
        order.push_back(best);
        for (int l : lines_of[static_cast<std::size_t>(best)])
            --unfilled[static_cast<std::size_t>(l)];
    }
    return order;
}

}  // namespace detail

// All order-n squares with entries in [lo, hi] whose entrywise k-th powers
// are magic for every k = 1..degree.  Line sums are propagated during the
// backtracking; the shared magic constant per power is pinned by the first
// completed line and enforced on every later one.
inline SquareSearchResult brute_force_squares(int n, unsigned degree, std::int64_t lo,
                                              std::int64_t hi, bool require_distinct,
                                              const SquareSearchOptions& options = {}) {
    if (n < 1) throw std::domain_error("brute_force_squares: order must be >= 1");
    if (degree < 1) throw std::domain_error("brute_force_squares: degree must be >= 1");
    if (lo > hi) throw std::invalid_argument("brute_force_squares: empty value range");
    {
        std::int64_t big = std::max(std::llabs(lo), std::llabs(hi));
        mpz_class worst = pow_mpz(mpz_class(big < 1 ? 1 : big), degree);
        worst *= n;
        if (!worst.fits_slong_p())
            throw std::overflow_error("value range too large for 64-bit line sums");
    }

    int cells = n * n;
    int lines = 2 * n + 2;
    std::vector<std::vector<int>> lines_of(static_cast<std::size_t>(cells));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            std::vector<int>& ls = lines_of[static_cast<std::size_t>(i * n + j)];
            ls.push_back(i);
            ls.push_back(n + j);
            if (i == j) ls.push_back(2 * n);
            if (i + j == n - 1) ls.push_back(2 * n + 1);
        }
    std::vector<int> order = detail::square_cell_order(n);

    // Power range of a single entry, for reach pruning.
    std::vector<std::int64_t> pmin(degree + 1), pmax(degree + 1);
    for (unsigned k = 1; k <= degree; ++k) {
        std::int64_t a = checked_pow_i64(lo, k);
        std::int64_t b = checked_pow_i64(hi, k);
        pmin[k] = std::min(a, b);
        pmax[k] = std::max(a, b);
        if (k % 2 == 0 && lo <= 0 && hi >= 0) pmin[k] = 0;
    }

    std::vector<std::vector<std::int64_t>> line_sum(
        static_cast<std::size_t>(lines), std::vector<std::int64_t>(degree + 1, 0));
    std::vector<int> line_unfilled(static_cast<std::size_t>(lines), n);
    std::vector<std::optional<std::int64_t>> constant(degree + 1);
    std::vector<std::int64_t> values(static_cast<std::size_t>(cells), 0);
    std::vector<char> used(static_cast<std::size_t>(hi - lo + 1), 0);

    SquareSearchResult result;
    std::uint64_t nodes = 0;
    bool aborted = false;

    std::function<void(int)> recurse = [&](int depth) {
        if (aborted) return;
        if (depth == cells) {
            Square z(n);
            for (int cell = 0; cell < cells; ++cell)
                z.cells[static_cast<std::size_t>(cell)] = values[static_cast<std::size_t>(cell)];
            result.squares.push_back(std::move(z));
            if (result.squares.size() >= options.max_results) {
                aborted = true;
                result.complete = false;
            }
            return;
        }
        int cell = order[static_cast<std::size_t>(depth)];
        for (std::int64_t v = lo; v <= hi && !aborted; ++v) {
            if (require_distinct && used[static_cast<std::size_t>(v - lo)]) continue;
            if (++nodes > options.node_budget) {
                aborted = true;
                result.complete = false;
                break;
            }
            // Feasibility against every line through this cell.
            bool ok = true;
            std::vector<std::pair<unsigned, std::int64_t>> pinned;
            for (int l : lines_of[static_cast<std::size_t>(cell)]) {
                int remaining = line_unfilled[static_cast<std::size_t>(l)] - 1;
                for (unsigned k = 1; k <= degree && ok; ++k) {
                    std::int64_t sum = line_sum[static_cast<std::size_t>(l)][k] + checked_pow_i64(v, k);
                    if (remaining == 0) {
                        if (constant[k]) {
                            if (sum != *constant[k]) ok = false;
                        } else {
                            constant[k] = sum;
                            pinned.emplace_back(k, sum);
                        }
                    } else if (constant[k]) {
                        if (sum + remaining * pmin[k] > *constant[k] ||
                            sum + remaining * pmax[k] < *constant[k])
                            ok = false;
                    }
                }
                if (!ok) break;
            }
            if (ok) {
                for (int l : lines_of[static_cast<std::size_t>(cell)]) {
                    for (unsigned k = 1; k <= degree; ++k)
                        line_sum[static_cast<std::size_t>(l)][k] += checked_pow_i64(v, k);
                    --line_unfilled[static_cast<std::size_t>(l)];
                }
                values[static_cast<std::size_t>(cell)] = v;
                if (require_distinct) used[static_cast<std::size_t>(v - lo)] = 1;
                recurse(depth + 1);
                if (require_distinct) used[static_cast<std::size_t>(v - lo)] = 0;
                for (int l : lines_of[static_cast<std::size_t>(cell)]) {
                    for (unsigned k = 1; k <= degree; ++k)
                        line_sum[static_cast<std::size_t>(l)][k] -= checked_pow_i64(v, k);
                    ++line_unfilled[static_cast<std::size_t>(l)];
                }
            }
            for (auto [k, sum] : pinned) constant[k].reset();
        }
    };
    recurse(0);
    result.nodes = nodes;
    return result;
}

}  // namespace mms
