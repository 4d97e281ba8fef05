#pragma once
// Engine for scanning column subsets of a matrix by cardinality: exhaustive
// colex enumeration when the subset space fits the evaluation budget,
// seeded uniform sampling per cardinality otherwise.  Tracks the minimum
// rank per subset size and, when a rank bound is supplied, the first
// violating subset in (size, colex) order.
//
// Determinism: all reported quantities are independent of the thread count.
// Sampling is chunked with per-chunk seeds derived from (seed, size, chunk),
// so the sampled subset set is fixed; exhaustive scans may stop early only
// once the per-size minimum is already forced by rank monotonicity
// (min rank over size m never drops below the size m-1 minimum), which
// leaves every reported value unchanged.  Budget is charged per size with
// the number of subsets whose rank gets established, an upper bound on the
// evaluations actually performed.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <mutex>
#include <numeric>
#include <optional>
#include <random>
#include <thread>
#include <vector>

#include <gmpxx.h>

#include "mms/int_matrix.hpp"
#include "mms/numbers.hpp"
#include "mms/rank.hpp"

namespace mms {

enum class ScanMode { automatic, exhaustive, sampled };

struct ScanOptions {
    std::uint64_t budget = 1ull << 20;        // rank evaluations
    std::uint64_t samples_per_size = 100000;  // sampled mode, per cardinality
    std::uint64_t seed = 0;
    int threads = 1;
    ScanMode mode = ScanMode::automatic;
};

struct SizeScanStats {
    int min_rank = 0;
    bool exact = false;       // minimum proven (full scan or monotonicity)
    mpz_class established;    // subsets this size accounted for
};

struct SubsetScanResult {
    std::map<int, SizeScanStats> per_size;
    bool all_exact = true;                      // every size up to max_card proven
    std::optional<std::vector<int>> violation;  // 1-based columns
    int violation_rank = -1;
    int clean_depth = -1;  // largest m with sizes 0..m exact and violation-free
    mpz_class subsets_established;
};

namespace detail {

inline std::uint64_t chunk_seed(std::uint64_t seed, int size, std::uint64_t chunk) {
    return splitmix64(mix_seed(seed ^ (0x51ed2701u + static_cast<std::uint64_t>(size)), chunk));
}

constexpr std::uint64_t kBinomSaturated = UINT64_MAX / 4;

// C(n,k), saturating instead of overflowing.
inline std::uint64_t binom_saturated(int n, int k) {
    if (k < 0 || k > n) return 0;
    k = std::min(k, n - k);
    if (k == 0) return 1;
    double log2c = (std::lgamma(n + 1.0) - std::lgamma(k + 1.0) -
                    std::lgamma(n - k + 1.0)) / std::log(2.0);
    if (log2c > 61.0) return kBinomSaturated;
    std::uint64_t r = 1;
    for (int i = 1; i <= k; ++i)
        r = static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(r) * static_cast<std::uint64_t>(n - k + i)) /
            static_cast<std::uint64_t>(i));
    return r;
}

inline mpz_class binom_mpz(int n, int k) {
    if (k < 0 || k > n) return 0;
    mpz_class r;
    mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n),
                 static_cast<unsigned long>(k));
    return r;
}

// Subset with colex index `index` among m-subsets of [0,n), ascending.
inline std::vector<int> unrank_colex(int n, int m, std::uint64_t index) {
    std::vector<int> subset(static_cast<std::size_t>(m));
    int c = n - 1;
    for (int j = m; j >= 1; --j) {
        while (binom_saturated(c, j) > index) --c;
        subset[static_cast<std::size_t>(j - 1)] = c;
        index -= binom_saturated(c, j);
        --c;
    }
    return subset;
}

// Advance an ascending m-subset of [0,n) to its colex successor.
inline bool next_colex(std::vector<int>& c, int n) {
    int m = static_cast<int>(c.size());
    int i = 0;
    while (i + 1 < m && c[static_cast<std::size_t>(i)] + 1 == c[static_cast<std::size_t>(i + 1)]) {
        c[static_cast<std::size_t>(i)] = i;
        ++i;
    }
    if (c[static_cast<std::size_t>(i)] + 1 >=
        (i + 1 < m ? c[static_cast<std::size_t>(i + 1)] : n))
        return false;
    ++c[static_cast<std::size_t>(i)];
    return true;
}

// Column-major copy of the matrix for fast subset gathers, with the kernel
// choice (int64 vs mpz) decided once for the whole matrix: Bareiss
// intermediates are minors of the original matrix, so the parent Hadamard
// bound covers every column subset.
struct ScanMatrix {
    int rows = 0;
    int cols = 0;
    bool use_i64 = false;
    std::vector<std::int64_t> cols_i64;   // [j*rows + i]
    std::vector<mpz_class> cols_mpz;

    explicit ScanMatrix(const IntMatrix& m)
        : rows(m.rows()), cols(m.cols()), use_i64(bareiss_fits_i64(m)) {
        if (use_i64) {
            cols_i64.resize(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols));
            for (int j = 0; j < cols; ++j)
                for (int i = 0; i < rows; ++i)
                    cols_i64[static_cast<std::size_t>(j) * rows + i] = m.at(i, j).get_si();
        } else {
            cols_mpz.resize(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols));
            for (int j = 0; j < cols; ++j)
                for (int i = 0; i < rows; ++i)
                    cols_mpz[static_cast<std::size_t>(j) * rows + i] = m.at(i, j);
        }
    }

    // Rank of the columns listed in `subset` (0-based).
    int subset_rank(const std::vector<int>& subset, std::vector<std::int64_t>& scratch_i64,
                    std::vector<mpz_class>& scratch_mpz) const {
        int m = static_cast<int>(subset.size());
        if (m == 0) return 0;
        if (use_i64) {
            scratch_i64.resize(static_cast<std::size_t>(rows) * static_cast<std::size_t>(m));
            for (int t = 0; t < m; ++t) {
                const std::int64_t* col = &cols_i64[static_cast<std::size_t>(subset[static_cast<std::size_t>(t)]) * rows];
                for (int i = 0; i < rows; ++i)
                    scratch_i64[static_cast<std::size_t>(i) * m + t] = col[i];
            }
            return rank_bareiss_i64(scratch_i64.data(), rows, m);
        }
        scratch_mpz.assign(static_cast<std::size_t>(rows) * static_cast<std::size_t>(m), 0);
        for (int t = 0; t < m; ++t) {
            const mpz_class* col = &cols_mpz[static_cast<std::size_t>(subset[static_cast<std::size_t>(t)]) * rows];
            for (int i = 0; i < rows; ++i)
                scratch_mpz[static_cast<std::size_t>(i) * m + t] = col[i];
        }
        return rank_bareiss_mpz(scratch_mpz, rows, m);
    }
};

struct SizeScanOutcome {
    int min_rank;
    std::optional<std::vector<int>> violation;  // 0-based, minimal colex
    int violation_rank = -1;
};

// Shared state for one cardinality.
struct SizeScanShared {
    std::atomic<int> min_rank;
    std::atomic<bool> stop{false};
    std::atomic<std::uint64_t> next_chunk{0};
    std::mutex violation_mutex;
    std::uint64_t best_violation_pos = UINT64_MAX;  // colex index or (chunk,idx) code
    std::vector<int> best_violation;
    int best_violation_rank = -1;
};

// threshold < 0 means "no bound to check".
inline void scan_worker_exhaustive(const ScanMatrix& mat, int m, std::uint64_t total,
                                   std::uint64_t chunk_size, int threshold, int floor_rank,
                                   SizeScanShared& shared) {
    std::vector<std::int64_t> scratch_i64;
    std::vector<mpz_class> scratch_mpz;
    for (;;) {
        std::uint64_t chunk = shared.next_chunk.fetch_add(1);
        std::uint64_t begin = chunk * chunk_size;
        if (begin >= total) return;
        if (shared.stop.load(std::memory_order_relaxed)) return;
        std::uint64_t end = std::min(begin + chunk_size, total);
        std::vector<int> subset = unrank_colex(mat.cols, m, begin);
        for (std::uint64_t pos = begin; pos < end; ++pos) {
            int r = mat.subset_rank(subset, scratch_i64, scratch_mpz);
            int prev = shared.min_rank.load(std::memory_order_relaxed);
            while (r < prev &&
                   !shared.min_rank.compare_exchange_weak(prev, r, std::memory_order_relaxed)) {
            }
            if (threshold >= 0 && r < threshold) {
                std::lock_guard<std::mutex> lock(shared.violation_mutex);
                if (pos < shared.best_violation_pos) {
                    shared.best_violation_pos = pos;
                    shared.best_violation = subset;
                    shared.best_violation_rank = r;
                }
            } else if (threshold >= 0 || floor_rank >= 0) {
                // Early exit once the minimum cannot move and no violation
                // can appear below it.
                int cur = shared.min_rank.load(std::memory_order_relaxed);
                if (cur == floor_rank && (threshold < 0 || floor_rank >= threshold)) {
                    shared.stop.store(true, std::memory_order_relaxed);
                    return;
                }
            }
            if (pos + 1 < end) next_colex(subset, mat.cols);
        }
    }
}

inline void scan_worker_sampled(const ScanMatrix& mat, int m, std::uint64_t samples,
                                std::uint64_t sample_chunk, std::uint64_t seed, int threshold,
                                SizeScanShared& shared) {
    std::vector<std::int64_t> scratch_i64;
    std::vector<mpz_class> scratch_mpz;
    std::vector<int> deck(static_cast<std::size_t>(mat.cols));
    std::vector<int> subset(static_cast<std::size_t>(m));
    std::uint64_t chunk_count = (samples + sample_chunk - 1) / sample_chunk;
    for (;;) {
        std::uint64_t chunk = shared.next_chunk.fetch_add(1);
        if (chunk >= chunk_count) return;
        std::uint64_t begin = chunk * sample_chunk;
        std::uint64_t end = std::min(begin + sample_chunk, samples);
        std::mt19937_64 rng(chunk_seed(seed, m, chunk));
        for (std::uint64_t idx = begin; idx < end; ++idx) {
            std::iota(deck.begin(), deck.end(), 0);
            for (int t = 0; t < m; ++t) {
                std::uint64_t pick = t + rng() % static_cast<std::uint64_t>(mat.cols - t);
                std::swap(deck[static_cast<std::size_t>(t)], deck[static_cast<std::size_t>(pick)]);
            }
            subset.assign(deck.begin(), deck.begin() + m);
            std::sort(subset.begin(), subset.end());
            int r = mat.subset_rank(subset, scratch_i64, scratch_mpz);
            int prev = shared.min_rank.load(std::memory_order_relaxed);
            while (r < prev &&
                   !shared.min_rank.compare_exchange_weak(prev, r, std::memory_order_relaxed)) {
            }
            if (threshold >= 0 && r < threshold) {
                std::lock_guard<std::mutex> lock(shared.violation_mutex);
                std::uint64_t pos = chunk * sample_chunk + (idx - begin);
                if (pos < shared.best_violation_pos) {
                    shared.best_violation_pos = pos;
                    shared.best_violation = subset;
                    shared.best_violation_rank = r;
                }
            }
        }
    }
}

inline SizeScanOutcome scan_size(const ScanMatrix& mat, int m, bool exhaustive,
                                 std::uint64_t count, int threshold, int floor_rank,
                                 std::uint64_t seed, int threads) {
    SizeScanShared shared;
    shared.min_rank.store(std::min(mat.rows, m));
    if (m == 0) {
        SizeScanOutcome out{0, std::nullopt, -1};
        if (threshold > 0) {
            out.violation = std::vector<int>{};
            out.violation_rank = 0;
        }
        return out;
    }
    int workers = std::max(1, threads);
    auto run = [&](auto&& fn) {
        if (workers == 1) {
            fn();
        } else {
            std::vector<std::thread> pool;
            pool.reserve(static_cast<std::size_t>(workers));
            for (int t = 0; t < workers; ++t) pool.emplace_back(fn);
            for (auto& th : pool) th.join();
        }
    };
    if (exhaustive) {
        std::uint64_t chunk_size = std::max<std::uint64_t>(1024, count / (static_cast<std::uint64_t>(workers) * 8 + 1));
        run([&] { scan_worker_exhaustive(mat, m, count, chunk_size, threshold, floor_rank, shared); });
    } else {
        run([&] { scan_worker_sampled(mat, m, count, 8192, seed, threshold, shared); });
    }
    SizeScanOutcome out{shared.min_rank.load(), std::nullopt, -1};
    if (shared.best_violation_pos != UINT64_MAX) {
        out.violation = shared.best_violation;
        out.violation_rank = shared.best_violation_rank;
    }
    return out;
}

}  // namespace detail

// Scans sizes 0..max_card.  `threshold(m)`, when provided, is the minimal
// integer rank a size-m subset must reach; the first subset below it (in
// (size, colex) order) is reported as the violation and the scan stops.
inline SubsetScanResult scan_subsets(const IntMatrix& c, int max_card,
                                     const std::function<int(int)>& threshold,
                                     const ScanOptions& options = {}) {
    if (max_card < 0 || max_card > c.cols())
        throw std::invalid_argument("scan_subsets: max_card outside [0, cols]");
    detail::ScanMatrix mat(c);
    SubsetScanResult result;
    result.subsets_established = 0;

    std::uint64_t total = 0;
    for (int m = 0; m <= max_card; ++m) {
        std::uint64_t b = detail::binom_saturated(c.cols(), m);
        total = (total > detail::kBinomSaturated - b) ? detail::kBinomSaturated : total + b;
    }
    bool exhaustive_all = options.mode == ScanMode::exhaustive ||
                          (options.mode == ScanMode::automatic && total <= options.budget);

    std::uint64_t remaining = options.budget;
    int floor_rank = -1;       // proven minimum of the previous size
    bool floor_exact = true;   // floor_rank is proven (all previous sizes exact)
    bool clean = true;
    for (int m = 0; m <= max_card; ++m) {
        int t = threshold ? threshold(m) : -1;
        // Monotonicity closure: once every subset of some size has full row
        // rank, larger sizes are pinned at full rank with no scanning.
        if (floor_exact && floor_rank == mat.rows) {
            SizeScanStats stats;
            stats.min_rank = mat.rows;
            stats.exact = true;
            stats.established = detail::binom_mpz(c.cols(), m);
            result.subsets_established += stats.established;
            result.per_size[m] = stats;
            if (t >= 0 && stats.min_rank < t) {
                // Bound exceeds full row rank: every size-m subset violates;
                // report the colex-first one.
                std::vector<int> witness(static_cast<std::size_t>(m));
                std::iota(witness.begin(), witness.end(), 1);
                result.violation = witness;
                result.violation_rank = mat.rows;
                clean = false;
                break;
            }
            if (clean && result.all_exact) result.clean_depth = m;
            continue;
        }
        std::uint64_t count = detail::binom_saturated(c.cols(), m);
        bool exhaustive = exhaustive_all;
        std::uint64_t planned = count;
        if (!exhaustive_all) {
            if (count <= std::min(options.samples_per_size, remaining)) {
                exhaustive = true;
            } else if (remaining > 0) {
                planned = std::min(options.samples_per_size, remaining);
            } else {
                result.all_exact = false;
                break;  // budget gone; later sizes stay unscanned
            }
        }
        detail::SizeScanOutcome outcome =
            detail::scan_size(mat, m, exhaustive, planned, t,
                              floor_exact ? floor_rank : -1, options.seed,
                              options.threads);
        SizeScanStats stats;
        stats.exact = exhaustive;
        stats.established = exhaustive ? detail::binom_mpz(c.cols(), m)
                                       : mpz_class(static_cast<unsigned long>(planned));
        result.subsets_established += stats.established;
        stats.min_rank = outcome.min_rank;
        result.per_size[m] = stats;
        if (!exhaustive) result.all_exact = false;
        if (!exhaustive_all) remaining -= std::min(planned, remaining);

        if (outcome.violation) {
            std::vector<int> witness = *outcome.violation;
            for (int& idx : witness) ++idx;  // 1-based for reports
            result.violation = witness;
            result.violation_rank = outcome.violation_rank;
            clean = false;
            break;
        }
        if (clean && stats.exact && result.all_exact) result.clean_depth = m;
        if (stats.exact && floor_exact) {
            floor_rank = stats.min_rank;
        } else {
            floor_exact = false;
        }
    }
    for (int m = 0; m <= max_card; ++m)
        if (!result.per_size.count(m)) { result.all_exact = false; break; }
    return result;
}

}  // namespace mms
