#pragma once
// The coefficient matrix of the magic-square constraint system, plus the
// order thresholds and the catalog of best known multimagic orders.
//
// For an order-N square, number the cells by a bijection phi from [1,N^2]
// to (row, col) pairs.  Each cell (i,j) contributes a 2N-dimensional column
// d_{i,j} built from standard basis vectors e_N(i), e_N(j), with an all-ones
// block subtracted when the cell lies on the main diagonal (first block) or
// the antidiagonal (second block):
//
//   rows 1..N:    row sums minus the main-diagonal sum,
//   rows N+1..2N: column sums minus the antidiagonal sum.
//
// A square Z (entrywise k-th powers) lies in the kernel of the matrix for
// all k = 1..K exactly when it is a K-multimagic square: summing the first
// block of equations and the second block of equations gives N times the
// main-diagonal and antidiagonal sums respectively, both equal to the total,
// so the two reference sums agree.

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "mms/int_matrix.hpp"
#include "mms/numbers.hpp"

namespace mms {

using Cell = std::pair<int, int>;  // (row, col), 1-based

// An ordering of the N^2 cells: cell_of(t) for t = 1..N^2.
class CellOrdering {
public:
    static CellOrdering row_major(int n) {
        CellOrdering phi;
        phi.cells_.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
        for (int i = 1; i <= n; ++i)
            for (int j = 1; j <= n; ++j) phi.cells_.emplace_back(i, j);
        return phi;
    }

    static CellOrdering column_major(int n) {
        CellOrdering phi;
        phi.cells_.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
        for (int j = 1; j <= n; ++j)
            for (int i = 1; i <= n; ++i) phi.cells_.emplace_back(i, j);
        return phi;
    }

    static CellOrdering from_cells(std::vector<Cell> cells, int n) {
        CellOrdering phi;
        phi.cells_ = std::move(cells);
        if (static_cast<int>(phi.cells_.size()) != n * n)
            throw std::invalid_argument("CellOrdering: expected N^2 cells");
        std::set<Cell> seen(phi.cells_.begin(), phi.cells_.end());
        if (static_cast<int>(seen.size()) != n * n)
            throw std::invalid_argument("CellOrdering: not a bijection");
        for (const Cell& c : phi.cells_)
            if (c.first < 1 || c.first > n || c.second < 1 || c.second > n)
                throw std::invalid_argument("CellOrdering: cell outside the square");
        return phi;
    }

    Cell cell_of(int t) const { return cells_[static_cast<std::size_t>(t - 1)]; }

    int index_of(const Cell& c) const {
        for (std::size_t t = 0; t < cells_.size(); ++t)
            if (cells_[t] == c) return static_cast<int>(t) + 1;
        throw std::out_of_range("CellOrdering: cell not present");
    }

    int size() const { return static_cast<int>(cells_.size()); }

private:
    std::vector<Cell> cells_;
};

struct MagicSystem {
    int order;                        // N >= 3
    std::vector<unsigned> exponents;  // E; {1..K} for multimagic, {k} for k-th powers
    CellOrdering ordering;

    MagicSystem(int n, std::vector<unsigned> exps)
        : order(n), exponents(std::move(exps)), ordering(CellOrdering::row_major(n)) {
        validate();
    }

    MagicSystem(int n, std::vector<unsigned> exps, CellOrdering phi)
        : order(n), exponents(std::move(exps)), ordering(std::move(phi)) {
        validate();
    }

    static MagicSystem multimagic(int n, unsigned degree) {
        std::vector<unsigned> exps;
        for (unsigned k = 1; k <= degree; ++k) exps.push_back(k);
        return MagicSystem(n, std::move(exps));
    }

private:
    void validate() const {
        if (order < 3) throw std::domain_error("MagicSystem: order must be >= 3");
        if (exponents.empty()) throw std::domain_error("MagicSystem: exponent set empty");
        for (unsigned k : exponents)
            if (k < 1) throw std::domain_error("MagicSystem: exponents must be >= 1");
        if (ordering.size() != order * order)
            throw std::invalid_argument("MagicSystem: ordering size mismatch");
    }
};

// Main diagonal and antidiagonal cell sets; they share one cell when N is
// odd and are disjoint when N is even.
inline std::pair<std::set<Cell>, std::set<Cell>> diagonal_sets(int n) {
    if (n < 1) throw std::domain_error("diagonal_sets: order must be >= 1");
    std::set<Cell> d1, d2;
    for (int i = 1; i <= n; ++i) {
        d1.insert({i, i});
        d2.insert({i, n + 1 - i});
    }
    return {d1, d2};
}

// The 2N-dimensional column d_{i,j}; entries lie in {-1, 0, 1}.
inline std::vector<int> column_vector(int n, int i, int j) {
    if (i < 1 || i > n || j < 1 || j > n)
        throw std::out_of_range("column_vector: cell outside the square");
    bool on_main = (i == j);
    bool on_anti = (i + j == n + 1);
    std::vector<int> d(static_cast<std::size_t>(2 * n), 0);
    d[static_cast<std::size_t>(i - 1)] += 1;
    d[static_cast<std::size_t>(n + j - 1)] += 1;
    if (on_main)
        for (int t = 0; t < n; ++t) d[static_cast<std::size_t>(t)] -= 1;
    if (on_anti)
        for (int t = 0; t < n; ++t) d[static_cast<std::size_t>(n + t)] -= 1;
    return d;
}

// The 2N x N^2 coefficient matrix; column t is d_{phi(t)}.
inline IntMatrix magic_matrix(const MagicSystem& sys) {
    int n = sys.order;
    IntMatrix c(2 * n, n * n);
    for (int t = 1; t <= n * n; ++t) {
        auto [i, j] = sys.ordering.cell_of(t);
        std::vector<int> d = column_vector(n, i, j);
        for (int row = 0; row < 2 * n; ++row) c.at(row, t - 1) = d[static_cast<std::size_t>(row)];
    }
    return c;
}

// Replace column i with the sum of columns i and j, delete column j
// (1-based, i < j).  The result encodes the sub-count of solutions of the
// original system whose i-th and j-th entries coincide.
inline IntMatrix merge_columns(const IntMatrix& c, int i, int j) {
    if (i < 1 || j > c.cols() || i >= j)
        throw std::invalid_argument("merge_columns: needs 1 <= i < j <= cols");
    IntMatrix merged(c.rows(), c.cols() - 1);
    for (int row = 0; row < c.rows(); ++row) {
        int out = 0;
        for (int col = 0; col < c.cols(); ++col) {
            if (col == j - 1) continue;
            mpz_class v = c.at(row, col);
            if (col == i - 1) v += c.at(row, j - 1);
            merged.at(row, out++) = v;
        }
    }
    return merged;
}

// Smallest order admitting a distinct-entry K-multimagic square by the
// general existence bound (strict inequality N > 2K(K+1)).
inline long multimagic_threshold(unsigned degree) {
    if (degree < 2) throw std::domain_error("multimagic_threshold: degree must be >= 2");
    return 2L * degree * (degree + 1) + 1;
}

// Smallest order admitting a magic square of distinct k-th powers:
// 2^(k+1) + 1 for 2 <= k <= 4, else 2*ceil(k(ln k + 4.20032)) + 1 with the
// ceiling certified by exact rational log enclosures.
inline mpz_class kth_power_threshold(unsigned k) {
    if (k < 2) throw std::domain_error("kth_power_threshold: power must be >= 2");
    if (k <= 4) {
        mpz_class r = 1;
        mpz_mul_2exp(r.get_mpz_t(), r.get_mpz_t(), k + 1);
        return r + 1;
    }
    mpq_class addend(420032, 100000);
    addend.canonicalize();
    mpz_class ceil_term = certified_ceil_k_log(mpz_class(k), addend);
    return 2 * ceil_term + 1;
}

struct CatalogEntry {
    mpz_class order;
    std::string attribution;
};

// Best known smallest orders of distinct-entry K-multimagic squares; the
// general (4K-2)^K construction covers every degree beyond the record table.
inline CatalogEntry best_known_order(unsigned degree) {
    if (degree < 2) throw std::domain_error("best_known_order: degree must be >= 2");
    switch (degree) {
        case 2: return {6, "J. Wroblewski"};
        case 3: return {12, "W. Trump"};
        case 4: return {243, "P. Fengchu"};
        case 5: return {729, "L. Wen"};
        case 6: return {4096, "P. Fengchu"};
        default: break;
    }
    mpz_class base = 4L * degree - 2;
    return {pow_mpz(base, degree), "Zhang, Chen, and Li"};
}

// ---------------------------------------------------------------------------
// Squares.
// ---------------------------------------------------------------------------

struct Square {
    int order;
    std::vector<mpz_class> cells;  // row-major

    explicit Square(int n) : order(n) {
        if (n < 1) throw std::invalid_argument("Square: order must be positive");
        cells.resize(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
    }

    Square(int n, std::initializer_list<long> values) : Square(n) {
        if (static_cast<int>(values.size()) != n * n)
            throw std::invalid_argument("Square: expected N^2 values");
        std::size_t t = 0;
        for (long v : values) cells[t++] = v;
    }

    mpz_class& at(int i, int j) {  // 1-based
        return cells[static_cast<std::size_t>(i - 1) * order + (j - 1)];
    }
    const mpz_class& at(int i, int j) const {
        return cells[static_cast<std::size_t>(i - 1) * order + (j - 1)];
    }

    bool operator==(const Square&) const = default;
};

// Entrywise k-th powers flattened along the ordering phi; this is the
// vector the coefficient matrix acts on.
inline std::vector<mpz_class> flatten_powers(const Square& z, unsigned k,
                                             const CellOrdering& phi) {
    std::vector<mpz_class> v;
    v.reserve(static_cast<std::size_t>(phi.size()));
    for (int t = 1; t <= phi.size(); ++t) {
        auto [i, j] = phi.cell_of(t);
        v.push_back(pow_mpz(z.at(i, j), k));
    }
    return v;
}

inline bool in_kernel(const IntMatrix& c, const std::vector<mpz_class>& v) {
    if (static_cast<int>(v.size()) != c.cols())
        throw std::invalid_argument("in_kernel: dimension mismatch");
    for (int i = 0; i < c.rows(); ++i) {
        mpz_class sum = 0;
        for (int j = 0; j < c.cols(); ++j) sum += c.at(i, j) * v[static_cast<std::size_t>(j)];
        if (sum != 0) return false;
    }
    return true;
}

}  // namespace mms
