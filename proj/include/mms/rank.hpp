#pragma once
// Exact matrix rank over the rationals via fraction-free (Bareiss)
// elimination.  Every intermediate entry of the Bareiss scheme is a minor of
// the input matrix, so a Hadamard bound on the minors decides up front
// whether the whole elimination fits in int64; otherwise the same scheme
// runs on mpz.  Either way the result is exact.

#include <cmath>
#include <cstdint>
#include <vector>

#include <gmpxx.h>

#include "mms/int_matrix.hpp"

namespace mms {

namespace detail {

// Bareiss rank on a row-major int64 buffer, destructive.
inline int rank_bareiss_i64(std::int64_t* a, int rows, int cols) {
    int rank = 0;
    std::int64_t prev = 1;
    for (int col = 0; col < cols && rank < rows; ++col) {
        int pivot = -1;
        for (int i = rank; i < rows; ++i)
            if (a[i * cols + col] != 0) { pivot = i; break; }
        if (pivot < 0) continue;
        if (pivot != rank)
            for (int j = col; j < cols; ++j)
                std::swap(a[pivot * cols + j], a[rank * cols + j]);
        std::int64_t p = a[rank * cols + col];
        for (int i = rank + 1; i < rows; ++i) {
            std::int64_t head = a[i * cols + col];
            for (int j = col + 1; j < cols; ++j)
                a[i * cols + j] =
                    (a[i * cols + j] * p - head * a[rank * cols + j]) / prev;
            a[i * cols + col] = 0;
        }
        prev = p;
        ++rank;
    }
    return rank;
}

inline int rank_bareiss_mpz(std::vector<mpz_class>& a, int rows, int cols) {
    int rank = 0;
    mpz_class prev = 1;
    mpz_class tmp;
    for (int col = 0; col < cols && rank < rows; ++col) {
        int pivot = -1;
        for (int i = rank; i < rows; ++i)
            if (a[static_cast<std::size_t>(i) * cols + col] != 0) { pivot = i; break; }
        if (pivot < 0) continue;
        if (pivot != rank)
            for (int j = col; j < cols; ++j)
                std::swap(a[static_cast<std::size_t>(pivot) * cols + j],
                          a[static_cast<std::size_t>(rank) * cols + j]);
        const mpz_class& p = a[static_cast<std::size_t>(rank) * cols + col];
        for (int i = rank + 1; i < rows; ++i) {
            mpz_class head = a[static_cast<std::size_t>(i) * cols + col];
            for (int j = col + 1; j < cols; ++j) {
                mpz_class& cell = a[static_cast<std::size_t>(i) * cols + j];
                tmp = cell * p - head * a[static_cast<std::size_t>(rank) * cols + j];
                mpz_divexact(cell.get_mpz_t(), tmp.get_mpz_t(), prev.get_mpz_t());
            }
            a[static_cast<std::size_t>(i) * cols + col] = 0;
        }
        prev = p;
        ++rank;
    }
    return rank;
}

// True when all k x k minors are provably small enough that the Bareiss
// update (two products of minors plus a subtraction) stays inside int64.
// Uses the Hadamard bound in log2 space with a safety margin.
inline bool bareiss_fits_i64(const IntMatrix& m) {
    int k = std::min(m.rows(), m.cols());
    std::vector<double> row_log(static_cast<std::size_t>(m.rows()), 0.0);
    for (int i = 0; i < m.rows(); ++i) {
        double norm2 = 0.0;
        for (int j = 0; j < m.cols(); ++j) {
            const mpz_class& v = m.at(i, j);
            if (!v.fits_slong_p()) return false;
            double d = std::fabs(v.get_d());
            norm2 += d * d;
        }
        row_log[static_cast<std::size_t>(i)] = 0.5 * std::log2(norm2 + 1.0);
    }
    std::sort(row_log.begin(), row_log.end(), std::greater<double>());
    double minor_bits = 0.0;
    for (int i = 0; i < k; ++i) minor_bits += row_log[static_cast<std::size_t>(i)];
    // Products of two minors plus headroom for the subtraction and margin.
    return 2.0 * minor_bits + 2.0 < 62.0;
}

}  // namespace detail

// Rank of M over Q, computed exactly.  Empty column sets are allowed.
inline int rank(const IntMatrix& m) {
    if (m.cols() == 0) return 0;
    if (detail::bareiss_fits_i64(m)) {
        std::vector<std::int64_t> buf(static_cast<std::size_t>(m.rows()) * m.cols());
        for (int i = 0; i < m.rows(); ++i)
            for (int j = 0; j < m.cols(); ++j)
                buf[static_cast<std::size_t>(i) * m.cols() + j] = m.at(i, j).get_si();
        return detail::rank_bareiss_i64(buf.data(), m.rows(), m.cols());
    }
    std::vector<mpz_class> buf(m.entries().begin(), m.entries().end());
    return detail::rank_bareiss_mpz(buf, m.rows(), m.cols());
}

}  // namespace mms
