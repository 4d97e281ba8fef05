#pragma once
// Dense matrices of arbitrary-precision integers, row-major.  This is the
// carrier type for every coefficient matrix in the library; no floating
// point enters any computation built on it.
//
// Column indices in the public operations are 1-based, matching the
// J-subset convention used throughout the CLI and reports.

#include <cstdint>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace mms {

class IntMatrix {
public:
    IntMatrix(int rows, int cols) : rows_(rows), cols_(cols) {
        if (rows < 1) throw std::invalid_argument("IntMatrix: rows must be positive");
        if (cols < 0) throw std::invalid_argument("IntMatrix: cols must be nonnegative");
        data_.resize(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols));
    }

    IntMatrix(std::initializer_list<std::initializer_list<long>> rows_init) {
        rows_ = static_cast<int>(rows_init.size());
        if (rows_ == 0) throw std::invalid_argument("IntMatrix: rows must be positive");
        cols_ = static_cast<int>(rows_init.begin()->size());
        data_.reserve(static_cast<std::size_t>(rows_) * static_cast<std::size_t>(cols_));
        for (const auto& row : rows_init) {
            if (static_cast<int>(row.size()) != cols_)
                throw std::invalid_argument("IntMatrix: ragged initializer");
            for (long v : row) data_.emplace_back(v);
        }
    }

    static IntMatrix identity(int n) {
        IntMatrix m(n, n);
        for (int i = 0; i < n; ++i) m.at(i, i) = 1;
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    // 0-based element access.
    mpz_class& at(int i, int j) { return data_[index(i, j)]; }
    const mpz_class& at(int i, int j) const { return data_[index(i, j)]; }

    std::span<const mpz_class> entries() const { return data_; }

    bool operator==(const IntMatrix& other) const {
        return rows_ == other.rows_ && cols_ == other.cols_ && data_ == other.data_;
    }

    IntMatrix transpose() const {
        IntMatrix t(cols_ > 0 ? cols_ : 1, rows_);
        if (cols_ == 0) return IntMatrix(1, 0);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) t.at(j, i) = at(i, j);
        return t;
    }

    // Columns indexed by J (1-based), in the given order.  Duplicate or
    // out-of-range indices are rejected.
    IntMatrix submatrix(std::span<const int> j_cols) const {
        std::vector<bool> seen(static_cast<std::size_t>(cols_) + 1, false);
        IntMatrix sub(rows_, static_cast<int>(j_cols.size()));
        for (std::size_t t = 0; t < j_cols.size(); ++t) {
            int j = j_cols[t];
            if (j < 1 || j > cols_)
                throw std::out_of_range("submatrix: column index " + std::to_string(j) +
                                        " outside [1," + std::to_string(cols_) + "]");
            if (seen[static_cast<std::size_t>(j)])
                throw std::invalid_argument("submatrix: duplicate column index " +
                                            std::to_string(j));
            seen[static_cast<std::size_t>(j)] = true;
            for (int i = 0; i < rows_; ++i) sub.at(i, static_cast<int>(t)) = at(i, j - 1);
        }
        return sub;
    }

    IntMatrix submatrix(const std::vector<int>& j_cols) const {
        return submatrix(std::span<const int>(j_cols));
    }

private:
    std::size_t index(int i, int j) const {
        return static_cast<std::size_t>(i) * static_cast<std::size_t>(cols_) +
               static_cast<std::size_t>(j);
    }

    int rows_ = 1;
    int cols_ = 0;
    std::vector<mpz_class> data_;
};

}  // namespace mms
