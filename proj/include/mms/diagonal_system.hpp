#pragma once
// A diagonal system: simultaneous constraints C * x^{o k} = 0 for each
// exponent k in E, where x^{o k} is the entrywise k-th power.  Entry filters
// restrict which integer vectors count as admissible solutions.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "mms/int_matrix.hpp"

namespace mms {

struct DiagonalSystem {
    IntMatrix coefficients;
    std::vector<unsigned> exponents;  // ascending, deduplicated, all >= 1

    DiagonalSystem(IntMatrix c, std::vector<unsigned> e)
        : coefficients(std::move(c)), exponents(std::move(e)) {
        if (exponents.empty())
            throw std::domain_error("DiagonalSystem: exponent set must be nonempty");
        for (unsigned k : exponents)
            if (k < 1) throw std::domain_error("DiagonalSystem: exponents must be >= 1");
        std::sort(exponents.begin(), exponents.end());
        exponents.erase(std::unique(exponents.begin(), exponents.end()), exponents.end());
        if (coefficients.cols() < 1)
            throw std::invalid_argument("DiagonalSystem: needs at least one variable");
    }

    int num_rows() const { return coefficients.rows(); }
    int num_vars() const { return coefficients.cols(); }
    int num_constraints() const {
        return num_rows() * static_cast<int>(exponents.size());
    }
};

struct Filter {
    enum class Kind { none, distinct, smooth, prime };
    Kind kind = Kind::none;
    std::int64_t smooth_bound = 0;  // Q, for Kind::smooth

    static Filter none() { return {}; }
    static Filter distinct() { return {Kind::distinct, 0}; }
    static Filter smooth(std::int64_t q) {
        if (q < 2) throw std::domain_error("smooth filter: bound must be >= 2");
        return {Kind::smooth, q};
    }
    static Filter prime() { return {Kind::prime, 0}; }

    // Grammar used by the CLI: none | distinct | smooth:Q | prime.
    static Filter parse(const std::string& text) {
        if (text.empty() || text == "none") return none();
        if (text == "distinct") return distinct();
        if (text == "prime") return prime();
        if (text.rfind("smooth:", 0) == 0)
            return smooth(std::stoll(text.substr(7)));
        throw std::invalid_argument("filter: expected none|distinct|smooth:Q|prime, got \"" +
                                    text + "\"");
    }

    std::string to_string() const {
        switch (kind) {
            case Kind::none: return "none";
            case Kind::distinct: return "distinct";
            case Kind::smooth: return "smooth:" + std::to_string(smooth_bound);
            case Kind::prime: return "prime";
        }
        return "none";
    }
};

struct CountReport {
    std::int64_t height = 0;  // P
    mpz_class total;          // solutions under the per-entry filter
    std::optional<mpz_class> distinct_count;  // additionally pairwise distinct
    std::string method;
    std::string filter;
};

}  // namespace mms
