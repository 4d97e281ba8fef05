#pragma once
// Piecewise-affine rank threshold functions with exact rational
// coefficients, value(x) = max over pieces of slope*x + offset.
//
// The canonical instance for an r x s matrix takes the maximum of the three
// terms (x - r*frac((s-j)/r)) / floor((s-j)/r) for j in {0,1,2}; it is the
// bound whose domination by a coefficient matrix controls distinct-entry
// solution counts.  A single-piece variant (x - r*frac(c/r)) / floor(c/r)
// quantifies partitionability into floor(c/r) disjoint bases.

#include <stdexcept>
#include <vector>

#include <gmpxx.h>

namespace mms {

struct AffinePiece {
    mpq_class slope;
    mpq_class offset;
};

class ThresholdFunction {
public:
    explicit ThresholdFunction(std::vector<AffinePiece> pieces) : pieces_(std::move(pieces)) {
        if (pieces_.empty())
            throw std::invalid_argument("ThresholdFunction: needs at least one piece");
        for (const AffinePiece& p : pieces_)
            if (p.slope < 0)
                throw std::invalid_argument("ThresholdFunction: pieces must be nondecreasing");
    }

    mpq_class value(long x) const {
        mpq_class best = pieces_.front().slope * x + pieces_.front().offset;
        for (std::size_t i = 1; i < pieces_.size(); ++i) {
            mpq_class v = pieces_[i].slope * x + pieces_[i].offset;
            if (v > best) best = v;
        }
        return best;
    }

    const std::vector<AffinePiece>& pieces() const { return pieces_; }

private:
    std::vector<AffinePiece> pieces_;
};

namespace detail {

// (x - r*frac(c/r)) / floor(c/r) as an affine piece; requires floor(c/r) >= 1.
inline AffinePiece division_piece(long r, long c) {
    long quot = c / r;
    long rem = c % r;  // equals r * frac(c/r)
    if (quot < 1)
        throw std::domain_error("threshold piece needs c >= r");
    AffinePiece piece{mpq_class(1, quot), mpq_class(-rem, quot)};
    piece.slope.canonicalize();
    piece.offset.canonicalize();
    return piece;
}

}  // namespace detail

// The three-piece threshold for an r x s matrix; defined for s >= r + 2 so
// every denominator floor((s-j)/r) is positive.
inline ThresholdFunction threshold_function(long r, long s) {
    if (r < 1) throw std::domain_error("threshold_function: r must be positive");
    if (s < r + 2) throw std::domain_error("threshold_function: requires s >= r + 2");
    return ThresholdFunction({detail::division_piece(r, s),
                              detail::division_piece(r, s - 1),
                              detail::division_piece(r, s - 2)});
}

// Single-piece bound x -> (x - r*frac(c/r)) / floor(c/r); dominating it
// forces floor(c/r) disjoint full-rank column bases among any c columns.
inline ThresholdFunction partition_bound_function(long r, long c) {
    if (r < 1) throw std::domain_error("partition_bound_function: r must be positive");
    if (c < r) throw std::domain_error("partition_bound_function: requires c >= r");
    return ThresholdFunction({detail::division_piece(r, c)});
}

inline mpq_class eval_F(long r, long s, long x) {
    return threshold_function(r, s).value(x);
}

}  // namespace mms
