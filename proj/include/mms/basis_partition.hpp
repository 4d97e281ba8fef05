#pragma once
// Partitioning columns into disjoint full-row-rank bases, via matroid union
// with augmenting paths in the exchange graph.  Independence of a column
// set means exact rank equal to its cardinality, so the search is complete:
// a returned partition is always valid, and a nullopt answer means no
// partition into the requested number of bases exists.
//
// Augmenting step: to place a column e, breadth-first search over columns
// where x steps to y when y sits in some block l and (I_l - y) + x stays
// independent; the search ends at a column that some block can absorb
// directly.  Applying the exchanges along a shortest such path keeps every
// block independent.  Columns are processed in ascending index order and
// neighbors explored blocks-then-columns ascending, so results are
// deterministic.

#include <optional>
#include <queue>
#include <stdexcept>
#include <vector>

#include "mms/int_matrix.hpp"
#include "mms/rank.hpp"

namespace mms {

struct BasisPartition {
    std::vector<std::vector<int>> blocks;  // 1-based column indices
};

namespace detail {

class PartitionSearch {
public:
    PartitionSearch(const IntMatrix& c, int n_blocks)
        : c_(c), blocks_(static_cast<std::size_t>(n_blocks)) {}

    bool run() {
        int placed = 0;
        for (int e = 0; e < c_.cols(); ++e)
            if (augment(e)) ++placed;
        return placed == static_cast<int>(blocks_.size()) * c_.rows();
    }

    BasisPartition partition() const {
        BasisPartition p;
        for (const auto& block : blocks_) {
            std::vector<int> out;
            out.reserve(block.size());
            for (int col : block) out.push_back(col + 1);
            std::sort(out.begin(), out.end());
            p.blocks.push_back(std::move(out));
        }
        return p;
    }

private:
    bool independent_with(const std::vector<int>& block, int extra, int skip) const {
        std::vector<int> cols;
        cols.reserve(block.size() + 1);
        for (int col : block)
            if (col != skip) cols.push_back(col + 1);
        if (extra >= 0) cols.push_back(extra + 1);
        return rank(c_.submatrix(cols)) == static_cast<int>(cols.size());
    }

    // Try to place column e, shifting earlier placements along a shortest
    // exchange path when needed.
    bool augment(int e) {
        int s = c_.cols();
        std::vector<int> parent(static_cast<std::size_t>(s), -1);
        std::vector<int> parent_block(static_cast<std::size_t>(s), -1);
        std::vector<bool> visited(static_cast<std::size_t>(s), false);
        std::vector<int> owner(static_cast<std::size_t>(s), -1);
        for (std::size_t l = 0; l < blocks_.size(); ++l)
            for (int col : blocks_[l]) owner[static_cast<std::size_t>(col)] = static_cast<int>(l);

        std::queue<int> queue;
        queue.push(e);
        visited[static_cast<std::size_t>(e)] = true;
        while (!queue.empty()) {
            int x = queue.front();
            queue.pop();
            for (std::size_t l = 0; l < blocks_.size(); ++l) {
                if (owner[static_cast<std::size_t>(x)] == static_cast<int>(l)) continue;
                if (static_cast<int>(blocks_[l].size()) < c_.rows() &&
                    independent_with(blocks_[l], x, -1)) {
                    apply_path(x, static_cast<int>(l), parent, parent_block);
                    return true;
                }
                for (int y : blocks_[l]) {
                    if (visited[static_cast<std::size_t>(y)]) continue;
                    if (independent_with(blocks_[l], x, y)) {
                        visited[static_cast<std::size_t>(y)] = true;
                        parent[static_cast<std::size_t>(y)] = x;
                        parent_block[static_cast<std::size_t>(y)] = static_cast<int>(l);
                        queue.push(y);
                    }
                }
            }
        }
        return false;
    }

    void apply_path(int x, int final_block, const std::vector<int>& parent,
                    const std::vector<int>& parent_block) {
        // x joins final_block; then walk back: each node on the path takes
        // the slot its successor vacated.
        blocks_[static_cast<std::size_t>(final_block)].push_back(x);
        int cur = x;
        while (parent[static_cast<std::size_t>(cur)] != -1) {
            int prev = parent[static_cast<std::size_t>(cur)];
            int l = parent_block[static_cast<std::size_t>(cur)];
            auto& block = blocks_[static_cast<std::size_t>(l)];
            for (int& col : block)
                if (col == cur) { col = prev; break; }
            cur = prev;
        }
        for (const auto& block : blocks_)
            if (!block.empty() && !independent_with(block, -1, -1))
                throw std::logic_error("basis partition: exchange path broke independence");
    }

    const IntMatrix& c_;
    std::vector<std::vector<int>> blocks_;
};

}  // namespace detail

// Finds n disjoint column sets of size r = rows, each of full row rank, or
// nullopt when no such family exists among the columns.
inline std::optional<BasisPartition> find_basis_partition(const IntMatrix& c, int n_blocks) {
    if (n_blocks < 0) throw std::invalid_argument("find_basis_partition: negative block count");
    if (n_blocks == 0) return BasisPartition{};
    if (c.cols() == 0) return std::nullopt;
    if (rank(c) < c.rows())
        throw std::domain_error("find_basis_partition: matrix is rank-deficient");
    if (static_cast<long>(c.cols()) < static_cast<long>(n_blocks) * c.rows()) return std::nullopt;
    detail::PartitionSearch search(c, n_blocks);
    if (!search.run()) return std::nullopt;
    return search.partition();
}

inline bool verify_partition(const IntMatrix& c, const BasisPartition& p) {
    std::vector<bool> used(static_cast<std::size_t>(c.cols()) + 1, false);
    for (const auto& block : p.blocks) {
        if (static_cast<int>(block.size()) != c.rows()) return false;
        for (int col : block) {
            if (col < 1 || col > c.cols()) return false;
            if (used[static_cast<std::size_t>(col)]) return false;
            used[static_cast<std::size_t>(col)] = true;
        }
        if (rank(c.submatrix(block)) != c.rows()) return false;
    }
    return true;
}

// Largest n for which find_basis_partition succeeds; 0 when the matrix does
// not even reach full row rank.
inline int largest_partitionable(const IntMatrix& c) {
    if (c.cols() == 0 || rank(c) < c.rows()) return 0;
    int best = 0;
    for (int n = 1; static_cast<long>(n) * c.rows() <= c.cols(); ++n) {
        if (find_basis_partition(c, n))
            best = n;
        else
            break;
    }
    return best;
}

}  // namespace mms
