#pragma once
// Minimum subset rank per cardinality.  Entries are exact when every
// subset of that size was accounted for (scanned, or pinned by rank
// monotonicity once some size reaches full row rank); otherwise they carry
// the minimum observed over a seeded sample and are marked accordingly.

#include <map>

#include "mms/int_matrix.hpp"
#include "mms/subset_scan.hpp"

namespace mms {

struct RankProfileEntry {
    int min_rank = 0;
    bool exact = false;
    mpz_class established;
};

inline std::map<int, RankProfileEntry> rank_profile(const IntMatrix& m, int max_card,
                                                    const ScanOptions& options = {}) {
    if (max_card < 0 || max_card > m.cols())
        throw std::invalid_argument("rank_profile: max_card outside [0, cols]");
    SubsetScanResult scan = scan_subsets(m, max_card, nullptr, options);
    std::map<int, RankProfileEntry> profile;
    for (const auto& [size, stats] : scan.per_size)
        profile[size] = RankProfileEntry{stats.min_rank, stats.exact, stats.established};
    return profile;
}

}  // namespace mms
