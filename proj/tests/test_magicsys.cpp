#include <doctest.h>

#include <random>
#include <set>

#include "mms/magic_system.hpp"
#include "mms/numbers.hpp"
#include "mms/rank.hpp"
#include "mms/rank_profile.hpp"

using mms::IntMatrix;
using mms::MagicSystem;
using mms::Square;

TEST_CASE("diagonal sets and their overlap parity") {
    auto [d1, d2] = mms::diagonal_sets(3);
    CHECK(d1 == std::set<mms::Cell>{{1, 1}, {2, 2}, {3, 3}});
    CHECK(d2 == std::set<mms::Cell>{{1, 3}, {2, 2}, {3, 1}});

    auto [e1, e2] = mms::diagonal_sets(4);
    std::set<mms::Cell> inter;
    for (const auto& c : e1)
        if (e2.count(c)) inter.insert(c);
    CHECK(inter.empty());

    auto [f1, f2] = mms::diagonal_sets(5);
    inter.clear();
    for (const auto& c : f1)
        if (f2.count(c)) inter.insert(c);
    CHECK(inter == std::set<mms::Cell>{{3, 3}});
}

TEST_CASE("column vectors cover all four cell classes") {
    CHECK(mms::column_vector(3, 1, 2) == std::vector<int>{1, 0, 0, 0, 1, 0});
    CHECK(mms::column_vector(3, 2, 2) == std::vector<int>{-1, 0, -1, -1, 0, -1});
    CHECK(mms::column_vector(3, 1, 1) == std::vector<int>{0, -1, -1, 1, 0, 0});
    CHECK(mms::column_vector(3, 3, 1) == std::vector<int>{0, 0, 1, 0, -1, -1});
    CHECK_THROWS_AS((void)mms::column_vector(3, 0, 1), std::out_of_range);
}

TEST_CASE("magic matrix dimensions and rank") {
    IntMatrix c3 = magic_matrix(MagicSystem(3, {1}));
    CHECK(c3.rows() == 6);
    CHECK(c3.cols() == 9);
    IntMatrix c4 = magic_matrix(MagicSystem(4, {1}));
    CHECK(mms::rank(c4) == 8);
}

TEST_CASE("merge_columns") {
    IntMatrix row{{1, 2, 3}};
    IntMatrix merged = merge_columns(row, 1, 2);
    CHECK(merged.cols() == 2);
    CHECK(merged.at(0, 0) == 3);
    CHECK(merged.at(0, 1) == 3);

    IntMatrix id2 = IntMatrix::identity(2);
    IntMatrix m2 = merge_columns(id2, 1, 2);
    CHECK(m2.cols() == 1);
    CHECK(m2.at(0, 0) == 1);
    CHECK(m2.at(1, 0) == 1);

    // Merging the generic cells (1,2) and (2,1) of the order-3 system.
    MagicSystem sys(3, {1});
    IntMatrix c3 = magic_matrix(sys);
    int ta = sys.ordering.index_of({1, 2});
    int tb = sys.ordering.index_of({2, 1});
    IntMatrix m3 = merge_columns(c3, std::min(ta, tb), std::max(ta, tb));
    std::vector<int> expected{1, 1, 0, 1, 1, 0};
    for (int i = 0; i < 6; ++i)
        CHECK(m3.at(i, std::min(ta, tb) - 1) == expected[static_cast<std::size_t>(i)]);

    CHECK_THROWS_AS((void)merge_columns(row, 2, 2), std::invalid_argument);
    CHECK_THROWS_AS((void)merge_columns(row, 1, 4), std::invalid_argument);
}

TEST_CASE("order thresholds") {
    CHECK(mms::multimagic_threshold(2) == 13);
    CHECK(mms::multimagic_threshold(3) == 25);
    CHECK(mms::multimagic_threshold(6) == 85);
    CHECK_THROWS_AS((void)mms::multimagic_threshold(1), std::domain_error);

    CHECK(mms::kth_power_threshold(2) == 9);
    CHECK(mms::kth_power_threshold(3) == 17);
    CHECK(mms::kth_power_threshold(4) == 33);
    CHECK(mms::kth_power_threshold(5) == 61);
    CHECK_THROWS_AS((void)mms::kth_power_threshold(1), std::domain_error);
}

TEST_CASE("certified log enclosures narrow around ln 2") {
    // ln 2 = 0.69314718...; the enclosure must trap it tightly.
    mms::RationalInterval iv = mms::ln_interval(mpz_class(2), 32);
    CHECK(iv.lo <= iv.hi);
    CHECK(iv.lo > mpq_class(693147, 1000000));
    CHECK(iv.hi < mpq_class(693148, 1000000));
}

TEST_CASE("best known order catalog") {
    CHECK(mms::best_known_order(2).order == 6);
    CHECK(mms::best_known_order(3).order == 12);
    CHECK(mms::best_known_order(4).order == 243);
    CHECK(mms::best_known_order(4).attribution == "P. Fengchu");
    CHECK(mms::best_known_order(5).order == 729);
    CHECK(mms::best_known_order(6).order == 4096);
    CHECK(mms::best_known_order(7).order == mms::pow_mpz(mpz_class(26), 7));
    CHECK(mms::best_known_order(7).attribution == "Zhang, Chen, and Li");
    CHECK_THROWS_AS((void)mms::best_known_order(1), std::domain_error);
}

TEST_CASE("magic matrix entries and the count of columns with a -1 block") {
    // Cells on either diagonal get a subtracted ones-block, so the count is
    // |D1 union D2|: 2N for even N, 2N-1 for odd N.
    for (int n = 3; n <= 8; ++n) {
        IntMatrix c = magic_matrix(MagicSystem(n, {1}));
        int with_minus = 0;
        for (int j = 0; j < c.cols(); ++j) {
            bool has_minus = false;
            for (int i = 0; i < c.rows(); ++i) {
                CHECK(abs(c.at(i, j)) <= 1);
                has_minus = has_minus || c.at(i, j) < 0;
            }
            if (has_minus) ++with_minus;
        }
        CHECK(with_minus == (n % 2 == 0 ? 2 * n : 2 * n - 1));
    }
}

namespace {

// Direct statement of the system the matrix encodes: every row power-sum
// equals the main-diagonal power-sum and every column power-sum equals the
// antidiagonal power-sum.
bool direct_encoding_holds(const Square& z, unsigned k) {
    int n = z.order;
    mpz_class main_sum = 0, anti_sum = 0;
    for (int i = 1; i <= n; ++i) {
        main_sum += mms::pow_mpz(z.at(i, i), k);
        anti_sum += mms::pow_mpz(z.at(i, n + 1 - i), k);
    }
    for (int i = 1; i <= n; ++i) {
        mpz_class row = 0;
        for (int j = 1; j <= n; ++j) row += mms::pow_mpz(z.at(i, j), k);
        if (row != main_sum) return false;
    }
    for (int j = 1; j <= n; ++j) {
        mpz_class col = 0;
        for (int i = 1; i <= n; ++i) col += mms::pow_mpz(z.at(i, j), k);
        if (col != anti_sum) return false;
    }
    return true;
}

}  // namespace

TEST_CASE("kernel membership encodes exactly the magic conditions") {
    MagicSystem sys(3, {1, 2});
    IntMatrix c = magic_matrix(sys);

    // Complete box with entries in {-1, 0, 1}.
    Square z(3);
    int agree = 0;
    for (long code = 0; code < 19683; ++code) {
        long rest = code;
        for (int t = 0; t < 9; ++t) {
            z.cells[static_cast<std::size_t>(t)] = rest % 3 - 1;
            rest /= 3;
        }
        for (unsigned k : {1u, 2u}) {
            bool lhs = in_kernel(c, flatten_powers(z, k, sys.ordering));
            bool rhs = direct_encoding_holds(z, k);
            REQUIRE(lhs == rhs);
            agree += lhs;
        }
    }
    CHECK(agree > 0);  // the box contains genuine solutions

    // Random sample from the wider box [-3, 3].
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> dist(-3, 3);
    for (int trial = 0; trial < 20000; ++trial) {
        for (auto& cell : z.cells) cell = dist(rng);
        for (unsigned k : {1u, 2u})
            REQUIRE(in_kernel(c, flatten_powers(z, k, sys.ordering)) ==
                    direct_encoding_holds(z, k));
    }

    // A known magic square sits in the k=1 kernel but not the k=2 one.
    Square loshu(3, {2, 7, 6, 9, 5, 1, 4, 3, 8});
    CHECK(in_kernel(c, flatten_powers(loshu, 1, sys.ordering)));
    CHECK_FALSE(in_kernel(c, flatten_powers(loshu, 2, sys.ordering)));
}

TEST_CASE("kernel membership forces equal diagonal sums") {
    // Summing the two equation blocks shows both reference sums equal the
    // grand total over N; spot-check on kernel members.
    MagicSystem sys(3, {1});
    IntMatrix c = magic_matrix(sys);
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> dist(-2, 2);
    Square z(3);
    int found = 0;
    for (int trial = 0; trial < 200000 && found < 50; ++trial) {
        for (auto& cell : z.cells) cell = dist(rng);
        if (!in_kernel(c, flatten_powers(z, 1, sys.ordering))) continue;
        ++found;
        mpz_class main_sum = 0, anti_sum = 0;
        for (int i = 1; i <= 3; ++i) {
            main_sum += z.at(i, i);
            anti_sum += z.at(i, 4 - i);
        }
        REQUIRE(main_sum == anti_sum);
    }
    CHECK(found > 0);
}

TEST_CASE("rank profile of the magic matrix does not depend on the cell ordering") {
    auto profile_with = [](const mms::CellOrdering& phi) {
        MagicSystem sys(4, {1}, phi);
        return mms::rank_profile(magic_matrix(sys), 16);
    };
    auto row_major = profile_with(mms::CellOrdering::row_major(4));
    auto col_major = profile_with(mms::CellOrdering::column_major(4));

    std::vector<mms::Cell> cells;
    for (int i = 1; i <= 4; ++i)
        for (int j = 1; j <= 4; ++j) cells.push_back({i, j});
    std::mt19937_64 rng(5);
    std::shuffle(cells.begin(), cells.end(), rng);
    auto shuffled = profile_with(mms::CellOrdering::from_cells(cells, 4));

    for (int m = 0; m <= 16; ++m) {
        CHECK(row_major.at(m).min_rank == col_major.at(m).min_rank);
        CHECK(row_major.at(m).min_rank == shuffled.at(m).min_rank);
    }
}

TEST_CASE("exponent identity behind the threshold") {
    for (unsigned k = 2; k <= 6; ++k)
        for (long n = 1; n <= 100; ++n)
            CHECK(n * n - n * static_cast<long>(k) * (k + 1) == n * (n - static_cast<long>(k) * (k + 1)));
}
