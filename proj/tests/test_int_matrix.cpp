#include <doctest.h>

#include "mms/int_matrix.hpp"
#include "mms/json_io.hpp"
#include "mms/magic_system.hpp"

using mms::IntMatrix;

TEST_CASE("submatrix selects columns in the given order") {
    IntMatrix id = IntMatrix::identity(3);
    IntMatrix col = id.submatrix({2});
    CHECK(col.rows() == 3);
    CHECK(col.cols() == 1);
    CHECK(col.at(0, 0) == 0);
    CHECK(col.at(1, 0) == 1);
    CHECK(col.at(2, 0) == 0);

    IntMatrix reordered = id.submatrix({3, 1});
    CHECK(reordered.at(2, 0) == 1);
    CHECK(reordered.at(0, 1) == 1);
}

TEST_CASE("submatrix with the empty index set") {
    IntMatrix m{{1, 2}, {3, 4}};
    IntMatrix empty = m.submatrix(std::vector<int>{});
    CHECK(empty.rows() == 2);
    CHECK(empty.cols() == 0);
}

TEST_CASE("submatrix rejects bad indices") {
    IntMatrix m{{1, 2}, {3, 4}};
    CHECK_THROWS_AS((void)m.submatrix({0}), std::out_of_range);
    CHECK_THROWS_AS((void)m.submatrix({3}), std::out_of_range);
    CHECK_THROWS_AS((void)m.submatrix({1, 1}), std::invalid_argument);
}

TEST_CASE("magic matrix column through the ordering") {
    // Cell (2,2) sits on both diagonals of a 3x3 square; its column is the
    // doubled "subtract everything" pattern.
    mms::MagicSystem sys(3, {1});
    IntMatrix c = magic_matrix(sys);
    int t = sys.ordering.index_of({2, 2});
    CHECK(t == 5);
    IntMatrix col = c.submatrix({t});
    std::vector<int> expected{-1, 0, -1, -1, 0, -1};
    for (int i = 0; i < 6; ++i) CHECK(col.at(i, 0) == expected[static_cast<std::size_t>(i)]);
}

TEST_CASE("matrix JSON round-trip is exact") {
    IntMatrix m(2, 3);
    m.at(0, 0) = mpz_class("123456789012345678901234567890");
    m.at(1, 2) = -42;
    nlohmann::json j = mms::matrix_to_json(m);
    IntMatrix back = mms::matrix_from_json(j);
    CHECK(back == m);
}

TEST_CASE("matrix JSON diagnostics name the failing field") {
    nlohmann::json j{{"rows", 2}, {"cols", 2}};
    CHECK_THROWS_WITH_AS((void)mms::matrix_from_json(j),
                         doctest::Contains("\"data\""), std::invalid_argument);
    j["data"] = {"1", "2", "3"};
    CHECK_THROWS_WITH_AS((void)mms::matrix_from_json(j),
                         doctest::Contains("\"data\""), std::invalid_argument);
    j["data"] = {"1", "2", "3", "x"};
    CHECK_THROWS_AS((void)mms::matrix_from_json(j), std::invalid_argument);
}

TEST_CASE("square text round-trip") {
    mms::Square z(3, {2, 7, 6, 9, 5, 1, 4, 3, 8});
    mms::Square back = mms::square_from_text(mms::square_to_text(z));
    CHECK(back == z);
    CHECK_THROWS_AS((void)mms::square_from_text("2\n1 2 3"), std::invalid_argument);
}
