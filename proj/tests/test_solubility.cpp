#include <doctest.h>

#include "mms/solubility.hpp"

using mms::DiagonalSystem;
using mms::IntMatrix;

namespace {

// Independent check of a p-adic certificate: residuals vanish to the stated
// modulus and the Jacobian has an m x m minor of exactly the stated
// valuation.
void check_certificate(const DiagonalSystem& sys, const mms::PadicWitness& w, std::int64_t p) {
    auto residuals = mms::detail::residuals_at(sys, w.point);
    for (const mpz_class& v : residuals) REQUIRE(v % w.modulus == 0);
    auto tau = mms::detail::min_minor_valuation(mms::detail::jacobian_at(sys, w.point), p);
    REQUIRE(tau.has_value());
    REQUIRE(*tau == w.tau);
    REQUIRE(w.modulus == mms::pow_mpz(mpz_class(p), 2 * w.tau + 1));
}

}  // namespace

TEST_CASE("the two-plus-two system has a nonsingular witness mod 5") {
    DiagonalSystem sys(IntMatrix{{1, 1, -1, -1}}, {1, 2});
    auto result = mms::padic_nonsingular_solution(sys, 5);
    REQUIRE(result.witness.has_value());
    check_certificate(sys, *result.witness, 5);
    CHECK(result.witness->tau == 0);

    // The worked point (1,2,2,1) is itself a certificate: sums vanish and
    // the Jacobian [[1,1,-1,-1],[2,4,-4,-2]] has a unit 2x2 minor mod 5.
    std::vector<mpz_class> point{1, 2, 2, 1};
    auto tau = mms::detail::min_minor_valuation(mms::detail::jacobian_at(sys, point), 5);
    REQUIRE(tau.has_value());
    CHECK(*tau == 0);
    for (const mpz_class& v : mms::detail::residuals_at(sys, point)) CHECK(v == 0);
}

TEST_CASE("p = 2 needs the valuation-refined certificate when squares appear") {
    DiagonalSystem sys(IntMatrix{{1, 1, -1, -1}}, {1, 2});
    auto result = mms::padic_nonsingular_solution(sys, 2);
    REQUIRE(result.witness.has_value());
    check_certificate(sys, *result.witness, 2);
    // The square-row Jacobian entries are all even, so tau = 0 is
    // unreachable here.
    CHECK(result.witness->tau >= 1);
}

TEST_CASE("the zero vector is never a witness once a higher power is present") {
    DiagonalSystem sys(IntMatrix{{1, 1, -1, -1}}, {1, 2});
    std::vector<mpz_class> zero(4, 0);
    auto tau = mms::detail::min_minor_valuation(mms::detail::jacobian_at(sys, zero), 5);
    CHECK_FALSE(tau.has_value());
}

TEST_CASE("sum of two squares mod 3 has no nonsingular solution") {
    DiagonalSystem sys(IntMatrix{{1, 1}}, {2});
    auto result = mms::padic_nonsingular_solution(sys, 3);
    CHECK_FALSE(result.witness.has_value());
    CHECK(result.search_exhaustive);
}

TEST_CASE("prime validation") {
    DiagonalSystem sys(IntMatrix{{1, -1}}, {1});
    CHECK_THROWS_AS((void)mms::padic_nonsingular_solution(sys, 4), std::domain_error);
}

TEST_CASE("real witnesses") {
    DiagonalSystem sys(IntMatrix{{1, 1, -1, -1}}, {1, 2});
    auto w = mms::real_nonsingular_solution(sys);
    REQUIRE(w.has_value());
    CHECK(w->exact);
    CHECK(w->residual == 0.0);
    CHECK(w->jacobian_sigma_min > 1e-6);

    DiagonalSystem sum_squares(IntMatrix{{1, 1}}, {2});
    CHECK_FALSE(mms::real_nonsingular_solution(sum_squares).has_value());

    DiagonalSystem line(IntMatrix{{1, -1}}, {1});
    auto lw = mms::real_nonsingular_solution(line);
    REQUIRE(lw.has_value());
}

TEST_CASE("solubility report aggregates per-prime evidence") {
    DiagonalSystem sys(IntMatrix{{1, 1, -1, -1}}, {1, 2});
    auto report = mms::solubility_report(sys, 20);
    CHECK(report.evidence_positive);
    CHECK(report.padic.size() == 8);  // primes up to 20
    for (const auto& pr : report.padic) {
        REQUIRE(pr.witness.has_value());
        check_certificate(sys, *pr.witness, pr.prime);
    }

    DiagonalSystem sum_squares(IntMatrix{{1, 1}}, {2});
    auto negative = mms::solubility_report(sum_squares, 5);
    CHECK_FALSE(negative.evidence_positive);

    CHECK_THROWS_AS((void)mms::solubility_report(sys, 1), std::domain_error);
    CHECK_THROWS_AS((void)DiagonalSystem(IntMatrix{{1, 1}}, std::vector<unsigned>{}),
                    std::domain_error);
}

TEST_CASE("x^2 + y^2 = 3 z^2 has no 2-adic certificate, exhaustively") {
    // Squares are 0, 1 or 4 mod 8, so x^2 + y^2 - 3 z^2 == 0 mod 8 forces
    // all of x, y, z even; the full residue scan mod 8 confirms no point
    // certifies.
    DiagonalSystem sys(IntMatrix{{1, 1, -3}}, {2});
    auto result = mms::padic_nonsingular_solution(sys, 2);
    CHECK_FALSE(result.witness.has_value());
    CHECK(result.search_exhaustive);
}

TEST_CASE("the zero vector certifies large purely linear systems immediately") {
    // At order 8 the small-box enumeration is far out of reach (3^64
    // points), but the zero vector is an exact solution whose Jacobian is
    // the full-rank coefficient matrix itself.
    DiagonalSystem sys(magic_matrix(mms::MagicSystem(8, {1})), {1});
    mms::SolubilityOptions opts;
    opts.attempts = 10;  // the exact route must not depend on sampling
    auto report = mms::solubility_report(sys, 7, opts);
    CHECK(report.evidence_positive);
    for (const auto& pr : report.padic) {
        REQUIRE(pr.witness.has_value());
        check_certificate(sys, *pr.witness, pr.prime);
    }
    REQUIRE(report.real.has_value());
    CHECK(report.real->exact);
}

TEST_CASE("the order-3 magic system with k = 1 is soluble at every small prime") {
    // For the linear system the Jacobian is the coefficient matrix itself,
    // so exact kernel vectors in the small box certify every prime at once.
    DiagonalSystem sys(magic_matrix(mms::MagicSystem(3, {1})), {1});
    auto report = mms::solubility_report(sys, 11);
    CHECK(report.evidence_positive);
    for (const auto& pr : report.padic) {
        REQUIRE(pr.witness.has_value());
        check_certificate(sys, *pr.witness, pr.prime);
    }
    REQUIRE(report.real.has_value());
    CHECK(report.real->exact);
}

TEST_CASE("reports are deterministic under a fixed seed") {
    DiagonalSystem sys(IntMatrix{{1, 2, -1, -3}}, {1, 2});
    mms::SolubilityOptions opts;
    opts.seed = 42;
    opts.attempts = 2000;
    auto a = mms::solubility_report(sys, 7, opts);
    auto b = mms::solubility_report(sys, 7, opts);
    REQUIRE(a.padic.size() == b.padic.size());
    CHECK(a.evidence_positive == b.evidence_positive);
    for (std::size_t i = 0; i < a.padic.size(); ++i) {
        REQUIRE(a.padic[i].witness.has_value() == b.padic[i].witness.has_value());
        if (a.padic[i].witness)
            CHECK(a.padic[i].witness->point == b.padic[i].witness->point);
    }
    REQUIRE(a.real.has_value() == b.real.has_value());
    if (a.real) CHECK(a.real->point == b.real->point);
}
