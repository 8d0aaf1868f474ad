#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "tmk/lacunary.hpp"
#include "tmk/quadrature.hpp"
#include "tmk/rng.hpp"

using namespace tmk;

namespace {
FixedFraction frac_of(std::uint64_t p, std::uint64_t q, int P = 64) {
    return frac_shift(BinaryReal::rational(p, q), 0, P);
}
}  // namespace

TEST_CASE("f1 point values") {
    CHECK(lac::f1(frac_of(1, 2)) == Catch::Approx(std::log(2.0)).margin(1e-15));
    CHECK(lac::f1(frac_of(1, 6)) == Catch::Approx(0.0).margin(1e-12));
    CHECK(lac::f1(frac_of(1, 4)) == Catch::Approx(0.5 * std::log(2.0)).margin(1e-15));
    CHECK_THROWS_AS(lac::f1(FixedFraction(BigInt(1), 64)), SingularityError);
    CHECK_THROWS_AS(lac::f1(FixedFraction((BigInt(1) << 64) - 2, 64)), SingularityError);
}

TEST_CASE("f2 point values") {
    CHECK(lac::f2(frac_of(0, 1)) == Catch::Approx(std::log(2.0)).margin(1e-15));
    CHECK(lac::f2(frac_of(1, 3)) == Catch::Approx(0.0).margin(1e-12));
    CHECK(lac::f2(frac_of(1, 4)) == Catch::Approx(0.5 * std::log(2.0)).margin(1e-15));
    CHECK_THROWS_AS(lac::f2(FixedFraction((BigInt(1) << 63) + 1, 64)), SingularityError);
}

TEST_CASE("fourier coefficients") {
    CHECK(lac::fourier_coeff(lac::Which::f1, 1).to_double() == -1.0);
    CHECK(lac::fourier_coeff(lac::Which::f2, 2).to_double() == -0.5);
    CHECK(lac::fourier_coeff(lac::Which::f1, 10).to_double() == -0.1);
    CHECK(lac::fourier_coeff(lac::Which::f2, 3).to_double() == Catch::Approx(1.0 / 3));
    CHECK_THROWS_AS(lac::fourier_coeff(lac::Which::f1, 0), SizeError);
}

TEST_CASE("trace closed forms") {
    // prod_{k=1}^{4} 2 sin(k pi / 5) = 5
    auto t = lac::trace(BinaryReal::rational(1, 5), 4);
    CHECK(std::exp(t.cum_f1[4]) == Catch::Approx(5.0).margin(1e-10));
    // |2 cos(pi/3)| |2 cos(2 pi/3)| = 1
    auto t3 = lac::trace(BinaryReal::rational(1, 3), 2);
    CHECK(t3.cum_f2[2] == Catch::Approx(0.0).margin(1e-12));
    CHECK_THROWS_AS(lac::trace(BinaryReal::rational(1, 2), 4), SingularityError);
    CHECK_THROWS_AS(lac::trace(BinaryReal::rational(0, 1), 4), SingularityError);
}

TEST_CASE("sup bound on sine products over random alpha") {
    const double limit_slack = 1e-9;
    for (int i = 0; i < 1000; ++i) {
        auto a = BinaryReal::random_bits(rng::substream(2024, i));
        const std::uint64_t L = 1 + rng::stream_word(5, i) % 64;
        auto t = lac::trace(a, L + 1);
        const double lhs = t.cum_f1[L + 1];  // log prod |2 sin|
        const double rhs = double(L) * 0.5 * std::log(3.0) + std::log(2.0);
        REQUIRE(lhs <= rhs + limit_slack);
    }
}

TEST_CASE("telescoping identity for the cosine sums") {
    for (int i = 0; i < 100; ++i) {
        auto a = BinaryReal::random_bits(rng::substream(77, i));
        auto t = lac::trace(a, 4096);
        REQUIRE(lac::f2_telescoping_gap(a, t) < 1e-9 + t.residual_f2);
    }
}

TEST_CASE("compensated sums are reordering-stable within the residual") {
    auto a = BinaryReal::random_bits(31);
    auto t = lac::trace(a, 4096);
    KahanSum rev;
    for (auto it = t.term_f1.rbegin(); it != t.term_f1.rend(); ++it) rev.add(*it);
    CHECK(std::fabs(rev.value() - t.cum_f1[t.L]) <= t.residual_f1);
}

TEST_CASE("parseval ties the coefficients to the squared integral") {
    double coeff_mass = 0.0;
    for (std::int64_t j = 1; j <= 1000000; ++j) {
        const double a = lac::fourier_coeff(lac::Which::f1, j).to_double();
        coeff_mass += a * a / 2.0;
    }
    const double quad = quad::integrate_dyadic(
        [](double x) {
            const double v = lac::f1_pt(x);
            return v * v;
        },
        1, ExecContext::sequential(), 44);
    CHECK(std::fabs(quad - coeff_mass) < 1e-6);
    CHECK(quad == Catch::Approx(M_PI * M_PI / 12.0).margin(1e-9));
}

TEST_CASE("sigma_f constants") {
    auto ctx = ExecContext::hardware();
    // single-term value: 2 int f2^2 = pi^2/6
    CHECK(lac::sigma_f(lac::Which::f2, 1, ctx) ==
          Catch::Approx(M_PI * M_PI / 6.0).margin(1e-9));
    CHECK(std::fabs(lac::sigma_f(lac::Which::f1, 12, ctx) - M_PI * M_PI / 2.0) < 0.02);
    CHECK(std::fabs(lac::sigma_f(lac::Which::f2, 12, ctx)) < 0.05);
    CHECK_THROWS_AS(lac::sigma_f(lac::Which::f1, 0), SizeError);
}

TEST_CASE("cesaro functional cross-checks the covariance quadratures") {
    auto ctx = ExecContext::hardware();
    const int m = 3;
    const double ces = lac::sigma_f_cesaro(lac::Which::f1, m, ctx);
    // Parseval prediction: (pi^2/12)(1 + (2/m) sum_{r<m}(m-r) 2^-r)
    const double pred = (M_PI * M_PI / 12.0) * (1.0 + (2.0 / m) * (2.0 * 0.5 + 1.0 * 0.25));
    CHECK(ces == Catch::Approx(pred).margin(1e-8));
    // and against the covariance integrals with the Cesaro weights restored
    auto f = [](double x) { return lac::f1_pt(x); };
    double acc = quad::integrate_dyadic(
        [&](double x) {
            const double v = f(x);
            return v * v;
        },
        1, ctx, 44);
    for (int r = 1; r < m; ++r)
        acc += 2.0 * (1.0 - double(r) / m) *
               lac::detail::covariance_integral(f, f, r, 44, ctx);
    CHECK(ces == Catch::Approx(acc).margin(1e-8));
}
