#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "tmk/discrepancy.hpp"
#include "tmk/examples.hpp"
#include "tmk/expsum.hpp"
#include "tmk/rng.hpp"

using namespace tmk;

namespace {

// O(N^2) oracle: sup over candidate intervals [0,a] with a in {x_(i)} u {i/N},
// evaluating the empirical measure from both sides, all in exact integers
// over the common denominator N 2^P.
void brute_star_disc(const disc::PointSet& ps, BigInt& num, BigInt& den) {
    const std::uint64_t N = ps.size();
    const int P = ps.precision;
    den = BigInt(N) << P;
    num = 0;
    std::vector<BigInt> candidates;
    for (const auto& x : ps.values) candidates.push_back(x.value * N);  // a = x
    for (std::uint64_t i = 1; i <= N; ++i) candidates.push_back(BigInt(i) << P);
    for (const auto& a_units : candidates) {
        BigInt le = 0, lt = 0;
        for (const auto& x : ps.values) {
            const BigInt xu = x.value * N;
            if (xu <= a_units) ++le;
            if (xu < a_units) ++lt;
        }
        for (const BigInt& cnt : {le, lt}) {
            BigInt gap = (cnt << P) - a_units;
            if (gap < 0) gap = -gap;
            if (gap > num) num = gap;
        }
    }
}

std::vector<double> random_points(std::uint64_t n, std::uint64_t seed) {
    std::vector<double> xs;
    for (std::uint64_t i = 0; i < n; ++i)
        xs.push_back(std::ldexp(double(rng::stream_word(seed, i) >> 11), -53));
    return xs;
}

}  // namespace

TEST_CASE("star discrepancy closed cases") {
    auto one = disc::PointSet::from_doubles({0.5});
    CHECK(disc::star_disc(one).value == Catch::Approx(0.5).margin(1e-15));

    std::vector<double> centered;
    for (int i = 1; i <= 8; ++i) centered.push_back((2.0 * i - 1.0) / 16.0);
    CHECK(disc::star_disc(disc::PointSet::from_doubles(centered)).value ==
          Catch::Approx(1.0 / 16).margin(1e-12));

    auto thirds = disc::PointSet::from_fractions(
        {frac_shift(BinaryReal::rational(1, 3), 0, 64),
         frac_shift(BinaryReal::rational(2, 3), 0, 64)});
    BigInt bn, bd;
    brute_star_disc(thirds, bn, bd);
    const auto d = disc::star_disc(thirds);
    CHECK(d.value == Catch::Approx(1.0 / 3).margin(1e-12));
    CHECK(bn * d.den == d.num * bd);
}

TEST_CASE("point sets reject values outside the unit interval") {
    CHECK_THROWS_AS(disc::PointSet::from_doubles({0.2, 1.0}), DataError);
    CHECK_THROWS_AS(disc::PointSet::from_doubles({-0.1}), DataError);
    CHECK_THROWS_AS(disc::PointSet::from_doubles({}), SizeError);
}

TEST_CASE("sorted formula equals the quadratic oracle exactly") {
    for (int t = 0; t < 100; ++t) {
        const std::uint64_t N = 1 + rng::stream_word(333, t) % 256;
        auto ps = disc::PointSet::from_doubles(random_points(N, 1000 + t));
        const auto d = disc::star_disc(ps);
        BigInt bn, bd;
        brute_star_disc(ps, bn, bd);
        REQUIRE(d.num * bd == bn * d.den);
    }
}

TEST_CASE("erdos-turan upper bound and explicit lower bound sandwich") {
    // single point at 0 with H = 1: bound = 1/2 + 1 = 3/2 >= D* = 1
    auto single = disc::PointSet::from_doubles({0.0});
    CHECK(disc::erdos_turan_bound(single, 1) == Catch::Approx(1.5).margin(1e-12));
    CHECK(disc::star_disc(single).value == Catch::Approx(1.0).margin(1e-15));

    auto check_sandwich = [](const BinaryReal& a, std::uint64_t N, std::uint64_t H,
                             bool kronecker) {
        auto ps = kronecker ? disc::kronecker_points(a, N) : disc::tmk_points(a, N);
        const double dstar = disc::star_disc(ps).value;
        const double upper = disc::erdos_turan_bound(N, H, [&](std::int64_t h) {
            if (kronecker) {
                // plain Kronecker sums from the points themselves
                std::complex<double> s{0, 0};
                for (const auto& x : ps.values)
                    s += std::polar(1.0, 2.0 * M_PI * h * x.to_double());
                xs::ExpSum e;
                e.re = s.real();
                e.im = s.imag();
                return e;
            }
            return xs::direct_sum(a, h, N);
        });
        REQUIRE(dstar <= upper + 1e-9);
        const auto S1 = kronecker ? xs::ExpSum{} : xs::direct_sum(a, 1, N);
        if (!kronecker)
            REQUIRE(disc::explicit_lower_bound(S1, 1, N) <= dstar + 1e-9);
    };
    check_sandwich(BinaryReal::rational(1, 3), 12, 6, true);
    check_sandwich(BinaryReal::random_bits(7), 1 << 10, 1 << 6, false);
    for (int i = 0; i < 10; ++i)
        check_sandwich(BinaryReal::random_bits(rng::substream(21, i)), 400 + 13 * i,
                       8 + i, false);
}

TEST_CASE("koksma inequality") {
    std::vector<double> centered;
    for (int i = 1; i <= 16; ++i) centered.push_back((2.0 * i - 1.0) / 32.0);
    auto grid = disc::PointSet::from_doubles(centered);
    auto r = disc::koksma_check({disc::TestFunction::Kind::identity, 0.0}, grid);
    CHECK(r.lhs == Catch::Approx(0.0).margin(1e-12));
    CHECK(r.holds);

    // single point at 1/4 against 1_{[0,1/2]}: lhs = 1/2, D* = 3/4 (the
    // empirical cdf jumps to 1 at 1/4, so |F(a) - a| peaks at a = 1/4)
    auto pt = disc::PointSet::from_doubles({0.25});
    auto ind = disc::koksma_check({disc::TestFunction::Kind::indicator, 0.5}, pt);
    CHECK(ind.lhs == Catch::Approx(0.5).margin(1e-12));
    CHECK(ind.rhs == Catch::Approx(0.75).margin(1e-12));
    CHECK(ind.holds);

    for (int t = 0; t < 20; ++t) {
        auto ps = disc::PointSet::from_doubles(random_points(100, 5000 + t));
        REQUIRE(disc::koksma_check({disc::TestFunction::Kind::identity, 0.0}, ps).holds);
        REQUIRE(disc::koksma_check({disc::TestFunction::Kind::indicator, 0.37}, ps).holds);
    }
}

TEST_CASE("continued fraction of rationals is exact") {
    auto cf = disc::cf_expand(BinaryReal::rational(1, 3), 10, 64);
    REQUIRE(cf.a.size() == 1);
    CHECK(cf.a[0] == 3);
    CHECK(cf.exact_terminated);
    CHECK(cf.q[0] == 3);

    // golden-ratio-like: ratio of consecutive Fibonacci numbers
    std::uint64_t f0 = 1, f1 = 1;
    for (int i = 0; i < 28; ++i) {
        const std::uint64_t f2 = f0 + f1;
        f0 = f1;
        f1 = f2;
    }
    auto fib = disc::cf_expand(BinaryReal::rational(f0, f1), 40, 64);
    for (std::size_t i = 0; i + 1 < fib.a.size(); ++i) REQUIRE(fib.a[i] == 1);
    const auto bound = disc::cf_disc_bound(fib, fib.q[9]);
    CHECK(bound.m == 10);
    CHECK(bound.coefficient_sum == 10);
    CHECK_FALSE(bound.saturated);
    // rational degenerate: m saturates beyond the last denominator
    const auto sat = disc::cf_disc_bound(fib, fib.q.back() * 10);
    CHECK(sat.saturated);
}

TEST_CASE("certified interval expansion and convergent quality") {
    auto g = ex::gamma();
    auto cf = disc::cf_expand(g, 30, 4096);
    REQUIRE_FALSE(cf.truncated);
    // |alpha - p/q| < 1/(q_i q_{i+1}) for every certified i
    const double alpha = frac_shift(g, 0, 64).to_double();
    for (std::size_t i = 0; i + 1 < cf.q.size(); ++i) {
        const double approx = cf.p[i].convert_to<double>() / cf.q[i].convert_to<double>();
        const double lim =
            1.0 / (cf.q[i].convert_to<double>() * cf.q[i + 1].convert_to<double>());
        REQUIRE(std::fabs(alpha - approx) < lim);
    }
    // low precision certifies few coefficients and flags it
    auto shallow = disc::cf_expand(BinaryReal::random_bits(3), 64, 32);
    CHECK(shallow.truncated);
}

TEST_CASE("bounded partial quotients of the 4a truncation") {
    auto a4 = ex::build_alpha_4a(5);
    auto cf = disc::cf_expand(a4.value, 200, 4096);
    CHECK(cf.exact_terminated);
    BigInt mx = 0;
    for (const auto& a : cf.a) mx = std::max(mx, a);
    CHECK(mx <= 20);  // observed maximum is 17
}

TEST_CASE("gamma shows large partial quotients at depth") {
    auto cf = disc::cf_expand(ex::gamma(), 100, 65536);
    REQUIRE_FALSE(cf.truncated);
    BigInt mx_early = 0, mx_all = 0;
    for (std::size_t i = 0; i < cf.a.size(); ++i) {
        if (i < 40) mx_early = std::max(mx_early, cf.a[i]);
        mx_all = std::max(mx_all, cf.a[i]);
    }
    CHECK(mx_early >= 44);
    CHECK(mx_all >= 1000);
}

TEST_CASE("partial-quotient sums track the Kronecker discrepancy at scale") {
    // exact N D* of 2^20 Kronecker points against the coefficient-sum order
    auto a = ex::build_alpha_4a(5);
    const auto cf = disc::cf_expand(a.value, 100, 4096);
    const std::uint64_t N = 1 << 20;
    const auto bound = disc::cf_disc_bound(cf, BigInt(N));
    REQUIRE_FALSE(bound.saturated);
    const auto ps = disc::kronecker_points(a.value, N, 64);
    const double nd = double(N) * disc::star_disc(ps).value;
    CHECK(nd <= 10.0 * bound.coefficient_sum.convert_to<double>());
    // bounded quotients: the sum itself is O(log N)
    CHECK(bound.coefficient_sum.convert_to<double>() <=
          20.0 * std::log2(double(N)));
}

TEST_CASE("gcd sum values and properties") {
    CHECK(disc::gcd_sum({1.0}) == Catch::Approx(0.5).margin(1e-15));
    const double expect = 0.5 + 1.0 / (2.0 * std::sqrt(2.0)) + 0.125;
    CHECK(disc::gcd_sum({1.0, 0.5}) == Catch::Approx(expect).margin(1e-15));

    std::vector<double> inv_j;
    for (int j = 1; j <= 4096; ++j) inv_j.push_back(1.0 / j);
    double diag = 0.0;
    for (double a : inv_j) diag += a * a / 2.0;
    const double full = disc::gcd_sum(inv_j, ExecContext::hardware());
    CHECK(full >= diag);
    // monotone in J for nonnegative coefficients
    CHECK(disc::gcd_sum({1.0, 0.5, 1.0 / 3}) >= disc::gcd_sum({1.0, 0.5}));
    CHECK_THROWS_AS(disc::gcd_sum(std::vector<double>(40000, 1.0)), SizeError);
}
