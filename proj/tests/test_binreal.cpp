#include <catch2/catch_amalgamated.hpp>

#include <future>
#include <numeric>

#include "tmk/binreal.hpp"
#include "tmk/rng.hpp"

using namespace tmk;

namespace {

std::string window_string(const BinaryReal& x, std::uint64_t start, std::uint64_t len) {
    std::string s;
    for (auto b : digit_window(x, start, len)) s += char('0' + b);
    return s;
}

// multiplicative order of 2 modulo odd m
std::uint64_t order_of_two(std::uint64_t m) {
    std::uint64_t ord = 1, pow = 2 % m;
    while (pow != 1) {
        pow = (pow * 2) % m;
        ++ord;
    }
    return ord;
}

}  // namespace

TEST_CASE("digit windows of rationals") {
    CHECK(window_string(BinaryReal::rational(1, 3), 1, 4) == "0101");
    CHECK(window_string(BinaryReal::rational(1, 3), 1, 8) == "01010101");
    // terminating expansion for dyadic rationals
    CHECK(window_string(BinaryReal::rational(1, 4), 1, 3) == "010");
    CHECK(window_string(BinaryReal::rational(3, 8), 1, 12) == "011000000000");
}

TEST_CASE("thue-morse digit rule matches the printed expansion") {
    auto g = BinaryReal::digit_rule("thue-morse");
    CHECK(window_string(g, 1, 8) == "10010110");
    CHECK(window_string(g, 1, 16) == "1001011001101001");
    CHECK_THROWS_AS(BinaryReal::digit_rule("fibonacci"), ConfigError);
}

TEST_CASE("frac_shift basics") {
    auto third = BinaryReal::rational(1, 3);
    auto s1 = frac_shift(third, 1, 32);
    CHECK(s1.window(1, 4) == 0b1010);  // {2/3} = 0.1010...
    auto s2 = frac_shift(third, 2, 32);
    CHECK(s2.window(1, 4) == 0b0101);  // period-2 shift back to 1/3
    auto g0 = frac_shift(BinaryReal::digit_rule("thue-morse"), 0, 32);
    CHECK(g0.window(1, 8) == 0b10010110);
    CHECK_THROWS_AS(frac_shift(third, 0, 8), SizeError);  // guard too small
}

TEST_CASE("frac_mul examples") {
    auto quarter = BinaryReal::rational(1, 4);
    auto m = frac_mul(quarter, 3, 32);
    CHECK(m.window(1, 4) == 0b1100);  // 3/4
    CHECK(m.to_double() == Catch::Approx(0.75).margin(1e-9));

    // {3 * 1/3} = 0: the rounded product must wrap to zero, not 0.111...1
    auto z = frac_mul(BinaryReal::rational(1, 3), 3, 32);
    CHECK(z.to_double() < std::ldexp(1.0, -30));

    // {5 * 1/3} = 2/3, checked against the exact rational
    auto f = frac_mul(BinaryReal::rational(1, 3), 5, 64);
    auto exact = frac_shift(BinaryReal::rational(2, 3), 0, 64);
    CHECK(circle_distance(f, exact) < std::ldexp(1.0, -62));
}

TEST_CASE("frac_shift agrees with frac_mul by powers of two") {
    std::vector<BinaryReal> alphas = {
        BinaryReal::rational(1, 3),    BinaryReal::rational(17, 97),
        BinaryReal::rational(355, 452), BinaryReal::random_bits(7),
        BinaryReal::random_bits(99),    BinaryReal::digit_rule("thue-morse"),
    };
    for (const auto& a : alphas) {
        for (int P : {32, 64, 128}) {
            for (std::uint64_t ell : {0ull, 1ull, 5ull, 31ull, 64ull}) {
                auto s = frac_shift(a, ell, P);
                auto m = frac_mul(a, BigInt(1) << ell, P);
                CHECK(circle_distance(s, m) <= std::ldexp(1.0, -P + 1));
            }
        }
    }
}

TEST_CASE("denominator annihilates a reduced rational") {
    rng::mix64(0);
    std::uint64_t state = 12345;
    for (int t = 0; t < 200; ++t) {
        const std::uint64_t q = 2 + rng::stream_word(9, state++) % 5000;
        const std::uint64_t p = rng::stream_word(11, state++) % q;
        auto x = BinaryReal::rational(p, q);
        const auto* r = x.as_rational();
        REQUIRE(r != nullptr);
        auto m = frac_mul(x, r->den, 64);
        CHECK(m.circle_norm() < std::ldexp(1.0, -62));
    }
}

TEST_CASE("rational digit streams are eventually periodic") {
    for (std::uint64_t q = 2; q <= 1000; ++q) {
        std::uint64_t odd = q, pre = 0;
        while (odd % 2 == 0) {
            odd /= 2;
            ++pre;
        }
        const std::uint64_t ord = odd == 1 ? 1 : order_of_two(odd);
        for (std::uint64_t p : {std::uint64_t{1}, q - 1}) {
            if (std::gcd(p, q) != 1) continue;
            auto x = BinaryReal::rational(p, q);
            const auto head = x.window_value(pre + 1, ord);
            const auto next = x.window_value(pre + 1 + ord, ord);
            CHECK(head == next);
        }
    }
}

TEST_CASE("random bit streams are cached and reproducible") {
    auto a = BinaryReal::random_bits(42);
    auto b = BinaryReal::random_bits(42);
    CHECK(a.window_value(1, 256) == b.window_value(1, 256));
    CHECK(a.window_value(100, 64) == a.window_value(100, 64));
    CHECK(BinaryReal::random_bits(43).window_value(1, 64) != a.window_value(1, 64));
}

TEST_CASE("concurrent readers see a consistent prefix") {
    auto a = BinaryReal::random_bits(5);
    const BigInt expect = a.window_value(1, 2048);
    std::vector<std::future<BigInt>> futs;
    for (int t = 0; t < 8; ++t) {
        auto copy = a;  // copies share the cache
        futs.push_back(std::async(std::launch::async, [copy] {
            BigInt acc = 0;
            for (int i = 0; i < 32; ++i) acc ^= copy.window_value(1 + i * 64, 64);
            return copy.window_value(1, 2048);
        }));
    }
    for (auto& f : futs) CHECK(f.get() == expect);
}

TEST_CASE("alpha spec parsing") {
    CHECK(window_string(BinaryReal::parse("1/3"), 1, 4) == "0101");
    CHECK(window_string(BinaryReal::parse("0b1010"), 1, 6) == "101000");
    CHECK(BinaryReal::parse("thue-morse").label() == "thue-morse");
    CHECK(BinaryReal::parse("random:42").label() == "random:42");

    // 2/3 + 1/16 + 1/256 = 563/768
    auto a = BinaryReal::parse("paper-4a:2");
    auto b = BinaryReal::rational(563, 768);
    CHECK(a.window_value(1, 64) == b.window_value(1, 64));

    CHECK_THROWS_AS(BinaryReal::parse("sqrt2"), ConfigError);
    CHECK_THROWS_AS(BinaryReal::parse(""), ConfigError);
    CHECK_THROWS_AS(BinaryReal::parse("0bxyz"), ConfigError);
    CHECK_THROWS_AS(BinaryReal::rational(1, 0), ConfigError);
}

TEST_CASE("fixed fraction conversion accuracy") {
    FixedFraction half(BigInt(1) << 127, 128);
    CHECK(half.to_double() == 0.5);
    FixedFraction tiny(BigInt(3), 128);
    CHECK(tiny.to_double() == Catch::Approx(3.0 * std::ldexp(1.0, -128)).epsilon(1e-15));
    FixedFraction big((BigInt(1) << 4096) - 1, 4096);
    CHECK(big.to_double() == Catch::Approx(1.0).epsilon(1e-15));
    CHECK(big.circle_norm() == Catch::Approx(std::ldexp(1.0, -4096)).epsilon(1e-12));
}
