#pragma once

#include <bit>
#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <cstdint>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <string>
#include <variant>
#include <vector>

#include "tmk/core.hpp"
#include "tmk/rng.hpp"

namespace tmk {

using BigInt = boost::multiprecision::cpp_int;

inline std::uint64_t bit_length(const BigInt& n) {
    return n == 0 ? 0 : static_cast<std::uint64_t>(boost::multiprecision::msb(n)) + 1;
}

/// A value v with 0 <= v < 2^B read as v * 2^-B in [0,1). The workhorse
/// carrier for fractional parts {2^l a}, {h a}, {n_k a}: all comparisons and
/// window reads on it are exact bit arithmetic.
struct FixedFraction {
    BigInt value;
    int precision = 0;     // B, bit count
    std::string source;    // provenance note, may be empty in hot paths

    FixedFraction() = default;
    FixedFraction(BigInt v, int bits, std::string src = {})
        : value(std::move(v)), precision(bits), source(std::move(src)) {}

    /// Round-to-nearest double of value * 2^-precision.
    double to_double() const {
        if (value == 0) return 0.0;
        const std::int64_t bl = static_cast<std::int64_t>(bit_length(value));
        const std::int64_t drop = bl > 106 ? bl - 106 : 0;
        const double mant = (value >> drop).convert_to<double>();
        return std::ldexp(mant, static_cast<int>(drop - precision));
    }

    /// Digits start..start+len-1 of the fraction (digit 1 is the MSB) as an
    /// integer. Requires start+len-1 <= precision.
    BigInt window(int start, int len) const {
        if (start < 1 || len < 1 || start + len - 1 > precision)
            throw SizeError("FixedFraction::window out of range");
        BigInt w = value >> (precision - (start + len - 1));
        w &= (BigInt(1) << len) - 1;
        return w;
    }

    /// Distance to the nearest integer, ||x||, as a double.
    double circle_norm() const {
        BigInt up = (BigInt(1) << precision) - value;
        const BigInt& lo = value < up ? value : up;
        return FixedFraction(lo, precision).to_double();
    }

    /// Distance to 1/2 as a double.
    double distance_to_half() const {
        BigInt half = BigInt(1) << (precision - 1);
        BigInt d = value < half ? half - value : value - half;
        return FixedFraction(d, precision).to_double();
    }

    bool operator<(const FixedFraction& o) const { return value < o.value; }
    bool operator==(const FixedFraction& o) const { return value == o.value; }
};

/// Circular distance |x - y| mod 1 of two same-precision fractions.
inline double circle_distance(const FixedFraction& a, const FixedFraction& b) {
    BigInt d = a.value < b.value ? b.value - a.value : a.value - b.value;
    BigInt wrap = (BigInt(1) << a.precision) - d;
    if (wrap < d) d = wrap;
    return FixedFraction(d, a.precision).to_double();
}

/// Exactly addressable stream of base-2 digits of a real in [0,1).
///
/// Three kinds: Rational p/q (digits of the terminating expansion, streamed
/// by long division), DigitRule (currently "thue-morse"), RandomBits (fair
/// bits from SplitMix64, cached so repeated queries agree). Copies share the
/// digit cache; extension is single-writer behind a shared_mutex so
/// concurrent readers always see a consistent prefix.
class BinaryReal {
  public:
    struct Rational {
        BigInt num, den;  // reduced, 0 <= num < den
    };
    struct DigitRule {
        std::string id;
    };
    struct RandomBits {
        std::uint64_t seed;
    };

    static BinaryReal rational(BigInt p, BigInt q) {
        if (q <= 0) throw ConfigError("rational: denominator must be positive");
        p %= q;
        if (p < 0) p += q;
        BigInt g = boost::multiprecision::gcd(p, q);
        if (g > 1) {
            p /= g;
            q /= g;
        }
        auto impl = std::make_shared<Impl>();
        impl->kind = Rational{p, q};
        impl->rational_rem = p;
        impl->label = "rational:" + p.str() + "/" + q.str();
        return BinaryReal(std::move(impl));
    }

    static BinaryReal digit_rule(const std::string& id) {
        if (id != "thue-morse")
            throw ConfigError("unknown digit rule: " + id);
        auto impl = std::make_shared<Impl>();
        impl->kind = DigitRule{id};
        impl->label = id;
        return BinaryReal(std::move(impl));
    }

    static BinaryReal random_bits(std::uint64_t seed) {
        auto impl = std::make_shared<Impl>();
        impl->kind = RandomBits{seed};
        impl->label = "random:" + std::to_string(seed);
        return BinaryReal(std::move(impl));
    }

    /// Truncation of 2/3 + sum_{k=1..K} 4^(-2^k) as an exact rational.
    static BinaryReal alpha_4a(int K) {
        if (K < 1) throw ConfigError("alpha_4a: K >= 1 required");
        // common denominator 3 * 2^(2^(K+1))
        const std::uint64_t top = std::uint64_t{1} << (K + 1);
        BigInt den = BigInt(3) << top;
        BigInt num = BigInt(2) << top;
        for (int k = 1; k <= K; ++k)
            num += BigInt(3) << (top - (std::uint64_t{1} << (k + 1)));
        auto br = rational(num, den);
        br.impl_->label = "paper-4a:" + std::to_string(K);
        return br;
    }

    /// Parses "p/q", "0b...", "thue-morse", "paper-4a[:K]", "random:SEED".
    static BinaryReal parse(const std::string& spec);

    const std::string& label() const { return impl_->label; }
    bool is_rational() const { return std::holds_alternative<Rational>(impl_->kind); }
    const Rational* as_rational() const { return std::get_if<Rational>(&impl_->kind); }

    /// Digit i >= 1 (coefficient of 2^-i).
    int digit(std::uint64_t i) const {
        if (i < 1) throw SizeError("digit index starts at 1");
        ensure_digits(i);
        std::shared_lock lk(impl_->mtx);
        const std::uint64_t j = i - 1;
        return static_cast<int>((impl_->words[j >> 6] >> (63 - (j & 63))) & 1u);
    }

    /// Digits start..start+len-1 packed MSB-first into an integer.
    BigInt window_value(std::uint64_t start, std::uint64_t len) const {
        if (start < 1 || len < 1) throw SizeError("digit_window: start,len >= 1");
        ensure_digits(start + len - 1);
        std::shared_lock lk(impl_->mtx);
        BigInt out = 0;
        std::uint64_t pos = start - 1, remaining = len;
        while (remaining > 0) {
            const std::uint64_t w = pos >> 6;
            const unsigned off = static_cast<unsigned>(pos & 63);
            const unsigned take =
                static_cast<unsigned>(std::min<std::uint64_t>(64 - off, remaining));
            std::uint64_t bits = impl_->words[w] << off;
            bits >>= (64 - take);
            out <<= take;
            out |= bits;
            pos += take;
            remaining -= take;
        }
        return out;
    }

    /// Materializes at least n digits (no-op if already cached).
    void ensure_digits(std::uint64_t n) const {
        {
            std::shared_lock lk(impl_->mtx);
            if (impl_->digit_count >= n) return;
        }
        std::unique_lock lk(impl_->mtx);
        while (impl_->digit_count < n) impl_->extend_word();
    }

  private:
    struct Impl {
        std::variant<Rational, DigitRule, RandomBits> kind;
        std::string label;
        mutable std::shared_mutex mtx;
        std::vector<std::uint64_t> words;  // word w = digits 64w+1..64w+64, MSB first
        std::uint64_t digit_count = 0;
        BigInt rational_rem;  // num * 2^digit_count mod den

        void extend_word() {
            const std::uint64_t w = digit_count >> 6;
            std::uint64_t word = 0;
            if (auto* r = std::get_if<Rational>(&kind)) {
                rational_rem <<= 64;
                BigInt q = rational_rem / r->den;
                rational_rem -= q * r->den;
                word = q.convert_to<std::uint64_t>();
            } else if (std::get_if<DigitRule>(&kind)) {
                for (unsigned j = 0; j < 64; ++j) {
                    const std::uint64_t n = (w << 6) + j;
                    const std::uint64_t bit = 1u ^ (std::popcount(n) & 1u);
                    word = (word << 1) | bit;
                }
            } else {
                word = rng::stream_word(std::get<RandomBits>(kind).seed, w);
            }
            words.push_back(word);
            digit_count += 64;
        }
    };

    explicit BinaryReal(std::shared_ptr<Impl> impl) : impl_(std::move(impl)) {}
    std::shared_ptr<Impl> impl_;
};

/// Digits start..start+len-1 of x as a 0/1 vector.
inline std::vector<std::uint8_t> digit_window(const BinaryReal& x, std::uint64_t start,
                                              std::uint64_t len) {
    BigInt w = x.window_value(start, len);
    std::vector<std::uint8_t> bits(len);
    for (std::uint64_t i = 0; i < len; ++i)
        bits[len - 1 - i] = static_cast<std::uint8_t>((w >> i) & 1);
    return bits;
}

/// {2^ell x} truncated to P digits; the error is one-sided, < 2^-P.
inline FixedFraction frac_shift(const BinaryReal& x, std::uint64_t ell, int P) {
    if (P < 32) throw SizeError("frac_shift: guard P >= 32 required");
    return FixedFraction(x.window_value(ell + 1, P), P);
}

/// {n x} to P bits: materialize x to bitlen(n)+P+2 digits, multiply, round to
/// nearest at P bits and reduce mod 1. |result - {n x}| < 2^-P (circular).
inline FixedFraction frac_mul(const BinaryReal& x, const BigInt& n, int P) {
    if (P < 32) throw SizeError("frac_mul: guard P >= 32 required");
    if (n < 0) throw SizeError("frac_mul: n must be non-negative");
    if (n == 0) return FixedFraction(BigInt(0), P);
    const int B = static_cast<int>(bit_length(n)) + P + 2;
    BigInt Z = n * x.window_value(1, B);
    const int shift = B - P;
    BigInt v = (Z + (BigInt(1) << (shift - 1))) >> shift;
    v &= (BigInt(1) << P) - 1;
    return FixedFraction(std::move(v), P);
}

inline BinaryReal BinaryReal::parse(const std::string& spec) {
    if (spec.empty()) throw ConfigError("empty alpha spec");
    if (spec.rfind("0b", 0) == 0) {
        const std::string bits = spec.substr(2);
        if (bits.empty()) throw ConfigError("empty bit string: " + spec);
        BigInt num = 0;
        for (char c : bits) {
            if (c != '0' && c != '1')
                throw ConfigError("bad bit string: " + spec);
            num = (num << 1) | (c == '1' ? 1 : 0);
        }
        return rational(num, BigInt(1) << bits.size());
    }
    if (auto slash = spec.find('/'); slash != std::string::npos) {
        try {
            BigInt p(spec.substr(0, slash));
            BigInt q(spec.substr(slash + 1));
            return rational(p, q);
        } catch (const std::exception&) {
            throw ConfigError("bad rational spec: " + spec);
        }
    }
    if (spec == "thue-morse") return digit_rule(spec);
    if (spec.rfind("paper-4a", 0) == 0) {
        int K = 11;  // suits shifts up to ~4096 at guard 128
        if (spec.size() > 8) {
            if (spec[8] != ':') throw ConfigError("bad alpha spec: " + spec);
            K = std::stoi(spec.substr(9));
        }
        return alpha_4a(K);
    }
    if (spec.rfind("random:", 0) == 0)
        return random_bits(std::stoull(spec.substr(7)));
    throw ConfigError("unknown alpha spec: " + spec);
}

}  // namespace tmk
