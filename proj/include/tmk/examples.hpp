#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

#include "tmk/binreal.hpp"
#include "tmk/core.hpp"
#include "tmk/lacunary.hpp"
#include "tmk/thue_morse.hpp"

// The two concrete constructions: the bounded-continued-fraction number
// 2/3 + sum_k 4^(-2^k) (CLI name "4a") and the Thue-Morse real gamma
// (CLI name "4b"), with their product exponents.
namespace tmk::ex {

/// Truncated 2/3 + sum_{k<=K} 4^(-2^k). The dropped tail is below
/// 2^(1 - 2^(K+2)), so shifted windows {2^l a} are faithful to the full
/// number only for l <= shift_limit(P).
struct Alpha4a {
    BinaryReal value;
    int K;

    std::int64_t shift_limit(int guard) const {
        return (std::int64_t{1} << (K + 2)) - 1 - guard;
    }
    void require_shift(std::uint64_t ell, int guard) const {
        if (static_cast<std::int64_t>(ell) > shift_limit(guard))
            throw PrecisionError("alpha_4a: shift " + std::to_string(ell) +
                                 " beyond certified range for K=" + std::to_string(K));
    }
};

inline Alpha4a build_alpha_4a(int K) {
    if (K < 2) throw SizeError("build_alpha_4a: K >= 2");
    return Alpha4a{BinaryReal::alpha_4a(K), K};
}

/// Smallest K whose truncation certifies shifts up to ell_max at the given
/// guard.
inline int auto_K(std::uint64_t ell_max, int guard) {
    int K = 2;
    while ((std::int64_t{1} << (K + 2)) - 1 - guard <
           static_cast<std::int64_t>(ell_max))
        ++K;
    return K;
}

/// beta = sum_{k<=K} 4^(-2^k), the dyadic part of the 4a number.
inline BinaryReal beta_4a(int K) {
    const std::uint64_t top = std::uint64_t{1} << (K + 1);
    BigInt num = 0;
    for (int k = 1; k <= K; ++k)
        num += BigInt(1) << (top - (std::uint64_t{1} << (k + 1)));
    return BinaryReal::rational(num, BigInt(1) << top);
}

/// The Thue-Morse real gamma = 0.1001011001101001...
inline BinaryReal gamma() { return BinaryReal::digit_rule("thue-morse"); }

/// The ten admissible 4-digit prefixes of {2^l alpha} for the 4a number; any
/// of them forces ||2^l alpha|| > 1/16.
inline constexpr std::array<std::uint32_t, 10> alpha4a_prefixes = {
    0b1010, 0b0101, 0b0010, 0b1101, 0b1110, 0b1001, 0b1100, 0b0111, 0b1011, 0b0110,
};

struct NormCheck {
    bool all_admissible = true;
    std::uint64_t first_violation = 0;
    double min_norm = 1.0;  // observed min ||2^l alpha|| (64-bit windows)
};

/// Verifies the 4-digit prefixes of {2^l alpha} for l = 0..Lmax and reports
/// the observed minimum distance to the nearest integer.
inline NormCheck norm_16th_check(const Alpha4a& a, std::uint64_t Lmax, int guard = 128) {
    a.require_shift(Lmax, guard);
    a.value.ensure_digits(Lmax + 64);
    NormCheck r;
    for (std::uint64_t l = 0; l <= Lmax; ++l) {
        const auto p4 = a.value.window_value(l + 1, 4).convert_to<std::uint32_t>();
        bool ok = false;
        for (auto q : alpha4a_prefixes) ok = ok || q == p4;
        if (!ok) {
            r.all_admissible = false;
            r.first_violation = l;
        }
        r.min_norm = std::min(r.min_norm, frac_shift(a.value, l, 64).circle_norm());
    }
    return r;
}

/// log Pi_L = log prod_{l=0}^{L} |2 sin pi 2^l alpha| (L+1 factors).
inline double log_pi_L(const BinaryReal& alpha, std::uint64_t L, int P = 128) {
    return lac::trace(alpha, L + 1, P).cum_f1[L + 1];
}

/// Least-squares slope of log Pi_L against L log 2 over a fixed geometric
/// window; for the 4a number this approaches log 3 / log 4.
struct ExponentFit {
    std::vector<std::uint64_t> L;
    std::vector<double> log_pi;
    double slope = 0.0;
};

inline ExponentFit exponent_fit(const BinaryReal& alpha,
                                const std::vector<std::uint64_t>& Ls, int P = 128) {
    if (Ls.size() < 2) throw SizeError("exponent_fit: need >= 2 window points");
    ExponentFit fit;
    fit.L = Ls;
    const std::uint64_t Lmax = Ls.back();
    const lac::LogProductTrace t = lac::trace(alpha, Lmax + 1, P);
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::uint64_t L : Ls) {
        const double x = static_cast<double>(L) * std::log(2.0);
        const double y = t.cum_f1[L + 1];
        fit.log_pi.push_back(y);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double n = static_cast<double>(Ls.size());
    fit.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    return fit;
}

/// The frozen regression window for the 4a exponent.
inline std::vector<std::uint64_t> exponent_window_4a() {
    return {512, 724, 1024, 1448, 2048, 2896, 4096};
}

/// sum_{l<=L} {2^l beta}: grows like O(log L) for the sparse 4a tail.
inline double delta_sum(const BinaryReal& beta, std::uint64_t L, int P = 64) {
    beta.ensure_digits(L + P);
    double s = 0.0;
    for (std::uint64_t l = 0; l <= L; ++l)
        s += frac_shift(beta, l, P).to_double();
    return s;
}

// --- gamma block bounds -----------------------------------------------------

/// Per-class two-sided bounds on an 8-block's product of |2 sin pi 2^l gamma|
/// factors, from the 32-digit context rounded down/up at the 32nd digit with
/// the rounding direction chosen per position by the {2^m c} < 1/2 test.
struct BlockBounds {
    std::array<double, 10> U{};  // upper products
    std::array<double, 10> D{};  // lower products
    std::array<std::array<double, 8>, 10> lower_arg{};
    std::array<std::array<double, 8>, 10> upper_arg{};
};

/// 32-bit context word of class c_i (1-based), MSB = first digit.
inline std::uint32_t class_context_word(int cls) {
    const std::uint8_t q = thue::quadruple_classes[cls - 1];
    std::uint32_t w = 0;
    for (int b = 3; b >= 0; --b) {
        const std::uint32_t blk = ((q >> b) & 1u) ? thue::block_B : thue::block_A;
        w = (w << 8) | blk;
    }
    return w;
}

inline BlockBounds block_bounds() {
    BlockBounds bb;
    for (int cls = 1; cls <= 10; ++cls) {
        const double base = std::ldexp(static_cast<double>(class_context_word(cls)), -32);
        const double bump = base + std::ldexp(1.0, -32);
        double lo_prod = 1.0, hi_prod = 1.0;
        for (int m = 0; m < 8; ++m) {
            const double t = std::ldexp(base, m) - std::floor(std::ldexp(base, m));
            const double tp = std::ldexp(bump, m) - std::floor(std::ldexp(bump, m));
            if (!(tp > t) || (t < 0.5) != (tp < 0.5))
                throw DataError("block_bounds: context interval not sign-definite");
            const double xlow = t < 0.5 ? t : tp;   // smaller |2 sin|
            const double yhigh = t < 0.5 ? tp : t;  // larger |2 sin|
            bb.lower_arg[cls - 1][m] = xlow;
            bb.upper_arg[cls - 1][m] = yhigh;
            lo_prod *= 2.0 * std::sin(M_PI * xlow);
            hi_prod *= 2.0 * std::sin(M_PI * yhigh);
        }
        bb.D[cls - 1] = lo_prod;
        bb.U[cls - 1] = hi_prod;
    }
    return bb;
}

/// Exponent interval for Pi_L(gamma) ~ N^e, from the block bounds weighted by
/// the quadruple frequencies (classes 4 and 9 at 1/6, the rest at 1/12),
/// normalized per digit (L+1 factors = 8U positions).
struct GammaExponent {
    double lower = 0.0;
    double upper = 0.0;
};

inline GammaExponent gamma_exponent() {
    const BlockBounds bb = block_bounds();
    auto combine = [](const std::array<double, 10>& p) {
        double s = 0.0;
        for (int i = 1; i <= 10; ++i) {
            const double w = (i == 4 || i == 9) ? 1.0 / 6.0 : 1.0 / 12.0;
            s += w * std::log2(p[i - 1]);
        }
        return s / 8.0;
    };
    return GammaExponent{combine(bb.D), combine(bb.U)};
}

/// Direct log2 Pi_L(gamma) / (L+1) at L = 8U-1.
inline double gamma_exponent_empirical(std::uint64_t U, int P = 128) {
    const std::uint64_t L = 8 * U - 1;
    return log_pi_L(gamma(), L, P) / std::log(2.0) / static_cast<double>(L + 1);
}

}  // namespace tmk::ex
