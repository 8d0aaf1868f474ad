#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

#include "tmk/binreal.hpp"
#include "tmk/core.hpp"
#include "tmk/thue_morse.hpp"

// Exponential sums S_h(N) = sum_{k<=N} e^{2 pi i h n_k alpha} over the evil
// integers: direct evaluation, the exact two-product identity at N = 2^L, and
// the dyadic decomposition for general N.
namespace tmk::xs {

enum class Method { direct, product, dyadic };

/// Result carrier. The actual sum is (re, im) * 2^log2_scale; log2_scale is 0
/// whenever the magnitude fits a double comfortably, so plain consumers can
/// read value() directly. For very long products (L beyond a few hundred) the
/// magnitude is kept in log form and error_bound switches to +inf with
/// rel_error carrying the meaningful relative bound.
struct ExpSum {
    double re = 0.0, im = 0.0;
    double log2_scale = 0.0;
    double log2_N = 0.0;       // log2 of the term count
    std::uint64_t N = 0;       // term count when representable, else 0
    std::int64_t h = 0;
    Method method = Method::direct;
    double error_bound = 0.0;  // absolute bound on |computed - exact|
    double rel_error = 0.0;
    std::uint64_t factor_evals = 0;

    std::complex<double> value() const { return {re, im}; }
    double abs() const { return std::hypot(re, im) * std::exp2(log2_scale); }
    /// log2 |S|; safe for scaled results.
    double log2_abs() const { return std::log2(std::hypot(re, im)) + log2_scale; }
};

namespace detail {

inline std::complex<double> unit(double turns) {
    return std::polar(1.0, 2.0 * M_PI * turns);
}

/// Pairwise reduction of block sums (tree accumulation).
inline std::complex<double> tree_sum(std::vector<std::complex<double>>& blocks) {
    if (blocks.empty()) return {0.0, 0.0};
    std::size_t n = blocks.size();
    while (n > 1) {
        const std::size_t half = (n + 1) / 2;
        for (std::size_t i = 0; i + half < n; ++i) blocks[i] += blocks[i + half];
        n = half;
    }
    return blocks[0];
}

}  // namespace detail

/// Direct summation over the first N evil numbers; each phase {h n_k alpha}
/// comes from its own frac_mul, partial sums are tree-accumulated.
inline ExpSum direct_sum(const BinaryReal& alpha, std::int64_t h, std::uint64_t N,
                         int P = 128) {
    if (N < 1) throw SizeError("direct_sum: N >= 1");
    if (h == 0) throw SizeError("direct_sum: h != 0");
    const BigInt habs = h < 0 ? -h : h;
    alpha.ensure_digits(bit_length(BigInt(2 * N + 2) * habs) + P + 2);
    std::vector<std::complex<double>> blocks;
    std::complex<double> blk{0.0, 0.0};
    std::uint64_t in_blk = 0;
    thue::EvilCursor cursor;
    for (std::uint64_t k = 1; k <= N; ++k) {
        const std::uint64_t nk = cursor.next();
        const FixedFraction ph = frac_mul(alpha, habs * nk, P);
        blk += detail::unit(ph.to_double());
        if (++in_blk == 1024 || k == N) {
            blocks.push_back(blk);
            blk = {0.0, 0.0};
            in_blk = 0;
        }
    }
    ExpSum s;
    const std::complex<double> v = detail::tree_sum(blocks);
    s.re = v.real();
    s.im = h < 0 ? -v.imag() : v.imag();
    s.N = N;
    s.log2_N = std::log2(static_cast<double>(N));
    s.h = h;
    s.method = Method::direct;
    const double eps = 2.220446049250313e-16;
    s.rel_error = 2.0 * M_PI * std::ldexp(1.0, -P) + 4.0 * eps * (2.0 + std::log2(double(N)));
    s.error_bound = static_cast<double>(N) * s.rel_error;
    s.factor_evals = N;
    return s;
}

namespace detail {

/// Both closed-form products for N = 2^L terms:
///   S_evil  = ( prod_{l=0}^{L}(1 + e(t_l)) + prod_{l=0}^{L}(1 - e(t_l)) ) / 2
///   S_odious= same with a minus sign between the products,
/// where t_l = {h 2^l alpha}. Factor magnitudes are |2 cos pi t| and
/// |2 sin pi t|; beyond plain_limit the products are accumulated in log-polar
/// form (the magnitudes reach (sqrt 3)^L and overflow doubles near L ~ 2000).
inline ExpSum product_core(const BinaryReal& alpha, std::int64_t h, std::uint64_t L,
                           int P, bool odious) {
    if (h == 0) throw SizeError("product identity: h != 0");
    const BigInt habs = h < 0 ? -h : h;
    const int wide = static_cast<int>(L) + P + 2;
    const FixedFraction W = frac_mul(alpha, habs, wide);

    constexpr std::uint64_t plain_limit = 48;
    ExpSum s;
    s.h = h;
    s.method = Method::product;
    s.log2_N = static_cast<double>(L);
    s.N = L < 63 ? (std::uint64_t{1} << L) : 0;
    s.factor_evals = L + 1;

    const double eps = 2.220446049250313e-16;
    const double rel = (double(L) + 1.0) * (2.0 * M_PI * std::ldexp(1.0, -P) + 8.0 * eps);
    s.rel_error = rel;

    if (L <= plain_limit) {
        std::complex<double> plus{1.0, 0.0}, minus{1.0, 0.0};
        for (std::uint64_t l = 0; l <= L; ++l) {
            const double t = FixedFraction(W.window(l + 1, P), P).to_double();
            const std::complex<double> e = unit(t);
            plus *= 1.0 + e;
            minus *= 1.0 - e;
        }
        std::complex<double> v = odious ? 0.5 * (plus - minus) : 0.5 * (plus + minus);
        s.re = v.real();
        s.im = v.imag();
        if (h < 0) s.im = -s.im;
        s.error_bound = rel * 0.5 * (std::abs(plus) + std::abs(minus));
        return s;
    }

    // log-polar: 1 + e(t) = |2 cos pi t| e(t/2 + [cos pi t < 0]/2),
    //            1 - e(t) = |2 sin pi t| e(t/2 - 1/4).
    const BigInt half = BigInt(1) << (P - 1);
    KahanSum log_plus, log_minus;
    bool zero_plus = false, zero_minus = false;
    std::uint64_t neg_cos = 0;
    BigInt theta_sum = 0;
    for (std::uint64_t l = 0; l <= L; ++l) {
        const BigInt w = W.window(l + 1, P);
        theta_sum += w;
        const FixedFraction t(w, P);
        if (w == 0) {
            zero_minus = true;
        } else {
            log_minus.add(std::log(2.0 * std::sin(M_PI * t.circle_norm())));
        }
        if (w == half) {
            zero_plus = true;
        } else {
            log_plus.add(std::log(2.0 * std::sin(M_PI * t.distance_to_half())));
            if (w > half) ++neg_cos;
        }
    }
    // sum of t_l / 2 mod 1, exactly
    theta_sum &= (BigInt(1) << (P + 1)) - 1;
    const double base_angle = FixedFraction(theta_sum, P + 1).to_double();
    const double angle_plus = base_angle + 0.5 * static_cast<double>(neg_cos % 2);
    const double angle_minus = base_angle - 0.25 * static_cast<double>((L + 1) % 4);

    const double mp = zero_plus ? -HUGE_VAL : log_plus.value();
    const double mm = zero_minus ? -HUGE_VAL : log_minus.value();
    const double M = std::max(mp, mm);
    std::complex<double> v{0.0, 0.0};
    if (M == -HUGE_VAL) {
        s.re = s.im = 0.0;
        s.log2_scale = 0.0;
        s.error_bound = 0.0;
        return s;
    }
    if (!zero_plus) v += 0.5 * std::exp(mp - M) * unit(angle_plus);
    const double sign = odious ? -1.0 : 1.0;
    if (!zero_minus) v += sign * 0.5 * std::exp(mm - M) * unit(angle_minus);
    s.re = v.real();
    s.im = v.imag();
    if (h < 0) s.im = -s.im;
    s.log2_scale = M / std::log(2.0);
    if (s.log2_scale < 500.0) {  // collapse when representable
        const double sc = std::exp2(s.log2_scale);
        s.re *= sc;
        s.im *= sc;
        s.log2_scale = 0.0;
        s.error_bound = rel * std::hypot(s.re, s.im);
    } else {
        s.error_bound = HUGE_VAL;
    }
    return s;
}

}  // namespace detail

/// Exact identity at N = 2^L (L+1 factors, l = 0..L).
inline ExpSum product_identity(const BinaryReal& alpha, std::int64_t h, std::uint64_t L,
                               int P = 128) {
    return detail::product_core(alpha, h, L, P, false);
}

/// Same identity for the odious sequence (m_k).
inline ExpSum product_identity_odious(const BinaryReal& alpha, std::int64_t h,
                                      std::uint64_t L, int P = 128) {
    return detail::product_core(alpha, h, L, P, true);
}

/// General N by binary decomposition: each chunk of 2^(mu-1) consecutive
/// terms is a phase e({2 h N_mu alpha}) times a product identity over (n_k)
/// or (m_k) according to the digit-sum parity of N_mu.
inline ExpSum dyadic_sum(const BinaryReal& alpha, std::int64_t h, std::uint64_t N,
                         int P = 128) {
    if (N < 1) throw SizeError("dyadic_sum: N >= 1");
    if (h == 0) throw SizeError("dyadic_sum: h != 0");
    const BigInt habs = h < 0 ? -h : h;
    std::complex<double> total{0.0, 0.0};
    double err = 0.0;
    std::uint64_t evals = 0;
    int M = 63 - std::countl_zero(N);
    for (int mu = M + 1; mu >= 1; --mu) {
        if (((N >> (mu - 1)) & 1ull) == 0) continue;
        const std::uint64_t N_mu = (N >> mu) << mu;
        const ExpSum chunk =
            detail::product_core(alpha, h > 0 ? h : -h, static_cast<std::uint64_t>(mu - 1),
                                 P, thue::tm_bit(N_mu) == 1);
        const FixedFraction ph = frac_mul(alpha, 2 * habs * N_mu, P);
        const std::complex<double> rotated = detail::unit(ph.to_double()) * chunk.value();
        total += rotated;
        err += chunk.error_bound +
               std::abs(chunk.value()) * (2.0 * M_PI * std::ldexp(1.0, -P) + 4e-16);
        evals += chunk.factor_evals;
    }
    ExpSum s;
    s.re = total.real();
    s.im = h < 0 ? -total.imag() : total.imag();
    s.N = N;
    s.log2_N = std::log2(static_cast<double>(N));
    s.h = h;
    s.method = Method::dyadic;
    s.error_bound = err;
    s.rel_error = err / std::max(1.0, std::abs(total));
    s.factor_evals = evals;
    return s;
}

}  // namespace tmk::xs
