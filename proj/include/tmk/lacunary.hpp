#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "tmk/binreal.hpp"
#include "tmk/core.hpp"
#include "tmk/quadrature.hpp"

// f1 = log|2 sin pi a|, f2 = log|2 cos pi a|, their lacunary sums along 2^l,
// Fourier data, and the variance constant sigma_f of the doubling map.
namespace tmk::lac {

enum class Which { f1, f2 };

namespace detail {
// |sin pi x| evaluated through the exact distance to the nearest singular
// point, so the result stays accurate when x is within a few ulps of it.
inline double f1_arg(const FixedFraction& x) { return x.circle_norm(); }
inline double f2_arg(const FixedFraction& x) { return x.distance_to_half(); }
}  // namespace detail

/// log|2 sin pi x|. Raises SingularityError when x is within 2^-(P-2) of an
/// integer (the log would be garbage at the available guard).
inline double f1(const FixedFraction& x, std::uint64_t shift_for_error = 0) {
    const BigInt four = 4;
    BigInt up = (BigInt(1) << x.precision) - x.value;
    if (x.value < four || up < four)
        throw SingularityError("f1: argument within 2^-(P-2) of an integer",
                               shift_for_error, detail::f1_arg(x));
    return std::log(2.0 * std::sin(M_PI * detail::f1_arg(x)));
}

/// log|2 cos pi x|. Singular at x = 1/2.
inline double f2(const FixedFraction& x, std::uint64_t shift_for_error = 0) {
    BigInt half = BigInt(1) << (x.precision - 1);
    BigInt d = x.value < half ? half - x.value : x.value - half;
    if (d < 4)
        throw SingularityError("f2: argument within 2^-(P-2) of 1/2",
                               shift_for_error, detail::f2_arg(x));
    return std::log(2.0 * std::sin(M_PI * detail::f2_arg(x)));
}

// Double-only variants for quadrature interiors (never called at singular
// points by construction of the graded meshes).
inline double f1_pt(double x) {
    const double d = x < 0.5 ? x : 1.0 - x;
    return std::log(2.0 * std::sin(M_PI * d));
}
inline double f2_pt(double x) {
    return std::log(2.0 * std::sin(M_PI * std::fabs(x - 0.5)));
}

/// Exact Fourier cosine coefficient a_j: -1/j for f1, (-1)^(j+1)/j for f2.
struct Coeff {
    std::int64_t num;
    std::int64_t den;
    double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }
};
inline Coeff fourier_coeff(Which which, std::int64_t j) {
    if (j < 1) throw SizeError("fourier_coeff: j >= 1");
    if (which == Which::f1) return {-1, j};
    return {j % 2 == 0 ? std::int64_t{-1} : std::int64_t{1}, j};
}

/// Per-shift record of f1(2^l a), f2(2^l a) and their compensated prefix
/// sums. cum_f1[j] = sum over l = 0..j-1, so both index conventions (L and
/// L+1 factors) are one lookup apart:
///   prod_{l=0}^{L-1} |2 sin pi 2^l a| = exp(cum_f1[L]),
///   Pi_L = prod_{l=0}^{L}  |2 sin pi 2^l a| = exp(cum_f1[L+1]).
struct LogProductTrace {
    std::string alpha_label;
    std::uint64_t L = 0;
    int guard = 0;
    std::vector<double> term_f1, term_f2;  // size L
    std::vector<double> cum_f1, cum_f2;    // size L+1, prefix sums
    double residual_f1 = 0.0;              // |computed - exact| bound, log units
    double residual_f2 = 0.0;
};

/// Fills the trace for l = 0..L-1 with Kahan summation. The residual bounds
/// combine the guard-truncation error (2^-P through the log derivative) with
/// the compensated-summation reordering bound.
inline LogProductTrace trace(const BinaryReal& alpha, std::uint64_t L, int P = 128) {
    if (L < 1) throw SizeError("trace: L >= 1");
    alpha.ensure_digits(L + static_cast<std::uint64_t>(P));
    LogProductTrace t;
    t.alpha_label = alpha.label();
    t.L = L;
    t.guard = P;
    t.term_f1.resize(L);
    t.term_f2.resize(L);
    t.cum_f1.resize(L + 1);
    t.cum_f2.resize(L + 1);
    t.cum_f1[0] = t.cum_f2[0] = 0.0;
    KahanSum s1, s2;
    double guard_err1 = 0.0, guard_err2 = 0.0;
    const double eps_arg = std::ldexp(1.0, -P);
    for (std::uint64_t l = 0; l < L; ++l) {
        const FixedFraction x = frac_shift(alpha, l, P);
        const double v1 = f1(x, l);
        const double v2 = f2(x, l);
        t.term_f1[l] = v1;
        t.term_f2[l] = v2;
        s1.add(v1);
        s2.add(v2);
        t.cum_f1[l + 1] = s1.value();
        t.cum_f2[l + 1] = s2.value();
        // |d/dx log(2 sin pi d(x))| <= pi cot(pi d) <= 1/d
        guard_err1 += eps_arg / detail::f1_arg(x);
        guard_err2 += eps_arg / detail::f2_arg(x);
    }
    t.residual_f1 = guard_err1 + s1.residual();
    t.residual_f2 = guard_err2 + s2.residual();
    return t;
}

/// |sum_{l<L} f2(2^l a) - log(|sin pi 2^L a| / |sin pi a|)|, the telescoping
/// gap; the right side is evaluated from exact digit windows.
inline double f2_telescoping_gap(const BinaryReal& alpha, const LogProductTrace& t) {
    const double lhs = t.cum_f2[t.L];
    const double top = std::sin(M_PI * detail::f1_arg(frac_shift(alpha, t.L, t.guard)));
    const double bot = std::sin(M_PI * detail::f1_arg(frac_shift(alpha, 0, t.guard)));
    return std::fabs(lhs - std::log(top / bot));
}

// --- sigma_f ---------------------------------------------------------------

namespace detail {

template <typename F, typename G>
double covariance_integral(F&& fa, G&& fb, int r, int depth, const ExecContext& ctx) {
    const int level = std::min(r + 1, 14);
    return quad::integrate_dyadic(
        [&](double x) {
            const double y = std::ldexp(x, r);
            return fa(x) * fb(y - std::floor(y));
        },
        level, ctx, depth);
}

inline double point_eval(Which which, double x) {
    return which == Which::f1 ? f1_pt(x) : f2_pt(x);
}

}  // namespace detail

/// Variance constant of the lacunary system f(2^l a): evaluated as the
/// spectral-sum quadrature
///   sigma_f(m) = 2 ( int f^2 + 2 sum_{r=1}^{m-1} int f(a) f(2^r a) da ),
/// whose value converges geometrically in m to pi^2/2 for f1 and to 0 for
/// f2. Integrals use dyadic panels graded at the log singularities; two
/// grading depths are compared and a ToleranceError is raised if they
/// disagree beyond 1e-8.
inline double sigma_f(Which which, int m, const ExecContext& ctx = ExecContext::sequential()) {
    if (m < 1) throw SizeError("sigma_f: m >= 1");
    auto f = [&](double x) { return detail::point_eval(which, x); };
    auto run = [&](int depth) {
        double total = quad::integrate_dyadic(
            [&](double x) {
                const double v = f(x);
                return v * v;
            },
            1, ctx, depth);
        for (int r = 1; r <= m - 1; ++r)
            total += 2.0 * detail::covariance_integral(f, f, r, depth, ctx);
        return 2.0 * total;
    };
    const double coarse = run(40);
    const double fine = run(46);
    if (std::fabs(fine - coarse) > 1e-8)
        throw ToleranceError("sigma_f: quadrature did not settle");
    return fine;
}

/// The literal Cesaro functional (1/m) int (f(a)+...+f(2^{m-1} a))^2 da by
/// direct quadrature of the squared sum. Converges only at rate 1/m (to
/// pi^2/4 for f1); kept as an independent cross-check of the covariance
/// route, not as the reported constant.
inline double sigma_f_cesaro(Which which, int m,
                             const ExecContext& ctx = ExecContext::sequential()) {
    if (m < 1 || m > 10) throw SizeError("sigma_f_cesaro: 1 <= m <= 10");
    auto f = [&](double x) { return detail::point_eval(which, x); };
    const double val = quad::integrate_dyadic(
        [&](double x) {
            double s = 0.0;
            for (int l = 0; l < m; ++l) {
                const double y = std::ldexp(x, l);
                s += f(y - std::floor(y));
            }
            return s * s;
        },
        m, ctx, 44);
    return val / m;
}

}  // namespace tmk::lac
