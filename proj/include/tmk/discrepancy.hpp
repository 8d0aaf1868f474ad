#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <numeric>
#include <string>
#include <vector>

#include "tmk/binreal.hpp"
#include "tmk/core.hpp"
#include "tmk/expsum.hpp"
#include "tmk/thue_morse.hpp"

// Exact star-discrepancy, the Erdos-Turan upper and |S_H|/(4HN) lower bounds,
// Koksma's inequality check, certified continued fractions, and the GCD-sum
// kernel.
namespace tmk::disc {

/// Finite point set in [0,1). Values are fixed fractions at a shared
/// precision so sorting is exact bit comparison, never rounded doubles.
struct PointSet {
    std::vector<FixedFraction> values;
    int precision = 0;
    std::string label;

    static PointSet from_fractions(std::vector<FixedFraction> v, std::string lbl = {}) {
        if (v.empty()) throw SizeError("PointSet: N >= 1");
        PointSet ps;
        ps.precision = v.front().precision;
        for (const auto& x : v)
            if (x.precision != ps.precision)
                throw SizeError("PointSet: mixed precisions");
        ps.values = std::move(v);
        ps.label = std::move(lbl);
        return ps;
    }

    /// Doubles in [0,1) quantized to 64 bits (exact for the oracle tests:
    /// both discrepancy routes see identical values).
    static PointSet from_doubles(const std::vector<double>& xs, std::string lbl = {}) {
        std::vector<FixedFraction> v;
        v.reserve(xs.size());
        for (double x : xs) {
            if (!(x >= 0.0 && x < 1.0)) throw DataError("PointSet: value outside [0,1)");
            v.emplace_back(BigInt(static_cast<std::uint64_t>(std::ldexp(x, 64))), 64);
        }
        return from_fractions(std::move(v), std::move(lbl));
    }

    std::size_t size() const { return values.size(); }
};

/// {k alpha} for k = 1..N (Kronecker sequence), each point from frac_mul.
inline PointSet kronecker_points(const BinaryReal& alpha, std::uint64_t N, int P = 64) {
    std::vector<FixedFraction> v;
    v.reserve(N);
    alpha.ensure_digits(bit_length(BigInt(N)) + P + 2);
    for (std::uint64_t k = 1; k <= N; ++k) v.push_back(frac_mul(alpha, k, P));
    return PointSet::from_fractions(std::move(v), "kronecker:" + alpha.label());
}

/// {n_k alpha} for k = 1..N (Thue-Morse-Kronecker sequence).
inline PointSet tmk_points(const BinaryReal& alpha, std::uint64_t N, int P = 64) {
    std::vector<FixedFraction> v;
    v.reserve(N);
    alpha.ensure_digits(bit_length(BigInt(2 * N + 2)) + P + 2);
    thue::EvilCursor c;
    for (std::uint64_t k = 1; k <= N; ++k) v.push_back(frac_mul(alpha, c.next(), P));
    return PointSet::from_fractions(std::move(v), "tmk:" + alpha.label());
}

/// Exact star-discrepancy as a rational (num/den) plus its double image.
/// slack bounds the drift of D* when every point carries an absolute error
/// up to 2^-P (shifting all points by eps moves D* by at most 2 eps).
struct DiscValue {
    double value = 0.0;
    BigInt num;
    BigInt den;
    double slack = 0.0;
};

inline DiscValue star_disc(const PointSet& ps) {
    const std::uint64_t N = ps.size();
    std::vector<const BigInt*> sorted;
    sorted.reserve(N);
    for (const auto& f : ps.values) sorted.push_back(&f.value);
    std::sort(sorted.begin(), sorted.end(),
              [](const BigInt* a, const BigInt* b) { return *a < *b; });
    // sup_a |F(a) - a| = max_i max( i/N - x_(i), x_(i) - (i-1)/N ), exact over
    // the common denominator N * 2^P.
    const int P = ps.precision;
    BigInt best = 0;  // may stay 0 only for N=0, excluded by construction
    bool first = true;
    for (std::uint64_t i = 1; i <= N; ++i) {
        const BigInt& v = *sorted[i - 1];
        BigInt a = (BigInt(i) << P) - v * N;        // i/N - x_(i)
        BigInt b = v * N - (BigInt(i - 1) << P);    // x_(i) - (i-1)/N
        const BigInt& m = a > b ? a : b;
        if (first || m > best) {
            best = m;
            first = false;
        }
    }
    DiscValue d;
    d.num = best;
    d.den = BigInt(N) << P;
    d.value = best.convert_to<double>() / d.den.convert_to<double>();
    if (!std::isfinite(d.value)) {
        // denominators beyond double range: scale both sides down
        const int sh = static_cast<int>(bit_length(d.den)) - 900;
        d.value = (d.num >> sh).convert_to<double>() / (d.den >> sh).convert_to<double>();
    }
    d.slack = 2.0 * std::ldexp(1.0, -P);
    return d;
}

/// Erdos-Turan: D* <= 1/(H+1) + sum_{h<=H} |S_h(N)|/(h N). The provider
/// supplies S_h for the intended point set.
inline double erdos_turan_bound(std::uint64_t N, std::uint64_t H,
                                const std::function<xs::ExpSum(std::int64_t)>& provider) {
    if (H < 1) throw SizeError("erdos_turan_bound: H >= 1");
    double bound = 1.0 / (static_cast<double>(H) + 1.0);
    for (std::uint64_t h = 1; h <= H; ++h) {
        const xs::ExpSum s = provider(static_cast<std::int64_t>(h));
        bound += s.abs() / (static_cast<double>(h) * static_cast<double>(N));
    }
    return bound;
}

/// Erdos-Turan bound computed from the points themselves.
inline double erdos_turan_bound(const PointSet& ps, std::uint64_t H) {
    if (H < 1) throw SizeError("erdos_turan_bound: H >= 1");
    const std::uint64_t N = ps.size();
    std::vector<double> xs_d;
    xs_d.reserve(N);
    for (const auto& f : ps.values) xs_d.push_back(f.to_double());
    double bound = 1.0 / (static_cast<double>(H) + 1.0);
    for (std::uint64_t h = 1; h <= H; ++h) {
        std::complex<double> s{0.0, 0.0};
        for (double x : xs_d) s += std::polar(1.0, 2.0 * M_PI * h * x);
        bound += std::abs(s) / (static_cast<double>(h) * static_cast<double>(N));
    }
    return bound;
}

/// Explicit lower bound D* >= |S_H| / (4 H N).
inline double explicit_lower_bound(const xs::ExpSum& S_H, std::uint64_t H, std::uint64_t N) {
    return S_H.abs() / (4.0 * static_cast<double>(H) * static_cast<double>(N));
}

// --- Koksma ---------------------------------------------------------------

struct KoksmaResult {
    double lhs;    // |int f - mean over points|
    double rhs;    // Var(f) * D*
    bool holds;
};

struct TestFunction {
    enum class Kind { identity, indicator } kind = Kind::identity;
    double a = 0.5;  // for 1_{[0,a]}
};

inline KoksmaResult koksma_check(const TestFunction& f, const PointSet& ps,
                                 double tolerance = 1e-12) {
    const std::uint64_t N = ps.size();
    double mean = 0.0, integral = 0.0, variation = 1.0;
    if (f.kind == TestFunction::Kind::identity) {
        KahanSum s;
        for (const auto& x : ps.values) s.add(x.to_double());
        mean = s.value() / static_cast<double>(N);
        integral = 0.5;
    } else {
        std::uint64_t cnt = 0;
        for (const auto& x : ps.values)
            if (x.to_double() <= f.a) ++cnt;
        mean = static_cast<double>(cnt) / static_cast<double>(N);
        integral = f.a;
    }
    KoksmaResult r{};
    r.lhs = std::fabs(integral - mean);
    r.rhs = variation * star_disc(ps).value;
    r.holds = r.lhs <= r.rhs + tolerance;
    return r;
}

// --- continued fractions ----------------------------------------------------

/// Certified continued-fraction prefix [0; a_1, a_2, ...] with convergents
/// p_i/q_i. Rational reals expand exactly by Euclid; everything else is
/// certified by interval expansion of the two endpoints of the P-bit
/// enclosure (CF digits are discontinuous in alpha, so a floating expansion
/// would be uncheckable). truncated is set when fewer than the requested
/// number of coefficients could be certified.
struct CFExpansion {
    std::vector<BigInt> a;
    std::vector<BigInt> p, q;  // convergents, 1-based with a
    bool truncated = false;
    bool exact_terminated = false;  // rational input, expansion complete
    int requested = 0;
};

inline CFExpansion cf_expand(const BinaryReal& alpha, int depth, int P) {
    if (depth < 1) throw SizeError("cf_expand: depth >= 1");
    if (P < 32) throw SizeError("cf_expand: P >= 32");
    BigInt lo_n, lo_d, hi_n, hi_d;  // alpha in [lo_n/lo_d, hi_n/hi_d]
    bool exact = false;
    if (const auto* r = alpha.as_rational()) {
        lo_n = hi_n = r->num;
        lo_d = hi_d = r->den;
        exact = true;
    } else {
        const BigInt v = alpha.window_value(1, P);
        lo_n = v;
        lo_d = BigInt(1) << P;
        hi_n = v + 1;
        hi_d = lo_d;
    }
    CFExpansion cf;
    cf.requested = depth;
    BigInt p2 = 1, p1 = 0, q2 = 0, q1 = 1;  // p_{-1},p_0,q_{-1},q_0
    while (static_cast<int>(cf.a.size()) < depth) {
        if (lo_n == 0 || hi_n == 0) {   // hit an exact rational endpoint
            cf.exact_terminated = exact;
            break;
        }
        const BigInt a_hi = lo_d / lo_n;  // 1/x is larger on the lo side
        const BigInt a_lo = hi_d / hi_n;
        if (a_hi != a_lo) break;          // not certifiable at this precision
        const BigInt& a = a_lo;
        // advance both endpoints: x -> 1/x - a, which swaps the interval ends
        BigInt nlo_n = hi_d - a * hi_n, nlo_d = hi_n;
        BigInt nhi_n = lo_d - a * lo_n, nhi_d = lo_n;
        lo_n = std::move(nlo_n);
        lo_d = std::move(nlo_d);
        hi_n = std::move(nhi_n);
        hi_d = std::move(nhi_d);
        cf.a.push_back(a);
        BigInt np = a * p1 + p2, nq = a * q1 + q2;
        p2 = p1;
        p1 = np;
        q2 = q1;
        q1 = nq;
        cf.p.push_back(p1);
        cf.q.push_back(q1);
    }
    cf.truncated = static_cast<int>(cf.a.size()) < depth;
    if (cf.a.empty() && !cf.exact_terminated)
        throw PrecisionError("cf_expand: no coefficient certifiable at P=" +
                             std::to_string(P));
    return cf;
}

/// Kronecker-discrepancy order estimate: sum of the partial quotients up to
/// m(N), with q_{m(N)-1} < N <= q_{m(N)}. Saturates at the available prefix.
struct CFDiscBound {
    BigInt coefficient_sum;
    int m = 0;
    bool saturated = false;
};

inline CFDiscBound cf_disc_bound(const CFExpansion& cf, const BigInt& N) {
    CFDiscBound r;
    int m = static_cast<int>(cf.q.size());
    r.saturated = true;
    for (std::size_t i = 0; i < cf.q.size(); ++i) {
        if (N <= cf.q[i]) {
            m = static_cast<int>(i) + 1;
            r.saturated = false;
            break;
        }
    }
    r.m = m;
    r.coefficient_sum = 0;
    for (int i = 0; i < m; ++i) r.coefficient_sum += cf.a[i];
    return r;
}

// --- GCD sum ----------------------------------------------------------------

/// sum_{j1,j2 <= J} |a_{j1} a_{j2}|/2 * gcd(j1,j2)/sqrt(j1 j2), brute force.
inline double gcd_sum(const std::vector<double>& coeffs,
                      const ExecContext& ctx = ExecContext::sequential(),
                      std::size_t cap = std::size_t{1} << 14) {
    const std::size_t J = coeffs.size();
    if (J < 1) throw SizeError("gcd_sum: J >= 1");
    if (J > cap) throw SizeError("gcd_sum: J exceeds cap");
    std::vector<double> rsqrt(J + 1, 0.0);
    for (std::size_t j = 1; j <= J; ++j) rsqrt[j] = 1.0 / std::sqrt(static_cast<double>(j));
    return parallel_block_sum(ctx, J, [&](std::size_t row) {
        const std::size_t j1 = row + 1;
        const double a1 = std::fabs(coeffs[j1 - 1]);
        double s = 0.5 * a1 * a1;  // diagonal: gcd(j,j)/j = 1
        for (std::size_t j2 = j1 + 1; j2 <= J; ++j2) {
            const double g = static_cast<double>(std::gcd(j1, j2));
            s += std::fabs(coeffs[j2 - 1]) * a1 * g * rsqrt[j1] * rsqrt[j2];
        }
        return s;
    });
}

}  // namespace tmk::disc
