#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "tmk/core.hpp"
#include "tmk/quadrature.hpp"

// The Fouvry-Mauduit constant lambda: transfer-operator iterates phi_j, their
// ratios q_j, the rigorous grid + Lipschitz enclosure, and the quadrature
// ratio fit of 2^-L I1(L).
namespace tmk::fm {

/// Evaluates phi_j (and phi_{j-1}) bottom-up over the shared dyadic argument
/// tree: level-J arguments are (alpha+m)/2^J, so one table of 2^k-1 sin/cos
/// pairs serves both depths. Cost 2^j leaves; depth is capped accordingly.
class PhiEvaluator {
  public:
    explicit PhiEvaluator(int max_depth = 16) : max_depth_(max_depth) {
        if (max_depth_ < 1 || max_depth_ > 16)
            throw SizeError("PhiEvaluator: depth cap must be in 1..16");
    }

    std::uint64_t evaluations() const { return evals_; }

    /// phi_j(alpha), 0 <= alpha <= 1.
    double phi(int j, double alpha) {
        if (j == 0) return 1.0;
        prepare(j, alpha);
        return collapse(j);
    }

    /// q_j = phi_j / phi_{j-1}; phi_{j-1} > 0 on [0,1].
    double q_ratio(int j, double alpha) {
        if (j < 1) throw SizeError("q_ratio: j >= 1");
        prepare(j, alpha);
        const double top = collapse(j);
        const double bot = j == 1 ? 1.0 : collapse(j - 1);
        if (!std::isfinite(top) || !std::isfinite(bot) || bot <= 0.0)
            throw NumericError("q_ratio: non-finite phi value");
        return top / bot;
    }

  private:
    void prepare(int k, double alpha) {
        if (k > max_depth_) throw SizeError("phi: depth exceeds cap");
        if (!(alpha >= 0.0 && alpha <= 1.0))
            throw SizeError("phi: alpha must lie in [0,1]");
        const std::size_t total = (std::size_t{1} << k);
        sin_.resize(total);
        cos_.resize(total);
        // trig level J occupies [2^(J-1), 2^J) at offsets m = 0..2^(J-1)-1
        for (int J = 1; J <= k; ++J) {
            const std::size_t base = std::size_t{1} << (J - 1);
            const double scale = std::ldexp(1.0, -J);
            for (std::size_t m = 0; m < base; ++m) {
                const double arg = M_PI * ((alpha + static_cast<double>(m)) * scale);
                sin_[base + m] = std::sin(arg);
                cos_[base + m] = std::cos(arg);
            }
        }
        ++evals_;
    }

    // phi_k via v_j[m] = phi_{k-j}((alpha+m)/2^j), combined upward in place.
    double collapse(int k) {
        work_.assign(std::size_t{1} << k, 1.0);
        for (int j = k - 1; j >= 0; --j) {
            const std::size_t base = std::size_t{1} << j;
            for (std::size_t m = 0; m < base; ++m)
                work_[m] = 0.5 * (sin_[base + m] * work_[m] +
                                  cos_[base + m] * work_[m + base]);
        }
        return work_[0];
    }

    int max_depth_;
    std::uint64_t evals_ = 0;
    std::vector<double> sin_, cos_, work_;
};

inline double phi(int j, double alpha) {
    if (j < 0 || j > 16) throw SizeError("phi: 0 <= j <= 16");
    if (j == 0) return 1.0;
    PhiEvaluator ev;
    return ev.phi(j, alpha);
}

inline double q_ratio(int j, double alpha) {
    PhiEvaluator ev;
    return ev.q_ratio(j, alpha);
}

/// q_k(alpha_probe) at depths up to 15 (the deep point probes).
inline double point_estimate(int k, double alpha_probe) {
    if (k < 1 || k > 15) throw SizeError("point_estimate: 1 <= k <= 15");
    PhiEvaluator ev(16);
    return ev.q_ratio(k, alpha_probe);
}

/// Certified derivative bound for q_6 assembled from |phi_5'|, |phi_6'| <=
/// (31/32) pi together with phi_5(0) and phi_6(1/2).
inline constexpr double q6_lipschitz = 56.4;

inline double q6_lipschitz_from_parts() {
    const double dmax = (31.0 / 32.0) * M_PI;
    const double p50 = phi(5, 0.0);
    const double p6h = phi(6, 0.5);
    return dmax / p50 + p6h * dmax / (p50 * p50);
}

/// Two-sided enclosure of lambda from a uniform grid on [0, 1/2] (q_k is
/// symmetric about 1/2) plus a certified Lipschitz slack of lip*h/2.
struct Enclosure {
    int k = 0;
    std::uint64_t grid_points = 0;
    double grid_min = 0.0, grid_max = 0.0;
    double lipschitz = 0.0;
    double lower = 0.0, upper = 0.0;
    bool rigorous = false;  // false when no certified Lipschitz bound was given
    double elapsed_seconds = 0.0;
};

inline Enclosure enclose_lambda(int k, std::uint64_t grid_points,
                                std::optional<double> lipschitz,
                                const ExecContext& ctx = ExecContext::sequential()) {
    if (k < 1 || k > 8) throw SizeError("enclose_lambda: 1 <= k <= 8");
    if (grid_points < 2) throw SizeError("enclose_lambda: need at least 2 grid points");
    const auto t0 = std::chrono::steady_clock::now();
    const double h = 0.5 / static_cast<double>(grid_points - 1);

    const std::uint64_t chunk = 4096;
    const std::uint64_t nchunks = (grid_points + chunk - 1) / chunk;
    std::vector<double> cmin(nchunks), cmax(nchunks);
    parallel_for(ctx, nchunks, [&](std::size_t b, std::size_t e) {
        PhiEvaluator ev;
        for (std::size_t c = b; c < e; ++c) {
            const std::uint64_t i0 = c * chunk;
            const std::uint64_t i1 = std::min(grid_points, i0 + chunk);
            double lo = HUGE_VAL, hi = -HUGE_VAL;
            for (std::uint64_t i = i0; i < i1; ++i) {
                const double q = ev.q_ratio(k, static_cast<double>(i) * h);
                if (!std::isfinite(q)) throw NumericError("enclose_lambda: non-finite q");
                lo = std::min(lo, q);
                hi = std::max(hi, q);
            }
            cmin[c] = lo;
            cmax[c] = hi;
        }
    });
    Enclosure enc;
    enc.k = k;
    enc.grid_points = grid_points;
    enc.grid_min = HUGE_VAL;
    enc.grid_max = -HUGE_VAL;
    for (std::uint64_t c = 0; c < nchunks; ++c) {
        enc.grid_min = std::min(enc.grid_min, cmin[c]);
        enc.grid_max = std::max(enc.grid_max, cmax[c]);
    }
    if (lipschitz) {
        enc.lipschitz = *lipschitz;
        enc.lower = enc.grid_min - enc.lipschitz * h / 2.0;
        enc.upper = enc.grid_max + enc.lipschitz * h / 2.0;
        enc.rigorous = true;
    } else {
        enc.lower = enc.grid_min;
        enc.upper = enc.grid_max;
        enc.rigorous = false;
    }
    enc.elapsed_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return enc;
}

// --- the two product integrals ----------------------------------------------

namespace detail {

/// prod_{l=0}^{L-1} |2 sin(pi 2^l x)| via a double-angle chain resynced from
/// an exact argument reduction every 8 levels (the dyadic scalings of a panel
/// node are exact in double, so the resync has no reduction error).
inline double sin_product(double x, int L) {
    double prod = 1.0;
    double s = 0.0, c = 0.0;
    for (int l = 0; l < L; ++l) {
        if ((l & 7) == 0) {
            const double y = std::ldexp(x, l);
            const double f = y - std::floor(y);
            const double d = f < 0.5 ? f : 1.0 - f;
            s = std::sin(M_PI * d);
            c = std::cos(M_PI * d);
            if (f >= 0.5) c = -c;
        } else {
            const double ns = 2.0 * s * (c < 0.0 ? -c : c);
            const double nc = c >= 0.0 ? 1.0 - 2.0 * s * s : 2.0 * s * s - 1.0;
            s = ns;
            c = nc;
        }
        prod *= 2.0 * s;
        if (prod == 0.0) return 0.0;
    }
    return prod;
}

}  // namespace detail

/// I1(L) = int_0^1 prod_{l=0}^{L-1} |2 sin(pi 2^l a)| da by composite
/// Gauss-Legendre on dyadic panels at level max(L, 12); inside a panel every
/// factor is sign-definite and analytic.
inline double I1_quadrature(int L, const ExecContext& ctx = ExecContext::sequential()) {
    if (L < 1 || L > 24) throw SizeError("I1_quadrature: 1 <= L <= 24");
    const int level = std::max(L, 12);
    return quad::integrate_dyadic(
        [L](double x) { return detail::sin_product(x, L); }, level, ctx);
}

/// I2(L) = int_0^1 prod |2 cos(pi 2^l a)| da, evaluated through the Dirichlet
/// kernel form |sin(pi 2^L a)| / sin(pi a). Checks the classical bound
/// 2 + 2 L log2 / pi.
inline double I2_closed(int L, const ExecContext& ctx = ExecContext::sequential()) {
    if (L < 1 || L > 24) throw SizeError("I2_closed: 1 <= L <= 24");
    const int level = std::max(L, 12);
    const double scale = std::ldexp(1.0, L);
    const double val = quad::integrate_dyadic(
        [scale](double x) {
            const double y = scale * x;
            const double f = y - std::floor(y);
            const double num = std::sin(M_PI * (f < 0.5 ? f : 1.0 - f));
            const double den = std::sin(M_PI * (x < 0.5 ? x : 1.0 - x));
            return num / den;
        },
        level, ctx);
    const double bound = 2.0 + 2.0 * static_cast<double>(L) * std::log(2.0) / M_PI;
    if (val > bound + 1e-9)
        throw NumericError("I2_closed: Dirichlet-kernel bound violated");
    return val;
}

/// Geometric-ratio fit of lambda from I1: lambda_hat(L) = I1(L+1)/(2 I1(L)).
struct RatioFit {
    std::vector<int> L;
    std::vector<double> I1;          // I1(L) for L = Lmin..Lmax+1
    std::vector<double> lambda_hat;  // per L = Lmin..Lmax
    double lambda_mean = 0.0;
    std::vector<double> kappa;       // 2^-L I1(L) / lambda_mean^L
    double kappa_spread = 0.0;       // max/min over the window
};

inline RatioFit lambda_ratio_fit(int Lmin, int Lmax,
                                 const ExecContext& ctx = ExecContext::sequential()) {
    if (Lmin < 2 || Lmax < Lmin || Lmax > 23)
        throw SizeError("lambda_ratio_fit: need 2 <= Lmin <= Lmax <= 23");
    RatioFit fit;
    for (int L = Lmin; L <= Lmax + 1; ++L) {
        fit.L.push_back(L);
        fit.I1.push_back(I1_quadrature(L, ctx));
    }
    double acc = 0.0;
    for (int i = 0; i + 1 < static_cast<int>(fit.I1.size()); ++i) {
        fit.lambda_hat.push_back(fit.I1[i + 1] / (2.0 * fit.I1[i]));
        acc += std::log(fit.lambda_hat.back());
    }
    fit.lambda_mean = std::exp(acc / static_cast<double>(fit.lambda_hat.size()));
    double kmin = HUGE_VAL, kmax = -HUGE_VAL;
    for (int i = 0; i + 1 < static_cast<int>(fit.I1.size()); ++i) {
        const int L = fit.L[i];
        const double k =
            std::ldexp(fit.I1[i], -L) / std::pow(fit.lambda_mean, L);
        fit.kappa.push_back(k);
        kmin = std::min(kmin, k);
        kmax = std::max(kmax, k);
    }
    fit.kappa_spread = kmax / kmin;
    return fit;
}

}  // namespace tmk::fm
