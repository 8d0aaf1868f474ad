#pragma once

#include <array>
#include <cmath>
#include <cstdint>

#include "tmk/core.hpp"

namespace tmk::quad {

/// 16-point Gauss-Legendre rule on [0,1]. Nodes/weights are generated once by
/// Newton iteration on P_16 (double precision, deterministic).
struct GaussRule {
    std::array<double, 16> node{};
    std::array<double, 16> weight{};
};

inline const GaussRule& gauss16() {
    static const GaussRule rule = [] {
        GaussRule r;
        constexpr int n = 16;
        for (int i = 0; i < n; ++i) {
            // root of P_n on [-1,1]
            double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
            double dp = 0.0;
            for (int it = 0; it < 100; ++it) {
                double p0 = 1.0, p1 = x;
                for (int k = 2; k <= n; ++k) {
                    double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n * (x * p1 - p0) / (x * x - 1.0);
                double dx = p1 / dp;
                x -= dx;
                if (std::fabs(dx) < 1e-17) break;
            }
            r.node[i] = 0.5 * (x + 1.0);
            r.weight[i] = 1.0 / ((1.0 - x * x) * dp * dp);
        }
        return r;
    }();
    return rule;
}

/// Integral of f over [a,b] with one 16-point panel.
template <typename F>
double panel(F&& f, double a, double b) {
    const auto& g = gauss16();
    const double w = b - a;
    double s = 0.0;
    for (int i = 0; i < 16; ++i) s += g.weight[i] * f(a + w * g.node[i]);
    return s * w;
}

/// Integral of f over [a,b] on a mesh graded geometrically (ratio 2) toward
/// both endpoints, for integrands with integrable endpoint singularities
/// (log-type). depth = number of dyadic refinement levels per side. Slivers
/// narrower than ~512 ulp of their endpoint are dropped so Gauss nodes never
/// round onto a singular endpoint; the dropped log-type tail is below 1e-10
/// of the panel mass.
template <typename F>
double panel_graded(F&& f, double a, double b, int depth) {
    const double w = b - a;
    const double scale = std::max({std::fabs(a), std::fabs(b), 1e-300});
    const double min_width = 512.0 * 2.220446049250313e-16 * scale;
    double s = 0.0;
    auto add = [&](double lo, double hi) {
        if (hi - lo >= min_width) s += panel(f, lo, hi);
    };
    // left side: [a, a + w/2^{depth+1}], then [a + w/2^{i+1}, a + w/2^i]
    add(a, a + w * std::ldexp(1.0, -(depth + 1)));
    for (int i = depth; i >= 1; --i)
        add(a + w * std::ldexp(1.0, -(i + 1)), a + w * std::ldexp(1.0, -i));
    // right side mirrored
    for (int i = 1; i <= depth; ++i)
        add(b - w * std::ldexp(1.0, -i), b - w * std::ldexp(1.0, -(i + 1)));
    add(b - w * std::ldexp(1.0, -(depth + 1)), b);
    return s;
}

/// Integral of f over [0,1] on a dyadic mesh of 2^level panels. graded_depth
/// = 0 uses one plain Gauss panel per cell; > 0 grades every cell toward its
/// endpoints. The reduction is blocked and summed in index order, so results
/// are independent of the thread count.
template <typename F>
double integrate_dyadic(F&& f, int level, const ExecContext& ctx, int graded_depth = 0) {
    if (level < 0 || level > 26) throw SizeError("integrate_dyadic: bad level");
    const std::uint64_t panels = std::uint64_t{1} << level;
    const std::uint64_t per_block = std::min<std::uint64_t>(panels, 1024);
    const std::uint64_t blocks = (panels + per_block - 1) / per_block;
    const double h = std::ldexp(1.0, -level);
    return parallel_block_sum(ctx, blocks, [&](std::size_t blk) {
        const std::uint64_t j0 = blk * per_block;
        const std::uint64_t j1 = std::min<std::uint64_t>(panels, j0 + per_block);
        double s = 0.0;
        for (std::uint64_t j = j0; j < j1; ++j) {
            const double a = static_cast<double>(j) * h;
            const double b = static_cast<double>(j + 1) * h;
            s += graded_depth > 0 ? panel_graded(f, a, b, graded_depth)
                                  : panel(f, a, b);
        }
        return s;
    });
}

}  // namespace tmk::quad
