#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"
#include "tmk/binreal.hpp"
#include "tmk/core.hpp"
#include "tmk/discrepancy.hpp"
#include "tmk/examples.hpp"
#include "tmk/expsum.hpp"
#include "tmk/lacunary.hpp"
#include "tmk/probe_windows.hpp"
#include "tmk/rng.hpp"

// Monte Carlo probes of the metric statements: random alpha are Lebesgue
// samples (fair bits), observables are normalized sums / discrepancies at
// geometric checkpoints, and acceptance is property-based. A probe FAILS only
// when a deterministic inequality breaks; quantile windows come from
// probe_windows.hpp and are reported with Wilson intervals.
namespace tmk::lab {

struct PropertyResult {
    std::string name;
    bool pass = false;
    bool gating = true;  // deterministic inequality: a failure fails the probe.
                         // Quantile-window checks are reported, not gating.
    double fraction = 1.0;  // fraction of samples satisfying the property
    double wilson_lo = 0.0, wilson_hi = 1.0;
    std::string detail;
};

struct SeriesSummary {
    std::vector<double> min, q25, median, q75, max;  // per checkpoint
};

struct ExperimentReport {
    std::string experiment;
    std::string windows_version;
    std::uint64_t seed = 0;
    std::uint64_t samples = 0;
    std::uint64_t resampled = 0;
    std::vector<std::uint64_t> checkpoints;
    std::map<std::string, double> params;
    // series name -> [sample][checkpoint]
    std::map<std::string, std::vector<std::vector<double>>> observables;
    std::map<std::string, SeriesSummary> summary;
    std::vector<PropertyResult> properties;

    /// Deterministic inequalities only; window misses are visible in the
    /// per-property records but do not fail the probe.
    bool all_pass() const {
        for (const auto& p : properties)
            if (p.gating && !p.pass) return false;
        return true;
    }
    bool all_windows_pass() const {
        for (const auto& p : properties)
            if (!p.pass) return false;
        return true;
    }
};

inline void wilson_interval(std::uint64_t hits, std::uint64_t n, double& lo, double& hi) {
    if (n == 0) {
        lo = 0.0;
        hi = 1.0;
        return;
    }
    const double z = 1.959963984540054;
    const double p = static_cast<double>(hits) / static_cast<double>(n);
    const double z2n = z * z / static_cast<double>(n);
    const double centre = p + z2n / 2.0;
    const double half = z * std::sqrt(p * (1.0 - p) / static_cast<double>(n) + z2n / (4.0 * n));
    lo = std::max(0.0, (centre - half) / (1.0 + z2n));
    hi = std::min(1.0, (centre + half) / (1.0 + z2n));
}

namespace detail {

inline std::vector<std::uint64_t> geometric_checkpoints(std::uint64_t Lmax) {
    // start at 256 so log log L is comfortably positive
    std::vector<std::uint64_t> cps;
    for (std::uint64_t L = 256; L <= Lmax; L *= 2) cps.push_back(L);
    if (cps.empty()) cps.push_back(Lmax);
    return cps;
}

inline double loglog(double x) { return std::log(std::log(x)); }

/// Random alpha for sample s, retrying the per-sample substream chain on
/// singular draws so the resampling is deterministic under any thread count.
template <typename Fn>
void run_samples(std::uint64_t M, std::uint64_t seed, const ExecContext& ctx,
                 std::uint64_t& resampled_total, Fn&& per_sample) {
    std::vector<std::uint64_t> resampled(M, 0);
    parallel_for(ctx, M, [&](std::size_t b, std::size_t e) {
        for (std::size_t s = b; s < e; ++s) {
            for (std::uint64_t attempt = 0;; ++attempt) {
                const BinaryReal alpha =
                    BinaryReal::random_bits(rng::substream(seed, attempt * M + s));
                try {
                    per_sample(s, alpha);
                    break;
                } catch (const SingularityError&) {
                    ++resampled[s];
                    if (attempt > 16)
                        throw NumericError("probe: persistent singular samples");
                }
            }
        }
    });
    resampled_total = 0;
    for (auto r : resampled) resampled_total += r;
}

inline SeriesSummary summarize(const std::vector<std::vector<double>>& data) {
    SeriesSummary s;
    if (data.empty()) return s;
    const std::size_t C = data.front().size();
    for (std::size_t c = 0; c < C; ++c) {
        std::vector<double> col;
        col.reserve(data.size());
        for (const auto& row : data) col.push_back(row[c]);
        std::sort(col.begin(), col.end());
        auto q = [&](double p) {
            const double idx = p * static_cast<double>(col.size() - 1);
            const std::size_t i0 = static_cast<std::size_t>(idx);
            const std::size_t i1 = std::min(col.size() - 1, i0 + 1);
            const double w = idx - static_cast<double>(i0);
            return col[i0] * (1.0 - w) + col[i1] * w;
        };
        s.min.push_back(col.front());
        s.q25.push_back(q(0.25));
        s.median.push_back(q(0.5));
        s.q75.push_back(q(0.75));
        s.max.push_back(col.back());
    }
    return s;
}

inline PropertyResult fraction_property(const std::string& name, std::uint64_t hits,
                                        std::uint64_t n, double min_fraction,
                                        std::string detail = {}, bool gating = true) {
    PropertyResult p;
    p.name = name;
    p.gating = gating;
    p.fraction = n == 0 ? 1.0 : static_cast<double>(hits) / static_cast<double>(n);
    wilson_interval(hits, n, p.wilson_lo, p.wilson_hi);
    p.pass = p.fraction >= min_fraction;
    p.detail = std::move(detail);
    return p;
}

}  // namespace detail

/// Normalized lacunary log-sums R1, R2 = sum f_i(2^l a) / sqrt(2 L log log L)
/// at geometric checkpoints, plus the rational control alpha = 1/3 whose f1
/// sums grow linearly.
inline ExperimentReport probe_lil_products(std::uint64_t M, std::uint64_t Lmax,
                                           std::uint64_t seed,
                                           const ExecContext& ctx = ExecContext::sequential(),
                                           const Windows& win = Windows{}) {
    if (M < 1 || Lmax < 256) throw SizeError("probe_lil_products: M >= 1, Lmax >= 256");
    ExperimentReport rep;
    rep.experiment = "lil";
    rep.windows_version = win.version;
    rep.seed = seed;
    rep.samples = M;
    rep.checkpoints = detail::geometric_checkpoints(Lmax);
    rep.params = {{"Lmax", double(Lmax)}, {"guard", 128.0}};
    const auto& cps = rep.checkpoints;
    std::vector<std::vector<double>> R1(M), R2(M);
    detail::run_samples(M, seed, ctx, rep.resampled, [&](std::size_t s, const BinaryReal& a) {
        const lac::LogProductTrace t = lac::trace(a, Lmax, 128);
        std::vector<double> r1, r2;
        for (auto L : cps) {
            const double norm = std::sqrt(2.0 * double(L) * detail::loglog(double(L)));
            r1.push_back(t.cum_f1[L] / norm);
            r2.push_back(t.cum_f2[L] / norm);
        }
        R1[s] = std::move(r1);
        R2[s] = std::move(r2);
    });
    rep.observables["R1"] = R1;
    rep.observables["R2"] = R2;
    rep.summary["R1"] = detail::summarize(R1);
    rep.summary["R2"] = detail::summarize(R2);

    const std::size_t last = cps.size() - 1;
    std::uint64_t r2_hits = 0;
    double r1_max = -HUGE_VAL;
    for (std::size_t s = 0; s < M; ++s) {
        if (std::fabs(R2[s][last]) < win.r2_abs) ++r2_hits;
        r1_max = std::max(r1_max, R1[s][last]);
    }
    rep.properties.push_back(detail::fraction_property(
        "r2_below_" + std::to_string(win.r2_abs), r2_hits, M, win.r2_min_fraction, {},
        /*gating=*/false));
    {
        PropertyResult p;
        p.name = "f1_max_in_window";
        p.gating = false;
        p.pass = r1_max > win.f1_max_lo && r1_max < win.f1_max_hi;
        p.fraction = p.pass ? 1.0 : 0.0;
        wilson_interval(p.pass ? 1 : 0, 1, p.wilson_lo, p.wilson_hi);
        p.detail = "max R1 = " + std::to_string(r1_max);
        rep.properties.push_back(p);
    }
    {
        // control: alpha = 1/3 has {2^l/3} in {1/3, 2/3}, f1 = log sqrt(3)
        const lac::LogProductTrace t = lac::trace(BinaryReal::rational(1, 3), Lmax, 128);
        const double per_term = t.cum_f1[Lmax] / double(Lmax);
        PropertyResult p;
        p.name = "control_one_third_linear_growth";
        p.pass = std::fabs(per_term - 0.5 * std::log(3.0)) < 1e-9;
        p.fraction = p.pass ? 1.0 : 0.0;
        wilson_interval(p.pass ? 1 : 0, 1, p.wilson_lo, p.wilson_hi);
        p.detail = "mean f1 per shift = " + std::to_string(per_term);
        rep.properties.push_back(p);
        std::vector<double> ctrl;
        for (auto L : cps)
            ctrl.push_back(t.cum_f1[L] /
                           std::sqrt(2.0 * double(L) * detail::loglog(double(L))));
        rep.observables["R1_control_one_third"] = {ctrl};
    }
    return rep;
}

/// |S(2^L)| via the product identity, against the hard bound |S| <= N and the
/// epsilon-band growth envelope exp((pi/sqrt(log 2) + eps) sqrt(log N lll N)).
inline ExperimentReport probe_thm1_sums(std::uint64_t M, std::uint64_t Lmax,
                                        std::uint64_t seed,
                                        const ExecContext& ctx = ExecContext::sequential(),
                                        const Windows& win = Windows{}) {
    if (M < 1 || Lmax < 256) throw SizeError("probe_thm1_sums: M >= 1, Lmax >= 256");
    ExperimentReport rep;
    rep.experiment = "thm1";
    rep.windows_version = win.version;
    rep.seed = seed;
    rep.samples = M;
    rep.checkpoints = detail::geometric_checkpoints(Lmax);
    rep.params = {{"Lmax", double(Lmax)}, {"guard", 128.0}, {"h", 1.0}};
    const auto& cps = rep.checkpoints;
    const double envelope_big = M_PI / std::sqrt(std::log(2.0)) + win.sum_envelope_eps;
    const double envelope_tight = M_PI / std::sqrt(std::log(2.0)) + win.sum_envelope_eps_tight;

    std::vector<std::vector<double>> log2S(M), stat(M);
    std::vector<std::uint8_t> bound_ok(M, 1), env_ok(M, 1), tight_ok(M, 1);
    std::vector<double> audit_gap(M, 0.0);
    detail::run_samples(M, seed, ctx, rep.resampled, [&](std::size_t s, const BinaryReal& a) {
        std::vector<double> lg, st;
        bool bok = true, eok = true, tok = true;
        for (auto L : cps) {
            const xs::ExpSum S = xs::product_identity(a, 1, L, 128);
            const double l2 = S.log2_abs();
            lg.push_back(l2);
            const double logN = double(L) * std::log(2.0);
            const double lll = std::log(std::log(logN));
            const double nrm = std::sqrt(logN * lll);
            const double ln_abs = l2 * std::log(2.0);
            st.push_back(ln_abs / nrm);
            if (l2 > double(L) + 1e-9 * double(L)) bok = false;
            if (ln_abs > envelope_big * nrm) eok = false;
            if (ln_abs > envelope_tight * nrm) tok = false;
        }
        // 1% cross-method audit at a feasible size
        if (s % 100 == 0) {
            const xs::ExpSum p = xs::product_identity(a, 1, 12, 128);
            const xs::ExpSum d = xs::direct_sum(a, 1, std::uint64_t{1} << 12, 128);
            audit_gap[s] = std::abs(p.value() - d.value());
        }
        log2S[s] = std::move(lg);
        stat[s] = std::move(st);
        bound_ok[s] = bok;
        env_ok[s] = eok;
        tight_ok[s] = tok;
    });
    rep.observables["log2_S"] = log2S;
    rep.observables["normalized"] = stat;
    rep.summary["log2_S"] = detail::summarize(log2S);
    rep.summary["normalized"] = detail::summarize(stat);

    auto count = [&](const std::vector<std::uint8_t>& v) {
        std::uint64_t c = 0;
        for (auto b : v) c += b;
        return c;
    };
    rep.properties.push_back(detail::fraction_property(
        "abs_S_le_N_all_checkpoints", count(bound_ok), M, 1.0));
    rep.properties.push_back(detail::fraction_property(
        "growth_envelope_eps1", count(env_ok), M, 1.0, {}, /*gating=*/false));
    rep.properties.push_back(detail::fraction_property(
        "growth_envelope_eps0.25", count(tight_ok), M, 0.0, {}, /*gating=*/false));
    double worst_audit = 0.0;
    for (double g : audit_gap) worst_audit = std::max(worst_audit, g);
    {
        PropertyResult p;
        p.name = "cross_method_audit_1e-8";
        p.pass = worst_audit < 1e-8;
        p.fraction = p.pass ? 1.0 : 0.0;
        wilson_interval(p.pass ? 1 : 0, 1, p.wilson_lo, p.wilson_hi);
        p.detail = "max |product - direct| = " + std::to_string(worst_audit);
        rep.properties.push_back(p);
    }
    {
        const auto& med = rep.summary["normalized"].median;
        PropertyResult p;
        p.name = "median_normalized_positive";
        p.gating = false;
        p.pass = med.back() > 0.0;
        p.fraction = p.pass ? 1.0 : 0.0;
        wilson_interval(p.pass ? 1 : 0, 1, p.wilson_lo, p.wilson_hi);
        rep.properties.push_back(p);
    }
    return rep;
}

/// Exact N D*_N of {n_k alpha} at N = 256..Nmax (powers of two), slope fit of
/// log(N D*) against log N, the chain N D* >= |S_1(N)|/4, and the
/// bounded-partial-quotient control number.
inline ExperimentReport probe_thm3_disc(std::uint64_t M, std::uint64_t Nmax,
                                        std::uint64_t seed,
                                        const ExecContext& ctx = ExecContext::sequential(),
                                        const Windows& win = Windows{}) {
    if (M < 1 || Nmax < 256) throw SizeError("probe_thm3_disc: M >= 1, Nmax >= 256");
    ExperimentReport rep;
    rep.experiment = "thm3";
    rep.windows_version = win.version;
    rep.seed = seed;
    rep.samples = M;
    rep.checkpoints = detail::geometric_checkpoints(Nmax);
    rep.params = {{"Nmax", double(Nmax)},
                  {"guard", 64.0},
                  {"reference_exponent", 1.0 + std::log2(0.661325)}};
    const auto& cps = rep.checkpoints;

    auto eval_alpha = [&](const BinaryReal& a, std::vector<double>& ndstar,
                          bool& chain_ok, double& slope) {
        const disc::PointSet ps = disc::tmk_points(a, Nmax, 64);
        std::vector<double> xs_d(Nmax);
        for (std::uint64_t k = 0; k < Nmax; ++k) xs_d[k] = ps.values[k].to_double();
        ndstar.clear();
        chain_ok = true;
        std::complex<double> S1{0.0, 0.0};
        std::size_t c = 0;
        for (std::uint64_t k = 0; k < Nmax; ++k) {
            S1 += std::polar(1.0, 2.0 * M_PI * xs_d[k]);
            if (c < cps.size() && k + 1 == cps[c]) {
                const std::uint64_t N = cps[c];
                disc::PointSet prefix = disc::PointSet::from_fractions(
                    {ps.values.begin(), ps.values.begin() + N});
                const double nd = double(N) * disc::star_disc(prefix).value;
                ndstar.push_back(nd);
                if (nd < std::abs(S1) / 4.0 - 1e-9 * double(N)) chain_ok = false;
                ++c;
            }
        }
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (std::size_t i = 0; i < cps.size(); ++i) {
            const double x = std::log(double(cps[i]));
            const double y = std::log(std::max(ndstar[i], 1e-300));
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
        }
        const double n = double(cps.size());
        slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    };

    std::vector<std::vector<double>> ND(M);
    std::vector<double> slopes(M);
    std::vector<std::uint8_t> chain(M, 1);
    detail::run_samples(M, seed, ctx, rep.resampled, [&](std::size_t s, const BinaryReal& a) {
        bool ok = true;
        double sl = 0.0;
        eval_alpha(a, ND[s], ok, sl);
        chain[s] = ok;
        slopes[s] = sl;
    });
    rep.observables["N_Dstar"] = ND;
    rep.observables["slope"] = {slopes};
    rep.summary["N_Dstar"] = detail::summarize(ND);

    std::vector<double> sorted = slopes;
    std::sort(sorted.begin(), sorted.end());
    const double median_slope = sorted[sorted.size() / 2];
    std::uint64_t chain_hits = 0;
    for (auto b : chain) chain_hits += b;
    rep.properties.push_back(detail::fraction_property(
        "lower_bound_chain_H1", chain_hits, M, 1.0));
    {
        PropertyResult p;
        p.name = "median_slope_window";
        p.gating = false;
        p.pass = median_slope > win.slope_lo && median_slope < win.slope_hi;
        p.fraction = p.pass ? 1.0 : 0.0;
        wilson_interval(p.pass ? 1 : 0, 1, p.wilson_lo, p.wilson_hi);
        p.detail = "median slope = " + std::to_string(median_slope);
        rep.properties.push_back(p);
        rep.params["median_slope"] = median_slope;
    }
    {
        // Control: the bounded-partial-quotient number must sit well above the
        // random-alpha window. Its raw N D* has not reached the asymptote at
        // desk-scale N, so the gated exponent is the certified lower-bound
        // route: N D* >= |S_1(N)|/4 (checked per checkpoint below) with
        // |S_1(2^L)| tracking Pi_L, whose fitted exponent is the control
        // statistic. The raw N D* slope is reported alongside.
        const ex::Alpha4a control = ex::build_alpha_4a(ex::auto_K(4096 + 2, 128));
        std::vector<double> nd;
        bool chain_ok_ctrl = true;
        double nd_slope = 0.0;
        eval_alpha(control.value, nd, chain_ok_ctrl, nd_slope);
        const ex::ExponentFit pf =
            ex::exponent_fit(control.value, ex::exponent_window_4a(), 128);
        PropertyResult p;
        p.name = "control_4a_lower_bound_exponent_above";
        p.gating = false;
        p.pass = chain_ok_ctrl && pf.slope > win.control_slope_min;
        p.fraction = p.pass ? 1.0 : 0.0;
        wilson_interval(p.pass ? 1 : 0, 1, p.wilson_lo, p.wilson_hi);
        p.detail = "product exponent = " + std::to_string(pf.slope) +
                   ", raw N D* slope = " + std::to_string(nd_slope);
        rep.properties.push_back(p);
        rep.params["control_product_exponent"] = pf.slope;
        rep.params["control_ndstar_slope"] = nd_slope;
        rep.observables["N_Dstar_control_4a"] = {nd};
    }
    return rep;
}

/// Bounded-LIL probe for an even coefficient sequence |a_j| <= 1/j along 2^l:
/// the normalized sums stay below the q = 2 constant. f-specs: "f1", "f2",
/// "zero", "cos".
inline ExperimentReport probe_thm5_general(std::uint64_t M, std::uint64_t Lmax,
                                           std::uint64_t seed, const std::string& fspec,
                                           const ExecContext& ctx = ExecContext::sequential(),
                                           const Windows& win = Windows{}) {
    if (M < 1 || Lmax < 256) throw SizeError("probe_thm5_general: M >= 1, Lmax >= 256");
    if (fspec != "f1" && fspec != "f2" && fspec != "zero" && fspec != "cos")
        throw ConfigError("probe_thm5_general: unknown f-spec " + fspec);
    ExperimentReport rep;
    rep.experiment = "thm5";
    rep.windows_version = win.version;
    rep.seed = seed;
    rep.samples = M;
    rep.checkpoints = detail::geometric_checkpoints(Lmax);
    rep.params = {{"Lmax", double(Lmax)}, {"guard", 128.0}};
    const auto& cps = rep.checkpoints;

    std::vector<std::vector<double>> stat(M);
    detail::run_samples(M, seed, ctx, rep.resampled, [&](std::size_t s, const BinaryReal& a) {
        std::vector<double> st;
        if (fspec == "zero") {
            st.assign(cps.size(), 0.0);
        } else if (fspec == "cos") {
            KahanSum sum;
            std::size_t c = 0;
            st.clear();
            for (std::uint64_t l = 0; l < Lmax; ++l) {
                sum.add(std::cos(2.0 * M_PI * frac_shift(a, l, 64).to_double()));
                if (c < cps.size() && l + 1 == cps[c]) {
                    const double L = double(cps[c]);
                    st.push_back(std::fabs(sum.value()) /
                                 std::sqrt(L * detail::loglog(L)));
                    ++c;
                }
            }
        } else {
            const lac::LogProductTrace t = lac::trace(a, Lmax, 128);
            const auto& cum = fspec == "f1" ? t.cum_f1 : t.cum_f2;
            for (auto L : cps)
                st.push_back(std::fabs(cum[L]) /
                             std::sqrt(double(L) * detail::loglog(double(L))));
        }
        stat[s] = std::move(st);
    });
    rep.observables["normalized"] = stat;
    rep.summary["normalized"] = detail::summarize(stat);

    const double limit = fspec == "cos"
                             ? win.single_harmonic_limit
                             : (fspec == "zero" ? 1e-12 : win.general_lil_limit);
    std::uint64_t hits = 0;
    for (std::size_t s = 0; s < M; ++s) {
        bool ok = true;
        if (fspec == "cos") {
            ok = stat[s].back() < limit;  // desk bound applies at the last checkpoint
        } else {
            for (double v : stat[s]) ok = ok && v < limit;
        }
        hits += ok;
    }
    rep.properties.push_back(detail::fraction_property(
        "normalized_below_" + std::to_string(limit), hits, M, 1.0, "f-spec " + fspec,
        /*gating=*/fspec == "zero"));
    return rep;
}

// --- serialization -----------------------------------------------------------

inline nlohmann::json to_json(const ExperimentReport& r) {
    nlohmann::json j;
    j["experiment"] = r.experiment;
    j["windows_version"] = r.windows_version;
    j["seed"] = r.seed;
    j["samples"] = r.samples;
    j["resampled"] = r.resampled;
    j["checkpoints"] = r.checkpoints;
    j["params"] = r.params;
    j["observables"] = r.observables;
    nlohmann::json sm;
    for (const auto& [name, s] : r.summary)
        sm[name] = {{"min", s.min}, {"q25", s.q25}, {"median", s.median},
                    {"q75", s.q75}, {"max", s.max}};
    j["summary"] = sm;
    nlohmann::json props = nlohmann::json::array();
    for (const auto& p : r.properties)
        props.push_back({{"name", p.name},
                         {"pass", p.pass},
                         {"gating", p.gating},
                         {"fraction", p.fraction},
                         {"wilson_lo", p.wilson_lo},
                         {"wilson_hi", p.wilson_hi},
                         {"detail", p.detail}});
    j["properties"] = props;
    return j;
}

inline ExperimentReport report_from_json(const nlohmann::json& j) {
    ExperimentReport r;
    r.experiment = j.at("experiment").get<std::string>();
    r.windows_version = j.at("windows_version").get<std::string>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.samples = j.at("samples").get<std::uint64_t>();
    r.resampled = j.at("resampled").get<std::uint64_t>();
    r.checkpoints = j.at("checkpoints").get<std::vector<std::uint64_t>>();
    r.params = j.at("params").get<std::map<std::string, double>>();
    r.observables =
        j.at("observables").get<std::map<std::string, std::vector<std::vector<double>>>>();
    for (const auto& [name, s] : j.at("summary").items()) {
        SeriesSummary sum;
        sum.min = s.at("min").get<std::vector<double>>();
        sum.q25 = s.at("q25").get<std::vector<double>>();
        sum.median = s.at("median").get<std::vector<double>>();
        sum.q75 = s.at("q75").get<std::vector<double>>();
        sum.max = s.at("max").get<std::vector<double>>();
        r.summary[name] = sum;
    }
    for (const auto& p : j.at("properties")) {
        PropertyResult pr;
        pr.name = p.at("name").get<std::string>();
        pr.pass = p.at("pass").get<bool>();
        pr.gating = p.at("gating").get<bool>();
        pr.fraction = p.at("fraction").get<double>();
        pr.wilson_lo = p.at("wilson_lo").get<double>();
        pr.wilson_hi = p.at("wilson_hi").get<double>();
        pr.detail = p.at("detail").get<std::string>();
        r.properties.push_back(pr);
    }
    return r;
}

inline ExperimentReport probe(const std::string& which, std::uint64_t M, std::uint64_t Lmax,
                              std::uint64_t seed, const std::string& fspec = "f1",
                              const ExecContext& ctx = ExecContext::sequential()) {
    if (which == "lil") return probe_lil_products(M, Lmax, seed, ctx);
    if (which == "thm1") return probe_thm1_sums(M, Lmax, seed, ctx);
    if (which == "thm3") return probe_thm3_disc(M, Lmax, seed, ctx);
    if (which == "thm5") return probe_thm5_general(M, Lmax, seed, fspec, ctx);
    throw ConfigError("unknown probe: " + which);
}

}  // namespace tmk::lab
