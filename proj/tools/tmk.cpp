// tmk: command-line front end for the Thue-Morse-Kronecker numerics lab.
// Subcommands: seq, product, expsum, disc, lambda, example, probe.
// Exit codes: 0 ok, 2 usage, 3 precision, 4 tolerance, 5 internal.

#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "tmk/core.hpp"
#include "tmk/discrepancy.hpp"
#include "tmk/examples.hpp"
#include "tmk/expsum.hpp"
#include "tmk/fm_lambda.hpp"
#include "tmk/lacunary.hpp"
#include "tmk/metriclab.hpp"
#include "tmk/thue_morse.hpp"

using namespace tmk;
using nlohmann::json;

namespace {

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

struct RunConfig {
    std::string subcommand;
    std::map<std::string, std::string> options;
    int threads = 0;

    json header() const {
        json h;
        h["tool"] = "tmk";
        h["version"] = version;
        h["subcommand"] = subcommand;
        h["config"] = options;
        h["threads"] = threads;
        return h;
    }
    std::string csv_header() const {
        std::string s = "# tmk " + std::string(version) + " " + subcommand + "\n";
        for (const auto& [k, v] : options) s += "# " + k + "=" + v + "\n";
        return s;
    }
};

void write_text(const std::string& path, const std::string& body) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open output file: " + path);
    out << body;
}

void emit_json(const std::string& path, const json& j) {
    if (path.empty()) {
        std::cout << j.dump(2) << "\n";
    } else {
        write_text(path, j.dump(2) + "\n");
    }
}

int resolve_threads(int cli_threads) {
    if (cli_threads > 0) return cli_threads;
    if (const char* env = std::getenv("TMK_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) return n;
    }
    return ExecContext::hardware().threads;
}

int run(int argc, char** argv) {
    CLI::App app{"Thue-Morse-Kronecker numerics lab"};
    app.require_subcommand(1);
    app.set_help_flag("--help", "print help");  // frees -h for the frequency option
    int threads = 0;
    app.add_option("--threads", threads, "worker threads (default: hardware, TMK_THREADS)");

    // seq
    auto* seq = app.add_subcommand("seq", "evil/odious integer streams");
    std::string seq_kind = "evil", seq_format = "csv", seq_emit;
    std::uint64_t seq_count = 10;
    seq->add_option("--kind", seq_kind, "evil|odious")->check(CLI::IsMember({"evil", "odious"}));
    seq->add_option("--count", seq_count, "number of terms")->required();
    seq->add_option("--format", seq_format, "csv|json")->check(CLI::IsMember({"csv", "json"}));
    seq->add_option("--emit", seq_emit, "output file");

    // product
    auto* product = app.add_subcommand("product", "lacunary log-product trace");
    std::string prod_alpha, prod_emit;
    std::uint64_t prod_L = 64;
    int prod_guard = 128;
    product->add_option("--alpha", prod_alpha, "alpha spec")->required();
    product->add_option("--L", prod_L, "number of shifts")->required();
    product->add_option("--guard", prod_guard, "guard bits");
    product->add_option("--emit", prod_emit, "trace CSV path");

    // expsum
    auto* expsum = app.add_subcommand("expsum", "exponential sums over the evil integers");
    expsum->set_help_flag("--help", "print help");
    std::string xs_alpha, xs_method = "direct", xs_emit;
    std::int64_t xs_h = 1;
    std::uint64_t xs_N = 1024;
    int xs_guard = 128;
    expsum->add_option("--alpha", xs_alpha)->required();
    expsum->add_option("--h", xs_h, "frequency (nonzero)");
    expsum->add_option("--N", xs_N, "term count")->required();
    expsum->add_option("--method", xs_method, "direct|product|dyadic")
        ->check(CLI::IsMember({"direct", "product", "dyadic"}));
    expsum->add_option("--guard", xs_guard);
    expsum->add_option("--emit", xs_emit, "JSON path");

    // disc
    auto* discc = app.add_subcommand("disc", "star-discrepancy with bounds");
    std::string d_alpha, d_gen = "tmk", d_emit;
    std::uint64_t d_N = 1024, d_et = 0;
    bool d_exact = false;
    int d_guard = 64;
    discc->add_option("--alpha", d_alpha)->required();
    discc->add_option("--generator", d_gen, "kronecker|tmk")
        ->check(CLI::IsMember({"kronecker", "tmk"}));
    discc->add_option("--N", d_N)->required();
    discc->add_flag("--exact", d_exact, "print the exact rational");
    discc->add_option("--et", d_et, "Erdos-Turan cutoff H");
    discc->add_option("--guard", d_guard);
    discc->add_option("--emit", d_emit, "CSV path");

    // lambda
    auto* lambda = app.add_subcommand("lambda", "Fouvry-Mauduit constant");
    std::string l_tier = "ci", l_mode = "enclosure", l_emit;
    int l_k = 6, l_Lmin = 16, l_Lmax = 22, l_depth = 15;
    double l_lipschitz = -1.0;
    double l_probe = 0.25;
    lambda->add_option("--k", l_k, "ratio depth");
    lambda->add_option("--tier", l_tier, "paper|ci")->check(CLI::IsMember({"paper", "ci"}));
    lambda->add_option("--mode", l_mode, "enclosure|ratio|point")
        ->check(CLI::IsMember({"enclosure", "ratio", "point"}));
    lambda->add_option("--lipschitz", l_lipschitz,
                       "certified |q_k'| bound (default: 56.4 for k=6, none otherwise)");
    lambda->add_option("--Lmin", l_Lmin, "ratio-fit window start");
    lambda->add_option("--Lmax", l_Lmax, "ratio-fit window end");
    lambda->add_option("--depth", l_depth, "point-estimate depth");
    lambda->add_option("--probe", l_probe, "point-estimate abscissa");
    lambda->add_option("--emit", l_emit, "JSON path");

    // example
    auto* example = app.add_subcommand("example", "the two concrete constructions");
    std::string e_which = "4a", e_emit;
    std::uint64_t e_L = 4096;
    int e_guard = 128;
    example->add_option("--which", e_which, "4a|4b")->check(CLI::IsMember({"4a", "4b"}));
    example->add_option("--L", e_L, "largest product length");
    example->add_option("--guard", e_guard);
    example->add_option("--emit", e_emit, "CSV path");

    // probe
    auto* probe = app.add_subcommand("probe", "Monte Carlo metric probes");
    std::string p_which = "lil", p_fspec = "f1", p_emit;
    std::uint64_t p_samples = 64, p_Lmax = 4096, p_seed = 1;
    probe->add_option("--which", p_which, "lil|thm1|thm3|thm5")
        ->check(CLI::IsMember({"lil", "thm1", "thm3", "thm5"}));
    probe->add_option("--samples", p_samples);
    probe->add_option("--Lmax", p_Lmax);
    probe->add_option("--seed", p_seed);
    probe->add_option("--fspec", p_fspec, "thm5 coefficient rule: f1|f2|zero|cos");
    probe->add_option("--emit", p_emit, "report JSON path");

    for (auto* sc : app.get_subcommands([](const CLI::App*) { return true; }))
        sc->fallthrough();  // lets --threads follow the subcommand

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;  // usage errors map to exit code 2
    }

    RunConfig cfg;
    cfg.threads = resolve_threads(threads);
    const ExecContext ctx = ExecContext::with_threads(cfg.threads);

    if (seq->parsed()) {
        cfg.subcommand = "seq";
        cfg.options = {{"kind", seq_kind}, {"count", std::to_string(seq_count)},
                       {"format", seq_format}};
        const auto values =
            seq_kind == "evil" ? thue::evil_stream(seq_count) : thue::odious_stream(seq_count);
        std::string joined;
        for (std::size_t i = 0; i < values.size(); ++i)
            joined += (i ? "," : "") + std::to_string(values[i]);
        std::cout << joined << "\n";
        if (!seq_emit.empty()) {
            if (seq_format == "json") {
                json j;
                j["header"] = cfg.header();
                j["values"] = values;
                emit_json(seq_emit, j);
            } else {
                std::string body = cfg.csv_header() + "k,value\n";
                for (std::size_t i = 0; i < values.size(); ++i)
                    body += std::to_string(i + 1) + "," + std::to_string(values[i]) + "\n";
                write_text(seq_emit, body);
            }
        }
        return 0;
    }

    if (product->parsed()) {
        cfg.subcommand = "product";
        cfg.options = {{"alpha", prod_alpha}, {"L", std::to_string(prod_L)},
                       {"guard", std::to_string(prod_guard)}};
        const auto alpha = BinaryReal::parse(prod_alpha);
        const auto t = lac::trace(alpha, prod_L, prod_guard);
        std::cout << "log prod |2 sin| over " << prod_L << " shifts: " << fmt17(t.cum_f1[prod_L])
                  << "  (residual bound " << fmt17(t.residual_f1) << ")\n";
        std::cout << "log prod |2 cos| over " << prod_L << " shifts: " << fmt17(t.cum_f2[prod_L])
                  << "\n";
        if (!prod_emit.empty()) {
            std::string body = cfg.csv_header() + "l,f1,f2,cumsum_f1,cumsum_f2\n";
            for (std::uint64_t l = 0; l < t.L; ++l)
                body += std::to_string(l) + "," + fmt17(t.term_f1[l]) + "," +
                        fmt17(t.term_f2[l]) + "," + fmt17(t.cum_f1[l + 1]) + "," +
                        fmt17(t.cum_f2[l + 1]) + "\n";
            write_text(prod_emit, body);
        }
        return 0;
    }

    if (expsum->parsed()) {
        cfg.subcommand = "expsum";
        cfg.options = {{"alpha", xs_alpha},   {"h", std::to_string(xs_h)},
                       {"N", std::to_string(xs_N)}, {"method", xs_method},
                       {"guard", std::to_string(xs_guard)}};
        const auto alpha = BinaryReal::parse(xs_alpha);
        xs::ExpSum s;
        if (xs_method == "direct") {
            s = xs::direct_sum(alpha, xs_h, xs_N, xs_guard);
        } else if (xs_method == "dyadic") {
            s = xs::dyadic_sum(alpha, xs_h, xs_N, xs_guard);
        } else {
            if ((xs_N & (xs_N - 1)) != 0)
                throw ConfigError("--method product requires N to be a power of two");
            std::uint64_t L = 0;
            while ((std::uint64_t{1} << L) < xs_N) ++L;
            s = xs::product_identity(alpha, xs_h, L, xs_guard);
        }
        json j;
        j["header"] = cfg.header();
        j["re"] = s.re;
        j["im"] = s.im;
        j["log2_scale"] = s.log2_scale;
        j["abs"] = s.abs();
        j["log2_abs"] = s.log2_abs();
        j["error_bound"] = s.error_bound;
        j["rel_error"] = s.rel_error;
        j["factor_evals"] = s.factor_evals;
        std::cout << "S = " << fmt17(s.re * std::exp2(s.log2_scale)) << " + "
                  << fmt17(s.im * std::exp2(s.log2_scale)) << " i   |S| = " << fmt17(s.abs())
                  << "  (error bound " << fmt17(s.error_bound) << ")\n";
        if (!xs_emit.empty()) emit_json(xs_emit, j);
        return 0;
    }

    if (discc->parsed()) {
        cfg.subcommand = "disc";
        cfg.options = {{"alpha", d_alpha}, {"generator", d_gen}, {"N", std::to_string(d_N)},
                       {"et", std::to_string(d_et)}, {"guard", std::to_string(d_guard)}};
        const auto alpha = BinaryReal::parse(d_alpha);
        const auto ps = d_gen == "kronecker" ? disc::kronecker_points(alpha, d_N, d_guard)
                                             : disc::tmk_points(alpha, d_N, d_guard);
        const auto d = disc::star_disc(ps);
        double upper = 1.0;
        double lower;
        if (d_gen == "tmk") {
            lower = disc::explicit_lower_bound(xs::direct_sum(alpha, 1, d_N, 128), 1, d_N);
        } else {
            std::complex<double> s1{0.0, 0.0};
            for (const auto& x : ps.values)
                s1 += std::polar(1.0, 2.0 * M_PI * x.to_double());
            xs::ExpSum e;
            e.re = s1.real();
            e.im = s1.imag();
            lower = disc::explicit_lower_bound(e, 1, d_N);
        }
        if (d_et > 0) {
            upper = d_gen == "tmk"
                        ? disc::erdos_turan_bound(d_N, d_et, [&](std::int64_t h) {
                              return xs::direct_sum(alpha, h, d_N, 128);
                          })
                        : disc::erdos_turan_bound(ps, d_et);
        }
        std::cout << "N=" << d_N << " Dstar=" << fmt17(d.value) << " (slack "
                  << fmt17(d.slack) << ") lower=" << fmt17(lower)
                  << " upper=" << (d_et > 0 ? fmt17(upper) : std::string("n/a")) << "\n";
        if (d_exact)
            std::cout << "exact: " << d.num.str() << "/" << d.den.str() << "\n";
        if (!d_emit.empty()) {
            std::string body = cfg.csv_header() + "N,Dstar,lower,upper\n";
            body += std::to_string(d_N) + "," + fmt17(d.value) + "," + fmt17(lower) + "," +
                    (d_et > 0 ? fmt17(upper) : "") + "\n";
            write_text(d_emit, body);
        }
        return 0;
    }

    if (lambda->parsed()) {
        cfg.subcommand = "lambda";
        cfg.options = {{"k", std::to_string(l_k)}, {"tier", l_tier}, {"mode", l_mode}};
        json j;
        j["header"] = cfg.header();
        if (l_mode == "enclosure") {
            const std::uint64_t G = l_tier == "paper" ? 1400001 : 100000;
            std::optional<double> lip;
            if (l_lipschitz > 0) {
                lip = l_lipschitz;
            } else if (l_k == 6) {
                lip = fm::q6_lipschitz;
            }
            const auto enc = fm::enclose_lambda(l_k, G, lip, ctx);
            j["k"] = enc.k;
            j["grid"] = enc.grid_points;
            j["lipschitz"] = enc.lipschitz;
            j["grid_min"] = enc.grid_min;
            j["grid_max"] = enc.grid_max;
            j["lower"] = enc.lower;
            j["upper"] = enc.upper;
            j["rigorous"] = enc.rigorous;
            j["elapsed"] = enc.elapsed_seconds;
            std::cout << "k=" << enc.k << " grid=" << enc.grid_points << " lambda in ["
                      << fmt17(enc.lower) << ", " << fmt17(enc.upper) << "]"
                      << (enc.rigorous ? "" : "  (grid extremes only, no certified bound)")
                      << "  elapsed " << enc.elapsed_seconds << "s\n";
            if (l_emit.empty()) emit_json("", j);
        } else if (l_mode == "ratio") {
            const auto fit = fm::lambda_ratio_fit(l_Lmin, l_Lmax, ctx);
            j["L"] = fit.L;
            j["I1"] = fit.I1;
            j["lambda_hat"] = fit.lambda_hat;
            j["lambda_mean"] = fit.lambda_mean;
            j["kappa"] = fit.kappa;
            j["kappa_spread"] = fit.kappa_spread;
            std::cout << "lambda ratio fit over L in [" << l_Lmin << ", " << l_Lmax
                      << "]: mean " << fmt17(fit.lambda_mean) << ", kappa spread "
                      << fmt17(fit.kappa_spread) << "\n";
        } else {
            const double q = fm::point_estimate(l_depth, l_probe);
            j["depth"] = l_depth;
            j["probe"] = l_probe;
            j["value"] = q;
            std::cout << "q_" << l_depth << "(" << l_probe << ") = " << fmt17(q) << "\n";
        }
        if (!l_emit.empty()) emit_json(l_emit, j);
        return 0;
    }

    if (example->parsed()) {
        cfg.subcommand = "example";
        cfg.options = {{"which", e_which}, {"L", std::to_string(e_L)},
                       {"guard", std::to_string(e_guard)}};
        BinaryReal alpha = e_which == "4a"
                               ? ex::build_alpha_4a(ex::auto_K(e_L + 1, e_guard)).value
                               : ex::gamma();
        const auto t = lac::trace(alpha, e_L + 1, e_guard);
        std::string body = cfg.csv_header() + "L,logPi,exponent_so_far\n";
        std::uint64_t step = e_L >= 64 ? e_L / 64 : 1;
        for (std::uint64_t L = step; L <= e_L; L += step) {
            const double lp = t.cum_f1[L + 1];
            body += std::to_string(L) + "," + fmt17(lp) + "," +
                    fmt17(lp / std::log(2.0) / double(L + 1)) + "\n";
        }
        const double expn = t.cum_f1[e_L + 1] / std::log(2.0) / double(e_L + 1);
        std::cout << "log Pi_L at L=" << e_L << ": " << fmt17(t.cum_f1[e_L + 1])
                  << "  exponent per digit " << fmt17(expn) << "\n";
        if (e_which == "4b") {
            const auto ge = ex::gamma_exponent();
            std::cout << "block-bound exponent interval: [" << fmt17(ge.lower) << ", "
                      << fmt17(ge.upper) << "]\n";
        }
        if (!e_emit.empty()) write_text(e_emit, body);
        return 0;
    }

    // probe
    cfg.subcommand = "probe";
    cfg.options = {{"which", p_which}, {"samples", std::to_string(p_samples)},
                   {"Lmax", std::to_string(p_Lmax)}, {"seed", std::to_string(p_seed)},
                   {"fspec", p_fspec}};
    const auto rep = lab::probe(p_which, p_samples, p_Lmax, p_seed, p_fspec, ctx);
    json j = lab::to_json(rep);
    j["header"] = cfg.header();
    for (const auto& p : rep.properties)
        std::cout << (p.pass ? "pass " : (p.gating ? "FAIL " : "warn ")) << p.name
                  << (p.detail.empty() ? "" : "  (" + p.detail + ")") << "\n";
    if (!p_emit.empty()) {
        emit_json(p_emit, j);
    } else {
        std::cout << "(use --emit report.json for the full report)\n";
    }
    return rep.all_pass() ? 0 : 4;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const PrecisionError& e) {
        std::cerr << "precision error: " << e.what() << "\n";
        return 3;
    } catch (const SingularityError& e) {
        std::cerr << "precision error (singular argument): " << e.what() << "\n";
        return 3;
    } catch (const ToleranceError& e) {
        std::cerr << "tolerance error: " << e.what() << "\n";
        return 4;
    } catch (const SizeError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 5;
    }
}
