// Command-line front end: run outage sweeps, summarize result CSVs, and
// self-check the numerical kernels.
//
// Exit codes: 0 on success, 1 on configuration/usage errors, 2 on numerical
// failure (a validate check failing, or an unexpected runtime error).

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include "fdrelay/channel_mc.hpp"
#include "fdrelay/experiment.hpp"
#include "fdrelay/ps_schemes.hpp"
#include "fdrelay/quartic.hpp"
#include "fdrelay/relay_model.hpp"

namespace {

using namespace fdrelay;

struct check_result {
    std::string name;
    bool pass = false;
    std::string detail;
};

double uniform(std::mt19937_64& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

double exp_draw(std::mt19937_64& rng, double mean) {
    return -mean * std::log1p(-uniform(rng, 0.0, 1.0));
}

system_params sample_params(std::mt19937_64& rng) {
    system_params p;
    p.set_rate(uniform(rng, 1.0, 4.0));
    p.eh_efficiency = uniform(rng, 0.2, 0.8);
    p.source_power = 1.0;
    p.noise_power = std::pow(10.0, -uniform(rng, 10.0, 40.0) / 10.0);
    p.mean_f2 = std::pow(10.0, uniform(rng, 0.0, 40.0) / 10.0) * p.noise_power;
    p.d1 = uniform(rng, 0.5, 1.5);
    p.d2 = 2.0 - p.d1;
    return p;
}

channel_realization sample_channel(std::mt19937_64& rng,
                                   const system_params& p) {
    return {exp_draw(rng, p.mean_h2), exp_draw(rng, p.mean_g2),
            exp_draw(rng, p.mean_f2)};
}

// Check 1: the component-wise output power decomposition and the closed-form
// single-expression e-SINR must agree at the energy-constrained gain.
check_result check_sinr_consistency() {
    std::mt19937_64 rng(0xabcdef01u);
    int tested = 0;
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const system_params p = sample_params(rng);
        const channel_realization ch = sample_channel(rng, p);
        const double rho_hi =
            std::min(1.0, 1.0 / (p.eh_efficiency * ch.f2 + 1e-300));
        const double rho = uniform(rng, 0.05, 0.95) * rho_hi;
        if (!(rho > 0.0 && rho < 1.0)) continue;
        const relay_decision d = decision_at_max_gain(p, ch, rho);
        if (!d.feasible) continue;
        const double a = esinr(p, ch, d).esinr;
        const double b = esinr_max_gain(p, ch, rho);
        const double rel = std::abs(a - b) / std::max(1e-300, std::abs(b));
        worst = std::max(worst, rel);
        ++tested;
    }
    check_result r;
    r.name = "sinr-consistency";
    r.pass = tested >= 500 && worst <= 1e-8;
    char buf[96];
    std::snprintf(buf, sizeof buf, "%d cases, worst rel diff %.3g", tested,
                  worst);
    r.detail = buf;
    return r;
}

// Check 2: quartics built from planted real roots must be recovered.
check_result check_quartic_planted() {
    std::mt19937_64 rng(0x51a7e5u);
    int fails = 0;
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        double roots[4];
        for (double& r : roots) r = uniform(rng, -5.0, 5.0);
        std::sort(roots, roots + 4);
        bool ok = true;
        for (int k = 1; k < 4; ++k)
            if (roots[k] - roots[k - 1] < 1e-3) ok = false;
        if (!ok) continue;
        const double lead = uniform(rng, 0.5, 2.0) * (uniform(rng, 0.0, 1.0) < 0.5 ? -1.0 : 1.0);
        // Expand lead * prod (x - r_k), leading coefficient first.
        double c[5] = {lead, 0, 0, 0, 0};
        int n = 0;
        for (double r : roots) {
            ++n;
            double next[5] = {0, 0, 0, 0, 0};
            for (int k = 0; k < n; ++k) {
                next[k] += c[k];
                next[k + 1] -= r * c[k];
            }
            for (int k = 0; k <= n; ++k) c[k] = next[k];
        }
        const quartic_coeffs q{c[0], c[1], c[2], c[3], c[4]};
        const real_roots_result res = real_roots(q);
        for (double r : roots) {
            double best = 1e300;
            for (double got : res.roots) best = std::min(best, std::abs(got - r));
            worst = std::max(worst, best / (1.0 + std::abs(r)));
            if (best > 1e-7 * (1.0 + std::abs(r))) ++fails;
        }
    }
    check_result r;
    r.name = "quartic-planted-roots";
    r.pass = fails == 0;
    char buf[96];
    std::snprintf(buf, sizeof buf, "%d misses, worst rel err %.3g", fails,
                  worst);
    r.detail = buf;
    return r;
}

// Check 3: the closed-form split-ratio optimizer must match a dense scan.
check_result check_full_vs_grid() {
    std::mt19937_64 rng(0xf00dfeedu);
    system_params p;
    p.set_rate(3.0);
    p.noise_power = std::pow(10.0, -3.5);
    p.mean_f2 = std::pow(10.0, 3.0) * p.noise_power;
    int fails = 0;
    double worst = 0.0;
    for (int i = 0; i < 200; ++i) {
        const channel_realization ch = sample_channel(rng, p);
        const relay_decision d = full_csi_rho(p, ch);
        const double got = d.feasible ? esinr_max_gain(p, ch, d.rho) : 0.0;
        const double rho_hi =
            std::min(1.0, 1.0 / (p.eh_efficiency * ch.f2 + 1e-300));
        double best = 0.0;
        const int n = 1000;
        for (int k = 1; k <= n; ++k) {
            const double rho = rho_hi * k / (n + 1);
            best = std::max(best, esinr_max_gain(p, ch, rho));
        }
        if (best <= 0.0) continue;
        const double rel = (best - got) / best;
        worst = std::max(worst, rel);
        if (rel > 1e-6) ++fails;
    }
    check_result r;
    r.name = "optimizer-vs-grid";
    r.pass = fails == 0;
    char buf[96];
    std::snprintf(buf, sizeof buf, "%d shortfalls, worst gap %.3g", fails,
                  worst);
    r.detail = buf;
    return r;
}

// Check 4: the conditional outage expression (given |h|^2, |f|^2, rho) must
// match a Monte Carlo estimate over the relay-destination fade alone.
check_result check_conditional_outage() {
    std::mt19937_64 rng(0xc0ffee11u);
    system_params p;
    p.set_rate(3.0);
    p.noise_power = std::pow(10.0, -3.5);
    p.mean_f2 = std::pow(10.0, 3.0) * p.noise_power;
    int bad = 0;
    const int cases = 100;
    const int draws = 100000;
    for (int i = 0; i < cases; ++i) {
        const double h2 = exp_draw(rng, p.mean_h2);
        const double f2 = exp_draw(rng, p.mean_f2);
        const double rho = uniform(rng, 0.05, 0.95);
        const double analytic = conditional_outage_analytic(p, h2, f2, rho);
        int k = 0;
        for (int t = 0; t < draws; ++t) {
            const channel_realization ch{h2, exp_draw(rng, p.mean_g2), f2};
            if (esinr_max_gain(p, ch, rho) < p.sinr_threshold) ++k;
        }
        const double mc = static_cast<double>(k) / draws;
        const double sigma =
            std::sqrt(std::max(analytic * (1.0 - analytic), 1e-12) / draws);
        if (std::abs(mc - analytic) > 4.0 * sigma + 5e-4) ++bad;
    }
    check_result r;
    r.name = "conditional-outage";
    r.pass = bad <= 2;
    char buf[96];
    std::snprintf(buf, sizeof buf, "%d/%d cases outside 4-sigma band", bad,
                  cases);
    r.detail = buf;
    return r;
}

// Check 5: the Monte Carlo driver must give bit-identical results for any
// worker count.
check_result check_determinism() {
    system_params p;
    p.set_rate(3.0);
    p.noise_power = std::pow(10.0, -3.5);
    p.mean_f2 = std::pow(10.0, 3.0) * p.noise_power;
    const rng_spec rng{12345, 7};
    bool pass = true;
    for (const scheme_spec& s :
         {scheme_spec::full(), scheme_spec::partial(), scheme_spec::fixed_at(0.5)}) {
        const outage_estimate a = outage_mc(p, s, 100000, rng, 1);
        const outage_estimate b = outage_mc(p, s, 100000, rng, 4);
        if (a.p_out != b.p_out) pass = false;
    }
    check_result r;
    r.name = "thread-determinism";
    r.pass = pass;
    r.detail = pass ? "1-thread and 4-thread runs identical" : "runs differ";
    return r;
}

int do_validate() {
    const check_result checks[] = {
        check_sinr_consistency(), check_quartic_planted(), check_full_vs_grid(),
        check_conditional_outage(), check_determinism()};
    int failures = 0;
    for (const auto& c : checks) {
        std::printf("%-24s %s  (%s)\n", c.name.c_str(),
                    c.pass ? "PASS" : "FAIL", c.detail.c_str());
        if (!c.pass) ++failures;
    }
    if (failures > 0) {
        std::fprintf(stderr, "validate: %d check(s) failed\n", failures);
        return 2;
    }
    std::printf("all checks passed\n");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Outage-probability toolkit for a wireless-powered "
                 "full-duplex amplify-and-forward relay"};
    app.require_subcommand(1);

    // --- run ---
    auto* run = app.add_subcommand(
        "run", "Run an outage sweep and write a CSV of curves");
    std::string config_path;
    std::vector<std::string> sets;
    std::string sweep_override, output_override;
    std::uint64_t trials_override = 0, seed_override = 0;
    int threads_override = -1;
    run->add_option("-c,--config", config_path,
                    "Configuration file (key=value lines)");
    run->add_option("--sweep", sweep_override,
                    "Sweep kind: inr, snr, or position (resets the grid to "
                    "that sweep's defaults)");
    run->add_option("--set", sets,
                    "Override any config key, e.g. --set trials=100000");
    run->add_option("--trials", trials_override, "Trials per sweep point");
    auto* seed_opt = run->add_option("--seed", seed_override, "RNG seed");
    run->add_option("--threads", threads_override,
                    "Worker threads (0 = hardware default)");
    run->add_option("-o,--output", output_override, "Output CSV path");

    // --- report ---
    auto* report = app.add_subcommand(
        "report", "Summarize a curves CSV (crossings and dB gains)");
    std::string report_csv;
    std::string levels_str = "0.1,0.01";
    report->add_option("csv", report_csv, "Curves CSV produced by 'run'")
        ->required();
    report->add_option("--levels", levels_str,
                       "Comma-separated outage levels for crossings");

    // --- validate ---
    app.add_subcommand("validate",
                       "Run internal numerical self-checks (exit 2 on failure)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    try {
        if (app.got_subcommand("run")) {
            experiment_config cfg = config_path.empty()
                                        ? default_config(sweep_kind::inr)
                                        : parse_config_file(config_path);
            if (!sweep_override.empty())
                apply_key_value(cfg, "sweep", sweep_override);
            for (const auto& kv : sets) {
                const auto eq = kv.find('=');
                if (eq == std::string::npos)
                    throw config_error("--set expects key=value, got: " + kv);
                apply_key_value(cfg, kv.substr(0, eq), kv.substr(eq + 1));
            }
            if (trials_override > 0) cfg.trials = trials_override;
            if (seed_opt->count() > 0) cfg.rng.seed = seed_override;
            if (threads_override >= 0) cfg.threads = threads_override;
            if (!output_override.empty()) cfg.output_path = output_override;

            const curve_set curves = run_experiment(cfg);
            write_csv_file(curves, cfg.output_path);
            std::printf("wrote %zu points to %s\n", curves.points.size(),
                        cfg.output_path.c_str());
            return 0;
        }
        if (app.got_subcommand("report")) {
            std::vector<double> levels;
            std::istringstream in(levels_str);
            std::string tok;
            while (std::getline(in, tok, ','))
                if (!tok.empty()) levels.push_back(std::stod(tok));
            if (levels.empty()) throw config_error("--levels is empty");
            const curve_set curves = read_csv_file(report_csv);
            emit_report(curves, std::cout, levels);
            return 0;
        }
        if (app.got_subcommand("validate")) return do_validate();
    } catch (const config_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "numerical error: %s\n", e.what());
        return 2;
    }
    return 1;
}
