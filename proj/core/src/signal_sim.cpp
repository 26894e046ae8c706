#include "fdrelay/signal_sim.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

namespace fdrelay {

symbol_stream_config make_stream_config(const channel_realization& ch,
                                        std::uint64_t num_symbols,
                                        int processing_delay, std::uint64_t seed) {
    std::mt19937_64 rng(seed * 0x9E3779B97F4A7C15ULL + 0xD1B54A32D192ED03ULL);
    std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
    auto with_phase = [&](double power) {
        const double ph = phase(rng);
        const double mag = std::sqrt(power);
        return std::complex<double>(mag * std::cos(ph), mag * std::sin(ph));
    };
    symbol_stream_config cfg;
    cfg.num_symbols = num_symbols;
    cfg.processing_delay = processing_delay;
    cfg.h = with_phase(ch.h2);
    cfg.g = with_phase(ch.g2);
    cfg.f = with_phase(ch.f2);
    cfg.seed = seed;
    return cfg;
}

simulated_powers simulate_powers(const symbol_stream_config& cfg,
                                 const system_params& p,
                                 const relay_decision& d) {
    if (cfg.processing_delay < 1)
        throw std::invalid_argument("processing_delay must be >= 1");
    if (cfg.num_symbols == 0)
        throw std::invalid_argument("num_symbols must be >= 1");

    const double f2 = std::norm(cfg.f);
    const double loop_gain = (1.0 - d.rho) * d.beta * f2;
    if (loop_gain >= 1.0)
        throw std::domain_error("oscillatory relay: beta*(1-rho)*|f|^2 >= 1");

    // Warm-up long enough that the remaining start-up transient is below
    // 1e-12 of steady state: loop_gain^J <= 1e-12.
    int J = cfg.recursion_truncation;
    if (J <= 0) {
        J = 1;
        if (loop_gain > 0.0)
            J = std::max(
                1, static_cast<int>(
                       std::ceil(std::log(1e-12) / std::log(loop_gain))));
    }
    const int tau = cfg.processing_delay;
    const std::uint64_t warm = static_cast<std::uint64_t>(J) * tau;

    const double pl1 = p.d1_path_loss();
    const double pl2 = p.d2_path_loss();
    const double sqrt_beta = std::sqrt(d.beta);
    const double c_src = std::sqrt((1.0 - d.rho) * p.source_power / pl1);
    const double c_loop = std::sqrt(1.0 - d.rho);
    const double c_des =
        std::sqrt((1.0 - d.rho) * p.source_power * d.beta / (pl1 * pl2));
    const double c_first = std::sqrt(d.beta / pl2);
    const double inv_sqrt_pl2 = 1.0 / std::sqrt(pl2);

    std::mt19937_64 rng(cfg.seed);
    std::normal_distribution<double> gauss(0.0, std::sqrt(p.noise_power / 2.0));
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    auto qpsk = [&]() {
        const auto bits = rng();
        return std::complex<double>((bits & 1) ? inv_sqrt2 : -inv_sqrt2,
                                    (bits & 2) ? inv_sqrt2 : -inv_sqrt2);
    };
    auto cnoise = [&]() { return std::complex<double>(gauss(rng), gauss(rng)); };

    // Delay lines: slot k % tau holds the value from tau symbols ago when
    // read before this symbol's write.
    std::vector<std::complex<double>> s_hist(tau), nr_hist(tau), yr_hist(tau);

    double acc_des = 0.0, acc_loop = 0.0, acc_noise = 0.0, acc_total = 0.0,
           acc_relay = 0.0;
    const std::uint64_t total_symbols = warm + cfg.num_symbols;
    for (std::uint64_t k = 0; k < total_symbols; ++k) {
        const std::size_t slot = static_cast<std::size_t>(k % tau);
        const std::complex<double> s_del = s_hist[slot];
        const std::complex<double> nr_del = nr_hist[slot];
        const std::complex<double> yr_del = yr_hist[slot];

        const std::complex<double> s_k = qpsk();
        const std::complex<double> nr_k = cnoise();
        const std::complex<double> x_r = sqrt_beta * yr_del;
        const std::complex<double> y_r =
            c_src * cfg.h * s_k + c_loop * cfg.f * x_r + nr_k;

        s_hist[slot] = s_k;
        nr_hist[slot] = nr_k;
        yr_hist[slot] = y_r;

        if (k >= warm) {
            const std::complex<double> nd_k = cnoise();
            const std::complex<double> y_d = cfg.g * x_r * inv_sqrt_pl2 + nd_k;
            const std::complex<double> des = c_des * cfg.g * cfg.h * s_del;
            const std::complex<double> first = c_first * cfg.g * nr_del;
            const std::complex<double> noise_c = nd_k + first;
            const std::complex<double> loop_c = y_d - des - noise_c;
            acc_des += std::norm(des);
            acc_loop += std::norm(loop_c);
            acc_noise += std::norm(noise_c);
            acc_total += std::norm(y_d);
            acc_relay += std::norm(x_r);
        }
    }

    const double n = static_cast<double>(cfg.num_symbols);
    simulated_powers out;
    out.breakdown.desired_power = acc_des / n;
    out.breakdown.loop_power = acc_loop / n;
    out.breakdown.noise_power_out = acc_noise / n;
    const double denom = out.breakdown.loop_power + out.breakdown.noise_power_out;
    out.breakdown.esinr = denom > 0.0 ? out.breakdown.desired_power / denom : 0.0;
    out.relay_power = acc_relay / n;
    out.total_power = acc_total / n;
    return out;
}

}  // namespace fdrelay
