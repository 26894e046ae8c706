#include "fdrelay/relay_model.hpp"

#include <cmath>
#include <stdexcept>

namespace fdrelay {

link_snrs compute_link_snrs(const system_params& p, const channel_realization& ch) {
    const double pl1 = p.d1_path_loss();
    const double pl2 = p.d2_path_loss();
    link_snrs s;
    s.gamma_sr = p.source_power * ch.h2 / (pl1 * p.noise_power);
    s.gamma_rd = p.source_power * ch.h2 * ch.g2 / (pl1 * pl2 * p.noise_power);
    return s;
}

double max_gain_denominator(double gamma_sr, double f2, double eta, double rho) {
    return (1.0 - rho) * gamma_sr - eta * rho * f2 + 1.0;
}

double max_gain_denominator(const system_params& p, const channel_realization& ch,
                            double rho) {
    return max_gain_denominator(compute_link_snrs(p, ch).gamma_sr, ch.f2,
                                p.eh_efficiency, rho);
}

std::optional<double> max_power_gain(const system_params& p,
                                     const channel_realization& ch, double rho) {
    const double gsr = compute_link_snrs(p, ch).gamma_sr;
    const double den = max_gain_denominator(gsr, ch.f2, p.eh_efficiency, rho);
    if (den <= 0.0) return std::nullopt;
    return p.eh_efficiency * rho * gsr / den;
}

bool non_oscillatory(const channel_realization& ch, double rho, double beta) {
    return beta * (1.0 - rho) * ch.f2 < 1.0;
}

double relay_tx_power(const system_params& p, const channel_realization& ch,
                      const relay_decision& d) {
    if (!non_oscillatory(ch, d.rho, d.beta))
        throw std::domain_error("oscillatory relay: beta*(1-rho)*|f|^2 >= 1");
    const double rx = (1.0 - d.rho) * p.source_power * ch.h2 / p.d1_path_loss() +
                      p.noise_power;
    return d.beta * rx / (1.0 - (1.0 - d.rho) * ch.f2 * d.beta);
}

double harvested_energy(const system_params& p, const channel_realization& ch,
                        double rho, double relay_power) {
    return p.eh_efficiency * rho *
           (p.source_power * ch.h2 / p.d1_path_loss() + ch.f2 * relay_power) *
           p.block_duration;
}

sinr_breakdown esinr(const system_params& p, const channel_realization& ch,
                     const relay_decision& d) {
    if (!non_oscillatory(ch, d.rho, d.beta))
        throw std::domain_error("oscillatory relay: beta*(1-rho)*|f|^2 >= 1");
    const double pl1 = p.d1_path_loss();
    const double pl2 = p.d2_path_loss();
    const double loop_gain = (1.0 - d.rho) * d.beta * ch.f2;  // < 1 here

    sinr_breakdown b;
    b.desired_power =
        (1.0 - d.rho) * d.beta * p.source_power * ch.h2 * ch.g2 / (pl1 * pl2);
    const double relay_rx =
        (1.0 - d.rho) * p.source_power * ch.h2 / pl1 + p.noise_power;
    b.loop_power =
        relay_rx * d.beta * ch.g2 / pl2 * loop_gain / (1.0 - loop_gain);
    b.noise_power_out = (d.beta * ch.g2 / pl2 + 1.0) * p.noise_power;
    const double denom = b.loop_power + b.noise_power_out;
    b.esinr = denom > 0.0 ? b.desired_power / denom : 0.0;
    return b;
}

double esinr_max_gain(double gamma_sr, double gamma_rd, double f2, double eta,
                      double rho) {
    const double eps = 1.0 - eta * rho * f2;
    if (eps <= 0.0) return 0.0;  // loop unstable at the max-power gain
    const double den = max_gain_denominator(gamma_sr, f2, eta, rho);
    if (den <= 0.0) return 0.0;  // no finite max-power gain
    const double one_m = 1.0 - rho;
    const double num = eps * eta * rho * one_m * gamma_sr * gamma_rd;
    const double denom =
        one_m * (eps + eta * eta * rho * rho * gamma_rd * f2) * gamma_sr +
        eps * (eps + eta * rho * gamma_rd);
    return denom > 0.0 ? num / denom : 0.0;
}

double esinr_max_gain(const system_params& p, const channel_realization& ch,
                      double rho) {
    const link_snrs s = compute_link_snrs(p, ch);
    return esinr_max_gain(s.gamma_sr, s.gamma_rd, ch.f2, p.eh_efficiency, rho);
}

relay_decision decision_at_max_gain(const system_params& p,
                                    const channel_realization& ch, double rho) {
    relay_decision d;
    d.rho = rho;
    const auto beta = max_power_gain(p, ch, rho);
    if (!beta) {
        d.beta = 0.0;
        d.feasible = false;
        return d;
    }
    d.beta = *beta;
    d.feasible = non_oscillatory(ch, rho, d.beta);
    return d;
}

}  // namespace fdrelay
