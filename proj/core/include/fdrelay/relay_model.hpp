#pragma once

#include <optional>

#include "fdrelay/types.hpp"

namespace fdrelay {

// Per-block link SNRs from the system parameters and channel draws.
link_snrs compute_link_snrs(const system_params& p, const channel_realization& ch);

// Denominator of the max-power relay gain: (1-rho)*gamma_sr - eta*rho*|f|^2 + 1.
// The gain exists only while this is positive.
double max_gain_denominator(const system_params& p, const channel_realization& ch,
                            double rho);
double max_gain_denominator(double gamma_sr, double f2, double eta, double rho);

// Relay gain that spends the entire harvested power:
//   beta = eta*rho*gamma_sr / ((1-rho)*gamma_sr - eta*rho*|f|^2 + 1).
// Empty when the denominator is <= 0 (harvest-limited regime with no finite
// gain; the block cannot be served and counts as outage).
std::optional<double> max_power_gain(const system_params& p,
                                     const channel_realization& ch, double rho);

// Closed-loop stability: beta*(1-rho)*|f|^2 < 1 keeps the relay's feedback
// geometric series summable.
bool non_oscillatory(const channel_realization& ch, double rho, double beta);

// Relay transmit power for a stable decision:
//   P_r = beta*((1-rho)P_s|h|^2/d1^m + sigma^2) / (1 - (1-rho)|f|^2 beta).
// Throws std::domain_error when the stability condition fails.
double relay_tx_power(const system_params& p, const channel_realization& ch,
                      const relay_decision& d);

// Energy harvested over one block: eta*rho*(P_s|h|^2/d1^m + |f|^2 P_r)*T.
double harvested_energy(const system_params& p, const channel_realization& ch,
                        double rho, double relay_power);

// Destination power decomposition (desired / loop / noise) and the
// end-to-end SINR for an arbitrary stable (rho, beta).
// Throws std::domain_error when the decision is oscillatory.
sinr_breakdown esinr(const system_params& p, const channel_realization& ch,
                     const relay_decision& d);

// End-to-end SINR when the relay runs at the max-power gain, as a function
// of rho alone:
//   gamma = eps*eta*rho*(1-rho)*gsr*grd /
//           ((1-rho)*(eps + eta^2 rho^2 grd f2)*gsr + eps*(eps + eta*rho*grd)),
// with eps = 1 - eta*rho*f2. Returns 0 outside the feasible set (gain
// denominator <= 0 or eps <= 0, i.e. an unstable loop).
double esinr_max_gain(double gamma_sr, double gamma_rd, double f2, double eta,
                      double rho);
double esinr_max_gain(const system_params& p, const channel_realization& ch,
                      double rho);

// Decision running the relay at the max-power gain for a given rho.
// feasible reflects both the gain's existence and loop stability.
relay_decision decision_at_max_gain(const system_params& p,
                                    const channel_realization& ch, double rho);

}  // namespace fdrelay
