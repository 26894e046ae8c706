#pragma once

#include "fdrelay/quartic.hpp"
#include "fdrelay/relay_model.hpp"
#include "fdrelay/types.hpp"

namespace fdrelay {

// Stationarity quartic of the max-gain e-SINR: d(gamma)/d(rho) vanishes
// exactly where Q1(rho) = 0 (the remaining factor is positive), so the
// full-CSI optimum is a root of Q1 inside the feasible interval.
quartic_coeffs q1_coeffs(double gamma_sr, double gamma_rd, double f2, double eta);

// Stationarity quartic of the high-SINR conditional-success objective
// G~(rho) = (c|h|^2 + d)/a used by the partial-CSI scheme: dG~/d(rho)
// vanishes where Q2(rho) = 0.
quartic_coeffs q2_coeffs(double gamma_sr, double gamma0, double f2, double eta);

// High-SINR approximation of the conditional-success objective. Larger is
// better; the conditional outage is Pr(|g|^2 < G1/G2) and G~ approximates
// G2/G1 up to a positive factor. Uses the raw |h|^2, never |g|^2.
double gtilde(const system_params& p, double h2, double f2, double rho);

// Upper end of the rho-interval on which a conditional success is possible
// when gamma_sr exceeds the SINR threshold: the smaller root of
//   A rho^2 - B rho + C = 0,
//   A = eta*gsr*(1+g0)*f2, B = gsr + A - eta*g0*f2, C = gsr - g0.
// Continuous limit C/B as f2 -> 0. May be <= 0 when gamma_sr <= g0
// (no conditional-success interval); NaN if the quadratic has no real root.
double rho1_bound(double gamma_sr, double gamma0, double f2, double eta);

// CSI-condition taxonomy for the partial-CSI scheme.
enum class csi_constraint { c1, c2, c3, none };

// Region thresholds of the conditional-outage table, evaluated at a
// candidate rho (they depend on rho), plus the rho-independent pieces.
struct partial_csi_regions {
    double rho1 = 0.0;          // conditional-success interval bound (above)
    double f1_threshold = 0.0;  // 1/(eta*rho*(1+gamma0)), |f|^2 below => success region
    double f2_threshold = 0.0;  // 1/(eta*rho), |f|^2 above => high-loop branch
    double h1_threshold = 0.0;  // |h|^2 lower bound of the success region
    double h2_threshold = 0.0;  // |h|^2 upper bound of the high-loop branch
    csi_constraint active = csi_constraint::none;
};

// Thresholds at a candidate rho and the CSI-condition label for (h2, f2).
partial_csi_regions classify_partial_csi(const system_params& p, double h2,
                                         double f2, double rho);

// Full-CSI scheme: rho maximizing the max-gain e-SINR over the feasible
// interval, selected by evaluating the objective at every interior
// stationary point (and interval endpoints), tie-break smallest rho.
relay_decision full_csi_rho(const system_params& p, const channel_realization& ch);

// Exhaustive grid search over rho in (0,1) and beta in (0, max-power gain],
// maximizing the general e-SINR. Optimality oracle for full_csi_rho.
// Requires grid_rho, grid_beta >= 100.
relay_decision joint_exhaustive(const system_params& p,
                                const channel_realization& ch, int grid_rho,
                                int grid_beta);

// Partial-CSI scheme: knows |h|^2 and |f|^2 only (enforced by the parameter
// shape). When gamma_sr exceeds the threshold it maximizes G~ over
// (0, rho1); otherwise, with the high-loop CSI conditions, it searches
// their rho-sets; with no condition satisfied it returns rho = 1 flagged
// certain_outage (harvest as much as possible).
relay_decision partial_csi_rho(const system_params& p, double h2, double f2);

// Fixed-rho baseline: runs the max-power gain at the given rho.
// Requires 0 < rho < 1.
relay_decision fixed_rho(const system_params& p, const channel_realization& ch,
                         double rho);

}  // namespace fdrelay
