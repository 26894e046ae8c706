#include "fdrelay/ps_schemes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace fdrelay {

namespace {

constexpr double kEdgeOffset = 1e-9;  // open-interval endpoints moved inside

// Ascending candidate list: interior stationary points plus interval
// endpoints and midpoint (the objective vanishes toward open ends, but the
// endpoints keep degenerate cases well-defined).
std::vector<double> candidate_rhos(const quartic_coeffs& q, double lo, double hi) {
    std::vector<double> cand;
    if (!(lo < hi)) return cand;
    real_roots_result r = roots_in_interval(q, lo, hi);
    cand = std::move(r.roots);
    cand.push_back(lo);
    cand.push_back(hi);
    cand.push_back(0.5 * (lo + hi));
    std::sort(cand.begin(), cand.end());
    return cand;
}

// Select by objective value; ascending iteration with strict improvement
// makes ties resolve to the smallest rho.
template <typename Objective>
double best_candidate(const std::vector<double>& cand, Objective&& obj) {
    double best_rho = cand.front();
    double best_val = -std::numeric_limits<double>::infinity();
    for (double rho : cand) {
        const double v = obj(rho);
        if (v > best_val) {
            best_val = v;
            best_rho = rho;
        }
    }
    return best_rho;
}

// General e-SINR at an explicit (rho, beta); arithmetic-only form of the
// destination power ratio, for the exhaustive grid search.
double esinr_general(double gamma_sr, double gamma_rd, double f2, double rho,
                     double beta) {
    const double one_m = 1.0 - rho;
    const double loop = one_m * f2;
    if (beta <= 0.0 || beta * loop >= 1.0) return 0.0;
    const double den = gamma_sr / beta + gamma_rd +
                       (one_m * gamma_sr + 1.0) * gamma_rd * loop /
                           (1.0 / beta - loop);
    return den > 0.0 ? one_m * gamma_sr * gamma_rd / den : 0.0;
}

}  // namespace

quartic_coeffs q1_coeffs(double gamma_sr, double gamma_rd, double f2, double eta) {
    const double ef2 = eta * f2;
    quartic_coeffs q;
    q.a0 = 1.0 + gamma_sr;
    q.a1 = -2.0 * (1.0 + ef2) * (1.0 + gamma_sr);
    q.a2 = gamma_sr - eta * gamma_rd + ef2 * ef2 * (1.0 + gamma_sr) +
           ef2 * (5.0 + gamma_sr * (4.0 - eta * gamma_rd));
    q.a3 = -2.0 * ef2 *
           (gamma_sr + ef2 * (2.0 + gamma_sr) - eta * (1.0 + gamma_sr) * gamma_rd);
    q.a4 = eta * ef2 * (ef2 + gamma_sr) * (f2 - gamma_rd);
    return q;
}

quartic_coeffs q2_coeffs(double gamma_sr, double gamma0, double f2, double eta) {
    const double ef2 = eta * f2;
    const double g1 = 1.0 + gamma0;
    quartic_coeffs q;
    q.a0 = gamma_sr - gamma0;
    q.a1 = 2.0 * gamma0 * ef2 - 2.0 * gamma_sr * (1.0 + ef2 * g1);
    q.a2 = gamma_sr * (1.0 + ef2 * g1 * (4.0 + ef2)) - gamma0 * ef2 * ef2;
    q.a3 = -2.0 * gamma_sr * ef2 * (1.0 + ef2) * g1;
    q.a4 = gamma_sr * ef2 * ef2 * g1;
    return q;
}

double gtilde(const system_params& p, double h2, double f2, double rho) {
    const double eta = p.eh_efficiency;
    const double g0 = p.sinr_threshold;
    const double s2 = p.noise_power;
    const double ps = p.source_power;
    const double pl1 = p.d1_path_loss();
    const double pl2 = p.d2_path_loss();
    const double eps = 1.0 - eta * rho * f2;
    const double a = ps * pl1 * pl2 * s2 * g0 * (1.0 - rho) * eps;
    if (a == 0.0) return -std::numeric_limits<double>::infinity();
    const double c =
        eta * rho * ps * ps * (1.0 - rho) * (1.0 - eta * rho * (1.0 + g0) * f2);
    const double d = ps * pl1 * s2 * eta * rho * g0 * (eta * rho * f2 - 1.0);
    return (c * h2 + d) / a;
}

double rho1_bound(double gamma_sr, double gamma0, double f2, double eta) {
    const double A = eta * gamma_sr * (1.0 + gamma0) * f2;
    const double B = gamma_sr + A - eta * gamma0 * f2;
    const double C = gamma_sr - gamma0;
    if (A == 0.0) {
        if (B == 0.0) return std::numeric_limits<double>::quiet_NaN();
        return C / B;  // continuous zero-loop limit
    }
    const double disc = B * B - 4.0 * A * C;
    if (disc < 0.0) return std::numeric_limits<double>::quiet_NaN();
    const double sq = std::sqrt(disc);
    const double q = 0.5 * (B + (B >= 0.0 ? sq : -sq));
    if (q == 0.0) return 0.0;  // B = disc = 0 => double root at 0
    return std::min(q / A, C / q);
}

partial_csi_regions classify_partial_csi(const system_params& p, double h2,
                                         double f2, double rho) {
    const double eta = p.eh_efficiency;
    const double g0 = p.sinr_threshold;
    const double gsr =
        p.source_power * h2 / (p.d1_path_loss() * p.noise_power);
    const double eps = 1.0 - eta * rho * f2;

    partial_csi_regions r;
    r.rho1 = rho1_bound(gsr, g0, f2, eta);
    r.f1_threshold = 1.0 / (eta * rho * (1.0 + g0));
    r.f2_threshold = 1.0 / (eta * rho);
    r.h1_threshold = p.d1_path_loss() * p.noise_power * g0 * eps /
                     (p.source_power * (1.0 - rho) *
                      (1.0 - eta * rho * f2 * (1.0 + g0)));
    r.h2_threshold =
        p.d1_path_loss() * p.noise_power * eps / (p.source_power * (rho - 1.0));

    if (f2 < 1.0 / (eta * (1.0 + g0)) && gsr > g0) r.active = csi_constraint::c1;
    else if (f2 > 1.0 / eta && gsr < g0) r.active = csi_constraint::c2;
    else if (f2 > 1.0 / eta && gsr > eta * f2 - 1.0) r.active = csi_constraint::c3;
    else r.active = csi_constraint::none;
    return r;
}

relay_decision full_csi_rho(const system_params& p, const channel_realization& ch) {
    const link_snrs s = compute_link_snrs(p, ch);
    const double eta = p.eh_efficiency;
    const double ef2 = eta * ch.f2;

    // Feasible rho-interval: the loop is stable at the max-power gain iff
    // eta*rho*|f|^2 < 1, and within it the gain denominator stays positive.
    double rho_hi = 1.0;
    if (ef2 > 0.0) rho_hi = std::min(1.0, 1.0 / ef2);
    const double hi = rho_hi * (1.0 - kEdgeOffset);
    const double lo = std::min(kEdgeOffset, 0.5 * hi);
    if (!(lo < hi)) {
        relay_decision d;
        d.rho = 0.5 * rho_hi;
        d.feasible = false;
        return d;
    }

    const auto cand =
        candidate_rhos(q1_coeffs(s.gamma_sr, s.gamma_rd, ch.f2, eta), lo, hi);
    const double best = best_candidate(cand, [&](double rho) {
        return esinr_max_gain(s.gamma_sr, s.gamma_rd, ch.f2, eta, rho);
    });
    return decision_at_max_gain(p, ch, best);
}

relay_decision joint_exhaustive(const system_params& p,
                                const channel_realization& ch, int grid_rho,
                                int grid_beta) {
    if (grid_rho < 100 || grid_beta < 100)
        throw std::invalid_argument("joint_exhaustive grids must be >= 100");
    const link_snrs s = compute_link_snrs(p, ch);

    relay_decision best;
    best.rho = 0.5;
    best.feasible = false;
    double best_val = -1.0;
    for (int i = 1; i <= grid_rho; ++i) {
        const double rho = static_cast<double>(i) / (grid_rho + 1);
        const double den =
            max_gain_denominator(s.gamma_sr, ch.f2, p.eh_efficiency, rho);
        if (den <= 0.0) continue;
        const double bound = p.eh_efficiency * rho * s.gamma_sr / den;
        if (bound <= 0.0) continue;
        for (int j = 1; j <= grid_beta; ++j) {
            const double beta = bound * static_cast<double>(j) / grid_beta;
            const double v = esinr_general(s.gamma_sr, s.gamma_rd, ch.f2, rho, beta);
            if (v > best_val) {
                best_val = v;
                best.rho = rho;
                best.beta = beta;
                best.feasible = true;
            }
        }
    }
    return best;
}

relay_decision partial_csi_rho(const system_params& p, double h2, double f2) {
    const double eta = p.eh_efficiency;
    const double g0 = p.sinr_threshold;
    const double gsr =
        p.source_power * h2 / (p.d1_path_loss() * p.noise_power);
    channel_realization ch{h2, 0.0, f2};  // g2 never consulted

    const auto decision_at = [&](double rho) {
        relay_decision d = decision_at_max_gain(p, ch, rho);
        return d;
    };

    if (gsr > g0) {
        // A conditional-success interval (0, rho1) exists for any loop
        // strength; it always sits inside the stable zone.
        const double r1 = rho1_bound(gsr, g0, f2, eta);
        if (std::isfinite(r1) && r1 > 0.0) {
            const double hi = std::min(r1, 1.0) * (1.0 - kEdgeOffset);
            const double lo = std::min(kEdgeOffset, 0.5 * hi);
            const auto cand =
                candidate_rhos(q2_coeffs(gsr, g0, f2, eta), lo, hi);
            const double best = best_candidate(
                cand, [&](double rho) { return gtilde(p, h2, f2, rho); });
            return decision_at(best);
        }
    } else if (f2 > 1.0 / eta && (gsr < g0 || gsr > eta * f2 - 1.0)) {
        // High-loop CSI conditions; their search sets are taken literally.
        // Any rho they produce fails the stability or SINR check downstream,
        // so these blocks still end in outage.
        std::vector<std::pair<double, double>> intervals;
        if (gsr < g0) {
            const double r1 = rho1_bound(gsr, g0, f2, eta);
            const double lo2 = std::isfinite(r1) ? std::max(r1, 0.0) : 0.0;
            intervals.emplace_back(lo2, 1.0);
        }
        if (gsr > eta * f2 - 1.0)
            intervals.emplace_back(1.0 / (eta * f2),
                                   std::min(1.0, (1.0 + gsr) / (gsr + eta * f2)));

        double best_rho = -1.0;
        double best_val = -std::numeric_limits<double>::infinity();
        const quartic_coeffs q2 = q2_coeffs(gsr, g0, f2, eta);
        for (const auto& [a, b] : intervals) {
            const double hi = b - kEdgeOffset;
            const double lo = a + kEdgeOffset;
            if (!(lo < hi)) continue;
            for (double rho : candidate_rhos(q2, lo, hi)) {
                const double v = gtilde(p, h2, f2, rho);
                if (v > best_val) {
                    best_val = v;
                    best_rho = rho;
                }
            }
        }
        if (best_rho > 0.0) return decision_at(best_rho);
    }

    // No CSI condition leaves a route to success: harvest everything.
    relay_decision d;
    d.rho = 1.0;
    d.beta = 0.0;
    d.feasible = false;
    d.certain_outage = true;
    return d;
}

relay_decision fixed_rho(const system_params& p, const channel_realization& ch,
                         double rho) {
    if (!(rho > 0.0 && rho < 1.0))
        throw std::invalid_argument("fixed_rho requires 0 < rho < 1");
    return decision_at_max_gain(p, ch, rho);
}

}  // namespace fdrelay
