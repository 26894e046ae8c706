#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "fdrelay/ps_schemes.hpp"
#include "fdrelay/types.hpp"

namespace fdrelay {

// Reproducibility contract: identical (seed, stream_id, trial count) give
// bit-identical estimates regardless of worker count. Trials are cut into
// fixed-size chunks, each chunk seeded by a counter-based mix of
// (seed, stream_id, chunk index).
struct rng_spec {
    std::uint64_t seed = 0x6d6f6e74654d43ULL;
    std::uint32_t stream_id = 0;
};

struct outage_estimate {
    double p_out = 0.0;
    std::uint64_t trials = 0;
    double half_width_95 = 0.0;  // 1.96*sqrt(p(1-p)/trials), normal approximation
};

enum class scheme_kind { full_csi, partial_csi, fixed };

struct scheme_spec {
    scheme_kind kind = scheme_kind::fixed;
    double rho = 0.5;  // used by fixed only

    static scheme_spec full() { return {scheme_kind::full_csi, 0.0}; }
    static scheme_spec partial() { return {scheme_kind::partial_csi, 0.0}; }
    static scheme_spec fixed_at(double r) { return {scheme_kind::fixed, r}; }
};

// Scheme name used in CSV output and reports: "full_csi", "partial_csi",
// "fixed_0.3" (trailing zeros trimmed).
std::string scheme_name(const scheme_spec& s);

// Independent exponential draws with means (mean_h2, mean_g2, mean_f2),
// via inverse CDF on 53-bit uniforms so the stream is identical across
// standard libraries.
channel_realization draw_channel(const system_params& p, std::mt19937_64& rng);

// One block under a scheme: true when the block is in outage (scheme
// declared certain outage, the decision is infeasible, or the achieved
// e-SINR falls below the threshold).
bool trial_outage(const system_params& p, const channel_realization& ch,
                  const scheme_spec& scheme);

// Monte Carlo outage probability. threads = 0 picks the hardware count.
// Requires trials >= 1.
outage_estimate outage_mc(const system_params& p, const scheme_spec& scheme,
                          std::uint64_t trials, const rng_spec& rng,
                          int threads = 0);

// Same, for several schemes on shared channel draws (one draw per trial,
// every scheme evaluated on it). Shared draws make scheme comparisons
// paired: a scheme that dominates per-block dominates in every estimate.
std::vector<outage_estimate> outage_mc_multi(const system_params& p,
                                             const std::vector<scheme_spec>& schemes,
                                             std::uint64_t trials,
                                             const rng_spec& rng,
                                             int threads = 0);

// Outage probability conditioned on (|h|^2, |f|^2, rho) with |g|^2
// exponential of mean mean_g2, from the closed-form threshold
// Pr(|g|^2 < G1/G2): returns 1 - exp(-G1/(G2*mean_g2)) when the threshold
// ratio is >= 0, and 1 when G2 = 0 or the ratio is negative (the
// certain-outage rows of the region table) or the loop is unstable at the
// max-power gain (eta*rho*|f|^2 >= 1). Requires 0 < rho < 1.
double conditional_outage_analytic(const system_params& p, double h2, double f2,
                                   double rho);

// Exact (Clopper-Pearson) two-sided confidence interval for k successes in
// n trials at the given confidence level.
std::pair<double, double> clopper_pearson(std::uint64_t k, std::uint64_t n,
                                          double confidence = 0.95);

}  // namespace fdrelay
