#include "fdrelay/channel_mc.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <thread>

namespace fdrelay {

namespace {

constexpr std::uint64_t kChunkTrials = 1 << 16;

// splitmix64 finalizer; chunk seeds are a counter-based mix of
// (seed, stream_id, chunk) so the draw stream never depends on how chunks
// are distributed over workers.
std::uint64_t mix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

std::uint64_t chunk_seed(const rng_spec& r, std::uint64_t chunk) {
    return mix64(mix64(mix64(r.seed) ^ r.stream_id) ^ chunk);
}

// Uniform in (0, 1] from 53 random mantissa bits.
double uniform_open0(std::mt19937_64& rng) {
    return (static_cast<double>(rng() >> 11) + 1.0) * 0x1.0p-53;
}

double exp_draw(double mean, std::mt19937_64& rng) {
    return -mean * std::log(uniform_open0(rng));
}

outage_estimate to_estimate(std::uint64_t outages, std::uint64_t trials) {
    outage_estimate e;
    e.trials = trials;
    e.p_out = static_cast<double>(outages) / static_cast<double>(trials);
    e.half_width_95 =
        1.96 * std::sqrt(e.p_out * (1.0 - e.p_out) / static_cast<double>(trials));
    return e;
}

// Regularized incomplete beta I_x(a,b) by Lentz's continued fraction.
double betacf(double a, double b, double x) {
    const double tiny = 1e-300;
    const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < tiny) d = tiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= 300; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < 1e-14) break;
    }
    return h;
}

double reg_inc_beta(double x, double a, double b) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double ln = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                      a * std::log(x) + b * std::log1p(-x);
    const double front = std::exp(ln);
    if (x < (a + 1.0) / (a + b + 2.0)) return front * betacf(a, b, x) / a;
    return 1.0 - std::exp(std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                          b * std::log1p(-x) + a * std::log(x)) *
                     betacf(b, a, 1.0 - x) / b;
}

// x with I_x(a, b) = target, by bisection (monotone in x).
double inv_reg_beta(double target, double a, double b) {
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (reg_inc_beta(mid, a, b) < target) lo = mid;
        else hi = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

std::string scheme_name(const scheme_spec& s) {
    switch (s.kind) {
        case scheme_kind::full_csi: return "full_csi";
        case scheme_kind::partial_csi: return "partial_csi";
        case scheme_kind::fixed: {
            char buf[32];
            std::snprintf(buf, sizeof buf, "fixed_%g", s.rho);
            return buf;
        }
    }
    return "unknown";
}

channel_realization draw_channel(const system_params& p, std::mt19937_64& rng) {
    channel_realization ch;
    ch.h2 = exp_draw(p.mean_h2, rng);
    ch.g2 = exp_draw(p.mean_g2, rng);
    ch.f2 = exp_draw(p.mean_f2, rng);
    return ch;
}

bool trial_outage(const system_params& p, const channel_realization& ch,
                  const scheme_spec& scheme) {
    relay_decision d;
    switch (scheme.kind) {
        case scheme_kind::full_csi: d = full_csi_rho(p, ch); break;
        case scheme_kind::partial_csi: d = partial_csi_rho(p, ch.h2, ch.f2); break;
        case scheme_kind::fixed: d = fixed_rho(p, ch, scheme.rho); break;
    }
    if (d.certain_outage || !d.feasible) return true;
    return esinr_max_gain(p, ch, d.rho) < p.sinr_threshold;
}

std::vector<outage_estimate> outage_mc_multi(const system_params& p,
                                             const std::vector<scheme_spec>& schemes,
                                             std::uint64_t trials,
                                             const rng_spec& rng, int threads) {
    p.validate();
    if (trials == 0) throw std::invalid_argument("outage_mc requires trials >= 1");
    if (schemes.empty())
        throw std::invalid_argument("outage_mc requires at least one scheme");

    const std::size_t ns = schemes.size();
    const std::uint64_t nchunks = (trials + kChunkTrials - 1) / kChunkTrials;
    std::vector<std::uint64_t> counts(nchunks * ns, 0);

    int nworkers = threads > 0
                       ? threads
                       : static_cast<int>(std::thread::hardware_concurrency());
    nworkers = std::clamp<int>(nworkers, 1,
                               static_cast<int>(std::min<std::uint64_t>(
                                   nchunks, std::uint64_t{256})));

    std::atomic<std::uint64_t> next{0};
    auto work = [&]() {
        for (;;) {
            const std::uint64_t c = next.fetch_add(1, std::memory_order_relaxed);
            if (c >= nchunks) return;
            std::mt19937_64 gen(chunk_seed(rng, c));
            const std::uint64_t n =
                std::min<std::uint64_t>(kChunkTrials, trials - c * kChunkTrials);
            std::uint64_t* row = counts.data() + c * ns;
            for (std::uint64_t t = 0; t < n; ++t) {
                const channel_realization ch = draw_channel(p, gen);
                for (std::size_t s = 0; s < ns; ++s)
                    row[s] += trial_outage(p, ch, schemes[s]) ? 1 : 0;
            }
        }
    };

    if (nworkers == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(nworkers);
        for (int i = 0; i < nworkers; ++i) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }

    std::vector<outage_estimate> out;
    out.reserve(ns);
    for (std::size_t s = 0; s < ns; ++s) {
        std::uint64_t total = 0;
        for (std::uint64_t c = 0; c < nchunks; ++c) total += counts[c * ns + s];
        out.push_back(to_estimate(total, trials));
    }
    return out;
}

outage_estimate outage_mc(const system_params& p, const scheme_spec& scheme,
                          std::uint64_t trials, const rng_spec& rng, int threads) {
    return outage_mc_multi(p, {scheme}, trials, rng, threads).front();
}

double conditional_outage_analytic(const system_params& p, double h2, double f2,
                                   double rho) {
    if (!(rho > 0.0 && rho < 1.0))
        throw std::invalid_argument(
            "conditional_outage_analytic requires 0 < rho < 1");
    const double eta = p.eh_efficiency;
    const double g0 = p.sinr_threshold;
    const double s2 = p.noise_power;
    const double ps = p.source_power;
    const double pl1 = p.d1_path_loss();
    const double pl2 = p.d2_path_loss();
    const double eps = 1.0 - eta * rho * f2;
    // The threshold law below is derived on the stable-loop set; outside it
    // (eta*rho*|f|^2 >= 1) the max-gain relay loop diverges for every
    // second-hop fade, so the block is lost with certainty.
    if (eps <= 0.0) return 1.0;

    // Success needs |g|^2 >= G1/G2; the sign of that ratio collapses the
    // region table (negative ratio or G2 = 0 means certain outage).
    const double a = ps * pl1 * pl2 * s2 * g0 * (1.0 - rho) * eps;
    const double b = pl1 * pl1 * pl2 * s2 * s2 * g0 * eps * eps;
    const double c =
        eta * rho * ps * ps * (1.0 - rho) * (1.0 - eta * rho * (1.0 + g0) * f2);
    const double d = ps * pl1 * s2 * eta * rho * g0 * (eta * rho * f2 - 1.0);
    const double g1v = a * h2 + b;
    const double g2v = c * h2 * h2 + d * h2;
    if (g2v == 0.0) return 1.0;
    const double ratio = g1v / g2v;
    if (ratio < 0.0) return 1.0;
    return -std::expm1(-ratio / p.mean_g2);
}

std::pair<double, double> clopper_pearson(std::uint64_t k, std::uint64_t n,
                                          double confidence) {
    if (n == 0) throw std::invalid_argument("clopper_pearson requires n >= 1");
    if (k > n) throw std::invalid_argument("clopper_pearson requires k <= n");
    const double alpha = 1.0 - confidence;
    const double kd = static_cast<double>(k), nd = static_cast<double>(n);
    double lo = 0.0, hi = 1.0;
    if (k > 0) lo = inv_reg_beta(alpha / 2.0, kd, nd - kd + 1.0);
    if (k < n) hi = inv_reg_beta(1.0 - alpha / 2.0, kd + 1.0, nd - kd);
    return {lo, hi};
}

}  // namespace fdrelay
