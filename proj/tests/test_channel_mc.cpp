#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "fdrelay/channel_mc.hpp"

using namespace fdrelay;

namespace {

system_params study_params(double snr_db, double inr_db) {
    system_params p;
    p.set_rate(3.0);
    p.source_power = 1.0;
    p.noise_power = std::pow(10.0, -snr_db / 10.0);
    p.mean_f2 = std::pow(10.0, inr_db / 10.0) * p.noise_power;
    return p;
}

}  // namespace

TEST_CASE("channel draws have the configured exponential means") {
    system_params p = study_params(35.0, 30.0);
    p.mean_h2 = 2.0;
    p.mean_g2 = 0.5;
    std::mt19937_64 rng(404);
    const int n = 200000;
    double sh = 0, sg = 0, sf = 0;
    for (int i = 0; i < n; ++i) {
        const channel_realization ch = draw_channel(p, rng);
        CHECK(ch.h2 >= 0.0);
        sh += ch.h2;
        sg += ch.g2;
        sf += ch.f2;
    }
    // 5-sigma bands, sigma = mean/sqrt(n) for exponentials.
    CHECK(std::abs(sh / n - p.mean_h2) <= 5.0 * p.mean_h2 / std::sqrt(n));
    CHECK(std::abs(sg / n - p.mean_g2) <= 5.0 * p.mean_g2 / std::sqrt(n));
    CHECK(std::abs(sf / n - p.mean_f2) <= 5.0 * p.mean_f2 / std::sqrt(n));
}

TEST_CASE("scheme names used in CSVs") {
    CHECK(scheme_name(scheme_spec::full()) == "full_csi");
    CHECK(scheme_name(scheme_spec::partial()) == "partial_csi");
    CHECK(scheme_name(scheme_spec::fixed_at(0.3)) == "fixed_0.3");
    CHECK(scheme_name(scheme_spec::fixed_at(0.25)) == "fixed_0.25");
}

TEST_CASE("estimates are reproducible and worker-count independent") {
    const system_params p = study_params(35.0, 30.0);
    const rng_spec spec{2718, 5};
    const auto a = outage_mc(p, scheme_spec::fixed_at(0.5), 60000, spec, 1);
    const auto b = outage_mc(p, scheme_spec::fixed_at(0.5), 60000, spec, 4);
    const auto c = outage_mc(p, scheme_spec::fixed_at(0.5), 60000, spec, 0);
    CHECK(a.p_out == b.p_out);
    CHECK(a.p_out == c.p_out);
    CHECK(a.trials == 60000);
    CHECK(a.half_width_95 ==
          doctest::Approx(1.96 * std::sqrt(a.p_out * (1.0 - a.p_out) / 60000.0))
              .epsilon(1e-12));

    // A different stream must decouple the estimate.
    const rng_spec other{2718, 6};
    const auto d = outage_mc(p, scheme_spec::fixed_at(0.5), 60000, other, 1);
    CHECK(d.p_out != a.p_out);
}

TEST_CASE("multi-scheme runs share draws with the single-scheme path") {
    const system_params p = study_params(35.0, 30.0);
    const rng_spec spec{1234, 0};
    const std::vector<scheme_spec> schemes{scheme_spec::full(),
                                           scheme_spec::fixed_at(0.5)};
    const auto multi = outage_mc_multi(p, schemes, 40000, spec, 2);
    REQUIRE(multi.size() == 2);
    const auto solo_full = outage_mc(p, scheme_spec::full(), 40000, spec, 2);
    const auto solo_fixed = outage_mc(p, scheme_spec::fixed_at(0.5), 40000, spec, 2);
    CHECK(multi[0].p_out == solo_full.p_out);
    CHECK(multi[1].p_out == solo_fixed.p_out);
}

TEST_CASE("zero threshold with a clean loop never falls in outage") {
    system_params p = study_params(35.0, 30.0);
    p.set_rate(0.0);          // threshold 0
    p.mean_f2 = 1e-4 * p.noise_power;
    const auto est = outage_mc(p, scheme_spec::full(), 20000, {7, 0}, 2);
    CHECK(est.p_out == 0.0);
}

TEST_CASE("a dead second hop is always in outage") {
    system_params p = study_params(35.0, 30.0);
    p.mean_g2 = 1e-12;
    const auto est = outage_mc(p, scheme_spec::full(), 20000, {8, 0}, 2);
    CHECK(est.p_out >= 0.999);
}

TEST_CASE("outage decreases with SNR for every scheme") {
    for (const scheme_spec& s : {scheme_spec::full(), scheme_spec::partial(),
                                 scheme_spec::fixed_at(0.5)}) {
        const auto low = outage_mc(study_params(25.0, 30.0), s, 50000, {9, 0}, 2);
        const auto high = outage_mc(study_params(40.0, 30.0), s, 50000, {9, 0}, 2);
        CHECK(high.p_out < low.p_out);
    }
}

TEST_CASE("paired comparison: adaptive schemes dominate under shared draws") {
    // The full-CSI pick maximizes the very SINR that defines outage, so on
    // every shared draw it cannot lose to any other scheme; with common
    // random numbers the estimates inherit the ordering deterministically.
    const system_params p = study_params(35.0, 30.0);
    const std::vector<scheme_spec> schemes{
        scheme_spec::full(), scheme_spec::partial(), scheme_spec::fixed_at(0.3),
        scheme_spec::fixed_at(0.5), scheme_spec::fixed_at(0.7)};
    const auto est = outage_mc_multi(p, schemes, 200000, {10, 0}, 2);
    for (std::size_t k = 1; k < est.size(); ++k)
        CHECK(est[0].p_out <= est[k].p_out);
}

TEST_CASE("per-trial outcomes follow the decision contract") {
    const system_params p = study_params(35.0, 30.0);
    // Strong links, tiny loop: full CSI serves the block.
    CHECK_FALSE(trial_outage(p, {2.0, 2.0, 1e-6}, scheme_spec::full()));
    // Dead second hop: outage under any scheme.
    CHECK(trial_outage(p, {2.0, 1e-14, 1e-6}, scheme_spec::full()));
    CHECK(trial_outage(p, {2.0, 1e-14, 1e-6}, scheme_spec::fixed_at(0.5)));
}

TEST_CASE("conditional outage matches Monte Carlo over the second-hop fade") {
    const system_params p = study_params(35.0, 30.0);
    std::mt19937_64 rng(515);
    auto uni = [&](double lo, double hi) {
        return std::uniform_real_distribution<double>(lo, hi)(rng);
    };
    int bad = 0;
    const int cases = 40;
    const int draws = 200000;
    for (int i = 0; i < cases; ++i) {
        const double h2 = -std::log(uni(1e-12, 1.0));
        const double f2 = -p.mean_f2 * std::log(uni(1e-12, 1.0));
        const double rho = uni(0.05, 0.95);
        const double analytic = conditional_outage_analytic(p, h2, f2, rho);
        REQUIRE(analytic >= 0.0);
        REQUIRE(analytic <= 1.0);
        int k = 0;
        for (int t = 0; t < draws; ++t) {
            const channel_realization ch{h2, -std::log(uni(1e-12, 1.0)), f2};
            if (esinr_max_gain(p, ch, rho) < p.sinr_threshold) ++k;
        }
        const double mc = static_cast<double>(k) / draws;
        const double sigma =
            std::sqrt(std::max(analytic * (1.0 - analytic), 1e-12) / draws);
        if (std::abs(mc - analytic) > 4.0 * sigma + 3e-4) ++bad;
    }
    CHECK(bad == 0);
}

TEST_CASE("conditional outage edge cases") {
    const system_params p = study_params(35.0, 30.0);
    CHECK_THROWS_AS(conditional_outage_analytic(p, 1.0, 0.1, 0.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(conditional_outage_analytic(p, 1.0, 0.1, 1.0),
                    std::invalid_argument);
    // An unserviceable loop (eta*rho*f2 > 1) is certain outage.
    CHECK(conditional_outage_analytic(p, 1.0, 10.0 / p.eh_efficiency, 0.5) ==
          1.0);
    // A vanishing first hop is certain outage.
    CHECK(conditional_outage_analytic(p, 0.0, 0.01, 0.5) == 1.0);
}

TEST_CASE("conditional outage is monotone in the first-hop gain") {
    const system_params p = study_params(35.0, 30.0);
    const double f2 = p.mean_f2;
    double prev = 1.1;
    for (double h2 : {0.05, 0.2, 0.8, 3.2}) {
        const double v = conditional_outage_analytic(p, h2, f2, 0.5);
        CHECK(v <= prev);
        prev = v;
    }
}

TEST_CASE("exact binomial interval: closed-form edges and a known midpoint") {
    // k = 0: lower 0, upper 1 - (alpha/2)^(1/n); k = n mirrors it.
    const auto [lo0, hi0] = clopper_pearson(0, 50, 0.95);
    CHECK(lo0 == 0.0);
    CHECK(hi0 == doctest::Approx(1.0 - std::pow(0.025, 1.0 / 50.0)).epsilon(1e-9));
    const auto [lon, hin] = clopper_pearson(50, 50, 0.95);
    CHECK(hin == 1.0);
    CHECK(lon == doctest::Approx(std::pow(0.025, 1.0 / 50.0)).epsilon(1e-9));
    // Textbook value for 5 successes in 10 trials at 95%.
    const auto [lo, hi] = clopper_pearson(5, 10, 0.95);
    CHECK(lo == doctest::Approx(0.1870860).epsilon(2e-4));
    CHECK(hi == doctest::Approx(0.8129140).epsilon(2e-4));
    CHECK(lo < 0.5);
    CHECK(hi > 0.5);
}

TEST_CASE("disjoint streams give statistically consistent estimates") {
    const system_params p = study_params(35.0, 30.0);
    const scheme_spec s = scheme_spec::fixed_at(0.5);
    const std::uint64_t n = 150000;
    const auto a = outage_mc(p, s, n, {4242, 0}, 2);
    const auto b = outage_mc(p, s, n, {4242, 1000}, 2);
    const double pooled = 0.5 * (a.p_out + b.p_out);
    const double sigma = std::sqrt(2.0 * pooled * (1.0 - pooled) / n);
    CHECK(std::abs(a.p_out - b.p_out) <= 4.0 * sigma + 1e-4);
}

TEST_CASE("invalid Monte Carlo requests throw") {
    const system_params p = study_params(35.0, 30.0);
    CHECK_THROWS_AS(outage_mc(p, scheme_spec::fixed_at(0.5), 0, {1, 0}, 1),
                    std::invalid_argument);
    CHECK_THROWS_AS(outage_mc_multi(p, {}, 100, {1, 0}, 1),
                    std::invalid_argument);
    system_params bad = p;
    bad.noise_power = -1.0;
    CHECK_THROWS_AS(outage_mc(bad, scheme_spec::fixed_at(0.5), 100, {1, 0}, 1),
                    invalid_params);
}
