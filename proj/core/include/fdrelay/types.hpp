#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace fdrelay {

// Thrown when a parameter set violates a documented invariant.
class invalid_params : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Static system description: link budget, energy harvesting circuit and
// fading statistics for a two-hop line network with a full-duplex
// amplify-and-forward relay that powers itself by RF harvesting.
struct system_params {
    double source_power = 1.0;    // P_s [W]
    double noise_power = 1.0;     // sigma^2 [W], same at relay and destination
    double d1 = 1.0;              // source-relay distance [m]
    double d2 = 1.0;              // relay-destination distance [m]
    double path_loss_exp = 3.0;   // m >= 2
    double eh_efficiency = 0.4;   // eta in (0,1), RF-to-stored-energy conversion
    double rate = 3.0;            // target rate R [bit/s/Hz]
    double sinr_threshold = 7.0;  // gamma0 = 2^R - 1
    double mean_h2 = 1.0;         // E|h|^2 of the source-relay channel
    double mean_g2 = 1.0;         // E|g|^2 of the relay-destination channel
    double mean_f2 = 1.0;         // E|f|^2 of the residual loop channel
    double block_duration = 1.0;  // T [s]; cancels out of every power ratio

    // Keeps sinr_threshold = 2^rate - 1 exact.
    void set_rate(double r) {
        rate = r;
        sinr_threshold = std::exp2(r) - 1.0;
    }

    double d1_path_loss() const { return std::pow(d1, path_loss_exp); }
    double d2_path_loss() const { return std::pow(d2, path_loss_exp); }

    // Throws invalid_params naming the violated constraint.
    void validate() const {
        auto require = [](bool ok, const char* what) {
            if (!ok) throw invalid_params(what);
        };
        require(source_power > 0.0, "source_power must be > 0");
        require(noise_power > 0.0, "noise_power must be > 0");
        require(d1 > 0.0, "d1 must be > 0");
        require(d2 > 0.0, "d2 must be > 0");
        require(path_loss_exp >= 2.0, "path_loss_exp must be >= 2");
        require(eh_efficiency > 0.0 && eh_efficiency < 1.0,
                "eh_efficiency must lie in (0,1)");
        require(sinr_threshold >= 0.0, "sinr_threshold must be >= 0");
        require(mean_h2 > 0.0, "mean_h2 must be > 0");
        require(mean_g2 > 0.0, "mean_g2 must be > 0");
        require(mean_f2 > 0.0, "mean_f2 must be > 0");
        require(block_duration > 0.0, "block_duration must be > 0");
    }
};

// One fading block: squared channel magnitudes (Rayleigh fading makes these
// exponentially distributed).
struct channel_realization {
    double h2 = 0.0;  // |h|^2, source-relay
    double g2 = 0.0;  // |g|^2, relay-destination
    double f2 = 0.0;  // |f|^2, residual loop (self-interference)

    void validate() const {
        if (!(h2 >= 0.0) || !(g2 >= 0.0) || !(f2 >= 0.0))
            throw invalid_params("channel power gains must be >= 0");
    }
};

// Per-block link SNRs. gamma_rd is the cascaded quantity
// P_s|h|^2|g|^2/(d1^m d2^m sigma^2): it carries both hops.
struct link_snrs {
    double gamma_sr = 0.0;
    double gamma_rd = 0.0;
};

// Outcome of a power-splitting scheme on one block.
//   rho      - fraction of received power routed to the energy harvester
//   beta     - relay amplification gain
//   feasible - the max-power gain exists and the closed loop is stable
//              (beta*(1-rho)*|f|^2 < 1)
//   certain_outage - scheme determined from its available CSI that no rho
//              can reach the SINR target; rho=1 harvests as much as possible
struct relay_decision {
    double rho = 0.0;
    double beta = 0.0;
    bool feasible = false;
    bool certain_outage = false;
};

// Destination received-power decomposition and the resulting end-to-end SINR.
struct sinr_breakdown {
    double desired_power = 0.0;    // first source echo through the relay
    double loop_power = 0.0;       // all later echoes circulating the loop
    double noise_power_out = 0.0;  // destination noise + first-pass relay noise
    double esinr = 0.0;            // desired / (loop + noise)
};

}  // namespace fdrelay
