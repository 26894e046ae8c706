#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fdrelay/channel_mc.hpp"
#include "fdrelay/types.hpp"

namespace fdrelay {

// Thrown on invalid configuration input; the message names the violated
// constraint. The CLI maps it to exit code 1.
class config_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class sweep_kind { inr, snr, position };

std::string sweep_name(sweep_kind k);
sweep_kind parse_sweep(const std::string& name);  // throws config_error

// Batch experiment description. Sweeps:
//   inr      - x = loop-interference-to-noise ratio [dB], SNR fixed
//   snr      - x = source SNR [dB], INR fixed
//   position - x = d1 [m] with d1 + d2 = 2 held, SNR and INR fixed
// The dB quantities map onto physical parameters as P_s = 1,
// sigma^2 = 10^(-SNR/10), mean_f2 = 10^(INR/10) * sigma^2, so that
// SNR = P_s/sigma^2 and INR = mean_f2/sigma^2 hold exactly.
struct experiment_config {
    sweep_kind sweep = sweep_kind::inr;
    double sweep_start = 0.0;
    double sweep_stop = 50.0;
    double sweep_step = 2.5;
    std::vector<double> sweep_points;  // derived from start/stop/step when empty

    double snr_db = 35.0;  // fixed SNR (ignored by snr sweeps)
    double inr_db = 30.0;  // fixed INR (ignored by inr sweeps)

    double rate = 3.0;
    double eta = 0.4;
    double path_loss_exp = 3.0;
    double lambda_h = 1.0;
    double lambda_g = 1.0;
    double d1 = 1.0;
    double d2 = 1.0;

    std::vector<scheme_spec> schemes;  // default: full, partial, fixed .3/.5/.7
    std::uint64_t trials = 1'000'000;
    rng_spec rng;
    int threads = 0;
    std::string output_path = "curves.csv";
};

// Defaults matching the three studies (sweep grid and fixed dB values).
experiment_config default_config(sweep_kind k);

// Flat key=value config file ('#' comments, blank lines ignored).
// Unknown keys and malformed values throw config_error.
experiment_config parse_config_file(const std::string& path);
void apply_key_value(experiment_config& cfg, const std::string& key,
                     const std::string& value);  // throws config_error

// Resolved sweep grid (explicit points, or start/stop/step expansion).
std::vector<double> sweep_grid(const experiment_config& cfg);

// Physical parameters at one sweep point. Throws config_error when the
// configuration violates an invariant (e.g. position sweep outside
// d1 in [0.1, 0.9]).
system_params params_at(const experiment_config& cfg, double sweep_value);

struct curve_point {
    double sweep_value = 0.0;
    std::string scheme;
    outage_estimate est;
};

struct curve_set {
    std::vector<curve_point> points;               // sorted by (scheme, sweep_value)
    std::map<std::string, std::string> metadata;   // run parameters, seed, version
};

// Runs every (sweep point x scheme) estimate; schemes share channel draws
// at each sweep point. Deterministic for a fixed rng_spec.
curve_set run_experiment(const experiment_config& cfg);

// CSV with '#'-prefixed "key=value" metadata header lines, then the column
// header "sweep_value,scheme,p_out,half_width_95,trials" and one row per
// estimate, sorted by (scheme, sweep_value).
void write_csv(const curve_set& curves, std::ostream& out);
void write_csv_file(const curve_set& curves, const std::string& path);
curve_set read_csv_file(const std::string& path);  // throws config_error

// x-value where a curve crosses the given outage level, by piecewise-linear
// interpolation in (x, log10 p). Points must be sorted by x. Empty when the
// level is never crossed. Zero-p points are skipped (not representable on
// the log scale).
std::optional<double> crossing_at_level(const std::vector<curve_point>& curve,
                                        double level);

// Gain table between the first scheme and every other scheme at the given
// outage levels: positive gain = the first scheme sustains that much more
// sweep-dB (inr sweep) or needs that much less (snr sweep). For position
// sweeps reports each scheme's worst point instead. Writes a small
// plain-text table.
void emit_report(const curve_set& curves, std::ostream& out,
                 const std::vector<double>& levels = {1e-1, 1e-2});

}  // namespace fdrelay
