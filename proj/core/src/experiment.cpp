#include "fdrelay/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>

namespace fdrelay {

namespace {

constexpr const char* kVersion = "1.0.0";

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep)) out.push_back(cur);
    return out;
}

double parse_double(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw config_error("invalid numeric value for '" + key + "': " + value);
    }
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const unsigned long long v = std::stoull(value, &pos);
        if (pos != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw config_error("invalid integer value for '" + key + "': " + value);
    }
}

scheme_spec parse_scheme(const std::string& raw) {
    const std::string s = trim(raw);
    if (s == "full" || s == "full_csi") return scheme_spec::full();
    if (s == "partial" || s == "partial_csi") return scheme_spec::partial();
    for (const char* prefix : {"fixed:", "fixed_"}) {
        if (s.rfind(prefix, 0) == 0) {
            const double rho = parse_double("schemes", s.substr(6));
            if (!(rho > 0.0 && rho < 1.0))
                throw config_error("fixed scheme rho must lie in (0,1): " + s);
            return scheme_spec::fixed_at(rho);
        }
    }
    throw config_error("unknown scheme '" + s +
                       "' (expected full, partial, or fixed:<rho>)");
}

std::vector<scheme_spec> default_schemes() {
    return {scheme_spec::full(), scheme_spec::partial(),
            scheme_spec::fixed_at(0.3), scheme_spec::fixed_at(0.5),
            scheme_spec::fixed_at(0.7)};
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

}  // namespace

std::string sweep_name(sweep_kind k) {
    switch (k) {
        case sweep_kind::inr: return "inr";
        case sweep_kind::snr: return "snr";
        case sweep_kind::position: return "position";
    }
    return "inr";
}

sweep_kind parse_sweep(const std::string& name) {
    const std::string n = trim(name);
    if (n == "inr" || n == "inr_sweep") return sweep_kind::inr;
    if (n == "snr" || n == "snr_sweep") return sweep_kind::snr;
    if (n == "position" || n == "position_sweep") return sweep_kind::position;
    throw config_error("unknown sweep '" + name +
                       "' (expected inr, snr, or position)");
}

experiment_config default_config(sweep_kind k) {
    experiment_config cfg;
    cfg.sweep = k;
    cfg.schemes = default_schemes();
    switch (k) {
        case sweep_kind::inr:
            cfg.sweep_start = 0.0;
            cfg.sweep_stop = 50.0;
            cfg.sweep_step = 2.5;
            cfg.snr_db = 35.0;
            break;
        case sweep_kind::snr:
            cfg.sweep_start = 20.0;
            cfg.sweep_stop = 50.0;
            cfg.sweep_step = 2.5;
            cfg.inr_db = 40.0;
            break;
        case sweep_kind::position:
            cfg.sweep_start = 0.1;
            cfg.sweep_stop = 0.9;
            cfg.sweep_step = 0.1;
            cfg.snr_db = 45.0;
            cfg.inr_db = 35.0;
            break;
    }
    return cfg;
}

void apply_key_value(experiment_config& cfg, const std::string& rawkey,
                     const std::string& rawvalue) {
    const std::string key = trim(rawkey);
    const std::string value = trim(rawvalue);
    if (key == "sweep") {
        const sweep_kind k = parse_sweep(value);
        const experiment_config base = default_config(k);
        cfg.sweep = k;
        cfg.sweep_start = base.sweep_start;
        cfg.sweep_stop = base.sweep_stop;
        cfg.sweep_step = base.sweep_step;
        cfg.snr_db = base.snr_db;
        cfg.inr_db = base.inr_db;
    } else if (key == "sweep_start") cfg.sweep_start = parse_double(key, value);
    else if (key == "sweep_stop") cfg.sweep_stop = parse_double(key, value);
    else if (key == "sweep_step") cfg.sweep_step = parse_double(key, value);
    else if (key == "sweep_points") {
        cfg.sweep_points.clear();
        for (const auto& tok : split(value, ','))
            cfg.sweep_points.push_back(parse_double(key, trim(tok)));
    } else if (key == "snr_db") cfg.snr_db = parse_double(key, value);
    else if (key == "inr_db") cfg.inr_db = parse_double(key, value);
    else if (key == "rate") cfg.rate = parse_double(key, value);
    else if (key == "eta") cfg.eta = parse_double(key, value);
    else if (key == "path_loss_exp") cfg.path_loss_exp = parse_double(key, value);
    else if (key == "lambda_h") cfg.lambda_h = parse_double(key, value);
    else if (key == "lambda_g") cfg.lambda_g = parse_double(key, value);
    else if (key == "d1") cfg.d1 = parse_double(key, value);
    else if (key == "d2") cfg.d2 = parse_double(key, value);
    else if (key == "schemes") {
        cfg.schemes.clear();
        for (const auto& tok : split(value, ','))
            cfg.schemes.push_back(parse_scheme(tok));
    } else if (key == "trials") cfg.trials = parse_u64(key, value);
    else if (key == "seed") cfg.rng.seed = parse_u64(key, value);
    else if (key == "stream_id")
        cfg.rng.stream_id = static_cast<std::uint32_t>(parse_u64(key, value));
    else if (key == "threads")
        cfg.threads = static_cast<int>(parse_u64(key, value));
    else if (key == "output") cfg.output_path = value;
    else throw config_error("unknown configuration key '" + key + "'");
}

experiment_config parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open config file: " + path);
    experiment_config cfg = default_config(sweep_kind::inr);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw config_error("line " + std::to_string(lineno) +
                               ": expected key=value, got: " + t);
        apply_key_value(cfg, t.substr(0, eq), t.substr(eq + 1));
    }
    return cfg;
}

std::vector<double> sweep_grid(const experiment_config& cfg) {
    if (!cfg.sweep_points.empty()) return cfg.sweep_points;
    if (!(cfg.sweep_step > 0.0))
        throw config_error("sweep_step must be > 0");
    if (cfg.sweep_stop < cfg.sweep_start)
        throw config_error("sweep_stop must be >= sweep_start");
    std::vector<double> grid;
    for (double x = cfg.sweep_start; x <= cfg.sweep_stop + 1e-9 * cfg.sweep_step;
         x += cfg.sweep_step)
        grid.push_back(x);
    return grid;
}

system_params params_at(const experiment_config& cfg, double sweep_value) {
    double snr_db = cfg.snr_db;
    double inr_db = cfg.inr_db;
    double d1 = cfg.d1;
    double d2 = cfg.d2;
    switch (cfg.sweep) {
        case sweep_kind::inr: inr_db = sweep_value; break;
        case sweep_kind::snr: snr_db = sweep_value; break;
        case sweep_kind::position:
            if (!(sweep_value >= 0.1 && sweep_value <= 0.9))
                throw config_error(
                    "position sweep requires d1 in [0.1, 0.9], got " +
                    format_double(sweep_value));
            d1 = sweep_value;
            d2 = 2.0 - sweep_value;  // relay moves along a fixed 2 m line
            break;
    }

    system_params p;
    p.set_rate(cfg.rate);
    p.eh_efficiency = cfg.eta;
    p.path_loss_exp = cfg.path_loss_exp;
    p.mean_h2 = cfg.lambda_h;
    p.mean_g2 = cfg.lambda_g;
    p.d1 = d1;
    p.d2 = d2;
    // dB quantities anchored at unit source power: SNR = P_s/sigma^2 and
    // INR = mean_f2/sigma^2 hold exactly.
    p.source_power = 1.0;
    p.noise_power = std::pow(10.0, -snr_db / 10.0);
    p.mean_f2 = std::pow(10.0, inr_db / 10.0) * p.noise_power;
    try {
        p.validate();
    } catch (const invalid_params& e) {
        throw config_error(std::string("invalid configuration: ") + e.what());
    }
    return p;
}

curve_set run_experiment(const experiment_config& cfg) {
    experiment_config c = cfg;
    if (c.schemes.empty()) c.schemes = default_schemes();
    if (c.trials == 0) throw config_error("trials must be >= 1");
    const std::vector<double> grid = sweep_grid(c);
    if (grid.empty()) throw config_error("sweep grid is empty");

    curve_set out;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        system_params p = params_at(c, grid[i]);
        rng_spec point_rng = c.rng;
        point_rng.stream_id += static_cast<std::uint32_t>(i);
        const auto ests =
            outage_mc_multi(p, c.schemes, c.trials, point_rng, c.threads);
        for (std::size_t s = 0; s < c.schemes.size(); ++s)
            out.points.push_back({grid[i], scheme_name(c.schemes[s]), ests[s]});
    }
    std::sort(out.points.begin(), out.points.end(),
              [](const curve_point& a, const curve_point& b) {
                  if (a.scheme != b.scheme) return a.scheme < b.scheme;
                  return a.sweep_value < b.sweep_value;
              });

    out.metadata["version"] = kVersion;
    out.metadata["sweep"] = sweep_name(c.sweep);
    out.metadata["snr_db"] = format_double(c.snr_db);
    out.metadata["inr_db"] = format_double(c.inr_db);
    out.metadata["rate"] = format_double(c.rate);
    out.metadata["eta"] = format_double(c.eta);
    out.metadata["path_loss_exp"] = format_double(c.path_loss_exp);
    out.metadata["lambda_h"] = format_double(c.lambda_h);
    out.metadata["lambda_g"] = format_double(c.lambda_g);
    out.metadata["d1"] = format_double(c.d1);
    out.metadata["d2"] = format_double(c.d2);
    out.metadata["trials"] = std::to_string(c.trials);
    out.metadata["seed"] = std::to_string(c.rng.seed);
    out.metadata["stream_id"] = std::to_string(c.rng.stream_id);
    {
        std::string names;
        for (const auto& s : c.schemes) {
            if (!names.empty()) names += ",";
            names += scheme_name(s);
        }
        out.metadata["schemes"] = names;
    }
    return out;
}

void write_csv(const curve_set& curves, std::ostream& out) {
    for (const auto& [k, v] : curves.metadata) out << "# " << k << "=" << v << "\n";
    out << "sweep_value,scheme,p_out,half_width_95,trials\n";
    for (const auto& pt : curves.points) {
        out << format_double(pt.sweep_value) << "," << pt.scheme << ","
            << format_double(pt.est.p_out) << ","
            << format_double(pt.est.half_width_95) << "," << pt.est.trials
            << "\n";
    }
}

void write_csv_file(const curve_set& curves, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw config_error("cannot open output file: " + path);
    write_csv(curves, out);
}

curve_set read_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open CSV file: " + path);
    curve_set out;
    std::string line;
    int lineno = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty()) continue;
        if (t[0] == '#') {
            const std::string body = trim(t.substr(1));
            const auto eq = body.find('=');
            if (eq != std::string::npos)
                out.metadata[trim(body.substr(0, eq))] = trim(body.substr(eq + 1));
            continue;
        }
        if (!header_seen) {
            if (t.rfind("sweep_value,", 0) != 0)
                throw config_error("line " + std::to_string(lineno) +
                                   ": missing CSV header");
            header_seen = true;
            continue;
        }
        const auto cols = split(t, ',');
        if (cols.size() != 5)
            throw config_error("line " + std::to_string(lineno) +
                               ": expected 5 columns");
        curve_point pt;
        pt.sweep_value = parse_double("sweep_value", trim(cols[0]));
        pt.scheme = trim(cols[1]);
        pt.est.p_out = parse_double("p_out", trim(cols[2]));
        pt.est.half_width_95 = parse_double("half_width_95", trim(cols[3]));
        pt.est.trials = parse_u64("trials", trim(cols[4]));
        out.points.push_back(pt);
    }
    if (!header_seen) throw config_error("CSV file has no header: " + path);
    return out;
}

std::optional<double> crossing_at_level(const std::vector<curve_point>& curve,
                                        double level) {
    if (!(level > 0.0)) return std::nullopt;
    const double target = std::log10(level);
    std::optional<double> prev_x, prev_y;
    for (const auto& pt : curve) {
        if (!(pt.est.p_out > 0.0)) {
            prev_x.reset();
            prev_y.reset();
            continue;
        }
        const double y = std::log10(pt.est.p_out);
        if (prev_x) {
            const double y0 = *prev_y, y1 = y;
            if ((y0 - target) * (y1 - target) <= 0.0) {
                if (y0 == y1) return *prev_x;
                return *prev_x +
                       (target - y0) * (pt.sweep_value - *prev_x) / (y1 - y0);
            }
        }
        prev_x = pt.sweep_value;
        prev_y = y;
    }
    return std::nullopt;
}

void emit_report(const curve_set& curves, std::ostream& out,
                 const std::vector<double>& levels) {
    // Group by scheme; points arrive sorted by (scheme, sweep_value).
    std::map<std::string, std::vector<curve_point>> by_scheme;
    for (const auto& pt : curves.points) by_scheme[pt.scheme].push_back(pt);
    for (auto& [name, pts] : by_scheme)
        std::sort(pts.begin(), pts.end(),
                  [](const curve_point& a, const curve_point& b) {
                      return a.sweep_value < b.sweep_value;
                  });

    std::string sweep = "inr";
    if (auto it = curves.metadata.find("sweep"); it != curves.metadata.end())
        sweep = it->second;

    out << "sweep=" << sweep << "\n";

    if (sweep == "position") {
        // No crossings on a position sweep; the landmark is the worst
        // placement per scheme.
        for (const auto& [name, pts] : by_scheme) {
            const auto worst = std::max_element(
                pts.begin(), pts.end(), [](const auto& a, const auto& b) {
                    return a.est.p_out < b.est.p_out;
                });
            out << "worst_point " << name << ": d1=" << worst->sweep_value
                << " p_out=" << format_double(worst->est.p_out) << "\n";
        }
        return;
    }

    const std::string ref =
        by_scheme.count("full_csi") ? "full_csi" : by_scheme.begin()->first;
    out << "reference=" << ref << "\n";
    for (double level : levels) {
        const auto ref_cross = crossing_at_level(by_scheme.at(ref), level);
        for (const auto& [name, pts] : by_scheme) {
            if (name == ref) continue;
            const auto cross = crossing_at_level(pts, level);
            out << "level=" << format_double(level) << " " << ref << " vs "
                << name << ": ";
            if (!ref_cross || !cross) {
                out << "not crossed\n";
                continue;
            }
            // Positive = reference better: tolerates more dB on a rising
            // curve (loop interference), needs less on a falling one (SNR).
            const double gain = sweep == "snr" ? *cross - *ref_cross
                                               : *ref_cross - *cross;
            char buf[64];
            std::snprintf(buf, sizeof buf, "%+.2f dB", gain);
            out << buf << " (crossings " << format_double(*ref_cross) << " / "
                << format_double(*cross) << ")\n";
        }
    }
}

}  // namespace fdrelay
