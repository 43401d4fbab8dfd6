#ifndef DRESSEDW_CONFIG_HPP
#define DRESSEDW_CONFIG_HPP

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>

#include "experiments.hpp"

namespace dressedw {

/// Everything a CLI run needs. Defaults give the headline configuration:
/// gaussian-fit pulses, g = 30/T, A = 0.5, closed system, 2000 steps.
struct RunConfig {
    std::string command = "simulate";
    PulseFlavor flavor = PulseFlavor::gaussian_fit;
    ChannelMap channel_map = ChannelMap::matched;
    double g = 30.0;
    double schedule_amplitude = 0.5;
    double omega0 = 50.0;
    double kappa = 0.0;
    double gamma = 0.0;
    double gamma_phi = 0.0;
    Variation variation;
    DurationMode duration_mode = DurationMode::cutoff;
    AmplitudeMode amplitude_mode = AmplitudeMode::power;
    int n_steps = 2000;
    std::string output_dir = "results";
    bool write_csv = true;
    bool write_json = true;

    Scenario scenario() const
    {
        Scenario s;
        s.flavor = flavor;
        s.channel_map = channel_map;
        s.g = g;
        s.schedule_amplitude = schedule_amplitude;
        s.omega0 = omega0;
        s.noise = {kappa, gamma, gamma_phi};
        s.variation = variation;
        s.duration_mode = duration_mode;
        s.amplitude_mode = amplitude_mode;
        s.n_steps = n_steps;
        return s;
    }

    bool operator==(const RunConfig &o) const
    {
        return command == o.command && flavor == o.flavor && channel_map == o.channel_map && g == o.g &&
               schedule_amplitude == o.schedule_amplitude && omega0 == o.omega0 && kappa == o.kappa &&
               gamma == o.gamma && gamma_phi == o.gamma_phi && variation.dT == o.variation.dT &&
               variation.dOmega == o.variation.dOmega && variation.dg == o.variation.dg &&
               duration_mode == o.duration_mode && amplitude_mode == o.amplitude_mode &&
               n_steps == o.n_steps && output_dir == o.output_dir && write_csv == o.write_csv &&
               write_json == o.write_json;
    }
};

namespace detail {

inline std::string trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

inline double parse_number(const std::string &key, const std::string &v)
{
    char *end = nullptr;
    const double x = std::strtod(v.c_str(), &end);
    if (v.empty() || end != v.c_str() + v.size() || !std::isfinite(x)) {
        throw ValidationError("config key '" + key + "': '" + v + "' is not a finite number");
    }
    return x;
}

inline int parse_int(const std::string &key, const std::string &v)
{
    const double x = parse_number(key, v);
    if (x != std::floor(x) || std::abs(x) > 1e9) {
        throw ValidationError("config key '" + key + "': '" + v + "' is not an integer");
    }
    return static_cast<int>(x);
}

inline bool parse_bool(const std::string &key, const std::string &v)
{
    if (v == "true") {
        return true;
    }
    if (v == "false") {
        return false;
    }
    throw ValidationError("config key '" + key + "': expected true or false, got '" + v + "'");
}

} // namespace detail

/// Sets one key. Unknown keys and malformed values raise ValidationError.
inline void set_config_value(RunConfig &c, const std::string &key, const std::string &value)
{
    using namespace detail;
    if (key == "command") {
        c.command = value;
    } else if (key == "flavor") {
        c.flavor = parse_flavor(value);
    } else if (key == "channel_map") {
        c.channel_map = parse_channel_map(value);
    } else if (key == "g") {
        c.g = parse_number(key, value);
    } else if (key == "schedule_amplitude") {
        c.schedule_amplitude = parse_number(key, value);
    } else if (key == "omega0") {
        c.omega0 = parse_number(key, value);
    } else if (key == "kappa") {
        c.kappa = parse_number(key, value);
    } else if (key == "gamma") {
        c.gamma = parse_number(key, value);
    } else if (key == "gamma_phi") {
        c.gamma_phi = parse_number(key, value);
    } else if (key == "dT_over_T") {
        c.variation.dT = parse_number(key, value);
    } else if (key == "dOmega_over_Omega") {
        c.variation.dOmega = parse_number(key, value);
    } else if (key == "dg_over_g") {
        c.variation.dg = parse_number(key, value);
    } else if (key == "duration_mode") {
        c.duration_mode = parse_duration_mode(value);
    } else if (key == "amplitude_mode") {
        c.amplitude_mode = parse_amplitude_mode(value);
    } else if (key == "n_steps") {
        c.n_steps = parse_int(key, value);
    } else if (key == "output_dir") {
        c.output_dir = value;
    } else if (key == "write_csv") {
        c.write_csv = parse_bool(key, value);
    } else if (key == "write_json") {
        c.write_json = parse_bool(key, value);
    } else {
        throw ValidationError("unknown config key '" + key + "'");
    }
}

/// One "key = value" per line; '#' starts a comment line. Values are taken
/// verbatim after trimming, so no quoting is needed.
inline RunConfig parse_config(std::string_view text)
{
    RunConfig c;
    std::istringstream in{std::string(text)};
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = detail::trim(line);
        if (t.empty() || t[0] == '#') {
            continue;
        }
        const auto eq = t.find('=');
        if (eq == std::string::npos) {
            throw ValidationError("config line " + std::to_string(lineno) + ": expected 'key = value'");
        }
        set_config_value(c, detail::trim(t.substr(0, eq)), detail::trim(t.substr(eq + 1)));
    }
    return c;
}

inline std::string serialize_config(const RunConfig &c)
{
    for (const std::string *v : {&c.output_dir, &c.command}) {
        require(v->find('\n') == std::string::npos && detail::trim(*v) == *v,
                "config strings cannot contain newlines or surrounding whitespace");
    }
    const auto f = format_double;
    std::ostringstream os;
    os << "command = " << c.command << "\n"
       << "flavor = " << to_string(c.flavor) << "\n"
       << "channel_map = " << to_string(c.channel_map) << "\n"
       << "g = " << f(c.g) << "\n"
       << "schedule_amplitude = " << f(c.schedule_amplitude) << "\n"
       << "omega0 = " << f(c.omega0) << "\n"
       << "kappa = " << f(c.kappa) << "\n"
       << "gamma = " << f(c.gamma) << "\n"
       << "gamma_phi = " << f(c.gamma_phi) << "\n"
       << "dT_over_T = " << f(c.variation.dT) << "\n"
       << "dOmega_over_Omega = " << f(c.variation.dOmega) << "\n"
       << "dg_over_g = " << f(c.variation.dg) << "\n"
       << "duration_mode = " << to_string(c.duration_mode) << "\n"
       << "amplitude_mode = " << to_string(c.amplitude_mode) << "\n"
       << "n_steps = " << c.n_steps << "\n"
       << "output_dir = " << c.output_dir << "\n"
       << "write_csv = " << (c.write_csv ? "true" : "false") << "\n"
       << "write_json = " << (c.write_json ? "true" : "false") << "\n";
    return os.str();
}

inline RunConfig load_config(const std::string &path)
{
    std::ifstream f(path);
    if (!f) {
        throw ValidationError("cannot read config file '" + path + "'");
    }
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse_config(ss.str());
}

} // namespace dressedw

#endif // DRESSEDW_CONFIG_HPP
