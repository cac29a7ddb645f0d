#include "oscar/config.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "oscar/errors.hpp"

namespace oscar {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0;
    std::size_t b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

[[noreturn]] void fail(const std::string& path, int line, const std::string& what) {
    std::ostringstream msg;
    msg << path << ":" << line << ": " << what;
    throw ConfigError(msg.str());
}

double to_double(const std::string& path, int line, const std::string& key,
                 const std::string& value) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        fail(path, line, "value for '" + key + "' is not a number: '" + value + "'");
    }
}

long long to_int(const std::string& path, int line, const std::string& key,
                 const std::string& value) {
    try {
        std::size_t pos = 0;
        const long long v = std::stoll(value, &pos);
        if (pos != value.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        fail(path, line, "value for '" + key + "' is not an integer: '" + value + "'");
    }
}

std::uint64_t to_uint64(const std::string& path, int line, const std::string& key,
                        const std::string& value) {
    try {
        std::size_t pos = 0;
        const unsigned long long v = std::stoull(value, &pos);
        if (pos != value.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        fail(path, line, "value for '" + key + "' is not an unsigned integer: '" + value + "'");
    }
}

} // namespace

void apply_config_file(RunConfig& cfg, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);

    std::string section;
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        std::string s = trim(raw);
        if (const auto cut = s.find_first_of("#;"); cut != std::string::npos)
            s = trim(s.substr(0, cut));
        if (s.empty()) continue;
        if (s.front() == '[') {
            if (s.back() != ']') fail(path, line, "unterminated section header");
            section = trim(s.substr(1, s.size() - 2));
            if (section != "physical" && section != "model" && section != "noise" &&
                section != "protocol" && section != "numerics")
                fail(path, line, "unknown section [" + section + "]");
            continue;
        }
        const auto eq = s.find('=');
        if (eq == std::string::npos) fail(path, line, "expected 'key = value': '" + s + "'");
        const std::string key = trim(s.substr(0, eq));
        const std::string value = trim(s.substr(eq + 1));
        if (key.empty() || value.empty()) fail(path, line, "empty key or value");
        if (section.empty()) fail(path, line, "key '" + key + "' outside any section");

        auto num = [&] { return to_double(path, line, key, value); };

        if (section == "physical") {
            if (key == "f_c") cfg.physical.f_c = num();
            else if (key == "k_c") cfg.physical.k_c = num();
            else if (key == "B1") cfg.physical.B1 = num();
            else if (key == "G") cfg.physical.G = num();
            else if (key == "X_m") cfg.physical.X_m = num();
            else if (key == "T") cfg.physical.T_K = num();
            else if (key == "gamma") cfg.physical.gamma = num();
            else if (key == "hbar") cfg.physical.hbar = num();
            else if (key == "k_B") cfg.physical.k_B = num();
            else fail(path, line, "unknown key '" + key + "' in section [physical]");
        } else if (section == "model") {
            if (key == "eps") cfg.eps = num();
            else if (key == "eta") cfg.eta = num();
            else if (key == "x0") cfg.x0 = num();
            else if (key == "p0") cfg.p0 = num();
            else if (key == "spin") cfg.spin = num();
            else fail(path, line, "unknown key '" + key + "' in section [model]");
        } else if (section == "noise") {
            if (key == "delta0") cfg.delta0 = num();
            else fail(path, line, "unknown key '" + key + "' in section [noise]");
        } else if (section == "protocol") {
            if (key == "tau_p") cfg.tau_p = num();
            else if (key == "tau_coll") cfg.tau_coll = num();
            else if (key == "pulse_duration") cfg.pulse_duration = num();
            else if (key == "cycles") cfg.cycles = static_cast<int>(to_int(path, line, key, value));
            else if (key == "collapse_mode") {
                if (value != "none" && value != "fixed_interval")
                    fail(path, line, "collapse_mode must be 'none' or 'fixed_interval'");
                cfg.collapse_mode = value;
            } else if (key == "initial_sense") {
                if (value != "aligned" && value != "anti_aligned")
                    fail(path, line, "initial_sense must be 'aligned' or 'anti_aligned'");
                cfg.initial_sense = value;
            } else {
                fail(path, line, "unknown key '" + key + "' in section [protocol]");
            }
        } else if (section == "numerics") {
            if (key == "n_osc") cfg.n_osc = static_cast<int>(to_int(path, line, key, value));
            else if (key == "sample_dtau") cfg.sample_dtau = num();
            else if (key == "half_periods")
                cfg.half_periods = static_cast<int>(to_int(path, line, key, value));
            else if (key == "seed") cfg.seed = to_uint64(path, line, key, value);
            else fail(path, line, "unknown key '" + key + "' in section [numerics]");
        }
    }
}

namespace {

SpinSense sense_or(const std::string& name, SpinSense fallback) {
    if (name.empty()) return fallback;
    if (name == "aligned") return SpinSense::aligned;
    if (name == "anti_aligned") return SpinSense::anti_aligned;
    throw ConfigError("initial_sense must be 'aligned' or 'anti_aligned', got '" + name + "'");
}

} // namespace

OscarSettings oscar_settings(const RunConfig& cfg) {
    OscarSettings s;
    s.eps = cfg.eps;
    s.eta = cfg.eta;
    s.x0 = cfg.x0;
    s.p0 = cfg.p0;
    s.delta0 = cfg.delta0;
    s.seed = cfg.seed;
    s.n_osc = cfg.n_osc;
    s.sample_dtau = cfg.sample_dtau;
    s.half_periods = cfg.half_periods;
    s.initial_sense = sense_or(cfg.initial_sense, SpinSense::anti_aligned);
    return s;
}

InterruptedSettings interrupted_settings(const RunConfig& cfg) {
    InterruptedSettings s;
    s.base = oscar_settings(cfg);
    s.base.initial_sense = sense_or(cfg.initial_sense, SpinSense::aligned);
    s.pulses.period = cfg.tau_p;
    s.pulses.duration = cfg.pulse_duration;
    s.pulses.count = cfg.cycles;
    if (cfg.collapse_mode == "none") {
        s.policy.mode = CollapseMode::none;
    } else if (cfg.collapse_mode == "fixed_interval") {
        s.policy.mode = CollapseMode::fixed_interval;
        s.policy.tau_coll = cfg.tau_coll;
    } else {
        throw ConfigError("collapse_mode must be 'none' or 'fixed_interval', got '" +
                          cfg.collapse_mode + "'");
    }
    return s;
}

} // namespace oscar
