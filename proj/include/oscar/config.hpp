#pragma once

#include <cstdint>
#include <string>

#include "oscar/params.hpp"
#include "oscar/protocols.hpp"

namespace oscar {

/// Resolved run configuration. Defaults are the standard simulation
/// values (eps = 10, eta = 0.3, x0 = 13, p0 = 0, n_osc = 400) and the
/// experimental set for the [physical] group. Precedence when resolving:
/// command-line flag > config file > default.
struct RunConfig {
    std::string subcommand;

    PhysicalParams physical;

    // [model]
    double eps = 10.0;
    double eta = 0.3;
    double x0 = 13.0;
    double p0 = 0.0;
    double spin = 0.5;

    // [noise]
    double delta0 = 0.0;

    // [protocol]
    double tau_p = 8.0 * 3.141592653589793;
    double tau_coll = 2.0 * 3.141592653589793;
    double pulse_duration = 0.5 * 3.141592653589793;
    int cycles = 6;
    std::string collapse_mode = "fixed_interval";  // none | fixed_interval
    std::string initial_sense;  // aligned | anti_aligned; empty = per-subcommand default

    // [numerics]
    int n_osc = 400;
    double sample_dtau = 0.015707963267948967;  // pi/200
    int half_periods = 20;
    std::uint64_t seed = 1;

    std::string out_dir = "oscar-out";
    std::string dump_operator = "x";
};

/// Merge a flat-section key = value config file into `cfg`.
/// Sections: [physical], [model], [noise], [protocol], [numerics].
/// Unknown keys or malformed values raise ConfigError with file:line.
void apply_config_file(RunConfig& cfg, const std::string& path);

/// Settings for the plain OSCAR driver (anti-aligned spin by default).
OscarSettings oscar_settings(const RunConfig& cfg);

/// Settings for the interrupted-OSCAR driver (aligned spin by default).
InterruptedSettings interrupted_settings(const RunConfig& cfg);

} // namespace oscar
