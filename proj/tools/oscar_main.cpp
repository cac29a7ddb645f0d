// oscar — single-spin OSCAR MRFM quantum dynamics toolkit, command-line front end.

#include <filesystem>
#include <iostream>
#include <numbers>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "oscar/config.hpp"
#include "oscar/io.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kVersion = "0.1.0";

json config_echo(const oscar::RunConfig& cfg) {
    json j;
    j["physical"] = {{"f_c", cfg.physical.f_c}, {"k_c", cfg.physical.k_c},
                     {"B1", cfg.physical.B1},   {"G", cfg.physical.G},
                     {"X_m", cfg.physical.X_m}, {"T", cfg.physical.T_K},
                     {"gamma", cfg.physical.gamma}, {"hbar", cfg.physical.hbar},
                     {"k_B", cfg.physical.k_B}};
    j["model"] = {{"eps", cfg.eps}, {"eta", cfg.eta}, {"x0", cfg.x0},
                  {"p0", cfg.p0},   {"spin", cfg.spin}};
    j["noise"] = {{"delta0", cfg.delta0}};
    j["protocol"] = {{"tau_p", cfg.tau_p},
                     {"tau_coll", cfg.tau_coll},
                     {"pulse_duration", cfg.pulse_duration},
                     {"cycles", cfg.cycles},
                     {"collapse_mode", cfg.collapse_mode},
                     {"initial_sense", cfg.initial_sense}};
    j["numerics"] = {{"n_osc", cfg.n_osc},
                     {"sample_dtau", cfg.sample_dtau},
                     {"half_periods", cfg.half_periods},
                     {"seed", cfg.seed}};
    return j;
}

json health_json(const oscar::RunDiagnostics& d) {
    return {{"max_norm_error", d.max_norm_error},
            {"max_energy_drift", d.max_energy_drift},
            {"max_top_band_population", d.max_top_band},
            {"min_spin_norm", d.min_spin_norm},
            {"truncation_warning", d.truncation_warning}};
}

void write_manifest(const fs::path& out_dir, json manifest) {
    manifest["version"] = kVersion;
    oscar::write_text((out_dir / "manifest.json").string(), manifest.dump(2) + "\n");
}

int run_estimate(const oscar::RunConfig& cfg, const fs::path& out_dir, json& manifest) {
    const oscar::EstimateReport report = oscar::estimate_all(cfg.physical, cfg.spin);
    std::cout << format_estimate_table(report);
    oscar::write_estimate_csv((out_dir / "estimate.csv").string(), report);
    manifest["outputs"] = {"estimate.csv"};
    manifest["estimate"] = {{"delta_omega0", report.delta_omega0},
                            {"a_T", report.a_T},
                            {"dtheta1_sq", report.dtheta1_sq},
                            {"tau_coll_root", report.tau_coll_root}};
    return 0;
}

int run_simulate(const oscar::RunConfig& cfg, const fs::path& out_dir, json& manifest) {
    const oscar::OscarSettings settings = oscar::oscar_settings(cfg);
    const oscar::OscarResult result = oscar::run_oscar(settings);

    oscar::write_timeseries_csv((out_dir / "timeseries.csv").string(), result.run.samples);
    oscar::write_crossings_csv((out_dir / "crossings.csv").string(), result.crossings);
    oscar::JointState final_state = result.run.final_state;
    oscar::fix_global_phase(final_state);
    oscar::write_state_csv((out_dir / "final_state.csv").string(), final_state);

    std::cout << "crossings: " << result.crossings.crossings.size()
              << "  mean |shift|: " << oscar::format_full(result.mean_abs_shift)
              << "\nfit over half-periods: slope " << oscar::format_full(result.deviation_fit.slope)
              << "  intercept " << oscar::format_full(result.deviation_fit.intercept)
              << "  residual rms " << oscar::format_full(result.deviation_fit.residual_rms)
              << std::endl;

    manifest["outputs"] = {"timeseries.csv", "crossings.csv", "final_state.csv"};
    manifest["schedule_digest"] = oscar::schedule_digest(result.schedule);
    manifest["numerical_health"] = health_json(result.run.diagnostics);
    manifest["fit"] = {{"slope", result.deviation_fit.slope},
                       {"intercept", result.deviation_fit.intercept},
                       {"residual_rms", result.deviation_fit.residual_rms}};
    manifest["mean_abs_shift"] = result.mean_abs_shift;
    return 0;
}

int run_interrupted(const oscar::RunConfig& cfg, const fs::path& out_dir, json& manifest) {
    const oscar::InterruptedSettings settings = oscar::interrupted_settings(cfg);
    const oscar::InterruptedResult result = oscar::run_interrupted_oscar(settings);

    oscar::write_timeseries_csv((out_dir / "timeseries.csv").string(), result.run.samples);
    oscar::write_crossings_csv((out_dir / "crossings.csv").string(), result.crossings);
    oscar::JointState final_state = result.run.final_state;
    oscar::fix_global_phase(final_state);
    oscar::write_state_csv((out_dir / "final_state.csv").string(), final_state);

    json events = json::array();
    for (const auto& ev : result.collapses)
        events.push_back({{"tau", ev.tau},
                          {"p_aligned", ev.p_aligned},
                          {"p_anti", ev.p_anti},
                          {"selected", ev.selected == oscar::SpinSense::aligned
                                           ? "aligned"
                                           : "anti_aligned"},
                          {"jumped", ev.jumped}});
    json pulses = json::array();
    for (const auto& p : result.pulses)
        pulses.push_back({{"tau_begin", p.tau_begin},
                          {"tau_end", p.tau_end},
                          {"alignment_cos_after", p.alignment_cos_after},
                          {"alignment_cos_before", p.alignment_cos_before},
                          {"x_before", p.x_before},
                          {"p_before", p.p_before},
                          {"spin_norm_after", p.spin_norm_after}});

    std::cout << "mean |shift|: " << oscar::format_full(result.mean_abs_shift)
              << "  steady |shift|: " << oscar::format_full(result.steady_shift) << std::endl;
    if (result.steady_shift > 0.0 && !result.collapses.empty()) {
        const auto inv = oscar::invert_collapse_time(result.mean_abs_shift, result.steady_shift,
                                                     result.measured_tau_p);
        std::cout << "inferred tau_coll (measured reference): "
                  << oscar::format_full(inv.tau_coll) << (inv.clamped ? "  [clamped]" : "")
                  << std::endl;
        manifest["inferred_tau_coll"] = inv.tau_coll;
        manifest["inferred_tau_coll_clamped"] = inv.clamped;
    }

    manifest["outputs"] = {"timeseries.csv", "crossings.csv", "final_state.csv"};
    manifest["schedule_digest"] = oscar::schedule_digest(result.schedule);
    manifest["numerical_health"] = health_json(result.run.diagnostics);
    manifest["collapse_events"] = events;
    manifest["pulses"] = pulses;
    manifest["mean_abs_shift"] = result.mean_abs_shift;
    manifest["steady_shift"] = result.steady_shift;
    manifest["raw_mean_abs_shift"] = result.raw_mean_abs_shift;
    manifest["measured_tau_p"] = result.measured_tau_p;
    return 0;
}

int run_dump(const oscar::RunConfig& cfg, const fs::path& out_dir, json& manifest) {
    const oscar::BasisSpec basis{cfg.n_osc};
    const std::string& name = cfg.dump_operator;
    const std::string file = name + ".csv";
    const std::string path = (out_dir / file).string();
    if (name == "x") {
        oscar::write_operator_csv(path, oscar::build_x(basis));
    } else if (name == "p") {
        oscar::write_operator_csv(path, oscar::build_p(basis));
    } else if (name == "sx" || name == "sy" || name == "sz") {
        const oscar::SpinOperators ops = oscar::spin_operators();
        const Eigen::Matrix2cd& m = (name == "sx") ? ops.Sx : (name == "sy") ? ops.Sy : ops.Sz;
        oscar::write_operator_csv(path, Eigen::MatrixXcd(m));
    } else if (name == "h") {
        const oscar::HamiltonianSpec spec{cfg.eps, cfg.eta, cfg.delta0};
        oscar::write_operator_csv(path, oscar::build_hamiltonian(spec, basis));
    } else {
        throw oscar::ConfigError("unknown operator '" + name + "' (use x, p, sx, sy, sz, h)");
    }
    std::cout << "wrote " << path << std::endl;
    manifest["outputs"] = {file};
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"single-spin OSCAR MRFM quantum dynamics toolkit"};
    app.require_subcommand(1);

    std::string config_path, out_dir, dump_op = "x";
    std::uint64_t seed = 0;
    double delta0 = 0, tau_p = 0, tau_coll = 0;
    int n_osc = 0, half_periods = 0;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "config file (flat sections, key = value)");
        sub->add_option("--seed", seed, "master seed")->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
        sub->add_option("--delta0", delta0, "telegraph noise amplitude")->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
        sub->add_option("--n-osc", n_osc, "oscillator basis size")->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
        sub->add_option("--half-periods", half_periods, "run horizon in half-periods")->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
        sub->add_option("--tau-p", tau_p, "pulse period")->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
        sub->add_option("--tau-coll", tau_coll, "programmed collapse interval")->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
        sub->add_option("--out", out_dir, "output directory")->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    };

    CLI::App* estimate = app.add_subcommand("estimate", "closed-form estimate stack");
    CLI::App* simulate = app.add_subcommand("simulate", "plain OSCAR run with telegraph noise");
    CLI::App* interrupted =
        app.add_subcommand("interrupted", "interrupted OSCAR with rf-off pulses and collapses");
    CLI::App* dump = app.add_subcommand("operators-dump", "dump an operator matrix as CSV");
    for (CLI::App* sub : {estimate, simulate, interrupted, dump}) add_common(sub);
    dump->add_option("--op", dump_op, "operator name: x, p, sx, sy, sz, h");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    CLI::App* sub = app.get_subcommands().front();

    oscar::RunConfig cfg;
    cfg.subcommand = sub->get_name();

    json manifest;
    fs::path out;
    int exit_code = 0;
    try {
        if (sub->count("--config")) oscar::apply_config_file(cfg, config_path);

        auto warn_repeated = [&](const char* flag) {
            if (sub->count(flag) > 1)
                std::cerr << "warning: " << flag << " given " << sub->count(flag)
                          << " times; using the last value" << std::endl;
        };
        if (sub->count("--seed")) { warn_repeated("--seed"); cfg.seed = seed; }
        if (sub->count("--delta0")) { warn_repeated("--delta0"); cfg.delta0 = delta0; }
        if (sub->count("--n-osc")) { warn_repeated("--n-osc"); cfg.n_osc = n_osc; }
        if (sub->count("--half-periods")) { warn_repeated("--half-periods"); cfg.half_periods = half_periods; }
        if (sub->count("--tau-p")) { warn_repeated("--tau-p"); cfg.tau_p = tau_p; }
        if (sub->count("--tau-coll")) { warn_repeated("--tau-coll"); cfg.tau_coll = tau_coll; }
        if (sub->count("--out")) { warn_repeated("--out"); cfg.out_dir = out_dir; }
        if (sub == dump && sub->count("--op")) cfg.dump_operator = dump_op;

        out = cfg.out_dir;
        fs::create_directories(out);
        manifest["subcommand"] = cfg.subcommand;
        manifest["config"] = config_echo(cfg);
        manifest["status"] = "ok";

        if (cfg.subcommand == "estimate") {
            exit_code = run_estimate(cfg, out, manifest);
        } else if (cfg.subcommand == "simulate") {
            exit_code = run_simulate(cfg, out, manifest);
        } else if (cfg.subcommand == "interrupted") {
            exit_code = run_interrupted(cfg, out, manifest);
        } else {
            exit_code = run_dump(cfg, out, manifest);
        }
    } catch (const oscar::ConfigError& e) {
        std::cerr << "error: " << e.what() << std::endl;
        exit_code = 1;
    } catch (const oscar::ValidationError& e) {
        std::cerr << "error: " << e.what() << std::endl;
        exit_code = 1;
    } catch (const oscar::TruncationError& e) {
        std::cerr << "numerical-health error: " << e.what() << std::endl;
        manifest["status"] = "error";
        manifest["error"] = e.what();
        exit_code = 2;
    } catch (const oscar::AnalysisError& e) {
        std::cerr << "analysis error: " << e.what() << std::endl;
        manifest["status"] = "error";
        manifest["error"] = e.what();
        // degenerate run: leave a header-only crossing file so downstream
        // tooling sees the schema
        if (!out.empty()) {
            try {
                oscar::write_crossings_csv((out / "crossings.csv").string(), {});
            } catch (...) {
            }
        }
        exit_code = 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << std::endl;
        manifest["status"] = "error";
        manifest["error"] = e.what();
        exit_code = 2;
    }

    if (!out.empty()) {
        try {
            write_manifest(out, manifest);
        } catch (const std::exception& e) {
            std::cerr << "error writing manifest: " << e.what() << std::endl;
            if (exit_code == 0) exit_code = 2;
        }
    }
    return exit_code;
}
