#include "oscar/io.hpp"

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace oscar {

std::string format_full(double v) {
    if (v == 0.0) return "0";  // normalize signed zero
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open output file: " + path);
    return out;
}

void finish(std::ofstream& out, const std::string& path) {
    out.flush();
    if (!out) throw Error("write failed: " + path);
}

} // namespace

void write_timeseries_csv(const std::string& path, const std::vector<Sample>& samples) {
    auto out = open_out(path);
    out << "tau,x,p,spin_x,spin_y,spin_z,spin_norm,norm_error,top_band_population\n";
    for (const auto& s : samples) {
        out << format_full(s.tau) << ',' << format_full(s.x) << ',' << format_full(s.p) << ','
            << format_full(s.spin_x) << ',' << format_full(s.spin_y) << ','
            << format_full(s.spin_z) << ',' << format_full(s.spin_norm) << ','
            << format_full(s.norm_error) << ',' << format_full(s.top_band) << '\n';
    }
    finish(out, path);
}

void write_crossings_csv(const std::string& path, const CrossingSeries& c) {
    auto out = open_out(path);
    out << "j,dtau,deviation,delta_omega\n";
    for (std::size_t j = 0; j < c.dtau.size(); ++j) {
        const double signed_shift = (3.141592653589793238 - c.dtau[j]) / 3.141592653589793238;
        out << (j + 1) << ',' << format_full(c.dtau[j]) << ',' << format_full(c.deviations[j])
            << ',' << format_full(signed_shift) << '\n';
    }
    finish(out, path);
}

void write_state_csv(const std::string& path, const JointState& s) {
    auto out = open_out(path);
    out << "n,re_u_alpha,im_u_alpha,re_u_beta,im_u_beta\n";
    for (int n = 0; n < s.basis.n_osc; ++n) {
        const auto ua = s.amplitudes(joint_index(n, 0));
        const auto ub = s.amplitudes(joint_index(n, 1));
        out << n << ',' << format_full(ua.real()) << ',' << format_full(ua.imag()) << ','
            << format_full(ub.real()) << ',' << format_full(ub.imag()) << '\n';
    }
    finish(out, path);
}

void write_operator_csv(const std::string& path, const Eigen::MatrixXcd& op) {
    auto out = open_out(path);
    out << "i,j,re,im\n";
    for (Eigen::Index i = 0; i < op.rows(); ++i)
        for (Eigen::Index j = 0; j < op.cols(); ++j) {
            if (op(i, j) == std::complex<double>(0.0, 0.0)) continue;
            out << i << ',' << j << ',' << format_full(op(i, j).real()) << ','
                << format_full(op(i, j).imag()) << '\n';
        }
    finish(out, path);
}

void write_operator_csv(const std::string& path, const Eigen::MatrixXd& op) {
    write_operator_csv(path, Eigen::MatrixXcd(op.cast<std::complex<double>>()));
}

namespace {

void table_row(std::ostringstream& out, const std::string& name, const std::string& value) {
    out << "  " << std::left << std::setw(28) << name << value << '\n';
}

} // namespace

std::string format_estimate_table(const EstimateReport& r) {
    std::ostringstream out;
    out << "model parameters\n";
    table_row(out, "eps", format_full(r.model.eps));
    table_row(out, "eta", format_full(r.model.eta));
    table_row(out, "x_m", format_full(r.model.x_m));
    table_row(out, "X0 [m]", format_full(r.model.X0));
    table_row(out, "P0 [N s]", format_full(r.model.P0));
    table_row(out, "spin", format_full(r.model.spin));
    table_row(out, "tau_R", format_full(r.adiabatic.tau_R));
    table_row(out, "sweep_ratio", format_full(r.adiabatic.sweep_ratio));
    out << "frequency shift\n";
    table_row(out, "delta_omega0", format_full(r.delta_omega0));
    table_row(out, "delta_tau0", format_full(r.delta_tau0));
    out << "thermal noise\n";
    table_row(out, "omega_R [rad/s]", format_full(r.omega_R));
    table_row(out, "a_T [m]", format_full(r.a_T));
    table_row(out, "dtheta1_sq", format_full(r.dtheta1_sq));
    table_row(out, "mean_shift_reduction", format_full(r.mean_shift_reduction));
    out << "collapse-time estimates\n";
    table_row(out, "tau_sin_tau_rhs", format_full(r.collapse_rhs));
    table_row(out, "tau_coll_root", format_full(r.tau_coll_root));
    table_row(out, "thermal_separation [m]", format_full(r.separation.separation_m));
    table_row(out, "thermal_separation (dimless)",
              format_full(r.separation.separation_dimensionless));
    table_row(out, "separation_tau", format_full(r.separation.tau_envelope));
    table_row(out, "separation_periods", format_full(r.separation.periods));
    out << "regime: " << r.adiabatic.note << '\n';
    return out.str();
}

void write_estimate_csv(const std::string& path, const EstimateReport& r) {
    auto out = open_out(path);
    out << "key,value\n";
    auto row = [&](const char* k, double v) { out << k << ',' << format_full(v) << '\n'; };
    row("eps", r.model.eps);
    row("eta", r.model.eta);
    row("x_m", r.model.x_m);
    row("X0", r.model.X0);
    row("P0", r.model.P0);
    row("spin", r.model.spin);
    row("tau_R", r.adiabatic.tau_R);
    row("sweep_ratio", r.adiabatic.sweep_ratio);
    row("delta_omega0", r.delta_omega0);
    row("delta_tau0", r.delta_tau0);
    row("omega_R", r.omega_R);
    row("a_T", r.a_T);
    row("dtheta1_sq", r.dtheta1_sq);
    row("mean_shift_reduction", r.mean_shift_reduction);
    row("tau_sin_tau_rhs", r.collapse_rhs);
    row("tau_coll_root", r.tau_coll_root);
    row("thermal_separation_m", r.separation.separation_m);
    row("thermal_separation_dimensionless", r.separation.separation_dimensionless);
    row("separation_tau", r.separation.tau_envelope);
    row("separation_periods", r.separation.periods);
    finish(out, path);
}

std::string schedule_digest(const Schedule& sched) {
    std::ostringstream canon;
    for (const auto& seg : sched.segments)
        canon << format_full(seg.begin) << ':' << format_full(seg.end) << ':'
              << format_full(seg.spec.eps_active) << ':' << format_full(seg.spec.eta) << ':'
              << format_full(seg.spec.delta) << ';';
    const std::string s = canon.str();
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    std::ostringstream hex;
    hex << std::hex << std::setw(16) << std::setfill('0') << h;
    return hex.str();
}

void write_text(const std::string& path, const std::string& content) {
    auto out = open_out(path);
    out << content;
    finish(out, path);
}

} // namespace oscar
