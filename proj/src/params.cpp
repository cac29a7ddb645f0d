#include "oscar/params.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "oscar/errors.hpp"

namespace oscar {

namespace {

void require_positive(double v, const char* name, const char* type) {
    if (!(std::isfinite(v) && v > 0.0)) {
        std::ostringstream msg;
        msg << type << ": " << name << " must be finite and strictly positive, got " << v;
        throw ValidationError(msg.str());
    }
}

} // namespace

double PhysicalParams::omega_c() const {
    return 2.0 * std::numbers::pi * f_c;
}

void PhysicalParams::validate() const {
    require_positive(f_c, "f_c", "PhysicalParams");
    require_positive(k_c, "k_c", "PhysicalParams");
    require_positive(B1, "B1", "PhysicalParams");
    require_positive(G, "G", "PhysicalParams");
    require_positive(X_m, "X_m", "PhysicalParams");
    require_positive(T_K, "T", "PhysicalParams");
    require_positive(gamma, "gamma", "PhysicalParams");
    require_positive(hbar, "hbar", "PhysicalParams");
    require_positive(k_B, "k_B", "PhysicalParams");
}

double ModelParams::tau_R() const {
    return 2.0 * std::numbers::pi / eps;
}

void ModelParams::validate() const {
    require_positive(eps, "eps", "ModelParams");
    require_positive(x_m, "x_m", "ModelParams");
    require_positive(spin, "spin", "ModelParams");
    if (!(std::isfinite(eta) && eta >= 0.0)) {
        std::ostringstream msg;
        msg << "ModelParams: eta must be finite and non-negative, got " << eta;
        throw ValidationError(msg.str());
    }
}

ModelParams to_model(const PhysicalParams& p) {
    p.validate();
    const double wc = p.omega_c();
    ModelParams m;
    m.X0 = std::sqrt(p.hbar * wc / p.k_c);
    m.P0 = p.hbar / m.X0;
    m.eps = p.gamma * p.B1 / wc;
    m.eta = 0.5 * (p.gamma * m.X0 / wc) * p.G;
    m.x_m = p.X_m / m.X0;
    m.spin = 0.5;
    return m;
}

AdiabaticReport validate_adiabatic(const ModelParams& m) {
    AdiabaticReport r;
    r.eps = m.eps;
    r.eta_x_m = m.eta * m.x_m;
    r.tau_R = m.eps > 0.0 ? m.tau_R() : 0.0;
    r.sweep_ratio = m.eps > 0.0 ? 2.0 * m.eta * m.x_m / m.eps : 0.0;
    if (r.sweep_ratio == 0.0) {
        r.note = "spin decoupled from tip motion (eta*x_m = 0)";
    } else if (r.sweep_ratio < 1.0) {
        r.note = "adiabatic regime: peak field rotation rate below the Rabi rate";
    } else {
        r.note = "sweep ratio >= 1: adiabatic following of the effective field is not guaranteed";
    }
    return r;
}

} // namespace oscar
