#include "oscar/quasiclassical.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "oscar/errors.hpp"

namespace oscar {

namespace {

constexpr double pi = std::numbers::pi;

double product(double tau) {
    return tau * std::sin(tau);
}

// argmax of tau*sin(tau) on (a, a+pi) where the product is non-negative;
// the derivative sin(tau) + tau*cos(tau) changes sign exactly once there
double branch_argmax(double a) {
    double lo = a + 1e-12;
    double hi = a + pi - 1e-12;
    for (int it = 0; it < 200; ++it) {
        const double m = 0.5 * (lo + hi);
        const double d = std::sin(m) + m * std::cos(m);
        if (d > 0.0) {
            lo = m;
        } else {
            hi = m;
        }
    }
    return 0.5 * (lo + hi);
}

double bisect_rising(double lo, double hi, double r) {
    for (int it = 0; it < 200; ++it) {
        const double m = 0.5 * (lo + hi);
        if (product(m) < r) {
            lo = m;
        } else {
            hi = m;
        }
    }
    return 0.5 * (lo + hi);
}

double bisect_falling(double lo, double hi, double r) {
    for (int it = 0; it < 200; ++it) {
        const double m = 0.5 * (lo + hi);
        if (product(m) > r) {
            lo = m;
        } else {
            hi = m;
        }
    }
    return 0.5 * (lo + hi);
}

} // namespace

double delta_omega0(const ModelParams& m) {
    m.validate();
    return 2.0 * m.spin * m.eta * m.eta /
           std::sqrt(2.0 * m.eta * m.eta * m.x_m * m.x_m + m.eps * m.eps);
}

ThermalAmplitude thermal_amplitude(const PhysicalParams& p) {
    p.validate();
    ThermalAmplitude t;
    t.omega_R = p.gamma * p.B1;
    t.a_T = (p.omega_c() / t.omega_R) * std::sqrt(p.k_B * p.T_K / (2.0 * p.k_c));
    return t;
}

double spin_deviation_sq(const PhysicalParams& p, double a_T) {
    p.validate();
    if (a_T < 0.0) throw ValidationError("spin_deviation_sq: a_T must be >= 0");
    return 3.4 * p.gamma * p.G * a_T * a_T / (p.omega_c() * p.X_m);
}

double solve_tau_sin_tau(double r, int max_branches) {
    if (!(r > 0.0)) throw ValidationError("solve_tau_sin_tau: r must be > 0");
    for (int k = 0; k < max_branches; ++k) {
        const double a = 2.0 * k * pi;
        const double tmax = branch_argmax(a);
        if (product(tmax) >= r) return bisect_rising(a, tmax, r);
    }
    std::ostringstream msg;
    msg << "solve_tau_sin_tau: r = " << r << " exceeds the attainable maximum of the first "
        << max_branches << " branches";
    throw ValidationError(msg.str());
}

std::vector<double> tau_sin_tau_roots(double r, double tau_max) {
    if (!(r > 0.0)) throw ValidationError("tau_sin_tau_roots: r must be > 0");
    std::vector<double> roots;
    for (int k = 0; 2.0 * k * pi < tau_max; ++k) {
        const double a = 2.0 * k * pi;
        const double b = a + pi;
        const double tmax = branch_argmax(a);
        if (product(tmax) < r) continue;
        const double rise = bisect_rising(a, tmax, r);
        if (rise < tau_max) roots.push_back(rise);
        const double fall = bisect_falling(tmax, b, r);
        if (fall < tau_max) roots.push_back(fall);
    }
    return roots;
}

double collapse_time_root(double x_m, double dw0) {
    if (!(x_m > 0.0 && dw0 > 0.0))
        throw ValidationError("collapse_time_root: x_m and dw0 must be > 0");
    return solve_tau_sin_tau(1.0 / (4.0 * x_m * dw0));
}

double shift_reduction(double flipped_branch_prob, double dw0) {
    if (!(flipped_branch_prob >= 0.0 && flipped_branch_prob <= 0.5))
        throw ValidationError("shift_reduction: branch probability must lie in [0, 1/2]");
    return dw0 * (1.0 - 2.0 * flipped_branch_prob);
}

ThermalSeparation thermal_separation_case(const PhysicalParams& p, const ModelParams& m) {
    p.validate();
    m.validate();
    if (!(m.X0 > 0.0))
        throw ValidationError("thermal_separation_case: model parameters lack a length unit");
    ThermalSeparation s;
    s.separation_m = std::sqrt(p.k_B * p.T_K / p.k_c);
    s.separation_dimensionless = s.separation_m / m.X0;
    const double dw0 = delta_omega0(m);
    s.tau_envelope = s.separation_dimensionless / (2.0 * m.x_m * dw0);
    s.periods = s.tau_envelope / (2.0 * pi);
    return s;
}

EstimateReport estimate_all(const PhysicalParams& p, double spin) {
    EstimateReport r;
    r.model = to_model(p);
    r.model.spin = spin;
    r.adiabatic = validate_adiabatic(r.model);
    r.delta_omega0 = delta_omega0(r.model);
    r.delta_tau0 = pi * r.delta_omega0;
    const ThermalAmplitude th = thermal_amplitude(p);
    r.a_T = th.a_T;
    r.omega_R = th.omega_R;
    r.dtheta1_sq = spin_deviation_sq(p, th.a_T);
    r.collapse_rhs = 1.0 / (4.0 * r.model.x_m * r.delta_omega0);
    r.tau_coll_root = collapse_time_root(r.model.x_m, r.delta_omega0);
    r.mean_shift_reduction = shift_reduction(r.dtheta1_sq, r.delta_omega0);
    r.separation = thermal_separation_case(p, r.model);
    return r;
}

} // namespace oscar
