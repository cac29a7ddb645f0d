#pragma once

#include <vector>

#include "oscar/params.hpp"

namespace oscar {

/// Quasiclassical relative frequency shift of the tip oscillation caused
/// by a spin S (anti)following the effective field:
/// dw0 = 2 S eta^2 / sqrt(2 eta^2 x_m^2 + eps^2).
double delta_omega0(const ModelParams& m);

struct ThermalAmplitude {
    double a_T = 0.0;      ///< thermal tip vibration amplitude near the Rabi frequency [m]
    double omega_R = 0.0;  ///< Rabi frequency gamma*B1 [rad/s]
};

/// a_T = (omega_c/omega_R) * sqrt(k_B T / (2 k_c)).
ThermalAmplitude thermal_amplitude(const PhysicalParams& p);

/// Squared spin deflection accumulated over a single reversal,
/// (dTheta_1)^2 = 3.4 * gamma * G * a_T^2 / (omega_c * X_m).
/// The gyromagnetic factor is required for the expression to be
/// dimensionless; 3.4 is an empirical quasiclassical prefactor.
double spin_deviation_sq(const PhysicalParams& p, double a_T);

/// Smallest positive root of tau * sin(tau) = r, with r > 0, located by
/// bracketed bisection over successive branches (2k*pi, (2k+1)*pi).
/// Throws ValidationError when r exceeds the attainable maximum of every
/// scanned branch.
double solve_tau_sin_tau(double r, int max_branches = 64);

/// All roots of tau * sin(tau) = r below tau_max.
std::vector<double> tau_sin_tau_roots(double r, double tau_max);

/// Collapse-time estimate from trajectory separation reaching the
/// position uncertainty: smallest positive root of
/// tau * sin(tau) = 1/(4 x_m dw0).
double collapse_time_root(double x_m, double dw0);

/// Weighted average shift when the flipped branch carries probability q:
/// mean = dw0 * (1 - 2q). For weak noise q is the per-reversal
/// (dTheta_1)^2 itself.
double shift_reduction(double flipped_branch_prob, double dw0);

struct ThermalSeparation {
    double separation_m = 0.0;             ///< rms thermal tip excursion sqrt(k_B T / k_c) [m]
    double separation_dimensionless = 0.0; ///< same in units of X0
    double tau_envelope = 0.0;             ///< tau with 2 x_m dw0 tau reaching that separation
    double periods = 0.0;                  ///< tau_envelope / 2pi
};

/// Opposite extreme: collapse deferred until the two trajectories are as
/// far apart as the thermal tip fluctuations. The envelope of the
/// trajectory separation 2 x_m dw0 tau |sin tau| is inverted for tau.
ThermalSeparation thermal_separation_case(const PhysicalParams& p, const ModelParams& m);

/// Everything above evaluated on one experimental parameter set.
struct EstimateReport {
    ModelParams model;
    AdiabaticReport adiabatic;
    double delta_omega0 = 0.0;
    double delta_tau0 = 0.0;  ///< pi * delta_omega0, per-half-period deviation
    double a_T = 0.0;
    double omega_R = 0.0;
    double dtheta1_sq = 0.0;
    double collapse_rhs = 0.0;  ///< 1/(4 x_m dw0)
    double tau_coll_root = 0.0;
    double mean_shift_reduction = 0.0;  ///< dw0 * (1 - 2 (dTheta_1)^2)
    ThermalSeparation separation;
};

/// spin overrides the S carried through the closed-form expressions;
/// the dynamical simulator itself is spin-1/2 only.
EstimateReport estimate_all(const PhysicalParams& p, double spin = 0.5);

} // namespace oscar
