#pragma once

#include <string>

namespace oscar {

/// Experimental cantilever/spin parameters in SI units.
///
/// Defaults are the single-spin MRFM values used throughout:
/// f_c = 6.6 kHz, k_c = 600 uN/m, B_1 = 300 uT, G = 4.3e5 T/m,
/// X_m = 10 nm, T = 200 mK. The physical constants carry CODATA values
/// and are overridable only through explicit configuration.
struct PhysicalParams {
    double f_c = 6.6e3;    ///< cantilever frequency omega_c / 2pi [Hz]
    double k_c = 600e-6;   ///< effective spring constant [N/m]
    double B1 = 300e-6;    ///< rotating rf field amplitude [T]
    double G = 4.3e5;      ///< field gradient dB_z/dx at the spin [T/m]
    double X_m = 10e-9;    ///< cantilever tip vibration amplitude [m]
    double T_K = 0.2;      ///< temperature [K]

    double gamma = 1.760859e11;     ///< electron gyromagnetic ratio magnitude [rad s^-1 T^-1]
    double hbar = 1.054571817e-34;  ///< reduced Planck constant [J s]
    double k_B = 1.380649e-23;      ///< Boltzmann constant [J/K]

    double omega_c() const;  ///< angular frequency 2*pi*f_c [rad/s]

    /// Throws ValidationError unless every field is strictly positive and finite.
    void validate() const;
};

/// Dimensionless model parameters.
///
/// Length and momentum units are X0 = sqrt(hbar*omega_c/k_c) and
/// P0 = hbar/X0; eps = gamma*B1/omega_c is the Rabi coupling and
/// eta = (gamma*X0/omega_c)*G/2 the spin-tip coupling. For runs driven
/// directly by dimensionless values, X0 and P0 stay zero.
struct ModelParams {
    double eps = 0.0;   ///< rf (Rabi) coupling
    double eta = 0.0;   ///< spin-tip coupling
    double x_m = 0.0;   ///< tip amplitude in units of X0
    double X0 = 0.0;    ///< length unit [m]; 0 when not derived from PhysicalParams
    double P0 = 0.0;    ///< momentum unit [kg m/s]; 0 when not derived
    double spin = 0.5;  ///< spin magnitude S; the simulator itself is spin-1/2 only

    double tau_R() const;  ///< dimensionless Rabi period 2*pi/eps

    /// Throws ValidationError unless eps > 0, x_m > 0, eta >= 0, spin > 0.
    void validate() const;
};

/// Convert experimental quantities to the dimensionless model set.
ModelParams to_model(const PhysicalParams& p);

/// Parameter-regime summary; informational only, never fails.
struct AdiabaticReport {
    double eps = 0.0;
    double eta_x_m = 0.0;      ///< eta * x_m, the field-reversal half-range
    double tau_R = 0.0;        ///< Rabi period 2*pi/eps
    double sweep_ratio = 0.0;  ///< 2*eta*x_m/eps, peak field-rotation rate over Rabi rate
    std::string note;
};

AdiabaticReport validate_adiabatic(const ModelParams& m);

} // namespace oscar
