#pragma once

#include <Eigen/Dense>

#include "oscar/hilbert.hpp"

namespace oscar {

/// Joint tip/spin wave function over the truncated product basis.
/// amplitudes[2n + s] is the coefficient of oscillator level n and spin
/// component s (0 = alpha, 1 = beta); tau is the dimensionless time.
struct JointState {
    Eigen::VectorXcd amplitudes;
    BasisSpec basis;
    double tau = 0.0;
};

/// | ||psi|| - 1 |
double norm_error(const JointState& s);

/// Coherent oscillator state with <x> = x0 and <p> = p0, i.e.
/// displacement alpha0 = (x0 + i p0)/sqrt(2). Amplitudes are evaluated
/// through a log-domain recurrence and renormalized over the truncated
/// basis; the result is the standard exp(-|a|^2/2) a^n / sqrt(n!) ladder.
/// Throws TruncationError when the occupation tail would not fit
/// (|a|^2 + 8|a| must stay below n_osc).
Eigen::VectorXcd coherent_state(double x0, double p0, const BasisSpec& b);

/// Rotating-frame effective field seen by the spin, (B_x, B_z) = (eps, 2*eta*x_ref).
struct EffectiveField {
    double Bx = 0.0;
    double Bz = 0.0;
    double norm() const;
};

EffectiveField effective_field(double eps, double eta, double x_ref);

enum class SpinSense { aligned, anti_aligned };

/// Real spinor with <S> = +/- (1/2) * field/|field| for a field in the
/// x-z plane. Throws ValidationError on a zero field.
Eigen::Vector2cd spin_state_along(const EffectiveField& field, SpinSense sense);

/// Normalized product state oscillator (X) spinor at tau = 0.
JointState product_state(const Eigen::VectorXcd& osc, const Eigen::Vector2cd& spinor,
                         const BasisSpec& b);

struct SpinVector {
    double x = 0.0, y = 0.0, z = 0.0;
    double norm() const;
};

struct Observables {
    double x = 0.0;
    double p = 0.0;
    double energy0 = 0.0;  ///< unperturbed oscillator energy <(p^2+x^2)/2>
    SpinVector spin;
};

/// Cached joint-space operator matrices for expectation values.
struct ObservableCache {
    explicit ObservableCache(const BasisSpec& b);
    BasisSpec basis;
    Eigen::MatrixXd x_joint;       ///< x (X) I_2
    Eigen::MatrixXd p_imag_joint;  ///< A with p (X) I_2 = i A
    Eigen::VectorXd energy0_diag;  ///< n + 1/2 per joint index
};

/// Quadratic form <psi|M|psi> for real symmetric M.
double expect_real_sym(const Eigen::MatrixXd& m, const Eigen::VectorXcd& psi);

/// Quadratic form <psi|iA|psi> for real antisymmetric A (a real number).
double expect_imag_antisym(const Eigen::MatrixXd& a, const Eigen::VectorXcd& psi);

Observables expectations(const JointState& s, const ObservableCache& cache);

/// 2x2 reduced spin density matrix (oscillator traced out).
Eigen::Matrix2cd reduced_spin_density(const JointState& s);

struct SpinPurity {
    double spin_norm = 0.0;       ///< |<S>|
    double linear_entropy = 0.0;  ///< 1 - Tr(rho_s^2)
};

/// |<S>| = 1/2 and zero linear entropy exactly when the state is a
/// tip (X) spin product; entanglement pushes |<S>| below 1/2.
SpinPurity spin_purity(const JointState& s);

/// Total population in the top `band_fraction` of oscillator levels;
/// the truncation health indicator.
double top_band_population(const JointState& s, double band_fraction = 0.05);

/// Rotate the global phase so the largest-magnitude amplitude is real
/// positive; makes state dumps reproducible.
JointState& fix_global_phase(JointState& s);

} // namespace oscar
