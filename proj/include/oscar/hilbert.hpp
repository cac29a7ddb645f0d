#pragma once

#include <Eigen/Dense>

#include "oscar/errors.hpp"

namespace oscar {

/// Truncated oscillator (X) spin-1/2 product basis.
///
/// Joint index convention is spin-fastest: idx = 2n + s with s = 0 for
/// the alpha spinor (S_z = +1/2) and s = 1 for beta (S_z = -1/2), so the
/// two spin components of a state are the even/odd strides of the
/// amplitude vector.
struct BasisSpec {
    int n_osc = 400;

    int dim() const { return 2 * n_osc; }
    void validate() const {
        if (n_osc < 2) throw ValidationError("BasisSpec: n_osc must be at least 2");
    }
    bool operator==(const BasisSpec&) const = default;
};

constexpr int joint_index(int n, int s) { return 2 * n + s; }

/// One piecewise-constant Hamiltonian segment:
/// H = (p^2 + x^2)/2 + eps_active*S_x + 2*eta*x*S_z + delta*S_z.
/// eps_active is 0 while the rf field is switched off; delta is the
/// instantaneous two-valued noise amplitude.
struct HamiltonianSpec {
    double eps_active = 0.0;
    double eta = 0.0;
    double delta = 0.0;

    bool operator==(const HamiltonianSpec&) const = default;
};

/// Position operator on the oscillator factor, x = (a + a^dag)/sqrt(2):
/// real symmetric tridiagonal with <n-1|x|n> = sqrt(n/2).
Eigen::MatrixXd build_x(const BasisSpec& b);

/// Momentum operator on the oscillator factor, p = i(a^dag - a)/sqrt(2).
Eigen::MatrixXcd build_p(const BasisSpec& b);

/// Antisymmetric real A with p = i*A; cheaper carrier for expectation values.
Eigen::MatrixXd build_p_imag(const BasisSpec& b);

/// Unperturbed oscillator energies n + 1/2.
Eigen::VectorXd oscillator_energies(const BasisSpec& b);

struct SpinOperators {
    Eigen::Matrix2cd Sx, Sy, Sz;
};

/// Spin-1/2 operators (halves of the Pauli matrices), S_z diagonal with
/// +1/2 on the alpha component.
SpinOperators spin_operators();

/// Lift an oscillator-factor operator to the joint space (op (X) I_2).
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>
lift_oscillator(const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& op,
                const BasisSpec& b) {
    b.validate();
    if (op.rows() != b.n_osc || op.cols() != b.n_osc)
        throw ValidationError("lift_oscillator: operator size does not match basis");
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> out =
        Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>::Zero(b.dim(), b.dim());
    for (int n = 0; n < b.n_osc; ++n)
        for (int m = 0; m < b.n_osc; ++m) {
            if (op(n, m) == Scalar(0)) continue;
            out(joint_index(n, 0), joint_index(m, 0)) = op(n, m);
            out(joint_index(n, 1), joint_index(m, 1)) = op(n, m);
        }
    return out;
}

/// Lift a spin operator to the joint space (I (X) op).
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>
lift_spin(const Eigen::Matrix<Scalar, 2, 2>& op, const BasisSpec& b) {
    b.validate();
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> out =
        Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>::Zero(b.dim(), b.dim());
    for (int n = 0; n < b.n_osc; ++n)
        for (int s = 0; s < 2; ++s)
            for (int t = 0; t < 2; ++t)
                out(joint_index(n, s), joint_index(n, t)) = op(s, t);
    return out;
}

/// Full joint-space Hamiltonian for one segment. With the conventions
/// above every term is real, so the matrix is real symmetric and a real
/// symmetric eigensolver applies. The oscillator part enters as the
/// exact diagonal n + 1/2.
Eigen::MatrixXd build_hamiltonian(const HamiltonianSpec& h, const BasisSpec& b);

} // namespace oscar
