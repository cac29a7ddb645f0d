#include "oscar/hilbert.hpp"

#include <cmath>
#include <complex>

namespace oscar {

using std::complex;

Eigen::MatrixXd build_x(const BasisSpec& b) {
    b.validate();
    Eigen::MatrixXd x = Eigen::MatrixXd::Zero(b.n_osc, b.n_osc);
    for (int n = 1; n < b.n_osc; ++n) {
        const double v = std::sqrt(0.5 * n);
        x(n - 1, n) = v;
        x(n, n - 1) = v;
    }
    return x;
}

Eigen::MatrixXd build_p_imag(const BasisSpec& b) {
    b.validate();
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(b.n_osc, b.n_osc);
    for (int n = 1; n < b.n_osc; ++n) {
        const double v = std::sqrt(0.5 * n);
        a(n, n - 1) = v;   // a^dag part
        a(n - 1, n) = -v;  // -a part
    }
    return a;
}

Eigen::MatrixXcd build_p(const BasisSpec& b) {
    return complex<double>(0.0, 1.0) * build_p_imag(b).cast<complex<double>>();
}

Eigen::VectorXd oscillator_energies(const BasisSpec& b) {
    b.validate();
    Eigen::VectorXd e(b.n_osc);
    for (int n = 0; n < b.n_osc; ++n) e(n) = n + 0.5;
    return e;
}

SpinOperators spin_operators() {
    SpinOperators s;
    s.Sx << 0.0, 0.5, 0.5, 0.0;
    s.Sy << 0.0, complex<double>(0.0, -0.5), complex<double>(0.0, 0.5), 0.0;
    s.Sz << 0.5, 0.0, 0.0, -0.5;
    return s;
}

Eigen::MatrixXd build_hamiltonian(const HamiltonianSpec& h, const BasisSpec& b) {
    b.validate();
    Eigen::MatrixXd ham = Eigen::MatrixXd::Zero(b.dim(), b.dim());

    // oscillator part, diagonal n + 1/2 on both spin components
    for (int n = 0; n < b.n_osc; ++n) {
        ham(joint_index(n, 0), joint_index(n, 0)) = n + 0.5;
        ham(joint_index(n, 1), joint_index(n, 1)) = n + 0.5;
    }

    // eps * S_x couples the spin components at equal n
    for (int n = 0; n < b.n_osc; ++n) {
        ham(joint_index(n, 0), joint_index(n, 1)) += 0.5 * h.eps_active;
        ham(joint_index(n, 1), joint_index(n, 0)) += 0.5 * h.eps_active;
    }

    // (2*eta*x + delta) * S_z: spin-diagonal with sign by spin component
    for (int n = 1; n < b.n_osc; ++n) {
        const double xv = std::sqrt(0.5 * n);
        ham(joint_index(n - 1, 0), joint_index(n, 0)) += h.eta * xv;
        ham(joint_index(n, 0), joint_index(n - 1, 0)) += h.eta * xv;
        ham(joint_index(n - 1, 1), joint_index(n, 1)) -= h.eta * xv;
        ham(joint_index(n, 1), joint_index(n - 1, 1)) -= h.eta * xv;
    }
    for (int n = 0; n < b.n_osc; ++n) {
        ham(joint_index(n, 0), joint_index(n, 0)) += 0.5 * h.delta;
        ham(joint_index(n, 1), joint_index(n, 1)) -= 0.5 * h.delta;
    }
    return ham;
}

} // namespace oscar
