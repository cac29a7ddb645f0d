#include "oscar/states.hpp"

#include <cmath>
#include <complex>
#include <sstream>

namespace oscar {

using std::complex;

double norm_error(const JointState& s) {
    return std::abs(s.amplitudes.norm() - 1.0);
}

Eigen::VectorXcd coherent_state(double x0, double p0, const BasisSpec& b) {
    b.validate();
    const complex<double> alpha(x0 / std::sqrt(2.0), p0 / std::sqrt(2.0));
    const double a2 = std::norm(alpha);
    if (a2 + 8.0 * std::sqrt(a2) >= static_cast<double>(b.n_osc)) {
        std::ostringstream msg;
        msg << "coherent_state: displacement |alpha|^2 = " << a2
            << " does not fit the truncated basis (n_osc = " << b.n_osc << ")";
        throw TruncationError(msg.str());
    }

    // log-magnitude recurrence: ln|c_n| = -|a|^2/2 + n ln|a| - ln(n!)/2,
    // phase n*arg(a); avoids under/overflow of a^n and n! separately.
    Eigen::VectorXcd c(b.n_osc);
    const double log_mag_alpha = a2 > 0.0 ? 0.5 * std::log(a2) : 0.0;
    const double theta = std::arg(alpha);
    double log_fact = 0.0;
    for (int n = 0; n < b.n_osc; ++n) {
        if (n > 0) log_fact += std::log(static_cast<double>(n));
        if (a2 == 0.0) {
            c(n) = (n == 0) ? 1.0 : 0.0;
            continue;
        }
        const double log_mag = -0.5 * a2 + n * log_mag_alpha - 0.5 * log_fact;
        c(n) = std::polar(std::exp(log_mag), n * theta);
    }
    c.normalize();
    return c;
}

double EffectiveField::norm() const {
    return std::hypot(Bx, Bz);
}

EffectiveField effective_field(double eps, double eta, double x_ref) {
    return EffectiveField{eps, 2.0 * eta * x_ref};
}

Eigen::Vector2cd spin_state_along(const EffectiveField& field, SpinSense sense) {
    const double mag = field.norm();
    if (!(mag > 0.0)) throw ValidationError("spin_state_along: zero effective field");
    // polar angle from +z: cos(theta) = Bz/|B|, sin(theta) = Bx/|B|
    const double half = 0.5 * std::atan2(field.Bx, field.Bz);
    Eigen::Vector2cd chi;
    if (sense == SpinSense::aligned) {
        chi << std::cos(half), std::sin(half);
    } else {
        chi << -std::sin(half), std::cos(half);
    }
    return chi;
}

JointState product_state(const Eigen::VectorXcd& osc, const Eigen::Vector2cd& spinor,
                         const BasisSpec& b) {
    b.validate();
    if (osc.size() != b.n_osc)
        throw ValidationError("product_state: oscillator vector does not match basis");
    JointState s;
    s.basis = b;
    s.amplitudes.resize(b.dim());
    for (int n = 0; n < b.n_osc; ++n) {
        s.amplitudes(joint_index(n, 0)) = osc(n) * spinor(0);
        s.amplitudes(joint_index(n, 1)) = osc(n) * spinor(1);
    }
    s.amplitudes.normalize();
    return s;
}

double SpinVector::norm() const {
    return std::sqrt(x * x + y * y + z * z);
}

ObservableCache::ObservableCache(const BasisSpec& b)
    : basis(b),
      x_joint(lift_oscillator<double>(build_x(b), b)),
      p_imag_joint(lift_oscillator<double>(build_p_imag(b), b)) {
    energy0_diag.resize(b.dim());
    for (int n = 0; n < b.n_osc; ++n) {
        energy0_diag(joint_index(n, 0)) = n + 0.5;
        energy0_diag(joint_index(n, 1)) = n + 0.5;
    }
}

double expect_real_sym(const Eigen::MatrixXd& m, const Eigen::VectorXcd& psi) {
    const Eigen::VectorXd re = psi.real();
    const Eigen::VectorXd im = psi.imag();
    return re.dot(m * re) + im.dot(m * im);
}

double expect_imag_antisym(const Eigen::MatrixXd& a, const Eigen::VectorXcd& psi) {
    const Eigen::VectorXd re = psi.real();
    const Eigen::VectorXd im = psi.imag();
    return 2.0 * im.dot(a * re);
}

Eigen::Matrix2cd reduced_spin_density(const JointState& s) {
    Eigen::Matrix2cd rho = Eigen::Matrix2cd::Zero();
    for (int n = 0; n < s.basis.n_osc; ++n) {
        const auto ua = s.amplitudes(joint_index(n, 0));
        const auto ub = s.amplitudes(joint_index(n, 1));
        rho(0, 0) += ua * std::conj(ua);
        rho(0, 1) += ua * std::conj(ub);
        rho(1, 0) += ub * std::conj(ua);
        rho(1, 1) += ub * std::conj(ub);
    }
    return rho;
}

namespace {

SpinVector spin_from_density(const Eigen::Matrix2cd& rho) {
    static const SpinOperators ops = spin_operators();
    SpinVector v;
    v.x = (rho * ops.Sx).trace().real();
    v.y = (rho * ops.Sy).trace().real();
    v.z = (rho * ops.Sz).trace().real();
    return v;
}

} // namespace

Observables expectations(const JointState& s, const ObservableCache& cache) {
    if (!(s.basis == cache.basis))
        throw ValidationError("expectations: state and cache bases differ");
    Observables o;
    o.x = expect_real_sym(cache.x_joint, s.amplitudes);
    o.p = expect_imag_antisym(cache.p_imag_joint, s.amplitudes);
    o.energy0 = (cache.energy0_diag.array() *
                 s.amplitudes.array().abs2())
                    .sum();
    o.spin = spin_from_density(reduced_spin_density(s));
    return o;
}

SpinPurity spin_purity(const JointState& s) {
    const Eigen::Matrix2cd rho = reduced_spin_density(s);
    SpinPurity p;
    p.spin_norm = spin_from_density(rho).norm();
    p.linear_entropy = 1.0 - (rho * rho).trace().real();
    return p;
}

double top_band_population(const JointState& s, double band_fraction) {
    const int n0 = static_cast<int>(std::ceil((1.0 - band_fraction) * s.basis.n_osc));
    double pop = 0.0;
    for (int n = n0; n < s.basis.n_osc; ++n)
        pop += std::norm(s.amplitudes(joint_index(n, 0))) +
               std::norm(s.amplitudes(joint_index(n, 1)));
    return pop;
}

JointState& fix_global_phase(JointState& s) {
    Eigen::Index imax = 0;
    s.amplitudes.cwiseAbs().maxCoeff(&imax);
    const complex<double> a = s.amplitudes(imax);
    if (std::abs(a) > 0.0) s.amplitudes *= std::conj(a) / std::abs(a);
    return s;
}

} // namespace oscar
