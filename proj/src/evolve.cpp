#include "oscar/evolve.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "oscar/rng.hpp"

namespace oscar {

using std::complex;

namespace {

Eigen::VectorXcd apply_real(const Eigen::MatrixXd& m, const Eigen::VectorXcd& v) {
    Eigen::VectorXcd out(v.size());
    out.real() = m * v.real();
    out.imag() = m * v.imag();
    return out;
}

Eigen::VectorXcd apply_real_transposed(const Eigen::MatrixXd& m, const Eigen::VectorXcd& v) {
    Eigen::VectorXcd out(v.size());
    out.real() = m.transpose() * v.real();
    out.imag() = m.transpose() * v.imag();
    return out;
}

Eigen::VectorXcd phase_factors(const Eigen::VectorXd& eigenvalues, double dtau) {
    Eigen::VectorXcd ph(eigenvalues.size());
    for (Eigen::Index i = 0; i < eigenvalues.size(); ++i)
        ph(i) = std::polar(1.0, -eigenvalues(i) * dtau);
    return ph;
}

} // namespace

SpectralPropagator diagonalize(const HamiltonianSpec& h, const BasisSpec& b) {
    const Eigen::MatrixXd ham = build_hamiltonian(h, b);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(ham);
    if (solver.info() != Eigen::Success) {
        std::ostringstream msg;
        msg << "diagonalize: eigensolver failed to converge for dim = " << b.dim()
            << " (eps_active = " << h.eps_active << ", eta = " << h.eta
            << ", delta = " << h.delta << ")";
        throw Error(msg.str());
    }
    SpectralPropagator prop{solver.eigenvalues(), solver.eigenvectors(), h, b};

    // spot-check a few eigenpairs; the full residual checks live in the tests
    std::mt19937_64 gen(0x5eed);
    const double scale = std::max(1.0, prop.eigenvalues.cwiseAbs().maxCoeff());
    for (int k = 0; k < 8; ++k) {
        const Eigen::Index i =
            static_cast<Eigen::Index>(gen() % static_cast<std::uint64_t>(b.dim()));
        const double resid =
            (ham * prop.eigenvectors.col(i) - prop.eigenvalues(i) * prop.eigenvectors.col(i))
                .cwiseAbs()
                .maxCoeff();
        if (resid > 1e-8 * scale) {
            std::ostringstream msg;
            msg << "diagonalize: eigenpair residual " << resid << " exceeds tolerance";
            throw Error(msg.str());
        }
    }
    return prop;
}

JointState step(const JointState& s, const SpectralPropagator& prop, double dtau) {
    if (!(s.basis == prop.basis))
        throw ValidationError("step: state and propagator bases differ");
    Eigen::VectorXcd w = apply_real_transposed(prop.eigenvectors, s.amplitudes);
    w.array() *= phase_factors(prop.eigenvalues, dtau).array();
    JointState out;
    out.basis = s.basis;
    out.tau = s.tau + dtau;
    out.amplitudes = apply_real(prop.eigenvectors, w);
    return out;
}

double NoiseRealization::value_at(double tau) const {
    if (delta0 == 0.0) return 0.0;
    const auto it = std::upper_bound(kick_times.begin(), kick_times.end(), tau);
    const std::size_t interval = static_cast<std::size_t>(it - kick_times.begin());
    return signs[interval] * delta0;
}

double draw_kick_interval(std::mt19937_64& gen, double tau_R) {
    for (;;) {
        const double u = uniform_range(gen, -0.75 * tau_R, 1.25 * tau_R);
        if (u > 0.0) return u;
    }
}

NoiseRealization sample_noise(std::uint64_t seed, double delta0, double tau_R,
                              double tau_end) {
    if (delta0 < 0.0) throw ValidationError("sample_noise: delta0 must be >= 0");
    if (!(tau_end > 0.0)) throw ValidationError("sample_noise: tau_end must be > 0");
    if (!(tau_R > 0.0)) throw ValidationError("sample_noise: tau_R must be > 0");
    NoiseRealization nr;
    nr.seed = seed;
    nr.delta0 = delta0;
    std::mt19937_64 gen(seed);
    double t = 0.0;
    for (;;) {
        t += draw_kick_interval(gen, tau_R);
        if (t >= tau_end) break;
        nr.kick_times.push_back(t);
    }
    nr.signs.resize(nr.kick_times.size() + 1);
    for (std::size_t k = 0; k < nr.signs.size(); ++k) nr.signs[k] = (k % 2 == 0) ? 1 : -1;
    return nr;
}

double Schedule::begin() const {
    return segments.empty() ? 0.0 : segments.front().begin;
}

double Schedule::end() const {
    return segments.empty() ? 0.0 : segments.back().end;
}

void Schedule::validate() const {
    if (segments.empty()) throw ScheduleError("Schedule: empty");
    for (std::size_t i = 0; i < segments.size(); ++i) {
        if (!(segments[i].end > segments[i].begin))
            throw ScheduleError("Schedule: segment with non-positive length");
        if (i > 0 && std::abs(segments[i].begin - segments[i - 1].end) > 1e-12)
            throw ScheduleError("Schedule: segments are not contiguous");
    }
}

Schedule Schedule::slice(double a, double b) const {
    if (!(b > a)) throw ScheduleError("Schedule::slice: empty window");
    Schedule out;
    for (const auto& seg : segments) {
        const double lo = std::max(a, seg.begin);
        const double hi = std::min(b, seg.end);
        if (hi - lo > 1e-12) out.segments.push_back({lo, hi, seg.spec});
    }
    if (out.segments.empty())
        throw ScheduleError("Schedule::slice: window does not intersect the schedule");
    out.segments.front().begin = a;
    out.segments.back().end = b;
    out.validate();
    return out;
}

Schedule make_schedule(const NoiseRealization& noise, double eps, double eta,
                       double tau_end,
                       const std::vector<std::pair<double, double>>& rf_off_windows) {
    if (!(tau_end > 0.0)) throw ScheduleError("make_schedule: tau_end must be > 0");
    std::vector<double> bounds{0.0, tau_end};
    for (double t : noise.kick_times)
        if (t > 0.0 && t < tau_end) bounds.push_back(t);
    for (const auto& [a, b] : rf_off_windows) {
        if (!(b > a)) throw ScheduleError("make_schedule: empty rf-off window");
        if (a > 0.0 && a < tau_end) bounds.push_back(a);
        if (b > 0.0 && b < tau_end) bounds.push_back(b);
    }
    std::sort(bounds.begin(), bounds.end());

    auto rf_off_at = [&](double t) {
        for (const auto& [a, b] : rf_off_windows)
            if (t >= a && t < b) return true;
        return false;
    };

    Schedule sched;
    for (std::size_t i = 0; i + 1 < bounds.size(); ++i) {
        const double a = bounds[i];
        const double b = bounds[i + 1];
        if (b - a <= 1e-12) continue;
        const double mid = 0.5 * (a + b);
        HamiltonianSpec spec;
        spec.eps_active = rf_off_at(mid) ? 0.0 : eps;
        spec.eta = eta;
        spec.delta = noise.value_at(mid);
        if (!sched.segments.empty() && sched.segments.back().spec == spec) {
            sched.segments.back().end = b;  // coalesce equal neighbours
        } else {
            sched.segments.push_back({a, b, spec});
        }
    }
    sched.validate();
    return sched;
}

const SpectralPropagator& PropagatorCache::get(const HamiltonianSpec& spec) {
    const auto key = std::make_tuple(spec.eps_active, spec.eta, spec.delta);
    auto it = cache_.find(key);
    if (it == cache_.end()) it = cache_.emplace(key, diagonalize(spec, basis_)).first;
    return it->second;
}

RunResult run(const JointState& s0, const Schedule& schedule, const RunOptions& opts,
              PropagatorCache& cache) {
    schedule.validate();
    if (!(opts.sample_dtau > 0.0)) throw ValidationError("run: sample_dtau must be > 0");
    if (!(s0.basis == cache.basis()))
        throw ValidationError("run: state and cache bases differ");
    if (std::abs(s0.tau - schedule.begin()) > 1e-9)
        throw ScheduleError("run: state tau does not match schedule start");

    const double h = opts.sample_dtau;
    const ObservableCache obs(s0.basis);

    RunResult result;
    result.samples.reserve(
        static_cast<std::size_t>((schedule.end() - schedule.begin()) / h) + 2);

    JointState state = s0;

    // records a sample and returns <H_segment> for the drift tracker
    auto emit = [&](const Eigen::VectorXcd& psi, double tau, const SpectralPropagator& prop) {
        JointState probe{psi, state.basis, tau};
        Sample smp;
        smp.tau = tau;
        const Observables o = expectations(probe, obs);
        smp.x = o.x;
        smp.p = o.p;
        smp.spin_x = o.spin.x;
        smp.spin_y = o.spin.y;
        smp.spin_z = o.spin.z;
        smp.spin_norm = o.spin.norm();
        smp.norm_error = norm_error(probe);
        smp.top_band = top_band_population(probe);
        const Eigen::VectorXcd u = apply_real_transposed(prop.eigenvectors, psi);
        smp.energy = (prop.eigenvalues.array() * u.array().abs2()).sum();

        auto& d = result.diagnostics;
        d.max_norm_error = std::max(d.max_norm_error, smp.norm_error);
        d.max_top_band = std::max(d.max_top_band, smp.top_band);
        d.min_spin_norm = std::min(d.min_spin_norm, smp.spin_norm);
        if (smp.top_band > opts.truncation_warn) d.truncation_warning = true;
        if (smp.top_band > opts.truncation_abort) {
            std::ostringstream msg;
            msg << "run: top-band population " << smp.top_band << " at tau = " << tau
                << " exceeds the abort threshold " << opts.truncation_abort;
            throw TruncationError(msg.str());
        }
        result.samples.push_back(smp);
        return smp.energy;
    };

    for (const auto& seg : schedule.segments) {
        const SpectralPropagator& prop = cache.get(seg.spec);
        Eigen::VectorXcd w = apply_real_transposed(prop.eigenvectors, state.amplitudes);

        double energy_ref = 0.0;
        bool have_ref = false;

        // global sampling grid restricted to [seg.begin, seg.end)
        long k = static_cast<long>(std::ceil(seg.begin / h - 1e-9));
        while (static_cast<double>(k) * h < seg.begin - 1e-9 * h) ++k;
        for (; static_cast<double>(k) * h < seg.end - 1e-9 * h; ++k) {
            const double t = static_cast<double>(k) * h;
            Eigen::VectorXcd wt = w;
            wt.array() *= phase_factors(prop.eigenvalues, t - seg.begin).array();
            const double e = emit(apply_real(prop.eigenvectors, wt), t, prop);
            if (!have_ref) {
                energy_ref = e;
                have_ref = true;
            } else {
                result.diagnostics.max_energy_drift = std::max(
                    result.diagnostics.max_energy_drift, std::abs(e - energy_ref));
            }
        }

        // advance exactly to the segment end
        w.array() *= phase_factors(prop.eigenvalues, seg.end - seg.begin).array();
        state.amplitudes = apply_real(prop.eigenvectors, w);
        state.tau = seg.end;
        result.diagnostics.max_norm_error =
            std::max(result.diagnostics.max_norm_error, norm_error(state));
    }

    if (opts.emit_final_sample)
        emit(state.amplitudes, state.tau, cache.get(schedule.segments.back().spec));

    result.final_state = std::move(state);
    return result;
}

} // namespace oscar
