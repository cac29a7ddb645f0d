#include "oscar/protocols.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "oscar/rng.hpp"

namespace oscar {

namespace {

constexpr double pi = std::numbers::pi;

// rng stream indices under the run's master seed
constexpr std::uint64_t kNoiseStream = 0;
constexpr std::uint64_t kCollapseStream = 1;

double noise_tau_R(const OscarSettings& s) {
    if (s.eps > 0.0) return 2.0 * pi / s.eps;
    if (s.delta0 > 0.0)
        throw ValidationError("telegraph noise needs eps > 0 to set the Rabi period");
    return 1.0;  // placeholder, noise has zero amplitude
}

JointState initial_state(const OscarSettings& s, const BasisSpec& basis) {
    const EffectiveField f0 = effective_field(s.eps, s.eta, s.x0);
    return product_state(coherent_state(s.x0, s.p0, basis),
                         spin_state_along(f0, s.initial_sense), basis);
}

std::pair<std::vector<double>, std::vector<double>> tau_x_of(const std::vector<Sample>& samples) {
    std::vector<double> tau, x;
    tau.reserve(samples.size());
    x.reserve(samples.size());
    for (const auto& s : samples) {
        tau.push_back(s.tau);
        x.push_back(s.x);
    }
    return {std::move(tau), std::move(x)};
}

void merge_diagnostics(RunDiagnostics& into, const RunDiagnostics& part) {
    into.max_norm_error = std::max(into.max_norm_error, part.max_norm_error);
    into.max_energy_drift = std::max(into.max_energy_drift, part.max_energy_drift);
    into.max_top_band = std::max(into.max_top_band, part.max_top_band);
    into.min_spin_norm = std::min(into.min_spin_norm, part.min_spin_norm);
    into.truncation_warning = into.truncation_warning || part.truncation_warning;
}

} // namespace

void PulseSequence::validate() const {
    if (count < 0) throw ValidationError("PulseSequence: count must be >= 0");
    if (count == 0) return;  // degenerate sequence, period/duration unused
    if (!(duration > 0.0)) throw ValidationError("PulseSequence: duration must be > 0");
    if (!(period > duration))
        throw ValidationError("PulseSequence: period must exceed the pulse duration");
}

std::pair<JointState, CollapseEvent> apply_collapse(const JointState& s,
                                                    const EffectiveField& field,
                                                    SpinSense reference,
                                                    std::mt19937_64& gen) {
    const Eigen::Vector2cd chi_al = spin_state_along(field, SpinSense::aligned);
    const Eigen::Vector2cd chi_anti = spin_state_along(field, SpinSense::anti_aligned);

    Eigen::VectorXcd branch_al(s.amplitudes.size());
    Eigen::VectorXcd branch_anti(s.amplitudes.size());
    for (int n = 0; n < s.basis.n_osc; ++n) {
        const auto ua = s.amplitudes(joint_index(n, 0));
        const auto ub = s.amplitudes(joint_index(n, 1));
        const auto ca = std::conj(chi_al(0)) * ua + std::conj(chi_al(1)) * ub;
        const auto cb = std::conj(chi_anti(0)) * ua + std::conj(chi_anti(1)) * ub;
        branch_al(joint_index(n, 0)) = ca * chi_al(0);
        branch_al(joint_index(n, 1)) = ca * chi_al(1);
        branch_anti(joint_index(n, 0)) = cb * chi_anti(0);
        branch_anti(joint_index(n, 1)) = cb * chi_anti(1);
    }

    CollapseEvent ev;
    ev.tau = s.tau;
    ev.p_aligned = branch_al.squaredNorm();
    ev.p_anti = branch_anti.squaredNorm();

    const double u = uniform_unit(gen) * (ev.p_aligned + ev.p_anti);
    ev.selected = (u < ev.p_aligned) ? SpinSense::aligned : SpinSense::anti_aligned;
    ev.jumped = (ev.selected != reference);

    JointState out;
    out.basis = s.basis;
    out.tau = s.tau;
    out.amplitudes = (ev.selected == SpinSense::aligned) ? branch_al : branch_anti;
    const double nrm = out.amplitudes.norm();
    if (!(nrm > 0.0)) throw Error("apply_collapse: selected branch has zero norm");
    out.amplitudes /= nrm;
    return {std::move(out), ev};
}

OscarResult run_oscar(const OscarSettings& s, PropagatorCache* shared_cache) {
    const BasisSpec basis{s.n_osc};
    basis.validate();
    if (s.half_periods < 1) throw ValidationError("run_oscar: half_periods must be >= 1");
    const double tau_end = s.half_periods * pi;

    const NoiseRealization noise =
        sample_noise(derive_seed(s.seed, kNoiseStream), s.delta0, noise_tau_R(s), tau_end);
    const Schedule schedule = make_schedule(noise, s.eps, s.eta, tau_end);

    PropagatorCache local(basis);
    PropagatorCache& cache = shared_cache ? *shared_cache : local;

    RunOptions opts;
    opts.sample_dtau = s.sample_dtau;

    OscarResult result;
    result.schedule = schedule;
    result.run = run(initial_state(s, basis), schedule, opts, cache);
    auto [tau, x] = tau_x_of(result.run.samples);
    result.crossings = find_crossings(tau, x);
    result.deviation_fit = fit_deviations(result.crossings);
    result.mean_abs_shift = mean_abs_shift(result.crossings);
    return result;
}

namespace {

// Shared bookkeeping for the interrupted-OSCAR event loop.
struct ProtocolDriver {
    const InterruptedSettings& s;
    const BasisSpec basis;
    PropagatorCache& cache;
    const ObservableCache obs;
    Schedule master;  // noise segments with rf on; rf-off windows applied per chunk
    RunOptions opts;
    std::mt19937_64 collapse_gen;

    JointState state;
    SpinSense sense;
    InterruptedResult result;
    std::vector<double> pending_collapses;  // absolute times, sorted
    std::vector<double> applied_collapses;
    std::vector<double> pulse_starts;

    ProtocolDriver(const InterruptedSettings& settings, PropagatorCache& c, double horizon)
        : s(settings),
          basis{settings.base.n_osc},
          cache(c),
          obs(basis),
          collapse_gen(derive_seed(settings.base.seed, kCollapseStream)) {
        const NoiseRealization noise =
            sample_noise(derive_seed(s.base.seed, kNoiseStream), s.base.delta0,
                         noise_tau_R(s.base), horizon);
        master = make_schedule(noise, s.base.eps, s.base.eta, horizon);
        opts.sample_dtau = s.base.sample_dtau;
        opts.emit_final_sample = false;
        state = initial_state(s.base, basis);
        sense = s.base.initial_sense;
    }

    void propagate(double a, double b, bool rf_off) {
        if (b - a <= 1e-12) return;
        Schedule chunk = master.slice(a, b);
        if (rf_off)
            for (auto& seg : chunk.segments) seg.spec.eps_active = 0.0;
        RunResult part = run(state, chunk, opts, cache);
        state = std::move(part.final_state);
        merge_diagnostics(result.run.diagnostics, part.diagnostics);
        result.run.samples.insert(result.run.samples.end(),
                                  std::make_move_iterator(part.samples.begin()),
                                  std::make_move_iterator(part.samples.end()));
    }

    void collapse_now() {
        const Observables o = expectations(state, obs);
        auto [post, ev] =
            apply_collapse(state, effective_field(s.base.eps, s.base.eta, o.x), sense,
                           collapse_gen);
        state = std::move(post);
        sense = ev.selected;
        result.collapses.push_back(ev);
        applied_collapses.push_back(ev.tau);
    }

    // rf-on advance applying any pending collapse events inside (a, b]
    void advance(double a, double b) {
        double t = a;
        while (!pending_collapses.empty() && pending_collapses.front() <= b + 1e-12) {
            const double c = pending_collapses.front();
            pending_collapses.erase(pending_collapses.begin());
            propagate(t, c, false);
            collapse_now();
            t = c;
        }
        propagate(t, b, false);
    }

    static double alignment_cos(const Observables& o, const EffectiveField& f) {
        const double fmag = f.norm();
        const double smag = o.spin.norm();
        return (fmag > 0.0 && smag > 0.0)
                   ? (o.spin.x * f.Bx + o.spin.z * f.Bz) / (fmag * smag)
                   : 0.0;
    }

    void rf_off_window(double a, double b) {
        if (!pending_collapses.empty() && pending_collapses.front() < b - 1e-12)
            throw ScheduleError(
                "run_interrupted_oscar: collapse time falls inside an rf-off window");
        PulseDiagnostic pd;
        pd.tau_begin = a;
        pd.tau_end = b;
        {
            const Observables o = expectations(state, obs);
            pd.x_before = o.x;
            pd.p_before = o.p;
            pd.alignment_cos_before =
                alignment_cos(o, effective_field(s.base.eps, s.base.eta, o.x));
        }
        propagate(a, b, true);
        const Observables o = expectations(state, obs);
        pd.alignment_cos_after = alignment_cos(o, effective_field(s.base.eps, s.base.eta, o.x));
        pd.spin_norm_after = o.spin.norm();
        result.pulses.push_back(pd);
    }

    /// Predicted spin/field alignment cosine after an rf-off window of
    /// the given duration when the window starts at phase d past a tip
    /// maximum of amplitude amp. Quasiclassical: the spin keeps its polar
    /// angle about z and precesses azimuthally by the integral of 2*eta*x;
    /// the transverse component additionally shrinks by the overlap of
    /// the two spin-conditional wavepackets, which the window displaces
    /// into wells at -/+ eta.
    double predicted_alignment(double d, double amp, double duration) const {
        const double eps = s.base.eps;
        const double eta = s.base.eta;
        const double bz0 = 2.0 * eta * amp * std::cos(d);
        const double b0 = std::hypot(eps, bz0);
        const double n0x = eps / b0;
        const double n0z = bz0 / b0;
        const double phi = 2.0 * eta * amp * (std::sin(d + duration) - std::sin(d));
        const double coherence = std::exp(-2.0 * eta * eta * (1.0 - std::cos(duration)));
        const double n1x = coherence * n0x * std::cos(phi);
        const double bzE = 2.0 * eta * amp * std::cos(d + duration);
        const double bE = std::hypot(eps, bzE);
        return (n1x * eps + n0z * bzE) / bE;
    }

    /// Gate phase (past the tip maximum) at which the predicted
    /// post-window alignment vanishes; the root nearest the maximum.
    /// Falls back to the maximum itself when no root exists in the scan
    /// (a pi window, for instance, cannot be made perpendicular).
    double calibrated_gate_phase(double amp) const {
        double best = 0.0;
        bool found = false;
        const double span = 0.75;
        const double step = 0.01;
        double prev_d = -span;
        double prev_f = predicted_alignment(prev_d, amp, s.pulses.duration);
        for (double d = -span + step; d <= span + 1e-12; d += step) {
            const double f = predicted_alignment(d, amp, s.pulses.duration);
            if (prev_f == 0.0 || prev_f * f < 0.0) {
                double lo = prev_d, hi = d, flo = prev_f;
                for (int it = 0; it < 60; ++it) {
                    const double m = 0.5 * (lo + hi);
                    const double fm = predicted_alignment(m, amp, s.pulses.duration);
                    if (flo * fm <= 0.0) {
                        hi = m;
                    } else {
                        lo = m;
                        flo = fm;
                    }
                }
                const double root = 0.5 * (lo + hi);
                if (!found || std::abs(root) < std::abs(best)) best = root;
                found = true;
            }
            prev_d = d;
            prev_f = f;
        }
        return found ? best : 0.0;
    }

    /// Advance until the tip phase sits on the calibrated gate phase and
    /// return that time. The dressed oscillation rate differs from 1 by
    /// the frequency shift, so a single long extrapolation of the phase
    /// misses by up to ~0.05 rad, which the window winding amplifies;
    /// instead approach the target through shrinking guard offsets,
    /// re-measuring amplitude and phase at each leg.
    double settle_to_pulse_start() {
        const double guards[] = {0.3, 0.05, 0.0};
        for (double guard : guards) {
            const Observables o = expectations(state, obs);
            const double amp = std::hypot(o.x, o.p);
            double theta = std::atan2(-o.p, o.x);
            if (theta < 0.0) theta += 2.0 * pi;
            const double target = calibrated_gate_phase(amp) - guard;
            double dt = std::fmod(target - theta, 2.0 * pi);
            if (dt < 0.0) dt += 2.0 * pi;
            // just past the target: accept the small miss rather than
            // waiting out a whole extra period
            if (guard < 0.3 && dt > pi) continue;
            advance(state.tau, state.tau + dt);
        }
        return state.tau;
    }
};

} // namespace

InterruptedResult run_interrupted_oscar(const InterruptedSettings& s,
                                        PropagatorCache* shared_cache) {
    const OscarSettings& base = s.base;
    const BasisSpec basis{base.n_osc};
    basis.validate();
    s.pulses.validate();
    if (!(base.eps > 0.0))
        throw ValidationError("run_interrupted_oscar: eps must be > 0 (rf on outside pulses)");

    const double tau_p = s.pulses.period;
    const int count = s.pulses.count;

    if (s.policy.mode == CollapseMode::fixed_interval && count > 0) {
        if (!(s.policy.tau_coll > s.pulses.duration))
            throw ScheduleError(
                "run_interrupted_oscar: tau_coll must exceed the pulse duration "
                "(collapse would land inside the rf-off window)");
        if (!(s.policy.tau_coll < tau_p))
            throw ScheduleError("run_interrupted_oscar: tau_coll must be below tau_p");
    }

    // pulses are re-locked to the tip phase, so cycles can stretch by up
    // to a half-period each; sample the noise over a safe horizon
    const double horizon = count > 0 ? count * (tau_p + pi) + 4.0 * pi
                                     : base.half_periods * pi;

    PropagatorCache local(basis);
    PropagatorCache& cache = shared_cache ? *shared_cache : local;
    ProtocolDriver drv(s, cache, horizon);
    drv.result.schedule = drv.master;

    if (s.policy.mode == CollapseMode::at_times) {
        drv.pending_collapses = s.policy.times;
        std::sort(drv.pending_collapses.begin(), drv.pending_collapses.end());
        for (double t : drv.pending_collapses)
            if (!(t > 0.0 && t < horizon))
                throw ScheduleError("run_interrupted_oscar: collapse time outside the run");
    }

    double tau_end;
    if (count == 0) {
        tau_end = base.half_periods * pi;
        drv.advance(0.0, tau_end);
    } else {
        // each cycle: rf-off pulse at a tip maximum, collapse tau_coll after
        // the cycle start, then re-lock the next pulse to the tip phase
        double T = 0.0;
        for (int k = 0; k < count; ++k) {
            drv.pulse_starts.push_back(T);
            if (s.policy.mode == CollapseMode::fixed_interval) {
                drv.pending_collapses.push_back(T + s.policy.tau_coll);
                std::sort(drv.pending_collapses.begin(), drv.pending_collapses.end());
            }
            drv.rf_off_window(T, T + s.pulses.duration);
            const double probe = std::max(T + s.pulses.duration, T + tau_p - pi);
            drv.advance(T + s.pulses.duration, probe);
            T = drv.settle_to_pulse_start();
        }
        tau_end = T;
    }

    InterruptedResult result = std::move(drv.result);
    result.run.final_state = std::move(drv.state);
    result.measured_tau_p = count > 0 ? tau_end / count : 0.0;

    auto [tau, x] = tau_x_of(result.run.samples);
    result.crossings = find_crossings(tau, x);
    result.raw_mean_abs_shift = mean_abs_shift(result.crossings);

    // classify crossing intervals against the event timeline: collapse
    // events and pulse starts both carry a timing discontinuity (the
    // selected branch's accumulated phase, the re-lock to the tip phase),
    // so intervals containing one are imputed from the steady shift and
    // their time overlap with the shifted regime instead of measured
    const auto& cr = result.crossings.crossings;
    const std::size_t n_int = result.crossings.intervals();
    const std::vector<double>& collapses = drv.applied_collapses;
    std::vector<double> pulse_bounds = drv.pulse_starts;
    pulse_bounds.push_back(tau_end);

    std::vector<std::pair<double, double>> shifted_windows;
    for (double c : collapses) {
        auto np = std::upper_bound(pulse_bounds.begin(), pulse_bounds.end(), c);
        shifted_windows.emplace_back(c, np == pulse_bounds.end() ? tau_end : *np);
    }
    auto shifted_overlap = [&](double a, double b) {
        double acc = 0.0;
        for (const auto& [wa, wb] : shifted_windows)
            acc += std::max(0.0, std::min(b, wb) - std::max(a, wa));
        return acc;
    };

    std::vector<double> events = collapses;
    for (double t : drv.pulse_starts)
        if (t > 0.0) events.push_back(t);
    std::sort(events.begin(), events.end());

    std::vector<bool> straddles(n_int, false);
    std::vector<bool> steady(n_int, false);
    for (std::size_t j = 0; j < n_int; ++j) {
        const double a = cr[j];
        const double b = cr[j + 1];
        for (double t : events)
            if (t > a && t <= b) straddles[j] = true;
        if (straddles[j]) continue;
        if (shifted_overlap(a, b) >= (b - a) - 1e-9) steady[j] = true;
    }

    double steady_sum = 0.0;
    std::size_t steady_n = 0;
    for (std::size_t j = 0; j < n_int; ++j)
        if (steady[j]) {
            steady_sum += result.crossings.deviations[j];
            ++steady_n;
        }
    const double steady_dev = steady_n > 0 ? steady_sum / steady_n : 0.0;
    result.steady_shift = steady_n > 0 ? steady_dev / pi : result.raw_mean_abs_shift;

    if (events.empty()) {
        result.mean_abs_shift = result.raw_mean_abs_shift;
    } else {
        double acc = 0.0;
        for (std::size_t j = 0; j < n_int; ++j) {
            const double a = cr[j];
            const double b = cr[j + 1];
            acc += straddles[j] ? steady_dev * shifted_overlap(a, b) / (b - a)
                                : result.crossings.deviations[j];
        }
        result.mean_abs_shift = acc / (pi * static_cast<double>(n_int));
    }
    return result;
}

CollapseInversion invert_collapse_time(double mean_shift_value, double dw0, double tau_p) {
    if (!(dw0 > 0.0)) throw ValidationError("invert_collapse_time: dw0 must be > 0");
    if (!(tau_p > 0.0)) throw ValidationError("invert_collapse_time: tau_p must be > 0");
    double ratio = mean_shift_value / dw0;
    CollapseInversion inv;
    if (ratio < 0.0 || ratio > 1.0) {
        inv.clamped = true;
        ratio = std::clamp(ratio, 0.0, 1.0);
    }
    inv.tau_coll = tau_p * (1.0 - ratio);
    return inv;
}

} // namespace oscar
