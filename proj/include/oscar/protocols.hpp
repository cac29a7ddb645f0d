#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "oscar/analysis.hpp"
#include "oscar/evolve.hpp"

namespace oscar {

/// Periodic rf-off pulse train. An rf-off window of a quarter tip period
/// (duration pi/2) starting at a tip maximum acts as an effective pi/2
/// rotation of the spin away from the effective field; a half period
/// (duration pi) flips it. The driver re-locks each pulse start to the
/// nearest tip maximum (rf gating synchronous with the tip oscillation),
/// so realized cycle lengths track the period only on average.
struct PulseSequence {
    double period = 0.0;    ///< nominal tau_p between pulse starts
    double duration = 1.5707963267948966;  ///< rf-off length, pi/2 by default
    int count = 0;          ///< number of cycles; 0 degenerates to a plain run

    void validate() const;
};

enum class CollapseMode { none, fixed_interval, at_times };

/// Phenomenological collapse model: an instantaneous projective
/// measurement of the spin along the effective-field direction at the
/// current <x>, oscillator factor untouched. fixed_interval places one
/// event tau_coll after each pulse-cycle start; at_times uses an
/// explicit list of absolute times.
struct CollapsePolicy {
    CollapseMode mode = CollapseMode::none;
    double tau_coll = 0.0;
    std::vector<double> times;
};

struct CollapseEvent {
    double tau = 0.0;
    double p_aligned = 0.0;
    double p_anti = 0.0;
    SpinSense selected = SpinSense::aligned;
    bool jumped = false;  ///< outcome differs from the pre-event reference sense
};

/// Project the spin factor onto aligned/anti-aligned with the given
/// field, outcome drawn by the Born rule from the two branch norms.
/// `reference` is the sense the spin held before the event and decides
/// the kept/jumped classification.
std::pair<JointState, CollapseEvent> apply_collapse(const JointState& s,
                                                    const EffectiveField& field,
                                                    SpinSense reference,
                                                    std::mt19937_64& gen);

struct OscarSettings {
    double eps = 10.0;
    double eta = 0.3;
    double x0 = 13.0;
    double p0 = 0.0;
    double delta0 = 0.0;
    std::uint64_t seed = 1;
    int n_osc = 400;
    double sample_dtau = 0.015707963267948967;  ///< pi/200
    int half_periods = 20;
    SpinSense initial_sense = SpinSense::anti_aligned;
};

struct OscarResult {
    RunResult run;
    CrossingSeries crossings;
    FitResult deviation_fit;      ///< deviations vs half-period index
    double mean_abs_shift = 0.0;  ///< mean |dtau_j - pi| / pi
    Schedule schedule;
};

/// Plain OSCAR run: coherent tip at (x0, p0), spin (anti)aligned with
/// the effective field at x0, telegraph noise of amplitude delta0,
/// crossing analysis of <x(tau)>.
OscarResult run_oscar(const OscarSettings& s, PropagatorCache* shared_cache = nullptr);

struct PulseDiagnostic {
    double tau_begin = 0.0;
    double tau_end = 0.0;
    /// cos of the angle between <S> and the effective field right after
    /// the window (rf back on); ~0 for an effective pi/2 pulse, ~-1 for pi.
    double alignment_cos_after = 0.0;
    double alignment_cos_before = 0.0;
    double x_before = 0.0;  ///< <x> at the window start (locked to a tip maximum)
    double p_before = 0.0;
    double spin_norm_after = 0.0;
};

struct InterruptedSettings {
    OscarSettings base;  ///< initial_sense defaults to aligned for this protocol
    PulseSequence pulses;
    CollapsePolicy policy;

    InterruptedSettings() { base.initial_sense = SpinSense::aligned; }
};

struct InterruptedResult {
    RunResult run;
    CrossingSeries crossings;
    std::vector<PulseDiagnostic> pulses;
    std::vector<CollapseEvent> collapses;
    /// Shift estimator for the collapse-time inversion: mean |shift| per
    /// half-period with collapse-straddling intervals imputed at half the
    /// steady post-collapse value (their expected content).
    double mean_abs_shift = 0.0;
    /// Steady single-branch |shift| measured on intervals between a
    /// collapse and the next pulse; the self-calibrated reference.
    double steady_shift = 0.0;
    double raw_mean_abs_shift = 0.0;  ///< plain mean |dtau_j - pi|/pi, diagnostic
    /// Realized mean cycle length; pulses re-lock to the tip phase, so
    /// this differs from the nominal period by up to half a period.
    double measured_tau_p = 0.0;
    Schedule schedule;
};

/// Interrupted OSCAR: rf switched off for `duration` at the start of
/// each cycle, collapse events per policy, crossing analysis over the
/// full horizon of count * period.
InterruptedResult run_interrupted_oscar(const InterruptedSettings& s,
                                        PropagatorCache* shared_cache = nullptr);

struct CollapseInversion {
    double tau_coll = 0.0;
    bool clamped = false;  ///< measured ratio fell outside [0, 1] and was clamped
};

/// Invert mean = dw0 * (tau_p - tau_coll)/tau_p for the collapse time.
CollapseInversion invert_collapse_time(double mean_shift_value, double dw0, double tau_p);

} // namespace oscar
