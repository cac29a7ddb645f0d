#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <tuple>
#include <vector>

#include <Eigen/Dense>

#include "oscar/states.hpp"

namespace oscar {

/// Cached eigendecomposition of one segment Hamiltonian. Propagation
/// between kicks is exact: psi(t+dt) = V exp(-i L dt) V^T psi(t).
struct SpectralPropagator {
    Eigen::VectorXd eigenvalues;
    Eigen::MatrixXd eigenvectors;
    HamiltonianSpec source;
    BasisSpec basis;
};

/// Full real-symmetric eigendecomposition of the segment Hamiltonian.
SpectralPropagator diagonalize(const HamiltonianSpec& h, const BasisSpec& b);

/// Exact propagation by dtau (any sign) under a fixed segment Hamiltonian.
JointState step(const JointState& s, const SpectralPropagator& prop, double dtau);

/// Seeded two-valued telegraph noise Delta(t) = +/- delta0. kick_times
/// are the switch instants; signs[k] is the sign on the k-th interval,
/// alternating deterministically from +1.
struct NoiseRealization {
    std::uint64_t seed = 0;
    double delta0 = 0.0;
    std::vector<double> kick_times;
    std::vector<int> signs;

    double value_at(double tau) const;
};

/// One inter-kick interval: uniform on (-3/4, 5/4) * tau_R with
/// non-positive draws rejected and redrawn, which keeps kick times
/// strictly increasing while preserving the positive part of the support.
double draw_kick_interval(std::mt19937_64& gen, double tau_R);

NoiseRealization sample_noise(std::uint64_t seed, double delta0, double tau_R,
                              double tau_end);

struct Segment {
    double begin = 0.0;
    double end = 0.0;
    HamiltonianSpec spec;
};

/// Contiguous, non-overlapping segment list covering [begin, end];
/// the Hamiltonian is constant inside each segment.
struct Schedule {
    std::vector<Segment> segments;

    double begin() const;
    double end() const;
    void validate() const;
    /// Sub-schedule covering [a, b] (segment pieces clipped to the window).
    Schedule slice(double a, double b) const;
};

/// Merge telegraph noise with optional rf-off windows into a schedule on
/// [0, tau_end]. Inside an rf-off window eps_active = 0; the gradient
/// coupling eta is geometric and stays on throughout.
Schedule make_schedule(const NoiseRealization& noise, double eps, double eta,
                       double tau_end,
                       const std::vector<std::pair<double, double>>& rf_off_windows = {});

/// Eigendecompositions keyed by (eps_active, eta, delta); a run touches
/// only a handful of distinct segment Hamiltonians, so each is
/// diagonalized once. Shareable across sequential runs with the same
/// basis; not synchronized, so parallel ensemble workers should each
/// own one.
class PropagatorCache {
  public:
    explicit PropagatorCache(const BasisSpec& b) : basis_(b) {}
    const SpectralPropagator& get(const HamiltonianSpec& spec);
    const BasisSpec& basis() const { return basis_; }
    std::size_t size() const { return cache_.size(); }

  private:
    BasisSpec basis_;
    std::map<std::tuple<double, double, double>, SpectralPropagator> cache_;
};

struct Sample {
    double tau = 0.0;
    double x = 0.0;
    double p = 0.0;
    double spin_x = 0.0;
    double spin_y = 0.0;
    double spin_z = 0.0;
    double spin_norm = 0.0;
    double norm_error = 0.0;
    double top_band = 0.0;
    double energy = 0.0;  ///< <H_segment>; diagnostics only, not part of the CSV contract
};

struct RunDiagnostics {
    double max_norm_error = 0.0;
    double max_energy_drift = 0.0;  ///< max in-segment spread of <H_segment>
    double max_top_band = 0.0;
    double min_spin_norm = 0.5;
    bool truncation_warning = false;
};

struct RunOptions {
    double sample_dtau = 0.015707963267948967;  ///< pi/200, 200 samples per half-period
    double truncation_warn = 1e-8;
    double truncation_abort = 1e-4;
    /// Emit a closing sample at the schedule end. Drivers that chain
    /// runs back-to-back turn this off so the sample grid stays uniform.
    bool emit_final_sample = true;
};

struct RunResult {
    std::vector<Sample> samples;
    RunDiagnostics diagnostics;
    JointState final_state;
};

/// Propagate segment by segment, emitting expectation samples on the
/// global grid k * sample_dtau. Escalates to TruncationError when the
/// top-band population exceeds the abort threshold.
RunResult run(const JointState& s0, const Schedule& schedule, const RunOptions& opts,
              PropagatorCache& cache);

} // namespace oscar
