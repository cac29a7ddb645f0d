#pragma once

#include <cstddef>
#include <vector>

#include "oscar/params.hpp"

namespace oscar {

/// Zero crossings of <x(tau)> and the derived per-half-period series:
/// dtau[j] = crossings[j+1] - crossings[j], deviations[j] = |dtau[j] - pi|,
/// omega[j] = pi/dtau[j].
struct CrossingSeries {
    std::vector<double> crossings;
    std::vector<double> dtau;
    std::vector<double> deviations;
    std::vector<double> omega;

    std::size_t intervals() const { return dtau.size(); }
};

/// Locate zero crossings of uniformly sampled data. Sign-change brackets
/// are refined with a local cubic through the four nearest samples, so
/// the crossing times are accurate to O(sample spacing^3). Crossings
/// closer than one sample spacing are merged (grazing-contact guard).
/// Throws AnalysisError when tau is not uniform/increasing, when fewer
/// than 4 samples are given, or when no crossing exists.
CrossingSeries find_crossings(const std::vector<double>& tau, const std::vector<double>& x);

/// Signed per-half-period frequency shifts delta_omega[j] = (pi - dtau[j])/pi;
/// positive when the interval is shorter than pi (frequency above 1).
std::vector<double> effective_shift_series(const CrossingSeries& c);

struct FitResult {
    double slope = 0.0;
    double intercept = 0.0;
    double residual_rms = 0.0;
};

/// Ordinary least squares y = intercept + slope * x.
FitResult linear_fit(const std::vector<double>& x, const std::vector<double>& y);

/// Fit of deviations[j] against the half-period index j = 1, 2, ...
/// restricted to [first, last); last = 0 means the whole series.
FitResult fit_deviations(const CrossingSeries& c, std::size_t first = 0,
                         std::size_t last = 0);

/// Arithmetic mean of the signed shifts over [first, last).
double mean_shift(const std::vector<double>& shifts, std::size_t first, std::size_t last);

/// Mean of |dtau[j] - pi|/pi over the whole series; the magnitude-style
/// shift observable used by the protocol drivers.
double mean_abs_shift(const CrossingSeries& c);

/// Effective spin reduction implied by a mean shift:
/// dS = (mean - dw0(m)) * sqrt(2 eta^2 x_m^2 + eps^2) / (2 eta^2),
/// zero when the measured mean equals the full quasiclassical shift.
double effective_spin_decrease(double mean_shift_value, const ModelParams& m);

} // namespace oscar
