#pragma once

#include <string>
#include <vector>

#include "oscar/analysis.hpp"
#include "oscar/evolve.hpp"
#include "oscar/quasiclassical.hpp"

namespace oscar {

/// Shortest round-trip-exact decimal form (17 significant digits).
std::string format_full(double v);

void write_timeseries_csv(const std::string& path, const std::vector<Sample>& samples);

/// Columns j, dtau, deviation, delta_omega (signed); header-only file for
/// an empty series.
void write_crossings_csv(const std::string& path, const CrossingSeries& c);

/// Amplitude snapshot, columns n, re_u_alpha, im_u_alpha, re_u_beta, im_u_beta.
void write_state_csv(const std::string& path, const JointState& s);

/// Sparse entry dump i, j, re, im of any operator matrix.
void write_operator_csv(const std::string& path, const Eigen::MatrixXcd& op);
void write_operator_csv(const std::string& path, const Eigen::MatrixXd& op);

std::string format_estimate_table(const EstimateReport& r);
void write_estimate_csv(const std::string& path, const EstimateReport& r);

/// FNV-1a hash over the canonical segment list, for the run manifest.
std::string schedule_digest(const Schedule& sched);

void write_text(const std::string& path, const std::string& content);

} // namespace oscar
