#pragma once

#include <Eigen/Dense>
#include <vector>

#include "ettrap/dynamics.hpp"

namespace ettrap {

/// Sum of |rho_ij| over i != j, site basis.
double l1_coherence(const Eigen::MatrixXcd& rho);

/// log2(1 - p0 + sqrt(p0^2 + 4X)), X = sum_{i<=k<j} |rho_ij|^2, for the cut
/// (1..k | k+1..N), k 1-based in [1, N-1]. Throws std::out_of_range.
double log_negativity_cut(const Eigen::MatrixXcd& rho, double p0, int k);

enum class Bipartitions {
  Contiguous,  ///< the N - 1 cuts (1..k | k+1..N)
  AllSubsets,  ///< all 2^(N-1) - 1 two-block set partitions
};

double total_entanglement(const Eigen::MatrixXcd& rho, double p0,
                          Bipartitions which = Bipartitions::Contiguous);

struct ScalarSeries {
  std::vector<double> times;
  std::vector<double> values;

  void validate() const;
};

ScalarSeries coherence_series(const Trajectory& traj);
ScalarSeries entanglement_series(const Trajectory& traj, Bipartitions which = Bipartitions::Contiguous);

/// (1/t) int_0^t f dt' by the trapezoid rule; t must lie inside the series.
double time_average(const ScalarSeries& series, double horizon);

struct DecayFit {
  double tau = 0.0;
  double r_squared = 0.0;
  int points = 0;  ///< envelope points used
};

/// Exponential fit to the upper envelope. With at least three interior local maxima
/// the envelope is those maxima; otherwise it is the segment after the global
/// maximum. Non-positive values are dropped; fewer than three remaining points or a
/// non-decaying envelope raise NumericalError.
DecayFit fit_decay_time(const ScalarSeries& series);

}  // namespace ettrap
