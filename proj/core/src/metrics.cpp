#include "ettrap/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ettrap/errors.hpp"

namespace ettrap {

namespace {

double negativity(double p0, double x) { return std::log2(1.0 - p0 + std::sqrt(p0 * p0 + 4.0 * x)); }

double ground_population(const Trajectory& traj, std::size_t k) {
  return std::clamp(1.0 - traj.chain_population(k), 0.0, 1.0);
}

}  // namespace

double l1_coherence(const Eigen::MatrixXcd& rho) {
  return rho.cwiseAbs().sum() - rho.diagonal().cwiseAbs().sum();
}

double log_negativity_cut(const Eigen::MatrixXcd& rho, double p0, int k) {
  const int n = static_cast<int>(rho.rows());
  if (k < 1 || k >= n) throw std::out_of_range("cut position must lie in [1, N-1]");
  if (!(p0 >= -1e-12 && p0 <= 1.0 + 1e-12)) throw std::invalid_argument("ground population must lie in [0, 1]");
  const double x = rho.topRightCorner(k, n - k).cwiseAbs2().sum();
  return std::max(0.0, negativity(std::clamp(p0, 0.0, 1.0), x));
}

double total_entanglement(const Eigen::MatrixXcd& rho, double p0, Bipartitions which) {
  const int n = static_cast<int>(rho.rows());
  double total = 0.0;
  if (which == Bipartitions::Contiguous) {
    for (int k = 1; k < n; ++k) total += log_negativity_cut(rho, p0, k);
    return total;
  }
  if (n > 24) throw std::invalid_argument("all-subset bipartitions limited to N <= 24");
  const Eigen::MatrixXd w = rho.cwiseAbs2();
  const double p = std::clamp(p0, 0.0, 1.0);
  // site 0 always sits in block A; the mask selects the other members of A
  const unsigned long count = 1ul << (n - 1);
  for (unsigned long mask = 0; mask + 1 < count; ++mask) {
    const unsigned long members = (mask << 1) | 1ul;
    double x = 0.0;
    for (int i = 0; i < n; ++i) {
      if (!((members >> i) & 1ul)) continue;
      for (int j = 0; j < n; ++j)
        if (!((members >> j) & 1ul)) x += w(i, j);
    }
    total += std::max(0.0, negativity(p, x));
  }
  return total;
}

void ScalarSeries::validate() const {
  if (times.size() != values.size()) throw std::invalid_argument("series times and values differ in length");
  for (std::size_t k = 1; k < times.size(); ++k)
    if (!(times[k] > times[k - 1])) throw std::invalid_argument("series times must be strictly increasing");
}

ScalarSeries coherence_series(const Trajectory& traj) {
  ScalarSeries s;
  s.times = traj.times;
  s.values.reserve(traj.samples());
  for (std::size_t k = 0; k < traj.samples(); ++k) s.values.push_back(l1_coherence(traj.density(k)));
  return s;
}

ScalarSeries entanglement_series(const Trajectory& traj, Bipartitions which) {
  ScalarSeries s;
  s.times = traj.times;
  s.values.reserve(traj.samples());
  for (std::size_t k = 0; k < traj.samples(); ++k)
    s.values.push_back(traj.sites() < 2 ? 0.0 : total_entanglement(traj.density(k), ground_population(traj, k), which));
  return s;
}

double time_average(const ScalarSeries& series, double horizon) {
  series.validate();
  const auto& t = series.times;
  const auto& v = series.values;
  if (t.size() < 2) throw std::invalid_argument("time average needs at least two samples");
  if (!(horizon > t.front()) || horizon > t.back() + 1e-12)
    throw std::out_of_range("time-average horizon outside the series");
  double area = 0.0;
  for (std::size_t k = 1; k < t.size() && t[k - 1] < horizon; ++k) {
    if (t[k] <= horizon) {
      area += 0.5 * (t[k] - t[k - 1]) * (v[k] + v[k - 1]);
    } else {
      const double w = (horizon - t[k - 1]) / (t[k] - t[k - 1]);
      area += 0.5 * (horizon - t[k - 1]) * (v[k - 1] + (1.0 - w) * v[k - 1] + w * v[k]);
    }
  }
  return area / (horizon - t.front());
}

DecayFit fit_decay_time(const ScalarSeries& series) {
  series.validate();
  const auto& t = series.times;
  const auto& v = series.values;
  const std::size_t n = v.size();
  if (n < 3) throw NumericalError("decay fit needs at least three samples");
  const double vmax = *std::max_element(v.begin(), v.end());
  const double floor = 1e-12 * vmax;

  std::vector<std::size_t> env;
  for (std::size_t k = 1; k + 1 < n; ++k)
    if (v[k] > v[k - 1] && v[k] >= v[k + 1] && v[k] > floor) env.push_back(k);
  if (env.size() < 3) {
    env.clear();
    const std::size_t peak = static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
    for (std::size_t k = peak; k < n; ++k)
      if (v[k] > floor) env.push_back(k);
  }
  if (env.size() < 3) throw NumericalError("fewer than three positive envelope points for the decay fit");

  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  const double m = static_cast<double>(env.size());
  for (const std::size_t k : env) {
    const double y = std::log(v[k]);
    sx += t[k];
    sy += y;
    sxx += t[k] * t[k];
    sxy += t[k] * y;
  }
  const double denom = m * sxx - sx * sx;
  if (!(denom > 0.0)) throw NumericalError("degenerate time points in decay fit");
  const double slope = (m * sxy - sx * sy) / denom;
  const double intercept = (sy - slope * sx) / m;
  if (!(slope < 0.0)) throw NumericalError("envelope does not decay");
  double ss_res = 0.0, ss_tot = 0.0;
  const double mean = sy / m;
  for (const std::size_t k : env) {
    const double y = std::log(v[k]);
    ss_res += std::pow(y - (intercept + slope * t[k]), 2);
    ss_tot += std::pow(y - mean, 2);
  }
  DecayFit fit;
  fit.tau = -1.0 / slope;
  fit.r_squared = ss_tot > 0.0 ? std::clamp(1.0 - ss_res / ss_tot, 0.0, 1.0) : 1.0;
  fit.points = static_cast<int>(env.size());
  return fit;
}

}  // namespace ettrap
