#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ettrap/dynamics.hpp"

namespace ettrap {

std::vector<double> TimeGrid::samples() const {
  validate();
  std::vector<double> t(static_cast<std::size_t>(n_steps) + 1);
  for (int k = 0; k <= n_steps; ++k) t[static_cast<std::size_t>(k)] = t_max * k / n_steps;
  return t;
}

void TimeGrid::validate() const {
  if (!(t_max > 0.0) || !std::isfinite(t_max)) throw std::invalid_argument("t_max must be > 0");
  if (n_steps < 1) throw std::invalid_argument("time grid needs at least one step");
  if (!(rtol > 0.0) || !(atol > 0.0)) throw std::invalid_argument("integration tolerances must be > 0");
}

int Trajectory::sites() const {
  if (mode == Mode::Pure) return amplitudes.empty() ? 0 : static_cast<int>(amplitudes.front().size());
  return densities.empty() ? 0 : static_cast<int>(densities.front().rows());
}

Eigen::MatrixXcd Trajectory::density(std::size_t k) const {
  if (mode == Mode::Pure) return amplitudes.at(k) * amplitudes.at(k).adjoint();
  return densities.at(k);
}

double Trajectory::chain_population(std::size_t k) const {
  if (mode == Mode::Pure) return amplitudes.at(k).squaredNorm();
  return densities.at(k).trace().real();
}

double Trajectory::site_population(std::size_t k, int site) const {
  if (mode == Mode::Pure) return std::norm(amplitudes.at(k)[site]);
  return densities.at(k)(site, site).real();
}

double Trajectory::ledger_error(std::size_t k) const {
  return std::abs(chain_population(k) + trap_pop.at(k) + vacuum_pop.at(k) - 1.0);
}

double trap_efficiency(const Trajectory& traj, double at_time) {
  const auto& t = traj.times;
  if (t.empty()) throw std::invalid_argument("empty trajectory");
  if (!(at_time >= t.front() - 1e-12 && at_time <= t.back() + 1e-12))
    throw std::out_of_range("efficiency time outside the trajectory grid");
  if (at_time >= t.back()) return traj.trap_pop.back();
  const auto it = std::upper_bound(t.begin(), t.end(), at_time);
  if (it == t.begin()) return traj.trap_pop.front();
  const std::size_t k = static_cast<std::size_t>(it - t.begin());
  const double w = (at_time - t[k - 1]) / (t[k] - t[k - 1]);
  return (1.0 - w) * traj.trap_pop[k - 1] + w * traj.trap_pop[k];
}

ModeSet chain_eigenbasis(const EffectiveHamiltonian& h) {
  return eigendecompose(with_trap(with_detuning(h, 0.0), 0.0));
}

Eigen::VectorXd mean_residence_time(const Trajectory& traj, const ModeSet& modes, double up_to) {
  const int n = traj.sites();
  if (modes.vectors.rows() != n) throw std::invalid_argument("mode basis and trajectory dimensions differ");
  const auto& t = traj.times;
  if (t.empty() || up_to < t.front() || up_to > t.back() + 1e-12)
    throw std::out_of_range("residence-time horizon outside the trajectory grid");
  const int m = modes.size();
  auto weights = [&](std::size_t k) {
    Eigen::VectorXd w(m);
    if (traj.mode == Trajectory::Mode::Pure) {
      for (int q = 0; q < m; ++q) w[q] = std::norm(modes.vectors.col(q).dot(traj.amplitudes[k]));
    } else {
      for (int q = 0; q < m; ++q)
        w[q] = modes.vectors.col(q).dot(traj.densities[k] * modes.vectors.col(q)).real();
    }
    return w;
  };
  Eigen::VectorXd tau = Eigen::VectorXd::Zero(m);
  Eigen::VectorXd prev = weights(0);
  for (std::size_t k = 1; k < t.size() && t[k - 1] < up_to; ++k) {
    const Eigen::VectorXd cur = weights(k);
    if (t[k] <= up_to) {
      tau += 0.5 * (t[k] - t[k - 1]) * (prev + cur);
    } else {
      const double w = (up_to - t[k - 1]) / (t[k] - t[k - 1]);
      const Eigen::VectorXd mid = (1.0 - w) * prev + w * cur;
      tau += 0.5 * (up_to - t[k - 1]) * (prev + mid);
    }
    prev = cur;
  }
  return tau.cwiseMax(0.0);
}

}  // namespace ettrap
