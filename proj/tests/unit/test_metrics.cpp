#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <functional>
#include <random>
#include <stdexcept>

#include "ettrap/errors.hpp"
#include "ettrap/metrics.hpp"

using namespace ettrap;
using cd = std::complex<double>;

namespace {

Eigen::MatrixXcd projector(const Eigen::VectorXcd& v) { return v * v.adjoint(); }

// (|e1> + |e2>)/sqrt(2) written with exact entries 1/2.
Eigen::MatrixXcd bell_density() { return Eigen::MatrixXcd::Constant(2, 2, 0.5); }

Eigen::VectorXcd bell(int n) {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(n);
  v[0] = v[1] = 1.0 / std::sqrt(2.0);
  return v;
}

ScalarSeries sampled(double t_max, int n, const std::function<double(double)>& f) {
  ScalarSeries s;
  for (int k = 0; k <= n; ++k) {
    const double t = t_max * k / n;
    s.times.push_back(t);
    s.values.push_back(f(t));
  }
  return s;
}

}  // namespace

TEST(Metrics, CoherenceWorkedExamples) {
  Eigen::MatrixXcd diag = Eigen::MatrixXcd::Zero(3, 3);
  diag.diagonal() << 0.2, 0.3, 0.1;
  EXPECT_EQ(l1_coherence(diag), 0.0);
  EXPECT_NEAR(l1_coherence(projector(bell(2))), 1.0, 1e-15);
  // Uniform superposition over N sites: N(N-1)/N
  Eigen::VectorXcd u = Eigen::VectorXcd::Constant(5, 1.0 / std::sqrt(5.0));
  EXPECT_NEAR(l1_coherence(projector(u)), 4.0, 1e-14);
}

TEST(Metrics, NegativityWorkedExamples) {
  Eigen::VectorXcd e1 = Eigen::VectorXcd::Zero(4);
  e1[0] = 1.0;
  for (int k = 1; k < 4; ++k) EXPECT_EQ(log_negativity_cut(projector(e1), 0.0, k), 0.0);
  EXPECT_EQ(log_negativity_cut(bell_density(), 0.0, 1), 1.0);
  EXPECT_NEAR(log_negativity_cut(projector(bell(2)), 0.0, 1), 1.0, 1e-15);
  EXPECT_EQ(log_negativity_cut(Eigen::MatrixXcd::Zero(3, 3), 1.0, 1), 0.0);
}

TEST(Metrics, NegativityClosedForm) {
  // Direct evaluation for a mixed state with p0 = 0.4.
  Eigen::VectorXcd v(3);
  v << cd(0.5, 0.1), cd(-0.3, 0.4), cd(0.2, -0.2);
  v *= std::sqrt(0.6) / v.norm();
  const Eigen::MatrixXcd rho = projector(v);
  const double x1 = std::norm(rho(0, 1)) + std::norm(rho(0, 2));
  const double x2 = std::norm(rho(0, 2)) + std::norm(rho(1, 2));
  EXPECT_NEAR(log_negativity_cut(rho, 0.4, 1), std::log2(0.6 + std::sqrt(0.16 + 4 * x1)), 1e-14);
  EXPECT_NEAR(log_negativity_cut(rho, 0.4, 2), std::log2(0.6 + std::sqrt(0.16 + 4 * x2)), 1e-14);
  EXPECT_THROW(log_negativity_cut(rho, 0.4, 0), std::out_of_range);
  EXPECT_THROW(log_negativity_cut(rho, 0.4, 3), std::out_of_range);
}

TEST(Metrics, NegativityNonNegativeAndMonotoneInX) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 2 + trial % 6;
    Eigen::VectorXcd v(n);
    for (int i = 0; i < n; ++i) v[i] = cd(u(rng) - 0.5, u(rng) - 0.5);
    const double norm2 = u(rng);
    v *= std::sqrt(norm2) / v.norm();
    const Eigen::MatrixXcd rho = projector(v);
    for (int k = 1; k < n; ++k) EXPECT_GE(log_negativity_cut(rho, 1.0 - norm2, k), 0.0);
    // Scaling the off-diagonal cut block up increases X.
    Eigen::MatrixXcd more = rho;
    more.topRightCorner(1, n - 1) *= 1.1;
    more.bottomLeftCorner(n - 1, 1) *= 1.1;
    EXPECT_GE(log_negativity_cut(more, 1.0 - norm2, 1), log_negativity_cut(rho, 1.0 - norm2, 1));
  }
}

TEST(Metrics, TotalEntanglement) {
  EXPECT_EQ(total_entanglement(Eigen::MatrixXcd::Zero(4, 4), 1.0), 0.0);
  EXPECT_EQ(total_entanglement(bell_density(), 0.0), 1.0);
  EXPECT_EQ(total_entanglement(bell_density(), 0.0, Bipartitions::AllSubsets), 1.0);
  // Bell pair inside four sites: contiguous cut 1 separates the pair, the other two do not.
  EXPECT_NEAR(total_entanglement(projector(bell(4)), 0.0), 1.0, 1e-15);
  // Among the 7 two-block partitions of 4 sites, 4 separate sites 1 and 2.
  EXPECT_NEAR(total_entanglement(projector(bell(4)), 0.0, Bipartitions::AllSubsets), 4.0, 1e-15);
}

TEST(Metrics, TimeAverage) {
  const auto c = sampled(4.0, 40, [](double) { return 0.7; });
  EXPECT_NEAR(time_average(c, 4.0), 0.7, 1e-15);
  EXPECT_NEAR(time_average(c, 1.23), 0.7, 1e-15);
  const auto ramp = sampled(2.0, 20, [](double t) { return t / 2.0; });
  EXPECT_NEAR(time_average(ramp, 2.0), 0.5, 1e-14);
  EXPECT_NEAR(time_average(ramp, 1.05), 1.05 / 4.0, 1e-14);
  EXPECT_THROW(time_average(ramp, 2.5), std::out_of_range);
}

TEST(Metrics, SeriesValidation) {
  ScalarSeries bad;
  bad.times = {0.0, 1.0, 1.0};
  bad.values = {1.0, 0.5, 0.2};
  EXPECT_THROW(bad.validate(), std::invalid_argument);
  bad.times = {0.0, 1.0};
  EXPECT_THROW(bad.validate(), std::invalid_argument);
}

TEST(Metrics, DecayFitPureExponential) {
  const auto s = sampled(10.0, 500, [](double t) { return std::exp(-t / 2.0); });
  const auto fit = fit_decay_time(s);
  EXPECT_NEAR(fit.tau, 2.0, 0.02);
  EXPECT_GT(fit.r_squared, 0.999);
  EXPECT_LE(fit.r_squared, 1.0);
}

TEST(Metrics, DecayFitOscillatingEnvelope) {
  const auto s = sampled(10.0, 4000, [](double t) { return std::exp(-t / 2.0) * std::abs(std::cos(5.0 * t)); });
  const auto fit = fit_decay_time(s);
  EXPECT_NEAR(fit.tau, 2.0, 0.1);
  EXPECT_GE(fit.points, 5);
}

TEST(Metrics, DecayFitErrors) {
  EXPECT_THROW(fit_decay_time(sampled(1.0, 1, [](double) { return 1.0; })), NumericalError);
  EXPECT_THROW(fit_decay_time(sampled(5.0, 50, [](double t) { return std::exp(t); })), NumericalError);
  EXPECT_THROW(fit_decay_time(sampled(5.0, 50, [](double t) { return t < 4.9 ? 0.0 : 1.0; })), NumericalError);
}

TEST(Metrics, SeriesFromTrajectory) {
  Trajectory tr;
  tr.mode = Trajectory::Mode::Pure;
  tr.times = {0.0, 1.0};
  tr.amplitudes = {bell(2), 0.5 * bell(2)};
  tr.trap_pop = {0.0, 0.0};
  tr.vacuum_pop = {0.0, 0.75};
  const auto c = coherence_series(tr);
  EXPECT_NEAR(c.values[0], 1.0, 1e-15);
  EXPECT_NEAR(c.values[1], 0.25, 1e-15);
  const auto e = entanglement_series(tr);
  EXPECT_NEAR(e.values[0], 1.0, 1e-15);
  // p0 = 0.75, X = 1/64: log2(0.25 + sqrt(0.5625 + 1/16))
  EXPECT_NEAR(e.values[1], std::log2(0.25 + std::sqrt(0.5625 + 0.0625)), 1e-14);
}
