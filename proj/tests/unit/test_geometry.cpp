#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "ettrap/errors.hpp"
#include "ettrap/geometry.hpp"

using namespace ettrap;

namespace {

constexpr double kPi = std::numbers::pi;

// Spacing of half a wavelength puts neighbours at xi = pi.
ChainGeometry half_wave_pair() { return ChainGeometry::uniform(2, 0.5, Polarization::Transverse); }

}  // namespace

TEST(Geometry, UniformChainPositionsAndXi) {
  const auto g = ChainGeometry::uniform(4, 0.1);
  EXPECT_EQ(g.size(), 4);
  EXPECT_DOUBLE_EQ(g.spacing_lambda(), 0.1);
  for (int i = 0; i < g.size(); ++i) EXPECT_NEAR(g.orientation(i).norm(), 1.0, 1e-12);
  EXPECT_NEAR(g.xi(0, 1), 2.0 * kPi * 0.1, 1e-14);
  EXPECT_NEAR(g.xi(0, 3), 2.0 * kPi * 0.3, 1e-14);
}

TEST(Geometry, RejectsBadInput) {
  EXPECT_THROW(ChainGeometry::uniform(0, 0.1), std::invalid_argument);
  EXPECT_THROW(ChainGeometry::uniform(3, 0.0), std::invalid_argument);
  std::vector<Eigen::Vector3d> pos{Eigen::Vector3d::Zero(), Eigen::Vector3d::Zero()};
  std::vector<Eigen::Vector3d> ori(2, Eigen::Vector3d::UnitZ());
  EXPECT_THROW(ChainGeometry(pos, ori, 0.1), std::invalid_argument);
  const auto g = ChainGeometry::uniform(3, 0.1);
  EXPECT_THROW(j_rate(g, 1, 1, DecayModel::Cooperative), std::invalid_argument);
}

TEST(Geometry, DecayModelNames) {
  for (auto m : {DecayModel::Cooperative, DecayModel::Independent, DecayModel::Quasistatic})
    EXPECT_EQ(decay_model_from_string(to_string(m)), m);
  EXPECT_THROW(decay_model_from_string("bogus"), ConfigError);
}

TEST(Geometry, TransverseRatesAtXiPi) {
  const auto g = half_wave_pair();
  const double j_expected = 0.75 * (1.0 / (kPi * kPi * kPi) - 1.0 / kPi);
  const double g_expected = -1.5 / (kPi * kPi);
  EXPECT_NEAR(j_rate(g, 0, 1, DecayModel::Cooperative), j_expected, 1e-12);
  EXPECT_NEAR(j_rate(g, 0, 1, DecayModel::Cooperative), -0.21454, 5e-6);
  EXPECT_NEAR(gamma_rate(g, 0, 1, DecayModel::Cooperative), g_expected, 1e-12);
  EXPECT_NEAR(gamma_rate(g, 0, 1, DecayModel::Cooperative), -0.15198, 5e-6);
}

TEST(Geometry, IndependentModelKeepsCoherentPartOnly) {
  const auto g = ChainGeometry::uniform(5, 0.07);
  const auto coop = build_coupling_matrices(g, DecayModel::Cooperative);
  const auto indep = build_coupling_matrices(g, DecayModel::Independent);
  EXPECT_TRUE(indep.j_matrix.isApprox(coop.j_matrix, 1e-14));
  EXPECT_TRUE(indep.gamma_matrix.isApprox(Eigen::MatrixXd::Identity(5, 5), 0.0));
}

TEST(Geometry, MatricesSymmetricWithUnitDiagonal) {
  for (auto pol : {Polarization::Transverse, Polarization::Longitudinal}) {
    const auto g = ChainGeometry::uniform(8, 0.13, pol);
    for (auto model : {DecayModel::Cooperative, DecayModel::Independent, DecayModel::Quasistatic}) {
      const auto m = build_coupling_matrices(g, model);
      EXPECT_LE((m.j_matrix - m.j_matrix.transpose()).cwiseAbs().maxCoeff(), 1e-12);
      EXPECT_LE((m.gamma_matrix - m.gamma_matrix.transpose()).cwiseAbs().maxCoeff(), 1e-12);
      for (int i = 0; i < 8; ++i) {
        EXPECT_EQ(m.gamma_matrix(i, i), 1.0);
        EXPECT_EQ(m.j_matrix(i, i), 0.0);
      }
    }
  }
}

TEST(Geometry, CooperativeGammaPositiveSemidefinite) {
  for (double a : {0.001, 0.02, 0.05, 0.1, 0.25, 0.5, 0.8}) {
    for (auto pol : {Polarization::Transverse, Polarization::Longitudinal}) {
      const auto m = build_coupling_matrices(ChainGeometry::uniform(12, a, pol), DecayModel::Cooperative);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m.gamma_matrix);
      EXPECT_GE(es.eigenvalues().minCoeff(), -1e-10) << "a = " << a;
    }
  }
}

TEST(Geometry, SubAndSuperradiantSpectrumAtDenseSpacing) {
  const auto m = build_coupling_matrices(ChainGeometry::uniform(10, 0.05), DecayModel::Cooperative);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m.gamma_matrix);
  EXPECT_GT(es.eigenvalues().maxCoeff(), 5.0);
  EXPECT_LT(es.eigenvalues().minCoeff(), 1e-3);
  EXPECT_NEAR(es.eigenvalues().sum(), 10.0, 1e-10);
}

TEST(Geometry, ScaleInvariance) {
  const auto g = ChainGeometry::uniform(6, 0.09, Polarization::Transverse, 1.0);
  const auto big = g.scaled(2.0);
  EXPECT_DOUBLE_EQ(big.wavelength(), 2.0);
  const auto a = build_coupling_matrices(g, DecayModel::Cooperative);
  const auto b = build_coupling_matrices(big, DecayModel::Cooperative);
  EXPECT_LE((a.j_matrix - b.j_matrix).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LE((a.gamma_matrix - b.gamma_matrix).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Geometry, QuasistaticLimitAtTinySeparation) {
  // xi = 2 pi * 1e-5 < 1e-4
  for (auto pol : {Polarization::Transverse, Polarization::Longitudinal}) {
    const auto g = ChainGeometry::uniform(2, 1e-5, pol);
    const double jc = j_rate(g, 0, 1, DecayModel::Cooperative);
    const double jq = j_rate(g, 0, 1, DecayModel::Quasistatic);
    EXPECT_LE(std::abs(jc - jq) / std::abs(jc), 1e-6);
    EXPECT_NEAR(gamma_rate(g, 0, 1, DecayModel::Cooperative), 1.0, 1e-6);
  }
}

TEST(Geometry, SeriesBranchIsContinuous) {
  // Closed forms and series agree across the switch at xi = 1e-3.
  const double below = 0.999e-3;
  const double above = 1.001e-3;
  EXPECT_NEAR(kernels::gamma_near(below) / kernels::gamma_near(above), 1.0, 1e-5);
  EXPECT_NEAR(kernels::sinc(below), 1.0 - below * below / 6.0 + std::pow(below, 4) / 120.0, 1e-15);
  const double xi = 1e-3 * 0.5;
  EXPECT_NEAR(kernels::gamma_near(xi), 1.0 / 3.0 - xi * xi / 30.0, 1e-14);
}

TEST(Geometry, KernelsMatchDirectEvaluationAtModerateXi) {
  for (double xi : {0.3, 1.0, 2.5, 7.0}) {
    EXPECT_NEAR(kernels::j_near(xi), std::cos(xi) / std::pow(xi, 3) + std::sin(xi) / (xi * xi), 1e-12);
    EXPECT_NEAR(kernels::gamma_near(xi), std::sin(xi) / std::pow(xi, 3) - std::cos(xi) / (xi * xi), 1e-12);
    EXPECT_NEAR(kernels::sinc(xi), std::sin(xi) / xi, 1e-15);
  }
}

TEST(Geometry, GroupVelocityEstimateIndependentOfLength) {
  const auto a = build_coupling_matrices(ChainGeometry::uniform(4, 0.05), DecayModel::Cooperative);
  const auto b = build_coupling_matrices(ChainGeometry::uniform(11, 0.05), DecayModel::Cooperative);
  EXPECT_DOUBLE_EQ(a.j_matrix(0, 1), b.j_matrix(0, 1));
}
