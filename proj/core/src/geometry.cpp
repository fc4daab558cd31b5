#include "ettrap/geometry.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "ettrap/errors.hpp"

namespace ettrap {

namespace {

constexpr double kSeriesThreshold = 1e-3;
constexpr double kUnitTolerance = 1e-12;

void check_site(const ChainGeometry& geom, int i) {
  if (i < 0 || i >= geom.size())
    throw std::out_of_range("site index " + std::to_string(i) + " out of range [0, " +
                            std::to_string(geom.size()) + ")");
}

struct PairFactors {
  double near;  // 3 (p_i.r)(p_j.r) - p_i.p_j
  double far;   // (p_i.r)(p_j.r) - p_i.p_j
  double xi;
};

PairFactors pair_factors(const ChainGeometry& geom, int i, int j) {
  const Eigen::Vector3d d = geom.position(j) - geom.position(i);
  const double r = d.norm();
  if (!(r > 0.0)) throw std::invalid_argument("zero separation between sites " + std::to_string(i) +
                                              " and " + std::to_string(j));
  const Eigen::Vector3d rhat = d / r;
  const double pi_r = geom.orientation(i).dot(rhat);
  const double pj_r = geom.orientation(j).dot(rhat);
  const double pp = geom.orientation(i).dot(geom.orientation(j));
  return {3.0 * pi_r * pj_r - pp, pi_r * pj_r - pp, 2.0 * std::numbers::pi * r / geom.wavelength()};
}

}  // namespace

std::string_view to_string(DecayModel model) {
  switch (model) {
    case DecayModel::Cooperative: return "cooperative";
    case DecayModel::Independent: return "independent";
    case DecayModel::Quasistatic: return "quasistatic";
  }
  return "unknown";
}

DecayModel decay_model_from_string(std::string_view name) {
  if (name == "cooperative") return DecayModel::Cooperative;
  if (name == "independent") return DecayModel::Independent;
  if (name == "quasistatic") return DecayModel::Quasistatic;
  throw ConfigError("unknown decay model '" + std::string(name) +
                    "' (expected cooperative | independent | quasistatic)");
}

Eigen::Vector3d polarization_vector(Polarization pol) {
  return pol == Polarization::Transverse ? Eigen::Vector3d::UnitZ() : Eigen::Vector3d::UnitX();
}

ChainGeometry ChainGeometry::uniform(int n_emitters, double spacing, const Eigen::Vector3d& orientation,
                                     double wavelength) {
  if (n_emitters < 1) throw std::invalid_argument("chain needs at least one emitter");
  if (!(spacing > 0.0)) throw std::invalid_argument("spacing must be positive");
  std::vector<Eigen::Vector3d> pos;
  pos.reserve(static_cast<std::size_t>(n_emitters));
  for (int i = 0; i < n_emitters; ++i) pos.emplace_back(i * spacing, 0.0, 0.0);
  return ChainGeometry(std::move(pos), std::vector<Eigen::Vector3d>(static_cast<std::size_t>(n_emitters), orientation),
                       spacing, wavelength);
}

ChainGeometry ChainGeometry::uniform(int n_emitters, double spacing, Polarization pol, double wavelength) {
  return uniform(n_emitters, spacing, polarization_vector(pol), wavelength);
}

ChainGeometry::ChainGeometry(std::vector<Eigen::Vector3d> positions, std::vector<Eigen::Vector3d> orientations,
                             double spacing, double wavelength)
    : positions_(std::move(positions)),
      orientations_(std::move(orientations)),
      spacing_(spacing),
      wavelength_(wavelength) {
  if (positions_.empty()) throw std::invalid_argument("chain needs at least one emitter");
  if (positions_.size() != orientations_.size())
    throw std::invalid_argument("positions and orientations differ in length");
  if (!(spacing_ > 0.0)) throw std::invalid_argument("spacing must be positive");
  if (!(wavelength_ > 0.0)) throw std::invalid_argument("wavelength must be positive");
  for (const auto& p : orientations_)
    if (std::abs(p.norm() - 1.0) > kUnitTolerance)
      throw std::invalid_argument("dipole orientations must be unit vectors");
  for (std::size_t i = 0; i < positions_.size(); ++i)
    for (std::size_t j = i + 1; j < positions_.size(); ++j)
      if (!((positions_[i] - positions_[j]).norm() > 0.0))
        throw std::invalid_argument("zero separation between sites " + std::to_string(i) + " and " +
                                    std::to_string(j));
}

double ChainGeometry::xi(int i, int j) const {
  return 2.0 * std::numbers::pi * (position(i) - position(j)).norm() / wavelength_;
}

ChainGeometry ChainGeometry::scaled(double factor) const {
  std::vector<Eigen::Vector3d> pos;
  pos.reserve(positions_.size());
  for (const auto& p : positions_) pos.push_back(p * factor);
  return ChainGeometry(std::move(pos), orientations_, spacing_ * factor, wavelength_ * factor);
}

namespace kernels {

double j_near(double xi) { return std::cos(xi) / (xi * xi * xi) + std::sin(xi) / (xi * xi); }

double gamma_near(double xi) {
  if (xi < kSeriesThreshold) {
    const double x2 = xi * xi;
    return 1.0 / 3.0 - x2 / 30.0 + x2 * x2 / 840.0 - x2 * x2 * x2 / 45360.0;
  }
  return std::sin(xi) / (xi * xi * xi) - std::cos(xi) / (xi * xi);
}

double sinc(double xi) {
  if (xi < kSeriesThreshold) {
    const double x2 = xi * xi;
    return 1.0 - x2 / 6.0 + x2 * x2 / 120.0 - x2 * x2 * x2 / 5040.0;
  }
  return std::sin(xi) / xi;
}

}  // namespace kernels

double j_rate(const ChainGeometry& geom, int i, int j, DecayModel model) {
  check_site(geom, i);
  check_site(geom, j);
  if (i == j) throw std::invalid_argument("self-coupling undefined");
  const PairFactors f = pair_factors(geom, i, j);
  if (model == DecayModel::Quasistatic) return 0.75 * f.near / (f.xi * f.xi * f.xi);
  return 0.75 * (f.near * kernels::j_near(f.xi) - f.far * std::cos(f.xi) / f.xi);
}

double gamma_rate(const ChainGeometry& geom, int i, int j, DecayModel model) {
  check_site(geom, i);
  check_site(geom, j);
  if (i == j) return 1.0;
  switch (model) {
    case DecayModel::Independent: return 0.0;
    case DecayModel::Quasistatic: return geom.orientation(i).dot(geom.orientation(j));
    case DecayModel::Cooperative: break;
  }
  const PairFactors f = pair_factors(geom, i, j);
  return 1.5 * (f.near * kernels::gamma_near(f.xi) - f.far * kernels::sinc(f.xi));
}

CouplingMatrices build_coupling_matrices(const ChainGeometry& geom, DecayModel model) {
  const int n = geom.size();
  CouplingMatrices out;
  out.j_matrix = Eigen::MatrixXd::Zero(n, n);
  out.gamma_matrix = Eigen::MatrixXd::Identity(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double jij = j_rate(geom, i, j, model);
      const double gij = gamma_rate(geom, i, j, model);
      out.j_matrix(i, j) = out.j_matrix(j, i) = jij;
      out.gamma_matrix(i, j) = out.gamma_matrix(j, i) = gij;
    }
  }
  return out;
}

}  // namespace ettrap
