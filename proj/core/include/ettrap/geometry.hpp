#pragma once

#include <Eigen/Dense>
#include <string_view>
#include <vector>

namespace ettrap {

/// Which dipole-dipole kernels feed the chain Hamiltonian.
enum class DecayModel {
  Cooperative,  ///< full retarded coherent and dissipative kernels
  Independent,  ///< retarded coherent kernel, Gamma_ij = delta_ij * gamma
  Quasistatic,  ///< electrostatic near-field limit of both kernels
};

std::string_view to_string(DecayModel model);
DecayModel decay_model_from_string(std::string_view name);

/// Named dipole orientations. Transverse is +z, perpendicular to the chain axis (+x).
enum class Polarization { Transverse, Longitudinal };

Eigen::Vector3d polarization_vector(Polarization pol);

/// Emitter positions and dipole orientations. Lengths are in the same unit as
/// `wavelength` (lambda0); rates derived from it depend only on r / lambda0.
class ChainGeometry {
 public:
  /// Collinear chain on the x axis, r_i = i * spacing, all dipoles along `orientation`.
  static ChainGeometry uniform(int n_emitters, double spacing,
                               const Eigen::Vector3d& orientation = polarization_vector(Polarization::Transverse),
                               double wavelength = 1.0);
  static ChainGeometry uniform(int n_emitters, double spacing, Polarization pol, double wavelength = 1.0);

  ChainGeometry(std::vector<Eigen::Vector3d> positions, std::vector<Eigen::Vector3d> orientations,
                double spacing, double wavelength = 1.0);

  int size() const noexcept { return static_cast<int>(positions_.size()); }
  double spacing() const noexcept { return spacing_; }
  double wavelength() const noexcept { return wavelength_; }
  /// spacing / lambda0
  double spacing_lambda() const noexcept { return spacing_ / wavelength_; }
  const Eigen::Vector3d& position(int i) const { return positions_.at(static_cast<std::size_t>(i)); }
  const Eigen::Vector3d& orientation(int i) const { return orientations_.at(static_cast<std::size_t>(i)); }

  /// Dimensionless separation xi = 2 pi r_ij / lambda0.
  double xi(int i, int j) const;

  /// Same geometry with every length (including lambda0) multiplied by `factor`.
  ChainGeometry scaled(double factor) const;

 private:
  std::vector<Eigen::Vector3d> positions_;
  std::vector<Eigen::Vector3d> orientations_;
  double spacing_;
  double wavelength_;
};

/// Real symmetric coupling matrices in units of gamma.
struct CouplingMatrices {
  Eigen::MatrixXd j_matrix;      ///< coherent exchange, zero diagonal
  Eigen::MatrixXd gamma_matrix;  ///< collective decay, diagonal == gamma
  double gamma = 1.0;
};

/// Coherent exchange rate J_ij (units of gamma). Throws std::invalid_argument on
/// i == j ("self-coupling undefined") or coincident sites ("zero separation").
double j_rate(const ChainGeometry& geom, int i, int j, DecayModel model);

/// Dissipative rate Gamma_ij (units of gamma); Gamma_ii == 1 in every model.
double gamma_rate(const ChainGeometry& geom, int i, int j, DecayModel model);

CouplingMatrices build_coupling_matrices(const ChainGeometry& geom, DecayModel model);

namespace kernels {

/// Radial functions of the retarded kernels, exposed for testing.
/// near/intermediate part of J:  cos(xi)/xi^3 + sin(xi)/xi^2
double j_near(double xi);
/// sin(xi)/xi^3 - cos(xi)/xi^2, series below xi = 1e-3
double gamma_near(double xi);
/// sin(xi)/xi, series below xi = 1e-3
double sinc(double xi);

}  // namespace kernels

}  // namespace ettrap
