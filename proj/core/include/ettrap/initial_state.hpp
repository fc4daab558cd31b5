#pragma once

#include <Eigen/Dense>
#include <string>
#include <string_view>

#include "ettrap/geometry.hpp"
#include "ettrap/hamiltonian.hpp"

namespace ettrap {

/// Single-excitation initial condition. Site and mode indices are 1-based.
struct InitialState {
  enum class Kind { Site, Gaussian, Dark, Bright, Mode };
  Kind kind = Kind::Site;
  int index = 1;       ///< Site(k) or Mode(n)
  double width = 3.0;  ///< Gaussian standard deviation in units of the spacing a

  static InitialState site(int k) { return {Kind::Site, k, 0.0}; }
  static InitialState gaussian(double s) { return {Kind::Gaussian, 0, s}; }
  static InitialState dark() { return {Kind::Dark, 0, 0.0}; }
  static InitialState bright() { return {Kind::Bright, 0, 0.0}; }
  static InitialState mode(int n) { return {Kind::Mode, n, 0.0}; }
};

/// Parses "site:k", "gaussian:s", "dark", "bright", "mode:n". Throws ConfigError.
InitialState parse_initial_state(std::string_view text);
std::string to_string(const InitialState& s);

/// exp(-x_j^2 / 2 s^2) with x_j = j - (N + 1)/2 in units of a, normalised.
Eigen::VectorXcd gaussian_initial_state(int n_emitters, double s);
Eigen::VectorXcd gaussian_initial_state(const ChainGeometry& geom, double s);

/// Unit-norm amplitude vector for `h`. Dark and bright are the minimum / maximum
/// decay-rate eigenmodes of the kappa = 0 cooperative chain built from the source
/// geometry (or of h without trap and detuning when there is no geometry). Mode(n)
/// is the n-th eigenmode, ascending in energy, of the trap-free chain in h's model.
Eigen::VectorXcd resolve_initial_state(const InitialState& state, const EffectiveHamiltonian& h);

}  // namespace ettrap
