#include "ettrap/hamiltonian.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace ettrap {

namespace {
const std::complex<double> kI{0.0, 1.0};
}

Eigen::MatrixXd EffectiveHamiltonian::loss_operator() const {
  const Eigen::MatrixXcd anti = kI * (matrix - matrix.adjoint());
  return anti.real();
}

Eigen::MatrixXd EffectiveHamiltonian::vacuum_rates() const {
  Eigen::MatrixXd g = loss_operator();
  if (size() > 0) g(trap_site, trap_site) -= kappa;
  return g;
}

EffectiveHamiltonian build_h_chain(const ChainGeometry& geom, DecayModel model) {
  const CouplingMatrices c = build_coupling_matrices(geom, model);
  EffectiveHamiltonian h;
  h.matrix = c.j_matrix.cast<std::complex<double>>() - 0.5 * kI * c.gamma_matrix.cast<std::complex<double>>();
  h.trap_site = geom.size() - 1;
  h.decay_model = model;
  h.source_geometry = std::make_shared<const ChainGeometry>(geom);
  return h;
}

EffectiveHamiltonian with_trap(const EffectiveHamiltonian& h, double kappa, std::optional<int> trap_site) {
  if (!(kappa >= 0.0) || !std::isfinite(kappa)) throw std::invalid_argument("trap rate kappa must be >= 0");
  const int site = trap_site.value_or(h.trap_site);
  if (site < 0 || site >= h.size())
    throw std::out_of_range("trap site " + std::to_string(site) + " out of range");
  EffectiveHamiltonian out = h;
  out.trap_site = site;
  out.kappa = kappa;
  if (site == h.trap_site) {
    if (kappa != h.kappa) out.matrix(site, site) -= 0.5 * kI * (kappa - h.kappa);
    return out;
  }
  // Moving the trap also moves the acceptor detuning.
  out.matrix(h.trap_site, h.trap_site) += 0.5 * kI * h.kappa - h.detuning;
  out.matrix(site, site) += h.detuning - 0.5 * kI * kappa;
  return out;
}

EffectiveHamiltonian with_detuning(const EffectiveHamiltonian& h, double delta) {
  if (!std::isfinite(delta)) throw std::invalid_argument("detuning must be finite");
  EffectiveHamiltonian out = h;
  out.matrix(h.trap_site, h.trap_site) += delta - h.detuning;
  out.detuning = delta;
  return out;
}

EffectiveHamiltonian with_site_detunings(const EffectiveHamiltonian& h, const Eigen::VectorXd& deltas) {
  if (deltas.size() != h.size()) throw std::invalid_argument("one detuning per site required");
  EffectiveHamiltonian out = h;
  out.matrix.diagonal() += deltas.cast<std::complex<double>>();
  return out;
}

EffectiveHamiltonian build_nearest_neighbor(const NearestNeighborSpec& spec, bool gauge_shift) {
  if (spec.n_emitters < 2) throw std::invalid_argument("nearest-neighbour chain needs N >= 2");
  if (!(spec.kappa >= 0.0)) throw std::invalid_argument("trap rate kappa must be >= 0");
  const int n = spec.n_emitters;
  EffectiveHamiltonian h;
  h.matrix = Eigen::MatrixXcd::Zero(n, n);
  for (int i = 0; i + 1 < n; ++i) h.matrix(i, i + 1) = h.matrix(i + 1, i) = spec.hopping;
  if (!gauge_shift) h.matrix.diagonal().setConstant(-0.5 * kI * spec.gamma);
  h.matrix(n - 1, n - 1) -= 0.5 * kI * spec.kappa;
  h.trap_site = n - 1;
  h.kappa = spec.kappa;
  h.decay_model = DecayModel::Independent;
  h.gauge_shifted = gauge_shift;
  return h;
}

}  // namespace ettrap
