#include <Eigen/Eigenvalues>
#include <cmath>
#include <stdexcept>
#include <unsupported/Eigen/MatrixFunctions>

#include "ettrap/dynamics.hpp"
#include "ettrap/errors.hpp"
#include "ettrap/ode.hpp"

namespace ettrap {

namespace {

using cplx = std::complex<double>;
const cplx kI{0.0, 1.0};

void validate_density(const Eigen::MatrixXcd& rho, int n) {
  if (rho.rows() != n || rho.cols() != n) throw std::invalid_argument("density block has the wrong dimension");
  if (!rho.allFinite()) throw std::invalid_argument("density block is not finite");
  if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > 1e-10) throw std::invalid_argument("density block must be Hermitian");
  const Eigen::MatrixXcd herm = 0.5 * (rho + rho.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(herm, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -1e-10) throw std::invalid_argument("density block must be positive semidefinite");
  if (herm.trace().real() > 1.0 + 1e-10) throw std::invalid_argument("density block trace must be <= 1");
}

// Row-major vec(rho) (index i*n + j) followed by p_T and p_V.
Eigen::MatrixXcd augmented_generator(const EffectiveHamiltonian& h, double dephasing) {
  const int n = h.size();
  const int dim = n * n + 2;
  const Eigen::MatrixXcd& hm = h.matrix;
  const Eigen::MatrixXd gamma = h.vacuum_rates();
  Eigen::MatrixXcd g = Eigen::MatrixXcd::Zero(dim, dim);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const int row = i * n + j;
      for (int k = 0; k < n; ++k) {
        g(row, k * n + j) += -kI * hm(i, k);
        g(row, i * n + k) += kI * std::conj(hm(j, k));
      }
      if (i != j) g(row, row) -= dephasing;
      g(n * n + 1, j * n + i) += gamma(i, j);
    }
  g(n * n, h.trap_site * n + h.trap_site) = h.kappa;
  return g;
}

Eigen::MatrixXcd unvec(const Eigen::VectorXcd& y, int n) {
  Eigen::MatrixXcd rho(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) rho(i, j) = y[i * n + j];
  return rho;
}

}  // namespace

Trajectory propagate_lindblad(const EffectiveHamiltonian& h, double dephasing, const Eigen::MatrixXcd& rho0,
                              const TimeGrid& grid, Propagator method) {
  grid.validate();
  if (!(dephasing >= 0.0) || !std::isfinite(dephasing)) throw std::invalid_argument("dephasing rate must be >= 0");
  const int n = h.size();
  validate_density(rho0, n);

  Trajectory tr;
  tr.mode = Trajectory::Mode::Density;
  tr.times = grid.samples();
  tr.kappa = h.kappa;
  tr.trap_site = h.trap_site;
  tr.densities.reserve(tr.times.size());
  tr.trap_pop.reserve(tr.times.size());
  tr.vacuum_pop.reserve(tr.times.size());

  Eigen::VectorXcd y = Eigen::VectorXcd::Zero(n * n + 2);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) y[i * n + j] = rho0(i, j);

  auto record = [&](const Eigen::VectorXcd& state) {
    tr.densities.push_back(unvec(state, n));
    tr.trap_pop.push_back(state[n * n].real());
    tr.vacuum_pop.push_back(state[n * n + 1].real());
  };

  if (method == Propagator::Adaptive) {
    tr.method_used = Propagator::Adaptive;
    const Eigen::MatrixXcd hm = h.matrix;
    const Eigen::MatrixXcd gamma = h.vacuum_rates().cast<cplx>();
    const double kappa = h.kappa;
    const int site = h.trap_site;
    ode::Rhs rhs = [&, n](double, const ode::State& s, ode::State& ds) {
      const Eigen::Map<const Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> rho(s.data(), n, n);
      Eigen::Map<Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> drho(ds.data(), n, n);
      drho = -kI * (hm * rho - rho * hm.adjoint());
      if (dephasing > 0.0) {
        const Eigen::VectorXcd diag = drho.diagonal();
        drho -= dephasing * rho;
        drho.diagonal() = diag;
      }
      ds[n * n] = kappa * rho(site, site);
      ds[n * n + 1] = (gamma.cwiseProduct(rho.transpose())).sum();
    };
    ode::DormandPrince solver(rhs, {grid.rtol, grid.atol});
    for (const auto& s : solver.integrate_to_grid(y, tr.times)) record(s);
    return tr;
  }

  tr.method_used = Propagator::Spectral;
  const double dt = grid.t_max / grid.n_steps;
  const Eigen::MatrixXcd step = (augmented_generator(h, dephasing) * dt).exp();
  if (!step.allFinite()) throw NumericalError("matrix exponential of the Lindblad generator is not finite");
  record(y);
  for (int k = 0; k < grid.n_steps; ++k) {
    y = step * y;
    record(y);
  }
  return tr;
}

Trajectory propagate_lindblad(const EffectiveHamiltonian& h, double dephasing, const InitialState& psi0,
                              const TimeGrid& grid, Propagator method) {
  const Eigen::VectorXcd psi = resolve_initial_state(psi0, h);
  return propagate_lindblad(h, dephasing, Eigen::MatrixXcd(psi * psi.adjoint()), grid, method);
}

}  // namespace ettrap
