#include "ettrap/nn_poly.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "ettrap/errors.hpp"

namespace ettrap {

namespace {

const cplx kI{0.0, 1.0};

Eigen::VectorXcd eigenvalues_in_x(int n, double hopping, cplx kappa) {
  const Eigen::MatrixXcd h = nn_hamiltonian_complex(n, hopping, kappa, true);
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(h, false);
  if (solver.info() != Eigen::Success) throw NumericalError("eigensolver did not converge in EP scan");
  return solver.eigenvalues() / (-2.0 * hopping);
}

std::pair<int, int> closest_pair(const Eigen::VectorXcd& v) {
  std::pair<int, int> best{0, 1};
  double d = std::abs(v[0] - v[1]);
  for (int a = 0; a < v.size(); ++a)
    for (int b = a + 1; b < v.size(); ++b)
      if (std::abs(v[a] - v[b]) < d) {
        d = std::abs(v[a] - v[b]);
        best = {a, b};
      }
  return best;
}

}  // namespace

cplx CharPoly::operator()(cplx x) const {
  cplx acc{0.0, 0.0};
  for (auto it = coefficients.rbegin(); it != coefficients.rend(); ++it) acc = acc * x + *it;
  return acc;
}

double CharPoly::max_coefficient() const {
  double m = 0.0;
  for (const auto& c : coefficients) m = std::max(m, std::abs(c));
  return m;
}

std::vector<double> chebyshev_u(int n) {
  if (n < 0) return {0.0};
  std::vector<double> prev{1.0};  // U_0
  if (n == 0) return prev;
  std::vector<double> cur{0.0, 2.0};  // U_1
  for (int k = 2; k <= n; ++k) {
    std::vector<double> next(static_cast<std::size_t>(k + 1), 0.0);
    for (std::size_t i = 0; i < cur.size(); ++i) next[i + 1] += 2.0 * cur[i];
    for (std::size_t i = 0; i < prev.size(); ++i) next[i] -= prev[i];
    prev = std::move(cur);
    cur = std::move(next);
  }
  return cur;
}

CharPoly nn_char_poly(int n_emitters, double hopping, cplx kappa) {
  if (n_emitters < 2) throw std::invalid_argument("characteristic polynomial needs N >= 2");
  if (hopping == 0.0 || !std::isfinite(hopping)) throw std::invalid_argument("hopping J must be finite and non-zero");
  const std::vector<double> un = chebyshev_u(n_emitters);
  const std::vector<double> um = chebyshev_u(n_emitters - 1);
  const cplx c = -kI * kappa / (2.0 * hopping);
  const double scale = std::pow(hopping, n_emitters);
  CharPoly p;
  p.degree = n_emitters;
  p.hopping = hopping;
  p.kappa = kappa;
  p.coefficients.assign(un.size(), cplx{0.0, 0.0});
  for (std::size_t i = 0; i < un.size(); ++i) p.coefficients[i] += scale * un[i];
  for (std::size_t i = 0; i < um.size(); ++i) p.coefficients[i] += scale * c * um[i];
  return p;
}

std::vector<cplx> polynomial_roots(const CharPoly& poly) {
  const int n = poly.degree;
  const cplx lead = poly.coefficients.back();
  Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(n, n);
  for (int i = 1; i < n; ++i) companion(i, i - 1) = 1.0;
  for (int i = 0; i < n; ++i) companion(i, n - 1) = -poly.coefficients[static_cast<std::size_t>(i)] / lead;
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(companion, false);
  if (solver.info() != Eigen::Success) throw NumericalError("companion eigensolver did not converge");
  std::vector<cplx> roots(solver.eigenvalues().data(), solver.eigenvalues().data() + n);
  std::sort(roots.begin(), roots.end(), [](cplx a, cplx b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  return roots;
}

Eigen::MatrixXcd nn_hamiltonian_complex(int n_emitters, double hopping, cplx kappa, bool gauge_shifted,
                                        double gamma) {
  if (n_emitters < 2) throw std::invalid_argument("nearest-neighbour chain needs N >= 2");
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(n_emitters, n_emitters);
  for (int i = 0; i + 1 < n_emitters; ++i) h(i, i + 1) = h(i + 1, i) = hopping;
  if (!gauge_shifted) h.diagonal().setConstant(-0.5 * kI * gamma);
  h(n_emitters - 1, n_emitters - 1) -= 0.5 * kI * kappa;
  return h;
}

cplx nn_discriminant(int n_emitters, double hopping, cplx kappa) {
  const Eigen::VectorXcd x = eigenvalues_in_x(n_emitters, hopping, kappa);
  cplx d{1.0, 0.0};
  for (int a = 0; a < x.size(); ++a)
    for (int b = a + 1; b < x.size(); ++b) d *= (x[a] - x[b]) * (x[a] - x[b]);
  return d;
}

std::vector<EPCandidate> nn_ep_locus(int n_emitters, double hopping, const EpLocusOptions& opts) {
  if (n_emitters < 2) throw std::invalid_argument("EP locus needs N >= 2");
  if (hopping == 0.0) throw std::invalid_argument("hopping J must be non-zero");
  if (opts.grid_points < 5) throw std::invalid_argument("EP scan grid needs at least 5 points per axis");
  const double scale = std::abs(hopping);
  const double radius = opts.scan_radius * scale;
  const int g = opts.grid_points;
  const double step = 2.0 * radius / (g - 1);
  auto grid_kappa = [&](int i, int j) { return cplx{-radius + i * step, -radius + j * step}; };

  // |D| on the grid, rows split across workers.
  Eigen::MatrixXd mag(g, g);
  const int workers = std::max(1, std::min(opts.threads, g));
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (int i = w; i < g; i += workers)
        for (int j = 0; j < g; ++j) mag(i, j) = std::abs(nn_discriminant(n_emitters, hopping, grid_kappa(i, j)));
    });
  }
  for (auto& t : pool) t.join();

  // log|D| is harmonic away from its zeros, so interior minima only sit next to zeros.
  std::vector<cplx> seeds;
  for (int i = 1; i + 1 < g; ++i)
    for (int j = 1; j + 1 < g; ++j) {
      bool is_min = true;
      for (int di = -1; di <= 1 && is_min; ++di)
        for (int dj = -1; dj <= 1; ++dj) {
          if (di == 0 && dj == 0) continue;
          if (mag(i + di, j + dj) < mag(i, j)) {
            is_min = false;
            break;
          }
        }
      if (is_min) seeds.push_back(grid_kappa(i, j));
    }

  std::vector<EPCandidate> out;
  for (const cplx seed : seeds) {
    EPCandidate c;
    cplx k = seed;
    for (int it = 0; it < opts.newton_max_iter; ++it) {
      const double h = 1e-6 * std::max(scale, std::abs(k));
      const cplx d0 = nn_discriminant(n_emitters, hopping, k);
      const cplx dp = (nn_discriminant(n_emitters, hopping, k + h) - nn_discriminant(n_emitters, hopping, k - h)) /
                      (2.0 * h);
      if (d0 == 0.0) {
        c.converged = true;
        break;
      }
      if (dp == 0.0 || !std::isfinite(std::abs(dp))) break;
      cplx delta = d0 / dp;
      if (std::abs(delta) > 0.5 * radius) delta *= 0.5 * radius / std::abs(delta);
      k -= delta;
      if (std::abs(delta) <= opts.newton_tol * std::max(scale, std::abs(k))) {
        c.converged = true;
        break;
      }
    }
    c.kappa = k;
    bool duplicate = false;
    for (const auto& prev : out)
      if (std::abs(prev.kappa - k) < opts.dedup_tol * scale) duplicate = true;
    if (duplicate) continue;

    const Eigen::MatrixXcd hm = nn_hamiltonian_complex(n_emitters, hopping, k, opts.gauge_shifted, opts.gamma);
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(hm, true);
    if (solver.info() != Eigen::Success) throw NumericalError("eigensolver did not converge at EP candidate");
    const Eigen::VectorXcd x = solver.eigenvalues() / (-2.0 * hopping);
    const auto [a, b] = closest_pair(x);
    c.degenerate_eigenvalue = 0.5 * (solver.eigenvalues()[a] + solver.eigenvalues()[b]);
    const Eigen::VectorXcd va = solver.eigenvectors().col(a).normalized();
    const Eigen::VectorXcd vb = solver.eigenvectors().col(b).normalized();
    c.vector_coalescence = std::abs(va.dot(vb));
    c.discriminant_residual = std::norm(x[a] - x[b]) / (1.0 + x.cwiseAbs2().maxCoeff());
    c.on_positive_real_axis = std::abs(k.imag()) < 1e-8 * scale && k.real() > 0.0;
    c.confirmed = c.converged && c.vector_coalescence >= 1.0 - 1e-4 && c.discriminant_residual <= 1e-8;
    out.push_back(c);
  }
  std::sort(out.begin(), out.end(), [](const EPCandidate& a, const EPCandidate& b) {
    return a.kappa.real() != b.kappa.real() ? a.kappa.real() < b.kappa.real() : a.kappa.imag() < b.kappa.imag();
  });
  return out;
}

}  // namespace ettrap
