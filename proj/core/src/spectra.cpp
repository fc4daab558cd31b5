#include "ettrap/spectra.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <numbers>
#include <stdexcept>

#include "ettrap/errors.hpp"

namespace ettrap {

bool ModeSet::has(int n, ModeTag tag) const {
  return (tags.at(static_cast<std::size_t>(n)) & static_cast<std::uint8_t>(tag)) != 0;
}

void ModeSet::add_tag(int n, ModeTag tag) { tags.at(static_cast<std::size_t>(n)) |= static_cast<std::uint8_t>(tag); }

int ModeSet::find(ModeTag tag) const {
  for (int n = 0; n < size(); ++n)
    if (has(n, tag)) return n;
  return -1;
}

ModeSet eigendecompose(const Eigen::MatrixXcd& matrix) {
  const Eigen::Index n = matrix.rows();
  if (n == 0 || matrix.cols() != n) throw std::invalid_argument("eigendecompose needs a non-empty square matrix");
  if (!matrix.allFinite()) throw std::invalid_argument("eigendecompose needs a finite matrix");

  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(matrix, true);
  if (solver.info() != Eigen::Success) throw NumericalError("complex eigensolver did not converge");

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  const auto& ev = solver.eigenvalues();
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    if (ev[a].real() != ev[b].real()) return ev[a].real() < ev[b].real();
    return ev[a].imag() > ev[b].imag();
  });

  ModeSet out;
  out.eigenvalues.resize(n);
  out.vectors.resize(n, n);
  out.tags.assign(static_cast<std::size_t>(n), static_cast<std::uint8_t>(ModeTag::Plain));
  for (Eigen::Index k = 0; k < n; ++k) {
    const Eigen::Index src = order[static_cast<std::size_t>(k)];
    out.eigenvalues[k] = ev[src];
    Eigen::VectorXcd v = solver.eigenvectors().col(src);
    v.normalize();
    Eigen::Index big = 0;
    v.cwiseAbs().maxCoeff(&big);
    v *= std::conj(v[big]) / std::abs(v[big]);
    v[big] = std::abs(v[big]);
    out.vectors.col(k) = v;
  }

  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(out.vectors);
  const auto& s = svd.singularValues();
  out.condition_number = s[n - 1] > 0.0 ? s[0] / s[n - 1] : std::numeric_limits<double>::infinity();

  int bright = 0, dark = 0;
  for (int k = 1; k < n; ++k) {
    if (out.decay_rate(k) > out.decay_rate(bright)) bright = k;
    if (out.decay_rate(k) < out.decay_rate(dark)) dark = k;
  }
  out.add_tag(bright, ModeTag::Bright);
  out.add_tag(dark, ModeTag::Dark);
  return out;
}

ModeSet eigendecompose(const EffectiveHamiltonian& h) {
  ModeSet out = eigendecompose(h.matrix);
  if (h.kappa > 0.0) {
    int fast = 0;
    for (int k = 1; k < out.size(); ++k)
      if (std::norm(out.vectors(h.trap_site, k)) > std::norm(out.vectors(h.trap_site, fast))) fast = k;
    out.add_tag(fast, ModeTag::Fast);
  }
  return out;
}

Eigen::VectorXd mode_ansatz(int n_emitters, int n) {
  if (n_emitters < 1) throw std::invalid_argument("mode_ansatz needs N >= 1");
  if (n < 1 || n > n_emitters) throw std::out_of_range("mode index must lie in [1, N]");
  const double k = std::numbers::pi * n / (n_emitters + 1);
  Eigen::VectorXd v(n_emitters);
  for (int j = 1; j <= n_emitters; ++j) {
    const double x = j - 0.5 * (n_emitters + 1);  // in units of a
    v[j - 1] = (n % 2 == 1) ? std::cos(k * x) : std::sin(k * x);
  }
  return v.normalized();
}

double group_velocity_kappa_opt(const ChainGeometry& geom, DecayModel model) {
  if (geom.size() < 2) throw std::invalid_argument("group velocity estimate needs N >= 2");
  return 2.0 * std::abs(j_rate(geom, 0, 1, model));
}

LevelSplitting aggregate_level_splitting(const ModeSet& modes) {
  const int n = modes.size();
  if (n < 2) throw std::invalid_argument("level splitting needs N >= 2");
  LevelSplitting out;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) out.sum += std::abs(modes.energy(a) - modes.energy(b));
  out.mean = out.sum / (0.5 * n * (n - 1));
  return out;
}

double fidelity(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) {
  if (a.size() != b.size()) throw std::invalid_argument("fidelity of vectors with different sizes");
  return std::norm(a.dot(b));
}

}  // namespace ettrap
