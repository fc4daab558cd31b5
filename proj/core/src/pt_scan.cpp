#include "ettrap/pt_scan.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "ettrap/errors.hpp"

namespace ettrap {

namespace {

// Greedy maximum-overlap matching: perm[b] = index in `next` linked to branch b.
std::vector<int> match_by_overlap(const Eigen::MatrixXcd& prev, const Eigen::MatrixXcd& next, double& worst) {
  const int n = static_cast<int>(prev.cols());
  const Eigen::MatrixXd overlap = (prev.adjoint() * next).cwiseAbs();
  std::vector<int> perm(static_cast<std::size_t>(n), -1);
  std::vector<bool> used(static_cast<std::size_t>(n), false);
  worst = 1.0;
  for (int step = 0; step < n; ++step) {
    double best = -1.0;
    int bi = -1, bj = -1;
    for (int i = 0; i < n; ++i) {
      if (perm[static_cast<std::size_t>(i)] >= 0) continue;
      for (int j = 0; j < n; ++j) {
        if (used[static_cast<std::size_t>(j)]) continue;
        if (overlap(i, j) > best) {
          best = overlap(i, j);
          bi = i;
          bj = j;
        }
      }
    }
    perm[static_cast<std::size_t>(bi)] = bj;
    used[static_cast<std::size_t>(bj)] = true;
    worst = std::min(worst, best);
  }
  return perm;
}

int best_match(const ModeSet& modes, const Eigen::VectorXcd& ref) {
  int best = 0;
  double ov = -1.0;
  for (int n = 0; n < modes.size(); ++n) {
    const double o = std::abs(ref.dot(modes.vectors.col(n)));
    if (o > ov) {
      ov = o;
      best = n;
    }
  }
  return best;
}

// Brent's method on [a, b] for the maximum of f.
template <typename F>
double brent_maximize(F&& f, double a, double b, double xtol) {
  constexpr double golden = 0.3819660112501051;
  double x = a + golden * (b - a), w = x, v = x;
  double fx = -f(x), fw = fx, fv = fx;
  double d = 0.0, e = 0.0;
  for (int iter = 0; iter < 200; ++iter) {
    const double m = 0.5 * (a + b);
    const double tol1 = xtol + 1e-12 * std::abs(x);
    const double tol2 = 2.0 * tol1;
    if (std::abs(x - m) <= tol2 - 0.5 * (b - a)) break;
    bool parabolic = false;
    if (std::abs(e) > tol1) {
      double r = (x - w) * (fx - fv);
      double q = (x - v) * (fx - fw);
      double p = (x - v) * q - (x - w) * r;
      q = 2.0 * (q - r);
      if (q > 0.0) p = -p;
      q = std::abs(q);
      const double etemp = e;
      e = d;
      if (std::abs(p) < std::abs(0.5 * q * etemp) && p > q * (a - x) && p < q * (b - x)) {
        d = p / q;
        const double u = x + d;
        if (u - a < tol2 || b - u < tol2) d = x < m ? tol1 : -tol1;
        parabolic = true;
      }
    }
    if (!parabolic) {
      e = (x >= m) ? a - x : b - x;
      d = golden * e;
    }
    const double u = std::abs(d) >= tol1 ? x + d : x + (d > 0 ? tol1 : -tol1);
    const double fu = -f(u);
    if (fu <= fx) {
      if (u >= x) a = x; else b = x;
      v = w; fv = fw;
      w = x; fw = fx;
      x = u; fx = fu;
    } else {
      if (u < x) a = u; else b = u;
      if (fu <= fw || w == x) {
        v = w; fv = fw;
        w = u; fw = fu;
      } else if (fu <= fv || v == x || v == w) {
        v = u; fv = fu;
      }
    }
  }
  return x;
}

}  // namespace

ModeTrack track_modes(const HamiltonianBuilder& builder, const std::vector<double>& kappas, double min_overlap) {
  if (kappas.size() < 2) throw std::invalid_argument("mode tracking needs at least two kappa values");
  for (std::size_t k = 1; k < kappas.size(); ++k)
    if (!(kappas[k] > kappas[k - 1])) throw std::invalid_argument("kappa grid must be strictly increasing");

  ModeTrack track;
  track.kappas = kappas;
  ModeSet first = eigendecompose(builder(kappas.front()));
  track.eigenvalues.push_back(first.eigenvalues);
  track.vectors.push_back(first.vectors);
  for (std::size_t k = 1; k < kappas.size(); ++k) {
    const ModeSet next = eigendecompose(builder(kappas[k]));
    double worst = 1.0;
    const std::vector<int> perm = match_by_overlap(track.vectors.back(), next.vectors, worst);
    if (worst < min_overlap) {
      std::ostringstream msg;
      msg << "mode tracking ambiguous between kappa=" << kappas[k - 1] << " and " << kappas[k]
          << " (overlap " << worst << " < " << min_overlap << "); refine the grid";
      throw NumericalError(msg.str());
    }
    track.min_overlap = std::min(track.min_overlap, worst);
    const int n = next.size();
    Eigen::VectorXcd ev(n);
    Eigen::MatrixXcd vec(n, n);
    for (int b = 0; b < n; ++b) {
      ev[b] = next.eigenvalues[perm[static_cast<std::size_t>(b)]];
      Eigen::VectorXcd v = next.vectors.col(perm[static_cast<std::size_t>(b)]);
      // keep phases continuous along the branch
      const std::complex<double> ph = track.vectors.back().col(b).dot(v);
      if (std::abs(ph) > 0.0) v *= std::conj(ph) / std::abs(ph);
      vec.col(b) = v;
    }
    track.eigenvalues.push_back(ev);
    track.vectors.push_back(vec);
  }
  const std::size_t last = kappas.size() - 1;
  track.fast_branch = 0;
  for (int b = 1; b < track.branches(); ++b)
    if (track.decay_rate(b, last) > track.decay_rate(track.fast_branch, last)) track.fast_branch = b;
  return track;
}

PtTransition pt_transition_scan(const HamiltonianBuilder& builder, const std::vector<double>& kappa_grid,
                                double refine_tol) {
  if (kappa_grid.size() < 4) throw std::invalid_argument("PT scan needs at least four kappa values");
  PtTransition out;
  out.track = track_modes(builder, kappa_grid);
  const ModeTrack& tr = out.track;
  out.fast_branch = tr.fast_branch;
  const std::size_t nk = kappa_grid.size();

  auto derivative = [&](int b, std::size_t k) {
    return (tr.decay_rate(b, k + 1) - tr.decay_rate(b, k - 1)) / (kappa_grid[k + 1] - kappa_grid[k - 1]);
  };

  // The slow branch is the partner that climbs highest before its decay rate turns over.
  std::size_t sign_change = 0;
  double peak = -std::numeric_limits<double>::infinity();
  for (int b = 0; b < tr.branches(); ++b) {
    if (b == tr.fast_branch) continue;
    for (std::size_t k = 1; k + 2 < nk; ++k) {
      if (derivative(b, k) > 0.0 && derivative(b, k + 1) < 0.0) {
        const double g = std::max(tr.decay_rate(b, k), tr.decay_rate(b, k + 1));
        if (g > peak) {
          peak = g;
          out.slow_branch = b;
          sign_change = k;
        }
        break;
      }
    }
  }
  if (out.slow_branch < 0) return out;

  const std::size_t lo = sign_change - 1;
  const std::size_t hi = std::min(sign_change + 2, nk - 1);
  auto slow_rate = [&](double kappa) {
    const auto upper = std::upper_bound(kappa_grid.begin(), kappa_grid.end(), kappa);
    std::size_t ref = upper == kappa_grid.end() ? nk - 1 : static_cast<std::size_t>(upper - kappa_grid.begin());
    ref = std::clamp(ref, lo, hi);
    const ModeSet m = eigendecompose(builder(kappa));
    return m.decay_rate(best_match(m, tr.vectors[ref].col(out.slow_branch)));
  };
  out.kappa_pt = brent_maximize(slow_rate, kappa_grid[lo], kappa_grid[hi],
                                refine_tol * std::max(1.0, kappa_grid[sign_change]));
  out.found = true;
  return out;
}

void label_fast_slow(ModeSet& modes, const PtTransition& scan, double kappa) {
  const auto& ks = scan.track.kappas;
  if (ks.empty()) return;
  std::size_t k = 0;
  for (std::size_t i = 1; i < ks.size(); ++i)
    if (std::abs(ks[i] - kappa) < std::abs(ks[k] - kappa)) k = i;
  for (auto& t : modes.tags) t &= static_cast<std::uint8_t>(~(static_cast<unsigned>(ModeTag::Fast) | static_cast<unsigned>(ModeTag::Slow)));
  if (scan.fast_branch >= 0)
    modes.add_tag(best_match(modes, scan.track.vectors[k].col(scan.fast_branch)), ModeTag::Fast);
  if (scan.slow_branch >= 0)
    modes.add_tag(best_match(modes, scan.track.vectors[k].col(scan.slow_branch)), ModeTag::Slow);
}

}  // namespace ettrap
