#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>
#include <vector>

#include "ettrap/errors.hpp"

namespace ettrap::ode {

struct Tolerances {
  double rtol = 1e-9;
  double atol = 1e-12;
  long max_steps = 20'000'000;
};

struct Stats {
  long accepted = 0;
  long rejected = 0;
  long rhs_calls = 0;
};

using State = Eigen::VectorXcd;
using Rhs = std::function<void(double, const State&, State&)>;

/// Dormand-Prince 5(4) embedded pair with FSAL and standard step-size control.
/// `integrate_to_grid` returns the state at every requested time; the integrator
/// lands exactly on each output time instead of interpolating.
class DormandPrince {
 public:
  DormandPrince(Rhs rhs, Tolerances tol) : rhs_(std::move(rhs)), tol_(tol) {}

  std::vector<State> integrate_to_grid(const State& y0, const std::vector<double>& times) {
    std::vector<State> out;
    out.reserve(times.size());
    State y = y0;
    double t = times.front();
    out.push_back(y);
    k1_.resize(y.size());
    rhs_(t, y, k1_);
    ++stats_.rhs_calls;
    if (h_ <= 0.0) h_ = initial_step(t, y);
    for (std::size_t i = 1; i < times.size(); ++i) {
      advance(t, y, times[i]);
      out.push_back(y);
    }
    return out;
  }

  const Stats& stats() const noexcept { return stats_; }

 private:
  double error_norm(const State& y, const State& ynew, const State& err) const {
    double e = 0.0;
    for (Eigen::Index i = 0; i < y.size(); ++i) {
      const double sc = tol_.atol + tol_.rtol * std::max(std::abs(y[i]), std::abs(ynew[i]));
      e = std::max(e, std::abs(err[i]) / sc);
    }
    return e;
  }

  double initial_step(double t, const State& y) {
    const double d0 = y.cwiseAbs().maxCoeff();
    const double d1 = k1_.cwiseAbs().maxCoeff();
    double h = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
    State y1 = y + h * k1_;
    State f1(y.size());
    rhs_(t + h, y1, f1);
    ++stats_.rhs_calls;
    const double d2 = (f1 - k1_).cwiseAbs().maxCoeff() / h;
    const double h1 = (std::max(d1, d2) <= 1e-15) ? std::max(1e-6, h * 1e-3)
                                                  : std::pow(0.01 / std::max(d1, d2), 0.2);
    return std::min(100.0 * h, h1);
  }

  void advance(double& t, State& y, double t_end) {
    // Butcher tableau (Dormand & Prince 1980).
    constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    constexpr double a21 = 1.0 / 5;
    constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                     a65 = -5103.0 / 18656;
    constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                     e6 = 22.0 / 525, e7 = -1.0 / 40;

    const Eigen::Index n = y.size();
    State k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), ytmp(n), ynew(n), err(n);
    while (t < t_end) {
      if (stats_.accepted + stats_.rejected >= tol_.max_steps) fail(t, "step budget exhausted");
      bool last = false;
      double h = h_;
      if (t + 1.01 * h >= t_end) {
        h = t_end - t;
        last = true;
      }
      ytmp = y + h * a21 * k1_;
      rhs_(t + c2 * h, ytmp, k2);
      ytmp = y + h * (a31 * k1_ + a32 * k2);
      rhs_(t + c3 * h, ytmp, k3);
      ytmp = y + h * (a41 * k1_ + a42 * k2 + a43 * k3);
      rhs_(t + c4 * h, ytmp, k4);
      ytmp = y + h * (a51 * k1_ + a52 * k2 + a53 * k3 + a54 * k4);
      rhs_(t + c5 * h, ytmp, k5);
      ytmp = y + h * (a61 * k1_ + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
      rhs_(t + h, ytmp, k6);
      ynew = y + h * (b1 * k1_ + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
      rhs_(t + h, ynew, k7);
      stats_.rhs_calls += 6;
      err = h * (e1 * k1_ + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
      const double en = error_norm(y, ynew, err);
      if (!std::isfinite(en)) fail(t, "non-finite error estimate");
      if (en <= 1.0) {
        ++stats_.accepted;
        t = last ? t_end : t + h;
        y = ynew;
        k1_ = k7;
        const double fac = en == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(en, -0.2), 0.2, 5.0);
        // A truncated final step says nothing about the natural step size.
        if (!last || fac < 1.0) h_ = h * fac;
      } else {
        ++stats_.rejected;
        h_ = h * std::max(0.2, 0.9 * std::pow(en, -0.2));
      }
      if (h_ < 1e-14 * std::max(1.0, std::abs(t))) fail(t, "step size underflow");
    }
  }

  [[noreturn]] void fail(double t, const char* why) const {
    std::ostringstream msg;
    msg << "adaptive integrator failed at t=" << t << ": " << why << " (accepted " << stats_.accepted
        << ", rejected " << stats_.rejected << ", rtol " << tol_.rtol << ", atol " << tol_.atol << ")";
    throw NumericalError(msg.str());
  }

  Rhs rhs_;
  Tolerances tol_;
  Stats stats_;
  State k1_;
  double h_ = 0.0;
};

}  // namespace ettrap::ode
