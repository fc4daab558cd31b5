#include "ettrap/initial_state.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "ettrap/errors.hpp"
#include "ettrap/spectra.hpp"

namespace ettrap {

namespace {

EffectiveHamiltonian trap_free_chain(const EffectiveHamiltonian& h, bool cooperative) {
  if (h.source_geometry)
    return build_h_chain(*h.source_geometry, cooperative ? DecayModel::Cooperative : h.decay_model);
  return with_trap(with_detuning(h, 0.0), 0.0);
}

double parse_number(std::string_view text, std::string_view what) {
  std::string s(text);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size()) throw ConfigError("bad " + std::string(what) + " in initial state: '" + s + "'");
  return v;
}

}  // namespace

InitialState parse_initial_state(std::string_view text) {
  const auto colon = text.find(':');
  const std::string_view head = text.substr(0, colon);
  const std::string_view arg = colon == std::string_view::npos ? std::string_view{} : text.substr(colon + 1);
  if (head == "dark" && arg.empty()) return InitialState::dark();
  if (head == "bright" && arg.empty()) return InitialState::bright();
  if (head == "site" || head == "mode") {
    const double v = parse_number(arg, "index");
    if (v != std::floor(v) || v < 1) throw ConfigError("initial state index must be a positive integer");
    return head == "site" ? InitialState::site(static_cast<int>(v)) : InitialState::mode(static_cast<int>(v));
  }
  if (head == "gaussian") {
    const double s = arg.empty() ? 3.0 : parse_number(arg, "width");
    if (!(s > 0.0)) throw ConfigError("gaussian width must be > 0");
    return InitialState::gaussian(s);
  }
  throw ConfigError("unknown initial state '" + std::string(text) +
                    "' (expected site:k, gaussian:s, dark, bright or mode:n)");
}

std::string to_string(const InitialState& s) {
  std::ostringstream out;
  switch (s.kind) {
    case InitialState::Kind::Site: out << "site:" << s.index; break;
    case InitialState::Kind::Gaussian: out << "gaussian:" << s.width; break;
    case InitialState::Kind::Dark: out << "dark"; break;
    case InitialState::Kind::Bright: out << "bright"; break;
    case InitialState::Kind::Mode: out << "mode:" << s.index; break;
  }
  return out.str();
}

Eigen::VectorXcd gaussian_initial_state(int n_emitters, double s) {
  if (n_emitters < 1) throw std::invalid_argument("gaussian state needs N >= 1");
  if (!(s > 0.0)) throw std::invalid_argument("gaussian width must be > 0");
  Eigen::VectorXcd v(n_emitters);
  for (int j = 1; j <= n_emitters; ++j) {
    const double x = j - 0.5 * (n_emitters + 1);
    v[j - 1] = std::exp(-x * x / (2.0 * s * s));
  }
  return v.normalized();
}

Eigen::VectorXcd gaussian_initial_state(const ChainGeometry& geom, double s) {
  return gaussian_initial_state(geom.size(), s);
}

Eigen::VectorXcd resolve_initial_state(const InitialState& state, const EffectiveHamiltonian& h) {
  const int n = h.size();
  switch (state.kind) {
    case InitialState::Kind::Site: {
      if (state.index < 1 || state.index > n)
        throw ConfigError("initial site " + std::to_string(state.index) + " outside 1.." + std::to_string(n));
      Eigen::VectorXcd v = Eigen::VectorXcd::Zero(n);
      v[state.index - 1] = 1.0;
      return v;
    }
    case InitialState::Kind::Gaussian:
      return gaussian_initial_state(n, state.width);
    case InitialState::Kind::Dark:
    case InitialState::Kind::Bright: {
      const ModeSet modes = eigendecompose(trap_free_chain(h, true));
      const int k = modes.find(state.kind == InitialState::Kind::Dark ? ModeTag::Dark : ModeTag::Bright);
      return modes.vectors.col(k);
    }
    case InitialState::Kind::Mode: {
      if (state.index < 1 || state.index > n)
        throw ConfigError("mode index " + std::to_string(state.index) + " outside 1.." + std::to_string(n));
      const ModeSet modes = eigendecompose(trap_free_chain(h, false));
      return modes.vectors.col(state.index - 1);
    }
  }
  throw std::logic_error("unhandled initial state kind");
}

}  // namespace ettrap
