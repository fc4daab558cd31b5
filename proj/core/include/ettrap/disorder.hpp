#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "ettrap/hamiltonian.hpp"

namespace ettrap {

struct DisorderSpec {
  double sigma0 = 0.0;  ///< standard deviation of the detuning, same units as the Hamiltonian
  int n_realizations = 100;
  std::uint64_t seed = 0;

  void validate() const;
};

/// Counter-based seed for realization `index`: splitmix64(master + index).
std::uint64_t realization_seed(std::uint64_t master, std::uint64_t index);

/// One acceptor detuning per realization, N(0, sigma0). Realization i draws from
/// its own engine, so the sequence is independent of how it is consumed.
std::vector<double> sample_detunings(const DisorderSpec& spec);

/// Per-site detunings for realization `index` (all-sites variant).
Eigen::VectorXd sample_site_detunings(const DisorderSpec& spec, int index, int n_sites);

enum class DisorderTarget {
  Acceptor,  ///< Delta on the trap site only
  AllSites,  ///< independent Delta on every site (exploratory)
};

enum class BandKind {
  CentralQuantile,  ///< quantiles 0.5 -/+ fraction/2 of the realizations
  MeanFraction,     ///< mean * (1 -/+ fraction)
};

struct BandSpec {
  BandKind kind = BandKind::CentralQuantile;
  double fraction = 0.3;
};

std::string_view to_string(BandKind kind);
BandKind band_kind_from_string(std::string_view name);
std::string_view to_string(DisorderTarget target);
DisorderTarget disorder_target_from_string(std::string_view name);

struct EnsembleResult {
  std::vector<double> efficiencies;  ///< in realization order
  double mean = 0.0;
  double band_lo = 0.0;
  double band_hi = 0.0;
  BandSpec band;
};

struct EnsembleOptions {
  DisorderTarget target = DisorderTarget::Acceptor;
  BandSpec band;
  int threads = 1;
};

using EfficiencyFn = std::function<double(const EffectiveHamiltonian&)>;

/// Evaluates `efficiency` on `base` with each realization's detuning applied.
/// A failing realization aborts the run with a NumericalError naming its index and seed.
EnsembleResult run_ensemble(const EffectiveHamiltonian& base, const EfficiencyFn& efficiency,
                            const DisorderSpec& spec, const EnsembleOptions& opts = {});

/// Mean and band of a finished sample.
EnsembleResult summarize(std::vector<double> values, const BandSpec& band);

}  // namespace ettrap
