#include "ettrap/disorder.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

#include "ettrap/errors.hpp"
#include "ettrap/parallel.hpp"

namespace ettrap {

namespace {

double quantile(const std::vector<double>& sorted, double q) {
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double w = pos - static_cast<double>(lo);
  return sorted[lo] + w * (sorted[hi] - sorted[lo]);
}

double draw(double sigma0, std::mt19937_64& engine) {
  std::normal_distribution<double> normal(0.0, 1.0);
  const double z = normal(engine);
  return sigma0 == 0.0 ? 0.0 : sigma0 * z;
}

}  // namespace

void DisorderSpec::validate() const {
  if (!(sigma0 >= 0.0) || !std::isfinite(sigma0)) throw std::invalid_argument("sigma0 must be >= 0");
  if (n_realizations < 1) throw std::invalid_argument("need at least one realization");
}

std::uint64_t realization_seed(std::uint64_t master, std::uint64_t index) {
  std::uint64_t z = master + index + 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

std::vector<double> sample_detunings(const DisorderSpec& spec) {
  spec.validate();
  std::vector<double> out(static_cast<std::size_t>(spec.n_realizations));
  for (int i = 0; i < spec.n_realizations; ++i) {
    std::mt19937_64 engine(realization_seed(spec.seed, static_cast<std::uint64_t>(i)));
    out[static_cast<std::size_t>(i)] = draw(spec.sigma0, engine);
  }
  return out;
}

Eigen::VectorXd sample_site_detunings(const DisorderSpec& spec, int index, int n_sites) {
  spec.validate();
  std::mt19937_64 engine(realization_seed(spec.seed, static_cast<std::uint64_t>(index)));
  Eigen::VectorXd d(n_sites);
  for (int i = 0; i < n_sites; ++i) d[i] = draw(spec.sigma0, engine);
  return d;
}

std::string_view to_string(BandKind kind) {
  return kind == BandKind::CentralQuantile ? "central_quantile" : "mean_fraction";
}

BandKind band_kind_from_string(std::string_view name) {
  if (name == "central_quantile") return BandKind::CentralQuantile;
  if (name == "mean_fraction") return BandKind::MeanFraction;
  throw ConfigError("unknown band kind '" + std::string(name) + "' (central_quantile | mean_fraction)");
}

std::string_view to_string(DisorderTarget target) {
  return target == DisorderTarget::Acceptor ? "acceptor" : "all_sites";
}

DisorderTarget disorder_target_from_string(std::string_view name) {
  if (name == "acceptor") return DisorderTarget::Acceptor;
  if (name == "all_sites") return DisorderTarget::AllSites;
  throw ConfigError("unknown disorder target '" + std::string(name) + "' (acceptor | all_sites)");
}

EnsembleResult summarize(std::vector<double> values, const BandSpec& band) {
  if (values.empty()) throw std::invalid_argument("empty ensemble");
  if (!(band.fraction > 0.0 && band.fraction <= 1.0)) throw std::invalid_argument("band fraction must lie in (0, 1]");
  EnsembleResult r;
  r.band = band;
  // offset form keeps the mean exact when all values coincide
  const double ref = values.front();
  double acc = 0.0;
  for (const double v : values) acc += v - ref;
  r.mean = ref + acc / static_cast<double>(values.size());
  std::vector<double> sorted = values;
  std::sort(sorted.begin(), sorted.end());
  r.mean = std::clamp(r.mean, sorted.front(), sorted.back());
  if (band.kind == BandKind::CentralQuantile) {
    r.band_lo = quantile(sorted, 0.5 - 0.5 * band.fraction);
    r.band_hi = quantile(sorted, 0.5 + 0.5 * band.fraction);
  } else {
    r.band_lo = r.mean * (1.0 - band.fraction);
    r.band_hi = r.mean * (1.0 + band.fraction);
  }
  r.efficiencies = std::move(values);
  return r;
}

EnsembleResult run_ensemble(const EffectiveHamiltonian& base, const EfficiencyFn& efficiency,
                            const DisorderSpec& spec, const EnsembleOptions& opts) {
  spec.validate();
  const std::vector<double> deltas = sample_detunings(spec);
  std::vector<double> values(static_cast<std::size_t>(spec.n_realizations));
  parallel_for(values.size(), opts.threads, [&](std::size_t i) {
    try {
      const EffectiveHamiltonian h =
          opts.target == DisorderTarget::Acceptor
              ? with_detuning(base, base.detuning + deltas[i])
              : with_site_detunings(base, sample_site_detunings(spec, static_cast<int>(i), base.size()));
      values[i] = efficiency(h);
    } catch (const std::exception& e) {
      std::ostringstream msg;
      msg << "disorder realization " << i << " (seed " << realization_seed(spec.seed, i) << ") failed: " << e.what();
      throw NumericalError(msg.str());
    }
  });
  return summarize(std::move(values), opts.band);
}

}  // namespace ettrap
