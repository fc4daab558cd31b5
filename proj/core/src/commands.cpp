#include "ettrap/commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "ettrap/disorder.hpp"
#include "ettrap/errors.hpp"
#include "ettrap/metrics.hpp"
#include "ettrap/nn_poly.hpp"
#include "ettrap/parallel.hpp"
#include "ettrap/svg.hpp"

namespace ettrap {

namespace {

const std::set<std::string> kScenarioKeys = {
    "chain",      "n_emitters", "spacing_lambda", "polarization", "decay_model", "hopping",
    "rate_units", "kappa_units", "kappa",         "trap_site",    "detuning",    "dephasing_rate",
    "initial_state", "t_max",   "n_samples",      "rtol",         "atol",        "propagator",
    "seed"};

std::set<std::string> with_scenario(std::initializer_list<const char*> extra) {
  std::set<std::string> s = kScenarioKeys;
  for (const char* k : extra) s.insert(k);
  return s;
}

const std::map<std::string, std::set<std::string>>& key_table() {
  static const std::map<std::string, std::set<std::string>> table = {
      {"dynamics", with_scenario({"bipartitions"})},
      {"sweep-trap", with_scenario({"kappa_grid", "spacing_grid", "bipartitions"})},
      {"dephasing", with_scenario({"dephasing_grid", "localized_state", "gaussian_width", "residence_basis"})},
      {"ep-locus", {"n_list", "hopping", "ep_scan_radius", "ep_grid_points", "seed"}},
      {"disorder", with_scenario({"sigma0_grid", "kappa_list", "n_realizations", "band", "band_fraction",
                                  "disorder_target"})},
      {"plot", {"input", "kind", "x", "y", "z", "log_x", "log_y", "title", "x_label", "y_label", "width", "height"}},
  };
  return table;
}

void check(const Config& cfg, const std::string& command, const CommandOptions& opts) {
  cfg.check_keys(known_keys(command), opts.strict, opts.warnings);
}

Bipartitions bipartitions_from(const Config& cfg) {
  const std::string b = cfg.get_string("bipartitions", "contiguous");
  if (b == "contiguous") return Bipartitions::Contiguous;
  if (b == "all") return Bipartitions::AllSubsets;
  throw ConfigError("bipartitions must be 'contiguous' or 'all'", cfg.line_of("bipartitions"));
}

Propagator propagator_from(const Config& cfg) {
  const std::string p = cfg.get_string("propagator", "auto");
  if (p == "auto") return Propagator::Auto;
  if (p == "spectral") return Propagator::Spectral;
  if (p == "adaptive") return Propagator::Adaptive;
  throw ConfigError("propagator must be auto, spectral or adaptive", cfg.line_of("propagator"));
}

/// Multipliers turning config rates into units of gamma.
struct UnitScale {
  std::string rate_units;
  std::string kappa_units;

  double rate(const Scenario& s) const { return rate_units == "j" ? s.nearest_neighbor_coupling() : 1.0; }
  double kappa(const Scenario& s) const {
    if (kappa_units == "j") return s.nearest_neighbor_coupling();
    if (kappa_units == "kappa_opt") return 2.0 * s.nearest_neighbor_coupling();
    return 1.0;
  }
};

UnitScale units_from(const Config& cfg) {
  UnitScale u;
  u.rate_units = cfg.get_string("rate_units", "gamma");
  if (u.rate_units != "gamma" && u.rate_units != "j")
    throw ConfigError("rate_units must be 'gamma' or 'j'", cfg.line_of("rate_units"));
  u.kappa_units = cfg.get_string("kappa_units", u.rate_units);
  if (u.kappa_units != "gamma" && u.kappa_units != "j" && u.kappa_units != "kappa_opt")
    throw ConfigError("kappa_units must be 'gamma', 'j' or 'kappa_opt'", cfg.line_of("kappa_units"));
  return u;
}

void require_coupling(const Scenario& s, const UnitScale& u) {
  if ((u.rate_units != "gamma" || u.kappa_units != "gamma") && !(s.nearest_neighbor_coupling() > 0.0))
    throw ConfigError("rates in units of J need a chain with non-zero nearest-neighbour coupling");
}

/// Scenario with raw (unscaled) rate values, plus the unit choice.
Scenario base_scenario(const Config& cfg) {
  Scenario s;
  const std::string chain = cfg.get_string("chain", "dipole");
  if (chain == "dipole") s.chain = ChainKind::Dipole;
  else if (chain == "nearest_neighbor") s.chain = ChainKind::NearestNeighbor;
  else throw ConfigError("chain must be 'dipole' or 'nearest_neighbor'", cfg.line_of("chain"));
  s.n_emitters = cfg.get_int("n_emitters", 10);
  if (s.n_emitters < 1 || s.n_emitters > 64) throw ConfigError("n_emitters must lie in 1..64", cfg.line_of("n_emitters"));
  if (s.chain == ChainKind::Dipole) {
    s.spacing_lambda = cfg.get_double("spacing_lambda", 0.05);
    s.orientation = cfg.get_orientation("polarization", "transverse");
    s.model = decay_model_from_string(cfg.get_string("decay_model", "cooperative"));
  } else {
    s.hopping = cfg.get_double("hopping", 1.0);
    s.model = DecayModel::Independent;
  }
  s.trap_site = cfg.get_int("trap_site", s.n_emitters);
  s.kappa = cfg.get_double("kappa", 0.0);
  s.detuning = cfg.get_double("detuning", 0.0);
  s.dephasing = cfg.get_double("dephasing_rate", 0.0);
  s.initial = parse_initial_state(cfg.get_string("initial_state", "site:1"));
  s.grid.t_max = cfg.get_double("t_max", 10.0);
  s.grid.n_steps = cfg.get_int("n_samples", 1001) - 1;
  s.grid.rtol = cfg.get_double("rtol", 1e-9);
  s.grid.atol = cfg.get_double("atol", 1e-12);
  s.propagator = propagator_from(cfg);
  if (s.kappa < 0.0) throw ConfigError("kappa must be >= 0", cfg.line_of("kappa"));
  if (s.dephasing < 0.0) throw ConfigError("dephasing_rate must be >= 0", cfg.line_of("dephasing_rate"));
  return s;
}

/// Scales kappa, detuning and dephasing from config units to gamma.
Scenario scaled(Scenario s, const UnitScale& u, double kappa_raw) {
  s.kappa = kappa_raw * u.kappa(s);
  return s;
}

std::vector<std::string> unit_notes(const UnitScale& u) {
  return {"units.time = 1/gamma", "units.rates = " + u.rate_units, "units.kappa = " + u.kappa_units};
}

double fit_or_nan(const ScalarSeries& s) {
  try {
    return fit_decay_time(s).tau;
  } catch (const NumericalError&) {
    return std::numeric_limits<double>::quiet_NaN();
  }
}

}  // namespace

const std::set<std::string>& known_keys(const std::string& command) {
  const auto& table = key_table();
  const auto it = table.find(command);
  if (it == table.end()) throw ConfigError("unknown command '" + command + "'");
  return it->second;
}

Scenario scenario_from_config(const Config& cfg) {
  const UnitScale u = units_from(cfg);
  Scenario s = base_scenario(cfg);
  require_coupling(s, u);
  const double rate = u.rate(s);
  s.detuning *= rate;
  s.dephasing *= rate;
  s = scaled(s, u, s.kappa);
  s.validate();
  return s;
}

CsvTable cmd_dynamics(const Config& cfg, const CommandOptions& opts) {
  check(cfg, "dynamics", opts);
  const Scenario s = scenario_from_config(cfg);
  const Bipartitions bp = bipartitions_from(cfg);
  const UnitScale u = units_from(cfg);
  const Trajectory tr = simulate(s);
  const ScalarSeries coh = coherence_series(tr);
  const ScalarSeries ent = entanglement_series(tr, bp);

  CsvTable t;
  t.columns.push_back("t");
  for (int i = 1; i <= s.n_emitters; ++i) t.columns.push_back("rho_" + std::to_string(i) + std::to_string(i));
  for (const char* c : {"trap_pop", "vacuum_pop", "coherence", "total_entanglement"}) t.columns.push_back(c);
  for (std::size_t k = 0; k < tr.samples(); ++k) {
    std::vector<std::string> row{format_number(tr.times[k])};
    for (int i = 0; i < s.n_emitters; ++i) row.push_back(format_number(tr.site_population(k, i)));
    row.push_back(format_number(tr.trap_pop[k]));
    row.push_back(format_number(tr.vacuum_pop[k]));
    row.push_back(format_number(coh.values[k]));
    row.push_back(format_number(ent.values[k]));
    t.add_row(std::move(row));
  }
  std::vector<std::string> extra = unit_notes(u);
  extra.push_back("kappa_gamma = " + format_number(s.kappa));
  extra.push_back("nn_coupling_gamma = " + format_number(s.nearest_neighbor_coupling()));
  extra.push_back(std::string("propagator_used = ") + (tr.method_used == Propagator::Adaptive ? "adaptive" : "spectral"));
  t.metadata = metadata_block("dynamics", cfg.effective(), extra);
  return t;
}

CsvTable cmd_sweep_trap(const Config& cfg, const CommandOptions& opts) {
  check(cfg, "sweep-trap", opts);
  const UnitScale u = units_from(cfg);
  const Scenario base = scenario_from_config(cfg);
  const Bipartitions bp = bipartitions_from(cfg);
  const std::vector<double> spacings =
      base.chain == ChainKind::Dipole ? cfg.get_grid("spacing_grid", format_exact(base.spacing_lambda))
                                      : std::vector<double>{base.spacing_lambda};
  const std::vector<double> kappas = cfg.get_grid("kappa_grid", "0.1:1000:61:log");
  for (const double a : spacings)
    if (!(a > 0.0)) throw ConfigError("spacing_grid values must be > 0", cfg.line_of("spacing_grid"));
  for (const double k : kappas)
    if (!(k >= 0.0)) throw ConfigError("kappa_grid values must be >= 0", cfg.line_of("kappa_grid"));

  struct Point {
    double efficiency, tau_c, tau_e;
  };
  const std::size_t nk = kappas.size();
  std::vector<Point> results(spacings.size() * nk);
  parallel_for(results.size(), opts.threads, [&](std::size_t idx) {
    Scenario s = base;
    s.spacing_lambda = spacings[idx / nk];
    require_coupling(s, u);
    // detuning / dephasing follow the row's own J when rates are in units of J
    const double rate = u.rate(s) / u.rate(base);
    s.detuning *= rate;
    s.dephasing *= rate;
    s = scaled(s, u, kappas[idx % nk]);
    const Trajectory tr = simulate(s);
    results[idx] = {tr.trap_pop.back(), fit_or_nan(coherence_series(tr)), fit_or_nan(entanglement_series(tr, bp))};
  });

  CsvTable t;
  t.columns = {"a_lambda", "kappa", "efficiency", "tau_C", "tau_E", "kappa_opt_row_flag"};
  std::vector<std::string> extra = unit_notes(u);
  for (std::size_t r = 0; r < spacings.size(); ++r) {
    std::size_t best = r * nk;
    for (std::size_t c = 0; c < nk; ++c)
      if (results[r * nk + c].efficiency > results[best].efficiency) best = r * nk + c;
    for (std::size_t c = 0; c < nk; ++c) {
      const Point& p = results[r * nk + c];
      t.add_row({format_number(spacings[r]), format_number(kappas[c]), format_number(p.efficiency),
                 format_number(p.tau_c), format_number(p.tau_e), r * nk + c == best ? "1" : "0"});
    }
    Scenario s = base;
    s.spacing_lambda = spacings[r];
    const double kappa_gv = 2.0 * s.nearest_neighbor_coupling() / u.kappa(s);
    extra.push_back("argmax a_lambda = " + format_number(spacings[r]) + ", kappa = " + format_number(kappas[best - r * nk]) +
                    ", efficiency = " + format_number(results[best].efficiency) +
                    ", kappa_group_velocity = " + format_number(kappa_gv));
  }
  t.metadata = metadata_block("sweep-trap", cfg.effective(), extra);
  return t;
}

CsvTable cmd_dephasing(const Config& cfg, const CommandOptions& opts) {
  check(cfg, "dephasing", opts);
  const UnitScale u = units_from(cfg);
  const Scenario base = scenario_from_config(cfg);
  const std::vector<double> rates = cfg.get_grid("dephasing_grid", "0, 0.1, 0.2, 0.5, 1, 2, 5, 10");
  for (const double g : rates)
    if (!(g >= 0.0)) throw ConfigError("dephasing_grid values must be >= 0", cfg.line_of("dephasing_grid"));
  const InitialState localized = parse_initial_state(cfg.get_string("localized_state", "site:1"));
  const double width = cfg.get_double("gaussian_width", 3.0);
  if (!(width > 0.0)) throw ConfigError("gaussian_width must be > 0", cfg.line_of("gaussian_width"));
  const std::string basis_name = cfg.get_string("residence_basis", "chain");
  if (basis_name != "chain" && basis_name != "trapped")
    throw ConfigError("residence_basis must be 'chain' or 'trapped'", cfg.line_of("residence_basis"));
  const double rate_scale = u.rate(base);

  Scenario coop = base;
  Scenario indep = base;
  if (base.chain == ChainKind::Dipole) {
    coop.model = DecayModel::Cooperative;
    indep.model = DecayModel::Independent;
  }
  const EffectiveHamiltonian h_coop = coop.hamiltonian();
  const EffectiveHamiltonian h_indep = indep.hamiltonian();
  const ModeSet basis = basis_name == "chain" ? chain_eigenbasis(h_coop) : eigendecompose(h_coop);
  const int bright = basis.find(ModeTag::Bright);
  const int dark = basis.find(ModeTag::Dark);
  const Eigen::VectorXcd psi_loc = resolve_initial_state(localized, h_coop);
  const Eigen::VectorXcd psi_gauss = gaussian_initial_state(base.n_emitters, width);
  const int n = base.n_emitters;

  struct Row {
    double eff_loc, eff_gauss, eff_loc_ind, eff_gauss_ind, mean_coherence;
    Eigen::VectorXd tau_loc, tau_gauss;
  };
  std::vector<Row> rows(rates.size());
  parallel_for(rates.size(), opts.threads, [&](std::size_t i) {
    const double gphi = rates[i] * rate_scale;
    auto run = [&](const Eigen::VectorXcd& psi) {
      if (gphi == 0.0) return propagate_pure(h_coop, psi, base.grid, base.propagator);
      return propagate_lindblad(h_coop, gphi, Eigen::MatrixXcd(psi * psi.adjoint()), base.grid, base.propagator);
    };
    const Trajectory loc = run(psi_loc);
    const Trajectory gauss = run(psi_gauss);
    Row r;
    r.eff_loc = loc.trap_pop.back();
    r.eff_gauss = gauss.trap_pop.back();
    r.eff_loc_ind = final_efficiency(h_indep, gphi, psi_loc, base.grid, base.propagator);
    r.eff_gauss_ind = final_efficiency(h_indep, gphi, psi_gauss, base.grid, base.propagator);
    r.mean_coherence = time_average(coherence_series(gauss), base.grid.t_max);
    r.tau_loc = mean_residence_time(loc, basis, base.grid.t_max);
    r.tau_gauss = mean_residence_time(gauss, basis, base.grid.t_max);
    rows[i] = std::move(r);
  });

  CsvTable t;
  t.columns = {"dephasing_rate",        "efficiency_localized", "efficiency_gaussian",
               "efficiency_localized_independent", "efficiency_gaussian_independent", "mean_coherence",
               "tau_bright_localized",  "tau_dark_localized",   "tau_bright_gaussian",
               "tau_dark_gaussian"};
  for (int m = 1; m <= n; ++m) t.columns.push_back("tau_localized_" + std::to_string(m));
  for (int m = 1; m <= n; ++m) t.columns.push_back("tau_gaussian_" + std::to_string(m));
  for (std::size_t i = 0; i < rates.size(); ++i) {
    const Row& r = rows[i];
    std::vector<std::string> row{format_number(rates[i]),        format_number(r.eff_loc),
                                 format_number(r.eff_gauss),     format_number(r.eff_loc_ind),
                                 format_number(r.eff_gauss_ind), format_number(r.mean_coherence),
                                 format_number(r.tau_loc[bright]), format_number(r.tau_loc[dark]),
                                 format_number(r.tau_gauss[bright]), format_number(r.tau_gauss[dark])};
    for (int m = 0; m < n; ++m) row.push_back(format_number(r.tau_loc[m]));
    for (int m = 0; m < n; ++m) row.push_back(format_number(r.tau_gauss[m]));
    t.add_row(std::move(row));
  }
  std::vector<std::string> extra = unit_notes(u);
  extra.push_back("residence.basis = " + basis_name + " (cooperative model, modes ascending in energy)");
  extra.push_back("residence.bright_mode = " + std::to_string(bright + 1));
  extra.push_back("residence.dark_mode = " + std::to_string(dark + 1));
  extra.push_back("mean_coherence = time average of the l1 coherence, gaussian state, cooperative model");
  t.metadata = metadata_block("dephasing", cfg.effective(), extra);
  return t;
}

CsvTable cmd_ep_locus(const Config& cfg, const CommandOptions& opts) {
  check(cfg, "ep-locus", opts);
  const std::vector<int> ns = cfg.get_int_list("n_list", "2:8:7");
  const double hopping = cfg.get_double("hopping", 1.0);
  EpLocusOptions eo;
  eo.scan_radius = cfg.get_double("ep_scan_radius", eo.scan_radius);
  eo.grid_points = cfg.get_int("ep_grid_points", eo.grid_points);
  if (hopping == 0.0) throw ConfigError("hopping must be non-zero", cfg.line_of("hopping"));
  if (!(eo.scan_radius > 0.0)) throw ConfigError("ep_scan_radius must be > 0", cfg.line_of("ep_scan_radius"));
  if (eo.grid_points < 5) throw ConfigError("ep_grid_points must be >= 5", cfg.line_of("ep_grid_points"));
  for (const int n : ns)
    if (n < 2 || n > 40) throw ConfigError("n_list entries must lie in 2..40", cfg.line_of("n_list"));

  std::vector<std::vector<EPCandidate>> found(ns.size());
  parallel_for(ns.size(), opts.threads, [&](std::size_t i) { found[i] = nn_ep_locus(ns[i], hopping, eo); });

  CsvTable t;
  t.columns = {"N", "re_kappa", "im_kappa", "confirmed", "on_real_axis"};
  std::vector<std::string> extra = {"units.kappa = J", "on_real_axis = positive real kappa axis (|Im| < 1e-8 J)"};
  const double scale = std::abs(hopping);
  for (std::size_t i = 0; i < ns.size(); ++i) {
    int confirmed = 0;
    for (const auto& c : found[i]) {
      confirmed += c.confirmed ? 1 : 0;
      t.add_row({format_integer(ns[i]), format_number(c.kappa.real() / scale),
                 format_number(std::abs(c.kappa.imag()) < 1e-8 * scale ? 0.0 : c.kappa.imag() / scale),
                 c.confirmed ? "1" : "0", c.on_positive_real_axis ? "1" : "0"});
    }
    extra.push_back("ep.N = " + std::to_string(ns[i]) + ", candidates = " + std::to_string(found[i].size()) +
                    ", confirmed = " + std::to_string(confirmed));
  }
  t.metadata = metadata_block("ep-locus", cfg.effective(), extra);
  return t;
}

CsvTable cmd_disorder(const Config& cfg, const CommandOptions& opts) {
  check(cfg, "disorder", opts);
  const UnitScale u = units_from(cfg);
  const Scenario base = scenario_from_config(cfg);
  const std::vector<double> sigmas = cfg.get_grid("sigma0_grid", "0, 1, 2, 4");
  const std::vector<double> kappas = cfg.get_grid("kappa_list", "1, 10");
  DisorderSpec spec;
  spec.n_realizations = cfg.get_int("n_realizations", 100);
  spec.seed = cfg.get_u64("seed", 0);
  EnsembleOptions eo;
  eo.band.kind = band_kind_from_string(cfg.get_string("band", "central_quantile"));
  eo.band.fraction = cfg.get_double("band_fraction", 0.3);
  eo.target = disorder_target_from_string(cfg.get_string("disorder_target", "acceptor"));
  eo.threads = opts.threads;
  if (spec.n_realizations < 1) throw ConfigError("n_realizations must be >= 1", cfg.line_of("n_realizations"));
  if (!(eo.band.fraction > 0.0 && eo.band.fraction <= 1.0))
    throw ConfigError("band_fraction must lie in (0, 1]", cfg.line_of("band_fraction"));
  for (const double s : sigmas)
    if (!(s >= 0.0)) throw ConfigError("sigma0_grid values must be >= 0", cfg.line_of("sigma0_grid"));
  for (const double k : kappas)
    if (!(k >= 0.0)) throw ConfigError("kappa_list values must be >= 0", cfg.line_of("kappa_list"));

  CsvTable t;
  t.columns = {"sigma0", "kappa", "mean_eff", "band_lo", "band_hi", "n_realizations", "seed"};
  const double rate = u.rate(base);
  for (const double sigma : sigmas) {
    for (const double kappa : kappas) {
      const Scenario s = scaled(base, u, kappa);
      const EffectiveHamiltonian h = s.hamiltonian();
      const Eigen::VectorXcd psi0 = resolve_initial_state(s.initial, h);
      DisorderSpec ds = spec;
      ds.sigma0 = sigma * rate;
      const EnsembleResult r = run_ensemble(
          h, [&](const EffectiveHamiltonian& hd) { return final_efficiency(hd, s.dephasing, psi0, s.grid, s.propagator); },
          ds, eo);
      t.add_row({format_number(sigma), format_number(kappa), format_number(r.mean), format_number(r.band_lo),
                 format_number(r.band_hi), format_integer(spec.n_realizations), format_unsigned(spec.seed)});
    }
  }
  std::vector<std::string> extra = unit_notes(u);
  extra.push_back("band = " + std::string(to_string(eo.band.kind)) + ", fraction = " + format_number(eo.band.fraction));
  extra.push_back("disorder_target = " + std::string(to_string(eo.target)));
  t.metadata = metadata_block("disorder", cfg.effective(), extra);
  return t;
}

std::string cmd_plot(const Config& cfg, const CommandOptions& opts) {
  check(cfg, "plot", opts);
  const std::string input = cfg.get_string("input", "");
  if (input.empty()) throw ConfigError("plot needs an 'input' CSV path");
  std::ifstream in(input);
  if (!in) throw ConfigError("cannot open plot input '" + input + "'");
  const CsvTable data = read_csv(in);

  PlotSpec spec;
  const std::string kind = cfg.get_string("kind", "line");
  if (kind == "line") spec.kind = PlotSpec::Kind::Line;
  else if (kind == "heatmap") spec.kind = PlotSpec::Kind::Heatmap;
  else throw ConfigError("kind must be 'line' or 'heatmap'", cfg.line_of("kind"));
  spec.x = cfg.get_string("x", "");
  std::istringstream ys(cfg.get_string("y", ""));
  for (std::string col; std::getline(ys, col, ',');) {
    col.erase(0, col.find_first_not_of(' '));
    col.erase(col.find_last_not_of(' ') + 1);
    if (!col.empty()) spec.y.push_back(col);
  }
  if (spec.kind == PlotSpec::Kind::Heatmap) spec.z = cfg.get_string("z", "");
  spec.log_x = cfg.get_bool("log_x", false);
  spec.log_y = cfg.get_bool("log_y", false);
  spec.title = cfg.get_string("title", "");
  spec.x_label = cfg.get_string("x_label", "");
  spec.y_label = cfg.get_string("y_label", "");
  spec.width = cfg.get_int("width", 640);
  spec.height = cfg.get_int("height", 480);
  if (spec.x.empty() || spec.y.empty()) throw ConfigError("plot needs 'x' and 'y' column names");
  return render_svg(data, spec);
}

}  // namespace ettrap
