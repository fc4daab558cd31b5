#pragma once

#include <ostream>
#include <set>
#include <string>

#include "ettrap/config.hpp"
#include "ettrap/csv.hpp"
#include "ettrap/scenario.hpp"

namespace ettrap {

struct CommandOptions {
  int threads = 1;
  bool strict = false;
  std::ostream* warnings = nullptr;
};

/// Keys accepted by `command` (dynamics, sweep-trap, dephasing, ep-locus, disorder, plot).
const std::set<std::string>& known_keys(const std::string& command);

/// Physical run built from the shared keys. Rates honour rate_units / kappa_units.
Scenario scenario_from_config(const Config& cfg);

/// t, rho_11..rho_NN, trap_pop, vacuum_pop, coherence, total_entanglement
CsvTable cmd_dynamics(const Config& cfg, const CommandOptions& opts);
/// a_lambda, kappa, efficiency, tau_C, tau_E, kappa_opt_row_flag
CsvTable cmd_sweep_trap(const Config& cfg, const CommandOptions& opts);
/// dephasing_rate, efficiencies for localized / gaussian states under cooperative and
/// independent decay, mean_coherence, residence times
CsvTable cmd_dephasing(const Config& cfg, const CommandOptions& opts);
/// N, re_kappa, im_kappa, confirmed, on_real_axis (kappa in units of J)
CsvTable cmd_ep_locus(const Config& cfg, const CommandOptions& opts);
/// sigma0, kappa, mean_eff, band_lo, band_hi, n_realizations, seed
CsvTable cmd_disorder(const Config& cfg, const CommandOptions& opts);
/// SVG document for the CSV named by the `input` key.
std::string cmd_plot(const Config& cfg, const CommandOptions& opts);

}  // namespace ettrap
