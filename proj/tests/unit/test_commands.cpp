#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "ettrap/commands.hpp"
#include "ettrap/errors.hpp"

using namespace ettrap;
namespace fs = std::filesystem;

namespace {

CsvTable run(const std::string& command, const std::string& text, int threads = 1) {
  const Config cfg = Config::parse(text);
  CommandOptions opts;
  opts.threads = threads;
  opts.strict = true;
  if (command == "dynamics") return cmd_dynamics(cfg, opts);
  if (command == "sweep-trap") return cmd_sweep_trap(cfg, opts);
  if (command == "dephasing") return cmd_dephasing(cfg, opts);
  if (command == "ep-locus") return cmd_ep_locus(cfg, opts);
  return cmd_disorder(cfg, opts);
}

std::string to_text(const CsvTable& t) {
  std::ostringstream out;
  write_csv(out, t);
  return out.str();
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

class TempDir {
 public:
  TempDir() {
    path_ = fs::temp_directory_path() / ("ettrap_cli_" + std::to_string(::getpid()) + "_" +
                                          ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  fs::path operator/(const std::string& name) const { return path_ / name; }

 private:
  fs::path path_;
};

#ifdef ETTRAP_CLI_PATH
int cli(const std::string& args) {
  const std::string cmd = std::string("\"") + ETTRAP_CLI_PATH + "\" " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

void write_file(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }
#endif

}  // namespace

TEST(Commands, KnownKeys) {
  EXPECT_TRUE(known_keys("dynamics").count("kappa"));
  EXPECT_TRUE(known_keys("disorder").count("sigma0_grid"));
  EXPECT_FALSE(known_keys("ep-locus").count("kappa"));
  EXPECT_THROW(known_keys("nonsense"), ConfigError);
}

TEST(Commands, ScenarioUnits) {
  const auto gamma_units = scenario_from_config(Config::parse("n_emitters = 4\nkappa = 2\n"));
  EXPECT_DOUBLE_EQ(gamma_units.kappa, 2.0);
  const auto j_units = scenario_from_config(Config::parse("n_emitters = 4\nkappa = 2\nrate_units = j\ndephasing_rate = 1\n"));
  const double j = j_units.nearest_neighbor_coupling();
  EXPECT_DOUBLE_EQ(j_units.kappa, 2.0 * j);
  EXPECT_DOUBLE_EQ(j_units.dephasing, j);
  const auto opt_units = scenario_from_config(Config::parse("n_emitters = 4\nkappa = 1\nkappa_units = kappa_opt\n"));
  EXPECT_DOUBLE_EQ(opt_units.kappa, 2.0 * j);
  EXPECT_THROW(scenario_from_config(Config::parse("kappa = -1\n")), ConfigError);
  EXPECT_THROW(scenario_from_config(Config::parse("rate_units = furlongs\n")), ConfigError);
  EXPECT_THROW(scenario_from_config(Config::parse("initial_state = nowhere\n")), ConfigError);
}

TEST(Commands, DynamicsColumnsAndLedger) {
  const auto t = run("dynamics", "n_emitters = 3\nspacing_lambda = 0.1\nkappa = 5\nt_max = 2\nn_samples = 21\n");
  EXPECT_EQ(t.columns, (std::vector<std::string>{"t", "rho_11", "rho_22", "rho_33", "trap_pop", "vacuum_pop", "coherence",
                                                 "total_entanglement"}));
  ASSERT_EQ(t.rows.size(), 21u);
  const auto r1 = t.numeric_column("rho_11"), r2 = t.numeric_column("rho_22"), r3 = t.numeric_column("rho_33");
  const auto pt = t.numeric_column("trap_pop"), pv = t.numeric_column("vacuum_pop");
  for (std::size_t k = 0; k < t.rows.size(); ++k) EXPECT_NEAR(r1[k] + r2[k] + r3[k] + pt[k] + pv[k], 1.0, 1e-8);
  EXPECT_EQ(t.metadata.front(), tool_version());
  EXPECT_EQ(t.metadata[1], "command = dynamics");
}

TEST(Commands, DynamicsWithDephasingUsesDensityPath) {
  const auto t = run("dynamics", "n_emitters = 3\nspacing_lambda = 0.1\nkappa = 5\ndephasing_rate = 2\nt_max = 2\nn_samples = 11\n");
  const auto c = t.numeric_column("coherence");
  EXPECT_GT(c[1], 0.0);
  EXPECT_LT(c.back(), c[1]);
}

TEST(Commands, StrictRejectsUnknownKeys) {
  EXPECT_THROW(run("dynamics", "kapa = 3\n"), ConfigError);
  CommandOptions lax;
  std::ostringstream warn;
  lax.warnings = &warn;
  EXPECT_NO_THROW(cmd_dynamics(Config::parse("kapa = 3\nn_emitters = 2\nt_max = 0.1\nn_samples = 3\n"), lax));
  EXPECT_NE(warn.str().find("kapa"), std::string::npos);
}

TEST(Commands, SweepTrapFlagsRowArgmax) {
  const auto t = run("sweep-trap", "n_emitters = 4\nspacing_grid = 0.05, 0.1\nkappa_grid = 0.1:1000:9:log\nt_max = 5\n"
                                   "n_samples = 201\n", 3);
  ASSERT_EQ(t.rows.size(), 18u);
  const auto a = t.numeric_column("a_lambda");
  const auto eff = t.numeric_column("efficiency");
  const auto flag = t.numeric_column("kappa_opt_row_flag");
  for (int r = 0; r < 2; ++r) {
    int flagged = 0;
    double best = -1.0;
    for (int c = 0; c < 9; ++c) best = std::max(best, eff[r * 9 + c]);
    for (int c = 0; c < 9; ++c)
      if (flag[r * 9 + c] == 1.0) {
        ++flagged;
        EXPECT_EQ(eff[r * 9 + c], best);
      }
    EXPECT_EQ(flagged, 1);
    EXPECT_EQ(a[r * 9], r == 0 ? 0.05 : 0.1);
  }
}

TEST(Commands, ParallelSweepMatchesSerial) {
  const std::string cfg = "n_emitters = 4\nspacing_grid = 0.05, 0.1\nkappa_grid = 1, 10, 100\nt_max = 3\nn_samples = 61\n";
  EXPECT_EQ(to_text(run("sweep-trap", cfg, 1)), to_text(run("sweep-trap", cfg, 4)));
}

TEST(Commands, DephasingColumns) {
  const auto t = run("dephasing", "n_emitters = 4\nkappa = 10\ndephasing_grid = 0, 1\nt_max = 2\nn_samples = 41\n", 2);
  ASSERT_EQ(t.rows.size(), 2u);
  EXPECT_NO_THROW(t.column("tau_gaussian_4"));
  EXPECT_NO_THROW(t.column("efficiency_gaussian_independent"));
  const auto loc = t.numeric_column("efficiency_localized");
  EXPECT_GT(loc[0], 0.0);
  EXPECT_THROW(run("dephasing", "dephasing_grid = -1\n"), ConfigError);
}

TEST(Commands, EpLocusCensus) {
  const auto t = run("ep-locus", "n_list = 4, 5\n");
  const auto n = t.numeric_column("N");
  const auto confirmed = t.numeric_column("confirmed");
  const auto real_axis = t.numeric_column("on_real_axis");
  int c4 = 0, c5 = 0, r4 = 0, r5 = 0;
  for (std::size_t i = 0; i < n.size(); ++i) {
    if (confirmed[i] != 1.0) continue;
    (n[i] == 4 ? c4 : c5)++;
    if (real_axis[i] == 1.0) (n[i] == 4 ? r4 : r5)++;
  }
  EXPECT_EQ(c4, 6);
  EXPECT_EQ(c5, 8);
  EXPECT_GE(r4, 1);
  EXPECT_EQ(r5, 0);
}

TEST(Commands, DisorderCleanBandAndDeterminism) {
  const std::string cfg = "n_emitters = 3\nsigma0_grid = 0, 2\nkappa_list = 1, 10\nn_realizations = 8\nt_max = 2\n"
                          "n_samples = 3\nseed = 5\n";
  const auto t = run("disorder", cfg, 3);
  ASSERT_EQ(t.rows.size(), 4u);
  const auto mean = t.numeric_column("mean_eff");
  const auto lo = t.numeric_column("band_lo");
  const auto hi = t.numeric_column("band_hi");
  EXPECT_EQ(lo[0], mean[0]);
  EXPECT_EQ(hi[0], mean[0]);
  EXPECT_LE(lo[2], hi[2]);
  EXPECT_EQ(to_text(t), to_text(run("disorder", cfg, 1)));
}

TEST(Commands, PlotNeedsColumns) {
  TempDir dir;
  const auto csv_path = dir / "d.csv";
  std::ofstream(csv_path) << to_text(run("dynamics", "n_emitters = 2\nt_max = 1\nn_samples = 11\nkappa = 1\n"));
  CommandOptions opts;
  const std::string ok = cmd_plot(Config::parse("input = " + csv_path.string() + "\nx = t\ny = rho_11, trap_pop\n"), opts);
  EXPECT_NE(ok.find("</svg>"), std::string::npos);
  EXPECT_THROW(cmd_plot(Config::parse("input = " + csv_path.string() + "\nx = t\ny = rho_99\n"), opts), ConfigError);
  EXPECT_THROW(cmd_plot(Config::parse("input = " + (dir / "absent.csv").string() + "\nx = t\ny = a\n"), opts), ConfigError);
}

#ifdef ETTRAP_CLI_PATH

TEST(Cli, ExitCodes) {
  TempDir dir;
  const auto good = dir / "good.cfg";
  const auto typo = dir / "typo.cfg";
  const auto stiff = dir / "bad_value.cfg";
  write_file(good, "n_emitters = 3\nkappa = 2\nt_max = 1\nn_samples = 11\n");
  write_file(typo, "n_emitters = 3\nkapa = 2\n");
  write_file(stiff, "n_emitters = 3\nkappa = -2\n");
  EXPECT_EQ(cli("dynamics --config " + good.string() + " --out " + (dir / "o.csv").string()), 0);
  EXPECT_TRUE(fs::exists(dir / "o.csv"));
  EXPECT_EQ(cli("dynamics --config " + typo.string() + " --strict --out " + (dir / "t.csv").string()), 2);
  EXPECT_FALSE(fs::exists(dir / "t.csv"));
  EXPECT_EQ(cli("dynamics --config " + typo.string() + " --out " + (dir / "t.csv").string()), 0);
  EXPECT_EQ(cli("dynamics --config " + stiff.string()), 2);
  EXPECT_EQ(cli("dynamics --config " + (dir / "missing.cfg").string()), 2);
  EXPECT_EQ(cli("frobnicate"), 2);
  EXPECT_EQ(cli("dynamics --threads -1"), 2);
  EXPECT_EQ(cli("--help"), 0);
}

TEST(Cli, NumericalFailureExitCode) {
  TempDir dir;
  const auto cfg = dir / "fail.cfg";
  // Impossible tolerances make the adaptive step size underflow.
  write_file(cfg, "n_emitters = 3\nkappa = 2\nt_max = 1\nn_samples = 3\npropagator = adaptive\nrtol = 1e-300\n"
                  "atol = 1e-300\n");
  EXPECT_EQ(cli("dynamics --config " + cfg.string()), 3);
}

TEST(Cli, OutputReproducesFromItsOwnMetadata) {
  TempDir dir;
  const auto cfg = dir / "run.cfg";
  write_file(cfg, "n_emitters = 3\nsigma0_grid = 1\nkappa_list = 2\nn_realizations = 5\nt_max = 1\nn_samples = 3\n");
  ASSERT_EQ(cli("disorder --config " + cfg.string() + " --seed 99 --threads 2 --out " + (dir / "a.csv").string()), 0);
  ASSERT_EQ(cli("disorder --config " + (dir / "a.csv").string() + " --out " + (dir / "b.csv").string()), 0);
  const std::string a = slurp(dir / "a.csv");
  EXPECT_EQ(a, slurp(dir / "b.csv"));
  EXPECT_NE(a.find("# config.seed = 99"), std::string::npos);
}

TEST(Cli, PlotIsByteDeterministic) {
  TempDir dir;
  write_file(dir / "sweep.cfg", "n_emitters = 3\nspacing_grid = 0.05, 0.1\nkappa_grid = 0.1:100:4:log\nt_max = 1\n"
                                "n_samples = 21\n");
  ASSERT_EQ(cli("sweep-trap --config " + (dir / "sweep.cfg").string() + " --out " + (dir / "s.csv").string()), 0);
  write_file(dir / "plot.cfg", "input = " + (dir / "s.csv").string() +
                                   "\nkind = heatmap\nx = kappa\ny = a_lambda\nz = efficiency\nlog_x = true\n");
  ASSERT_EQ(cli("plot --config " + (dir / "plot.cfg").string() + " --out " + (dir / "a.svg").string()), 0);
  ASSERT_EQ(cli("plot --config " + (dir / "plot.cfg").string() + " --out " + (dir / "b.svg").string()), 0);
  EXPECT_EQ(slurp(dir / "a.svg"), slurp(dir / "b.svg"));
  write_file(dir / "bad.cfg", "input = " + (dir / "s.csv").string() + "\nx = kappa\ny = nope\n");
  EXPECT_EQ(cli("plot --config " + (dir / "bad.cfg").string() + " --out " + (dir / "c.svg").string()), 2);
  EXPECT_FALSE(fs::exists(dir / "c.svg"));
}

#endif
