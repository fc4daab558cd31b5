#include <CLI11.hpp>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>

#include "ettrap/commands.hpp"
#include "ettrap/errors.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kConfigError = 2;
constexpr int kNumericalError = 3;

struct Flags {
  std::string config;
  std::string out;
  std::uint64_t seed = 0;
  bool seed_given = false;
  int threads = 0;
  bool strict = false;
};

void add_flags(CLI::App* cmd, Flags& f) {
  cmd->add_option("--config", f.config, "configuration file (key = value)");
  cmd->add_option("--out", f.out, "output path (default: stdout)");
  cmd->add_option("--seed", f.seed, "master seed, overrides the config value")->each([&f](const std::string&) {
    f.seed_given = true;
  });
  cmd->add_option("--threads", f.threads, "worker threads (default: hardware concurrency)")->check(CLI::NonNegativeNumber);
  cmd->add_flag("--strict", f.strict, "reject unknown configuration keys");
}

void write_output(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ettrap::ConfigError("cannot open output file '" + path + "'");
  out << content;
  if (!out) throw ettrap::ConfigError("failed writing output file '" + path + "'");
}

int run(const std::string& command, const Flags& f) {
  ettrap::Config cfg = f.config.empty() ? ettrap::Config{} : ettrap::Config::load(f.config);
  if (f.seed_given) cfg.set("seed", std::to_string(f.seed));
  ettrap::CommandOptions opts;
  opts.threads = f.threads > 0 ? f.threads : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  opts.strict = f.strict;
  opts.warnings = &std::cerr;

  if (command == "plot") {
    write_output(f.out, ettrap::cmd_plot(cfg, opts));
    return kOk;
  }
  ettrap::CsvTable table;
  if (command == "dynamics") table = ettrap::cmd_dynamics(cfg, opts);
  else if (command == "sweep-trap") table = ettrap::cmd_sweep_trap(cfg, opts);
  else if (command == "dephasing") table = ettrap::cmd_dephasing(cfg, opts);
  else if (command == "ep-locus") table = ettrap::cmd_ep_locus(cfg, opts);
  else if (command == "disorder") table = ettrap::cmd_disorder(cfg, opts);
  std::ostringstream csv;
  ettrap::write_csv(csv, table);
  write_output(f.out, csv.str());
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Excitation transport and trapping in dipole-coupled emitter chains"};
  app.set_version_flag("--version", ettrap::tool_version());
  app.require_subcommand(1);

  Flags flags;
  const std::pair<const char*, const char*> commands[] = {
      {"dynamics", "time evolution of one configuration"},
      {"sweep-trap", "efficiency over trap rate and lattice spacing"},
      {"dephasing", "efficiency and residence times versus dephasing rate"},
      {"ep-locus", "exceptional points of nearest-neighbour chains"},
      {"disorder", "ensemble efficiency under acceptor detuning disorder"},
      {"plot", "render a CSV produced by this tool as SVG"},
  };
  for (const auto& [name, help] : commands) add_flags(app.add_subcommand(name, help), flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    return run(command, flags);
  } catch (const ettrap::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::out_of_range& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const ettrap::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kNumericalError;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kNumericalError;
  }
}
