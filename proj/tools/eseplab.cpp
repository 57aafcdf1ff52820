#include <cstdio>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "commands.hpp"

using namespace eseplab;

namespace {

struct Flags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<int> threads;
  std::optional<std::uint64_t> replications;
};

void add_flags(CLI::App* sub, Flags& f) {
  sub->add_option("--config", f.config, "JSON run config");
  sub->add_option("--seed", f.seed, "master seed (overrides config)");
  sub->add_option("--out", f.out, "output directory (overrides config)");
  sub->add_option("--threads", f.threads, "worker threads (default: ESEPLAB_THREADS or hardware)");
  sub->add_option("--replications", f.replications, "replication or sample count (overrides config)");
}

RunConfig load(const Flags& f) {
  RunConfig c = f.config.empty() ? RunConfig{} : run_config_from_json(read_json_file(f.config));
  if (f.seed) c.seed = *f.seed;
  if (f.out) c.out = *f.out;
  if (f.threads) c.threads = *f.threads;
  if (f.replications) {
    c.replications = *f.replications;
    c.replications_set = true;
  }
  if (c.replications == 0) throw Error(ErrorCode::ConfigInvalid, "replications must be >= 1");
  if (c.threads < 0) throw Error(ErrorCode::ConfigInvalid, "threads must be >= 0");
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"eseplab: ephemerally self-exciting point processes"};
  app.require_subcommand(1);
  Flags flags;
  CLI::App* simulate = app.add_subcommand("simulate", cli::kSimulateHelp);
  CLI::App* analytic = app.add_subcommand("analytic", cli::kAnalyticHelp);
  CLI::App* sweep = app.add_subcommand("sweep", cli::kSweepHelp);
  CLI::App* verify = app.add_subcommand("verify", cli::kVerifyHelp);
  for (CLI::App* sub : {simulate, analytic, sweep, verify}) add_flags(sub, flags);
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }
  try {
    const RunConfig c = load(flags);
    cli::CommandResult r;
    if (simulate->parsed()) r = cli::cmd_simulate(c);
    if (analytic->parsed()) r = cli::cmd_analytic(c);
    if (sweep->parsed()) r = cli::cmd_sweep(c);
    if (verify->parsed()) r = cli::cmd_verify(c);
    for (const std::string& f : r.files) std::printf("%s\n", f.c_str());
    return r.exit_code;
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
