// rugged: command-line harness for the range-nonconvexity experiments.
//
//   rugged bounds-table --lambda 0.5,1,2,4
//   rugged verify --suite skew
//   rugged explore --op gossez --lambda 4 --seed 7 --out results/
//   rugged rugged-check --head-dim 8 --grid-size 9

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "harness/harness.hpp"

namespace h = rugged::harness;

namespace {

struct Flags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string lambda;
  std::optional<std::size_t> head_dim;
  std::optional<std::size_t> grid_size;
  std::optional<std::size_t> restarts;
  std::optional<std::size_t> budget;
  std::optional<std::size_t> samples;
  std::string op;
  std::string out;
  std::string suite;
};

void add_common(CLI::App* cmd, Flags& f) {
  cmd->add_option("--config", f.config, "JSON experiment config; flags override its values");
  cmd->add_option("--seed", f.seed, "Master seed (default 0)");
  cmd->add_option("--lambda", f.lambda, "Comma-separated lambda list (default 1)");
  cmd->add_option("--head-dim", f.head_dim, "Head length K of the l1 tail model (default 16)");
  cmd->add_option("--grid-size", f.grid_size, "Cells of the L1[0,1] grid (default 128)");
  cmd->add_option("--out", f.out,
                  std::string("Results directory; falls back to $") + h::kOutDirEnv +
                      ". Each run writes <out>/<command>-NNN/{config.json,results.csv,summary.json}");
}

h::ExperimentConfig resolve(const Flags& f) {
  h::ExperimentConfig cfg = f.config.empty() ? h::ExperimentConfig{} : h::load_config(f.config);
  if (f.seed) cfg.seed = *f.seed;
  if (!f.lambda.empty()) cfg.lambdas = h::parse_lambda_list(f.lambda);
  if (f.head_dim) cfg.head_dim = *f.head_dim;
  if (f.grid_size) cfg.grid_size = *f.grid_size;
  if (f.restarts) cfg.restarts = *f.restarts;
  if (f.budget) cfg.budget = *f.budget;
  if (f.samples) cfg.samples = *f.samples;
  if (!f.op.empty()) cfg.op = f.op;
  if (!f.suite.empty()) cfg.suite = f.suite;
  if (!f.out.empty()) {
    cfg.out = f.out;
  } else if (!cfg.out) {
    if (const char* env = std::getenv(h::kOutDirEnv); env && *env) cfg.out = env;
  }
  return cfg;
}

void maybe_write(const h::ExperimentConfig& cfg, const char* command, const std::string& csv,
                 const nlohmann::json& summary) {
  if (!cfg.out) return;
  const auto dir = h::write_run_directory(*cfg.out, command, h::to_json(cfg), csv, summary);
  std::cerr << "results written to " << dir.string() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Certify nonconvexity of ran(A + lambda J) for the Gossez and Fitzpatrick-Phelps operators"};
  app.require_subcommand(1);
  Flags flags;

  auto* bounds = app.add_subcommand("bounds-table", "CSV of m(lambda), quadratic roots, threshold and identity residuals");
  add_common(bounds, flags);

  auto* verify = app.add_subcommand("verify", "Run invariant suites; prints a JSON summary, exit 0 iff all pass");
  add_common(verify, flags);
  verify->add_option("--suite", flags.suite, "all, space, operators, skew, bounds, whs, floor or rugged (default all)");
  verify->add_option("--samples", flags.samples, "Random vectors per lambda for whs/floor suites (default 2000)");

  auto* explore = app.add_subcommand("explore", "Search for nonconvexity witnesses; prints the gap table CSV");
  add_common(explore, flags);
  explore->add_option("--op", flags.op, "gossez, neg-gossez, fp-grid or neg-fp-grid (default gossez)");
  explore->add_option("--restarts", flags.restarts, "Search restarts (default 8)");
  explore->add_option("--budget", flags.budget, "Objective evaluations per restart (default 4000)");

  auto* rugged = app.add_subcommand("rugged-check", "Je1 - Je1 + Je2 - Je2 interval pattern on l1 and the L1 grid");
  add_common(rugged, flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return h::kExitUsage;
  }

  try {
    const h::ExperimentConfig cfg = resolve(flags);
    if (bounds->parsed()) {
      const std::string csv = h::bounds_table_csv(cfg.lambdas);
      std::cout << csv;
      maybe_write(cfg, "bounds-table", csv, {{"rows", cfg.lambdas.size()}});
      return h::kExitOk;
    }
    if (verify->parsed()) {
      const h::VerifyOutcome v = h::run_verify(cfg.suite, cfg);
      std::cout << v.summary.dump(2) << "\n";
      maybe_write(cfg, "verify", "", v.summary);
      return v.passed ? h::kExitOk : h::kExitCheckFailed;
    }
    if (explore->parsed()) {
      const h::ExploreOutcome e = h::run_explore(cfg);
      std::cout << e.csv;
      maybe_write(cfg, "explore", e.csv, {{"witnesses", e.witnesses}, {"floors_held", e.all_floors_held}});
      return e.all_floors_held ? h::kExitOk : h::kExitCheckFailed;
    }
    const h::RuggedOutcome r = h::run_rugged_check(cfg);
    std::cout << r.csv;
    maybe_write(cfg, "rugged-check", r.csv, r.summary);
    return r.passed ? h::kExitOk : h::kExitCheckFailed;
  } catch (const h::UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return h::kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return h::kExitUsage;
  } catch (const std::domain_error& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return h::kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return h::kExitCheckFailed;
  }
}
