#pragma once

// Experiment runner behind the rugged CLI: config ingestion, invariant
// suites, bounds tables, exploration runs and result files.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "rugged/explorer.hpp"

namespace rugged::harness {

// Exit status contract.
inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitUsage = 2;

inline constexpr const char* kOutDirEnv = "RUGGED_OUT_DIR";

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
  std::vector<double> lambdas{1.0};
  std::size_t head_dim = 16;    // l1 truncation length
  std::size_t grid_size = 128;  // cells of the L1[0,1] grid
  std::size_t restarts = 8;
  std::size_t budget = 4000;
  double initial_step = 1.0;
  double shrink = 0.5;
  std::uint64_t seed = 0;
  std::string op = "gossez";
  std::string suite = "all";
  std::size_t samples = 2000;  // random vectors per lambda in verify
  double tol_membership = kDefaultMembershipTol;
  std::optional<std::string> out;

  [[nodiscard]] SearchConfig search_config(const OperatorSpec& op, double lambda) const;
};

// Rejects unknown keys and ill-typed values with UsageError.
ExperimentConfig parse_config(const nlohmann::json& doc);
ExperimentConfig load_config(const std::filesystem::path& path);
nlohmann::json to_json(const ExperimentConfig& cfg);
std::vector<double> parse_lambda_list(std::string_view csv);

// 17 significant digits, '.' decimal point, independent of the locale.
std::string format_double(double v);

OperatorSpec make_operator(std::string_view name, const ExperimentConfig& cfg);

// Mixture of sparse, dense, structured (-t e_i) and integer vectors.
PrimalVec random_model_vector(std::mt19937_64& rng, const SpaceSpec& space, double lambda);

std::string bounds_table_csv(std::span<const double> lambdas);

struct VerifyOutcome {
  nlohmann::json summary;
  bool passed = false;
};
inline constexpr std::string_view kSuiteNames[] = {"space", "operators", "skew", "bounds",
                                                   "whs",   "floor",     "rugged"};
VerifyOutcome run_verify(std::string_view suite, const ExperimentConfig& cfg);

struct ExploreOutcome {
  std::string csv;
  nlohmann::json witnesses;
  bool all_floors_held = true;
};
ExploreOutcome run_explore(const ExperimentConfig& cfg);
nlohmann::json witness_to_json(const WitnessRecord& rec);

struct RuggedOutcome {
  std::string csv;
  nlohmann::json summary;
  bool passed = false;
};
RuggedOutcome run_rugged_check(const ExperimentConfig& cfg);

// Creates <base>/<command>-<n> for the first unused n and writes
// config.json, results.csv (when csv is non-empty) and summary.json.
std::filesystem::path write_run_directory(const std::filesystem::path& base, std::string_view command,
                                          const nlohmann::json& config, const std::string& csv,
                                          const nlohmann::json& summary);

}  // namespace rugged::harness
