#pragma once

// Derivative-free search over model vectors: nearest range points to a
// target, convex-combination witnesses of nonconvexity, and the e1/e2
// ruggedness construction.

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "rugged/bounds.hpp"
#include "rugged/operators.hpp"
#include "rugged/space.hpp"

namespace rugged {

struct SearchConfig {
  std::size_t head_dim = 16;
  double lambda = 1.0;
  std::size_t restarts = 8;
  // Objective evaluations per restart, not counting the start point.
  std::size_t budget = 4000;
  double initial_step = 1.0;
  double shrink = 0.5;
  std::uint64_t seed = 0;
  // Number of range points combined by combo_witness_search.
  std::size_t witness_order = 2;

  void validate() const;
};

// splitmix64 of (master, index); the per-restart seed.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

struct DistanceSearchResult {
  PrimalVec best;
  double best_distance = 0.0;
  std::size_t best_restart = 0;
  // Best-so-far after every compass sweep, restarts concatenated in index
  // order; nonincreasing.
  std::vector<double> trace{};
  std::size_t evaluations = 0;
  std::size_t floor_checks = 0;
  std::size_t floor_violations = 0;
  // min over checked points of distance - floor.
  double min_floor_margin = 0.0;
};

DistanceSearchResult distance_minimize(const OperatorSpec& op, double lambda,
                                       const DualPoint& f_star, const SearchConfig& cfg);

struct WitnessPoint {
  PrimalVec x;
  Selection selection;
  double theta = 0.0;
  DualPoint range_point;
};

struct WitnessRecord {
  std::vector<WitnessPoint> points;
  // sup_norm(sum_j theta_j r_j - f*), recomputed from the stored range points.
  double combo_distance = 0.0;
  // Distance of the combined box to f* as seen by the search.
  double search_distance = 0.0;
  double floor = 0.0;
  std::vector<double> single_distances;
  bool certified = false;
};

inline constexpr double kWitnessTol = 1e-9;

// Lower bound on dist(f*, Ax + lambda Jx) for a constant target f* = c * 1:
// |c| * model_floor(lambda, slack(x) / |c|).  Zero when no bound applies.
double target_floor(const OperatorSpec& op, double lambda, const PrimalVec& x,
                    const DualPoint& f_star);

// Pick the point of sum_j theta_j (A x_j + lambda J x_j) nearest f*, split
// it into per-point selections, and evaluate the certificate.
WitnessRecord make_witness_record(const OperatorSpec& op, double lambda, const DualPoint& f_star,
                                  std::span<const PrimalVec> xs, std::span<const double> thetas);

// Feasible t for the two-point midpoint witness: [1/(lambda-1), 2], empty
// below lambda = 3/2.
struct TWindow {
  double lo = 0.0;
  double hi = 0.0;
};
std::optional<TWindow> midpoint_window(double lambda);

// Cell playing the role of e_{j+1}: counted from the start for G, -G and
// -F, from the end of the grid for F.
std::size_t lead_cell(const OperatorSpec& op, std::size_t j);

// x = -t d_0, x' = -t d_1 with d_j the unit-norm lead cells and theta = 1/2;
// the midpoint of the two range points is exactly f* = -1.  Defaults to
// t = clamp(1, window).  Throws std::domain_error when lambda < 3/2.
WitnessRecord build_midpoint_witness(const OperatorSpec& op, double lambda,
                                     std::optional<double> t = std::nullopt);

WitnessRecord combo_witness_search(const OperatorSpec& op, double lambda, const DualPoint& f_star,
                                   const SearchConfig& cfg);

// Same witness for target alpha f*: every x_j scaled by alpha.
WitnessRecord scale_witness(const WitnessRecord& rec, double alpha, const OperatorSpec& op,
                            double lambda, const DualPoint& f_star);

struct RuggednessReport {
  PrimalVec e1;
  PrimalVec e2;
  DualBox sum;  // Je1 - Je1 + Je2 - Je2
  bool passed = false;
};

RuggednessReport ruggedness_check(const SpaceSpec& space);

struct GapReport {
  OperatorKind kind = OperatorKind::Gossez;
  double lambda = 0.0;
  std::size_t head_dim = 0;
  double m_lambda = 0.0;
  double threshold = 0.0;
  double best_single = 0.0;
  std::map<std::size_t, double> best_combo;  // by witness order k
  std::map<std::size_t, WitnessRecord> combos;
  std::optional<WitnessRecord> midpoint;
  double floor = 0.0;
  double grid_slack = 0.0;
  std::size_t floor_violations = 0;
  bool certified = false;
};

GapReport convexity_gap_report(const OperatorSpec& op, double lambda, const SearchConfig& cfg);

}  // namespace rugged
