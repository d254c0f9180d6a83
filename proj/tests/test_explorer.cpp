#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <vector>

#include "rugged/explorer.hpp"

using namespace rugged;

namespace {

SearchConfig small_config(std::size_t k, double lambda) {
  SearchConfig c;
  c.head_dim = k;
  c.lambda = lambda;
  c.restarts = 6;
  c.budget = 1500;
  c.seed = 7;
  return c;
}

void expect_valid_record(const WitnessRecord& rec, const OperatorSpec& op, double lambda,
                         const DualPoint& f) {
  double theta_sum = 0.0;
  DualPoint combo(op.space());
  for (const auto& p : rec.points) {
    EXPECT_GE(p.theta, 0.0);
    theta_sum += p.theta;
    const double scale = std::max(1.0, sup_norm(p.range_point));
    EXPECT_TRUE(box_contains(range_box(op, lambda, p.x), p.range_point, 1e-12 * scale));
    combo = combo.combined(1.0, p.theta, p.range_point);
  }
  EXPECT_NEAR(theta_sum, 1.0, 1e-12);
  // Distance rebuilt coordinate by coordinate from the raw range points.
  double d = 0.0;
  for (std::size_t i = 0; i < combo.head().size(); ++i) d = std::max(d, std::abs(combo[i] - f[i]));
  if (combo.tail()) d = std::max(d, std::abs(*combo.tail() - *f.tail()));
  EXPECT_NEAR(rec.combo_distance, d, 1e-12);
  EXPECT_NEAR(rec.search_distance, d, 1e-12);
}

}  // namespace

TEST(Midpoint, LambdaTwoCoordinates) {
  const auto s = SpaceSpec::l1_truncation(5);
  const OperatorSpec g = OperatorSpec::gossez(s);
  const WitnessRecord rec = build_midpoint_witness(g, 2.0);
  ASSERT_EQ(rec.points.size(), 2u);

  const DualPoint& u = rec.points[0].range_point;
  const DualPoint& v = rec.points[1].range_point;
  const std::vector<double> u_ref{-2, 0, -1, -1, -1};
  const std::vector<double> v_ref{0, -2, -1, -1, -1};
  for (std::size_t i = 0; i < 5; ++i) {
    EXPECT_EQ(u[i], u_ref[i]) << i;
    EXPECT_EQ(v[i], v_ref[i]) << i;
  }
  EXPECT_EQ(*u.tail(), -1.0);
  EXPECT_EQ(*v.tail(), -1.0);
  EXPECT_EQ(rec.points[0].x[0], -1.0);
  EXPECT_EQ(rec.points[1].x[1], -1.0);
  EXPECT_EQ(rec.points[0].selection.head[1], -0.5);
  EXPECT_EQ(rec.points[0].theta, 0.5);

  EXPECT_LE(rec.combo_distance, 1e-15);
  EXPECT_EQ(rec.single_distances, (std::vector<double>{1.0, 1.0}));
  EXPECT_NEAR(rec.floor, 0.0593414, 1e-7);
  EXPECT_TRUE(rec.certified);
  expect_valid_record(rec, g, 2.0, DualPoint::constant(s, -1.0));

  for (const auto& p : rec.points) {
    const LemmaOverReport lo = lemma_over_check(g, 2.0, p.x, p.range_point);
    EXPECT_TRUE(lo.passed());
    EXPECT_EQ(lo.inner, 2.0);
    EXPECT_EQ(lo.lambda_norm_sq, 2.0);
  }
}

TEST(Midpoint, Window) {
  EXPECT_FALSE(midpoint_window(1.4).has_value());
  const auto w = midpoint_window(4.0);
  ASSERT_TRUE(w);
  EXPECT_DOUBLE_EQ(w->lo, 1.0 / 3.0);
  EXPECT_EQ(w->hi, 2.0);
  const auto g = OperatorSpec::gossez(SpaceSpec::l1_truncation(4));
  EXPECT_THROW((void)build_midpoint_witness(g, 1.4), std::domain_error);
  EXPECT_THROW((void)build_midpoint_witness(g, 4.0, 2.5), std::domain_error);
  EXPECT_THROW((void)build_midpoint_witness(negate(g), 4.0), std::invalid_argument);
}

// Every t in the window works, not just the default.
TEST(Midpoint, WholeWindowCertifies) {
  const auto s = SpaceSpec::l1_truncation(4);
  const OperatorSpec g = OperatorSpec::gossez(s);
  for (double lambda : {1.5, 2.0, 3.0, 4.0, 5.0, 10.0}) {
    const auto w = *midpoint_window(lambda);
    for (int i = 0; i <= 8; ++i) {
      const double t = w.lo + (w.hi - w.lo) * i / 8.0;
      const WitnessRecord rec = build_midpoint_witness(g, lambda, t);
      EXPECT_LE(rec.combo_distance, 1e-12) << lambda << " " << t;
      EXPECT_TRUE(rec.certified) << lambda << " " << t;
    }
  }
}

TEST(Midpoint, LambdaFourAndFive) {
  const auto s = SpaceSpec::l1_truncation(8);
  const OperatorSpec g = OperatorSpec::gossez(s);
  for (double lambda : {4.0, 5.0}) {
    const WitnessRecord rec = build_midpoint_witness(g, lambda);
    EXPECT_LE(rec.combo_distance, 1e-9);
    EXPECT_DOUBLE_EQ(rec.floor, m_of_lambda(lambda));
    EXPECT_TRUE(rec.certified);
    expect_valid_record(rec, g, lambda, DualPoint::constant(s, -1.0));
  }
}

TEST(Midpoint, FpGrid) {
  const auto s = SpaceSpec::l1_grid(128);
  for (const OperatorSpec& op : {OperatorSpec::fp_grid(s), negate(OperatorSpec::fp_grid(s))}) {
    for (double lambda : {2.0, 4.0}) {
      const WitnessRecord rec = build_midpoint_witness(op, lambda);
      EXPECT_LE(rec.combo_distance, 1e-9) << to_string(op.kind());
      EXPECT_TRUE(rec.certified) << to_string(op.kind());
      // Lead cells sit away from the slack cell, so the floor is m itself.
      EXPECT_EQ(rec.floor, m_of_lambda(lambda));
      expect_valid_record(rec, op, lambda, DualPoint::constant(s, -1.0));
    }
  }
}

TEST(LeadCell, GridOrientation) {
  const auto grid = SpaceSpec::l1_grid(6);
  EXPECT_EQ(lead_cell(OperatorSpec::fp_grid(grid), 0), 5u);
  EXPECT_EQ(lead_cell(negate(OperatorSpec::fp_grid(grid)), 0), 0u);
  EXPECT_EQ(lead_cell(OperatorSpec::gossez(SpaceSpec::l1_truncation(3)), 1), 1u);
}

TEST(ComboSearch, RecoversWitness) {
  const auto s = SpaceSpec::l1_truncation(6);
  const OperatorSpec g = OperatorSpec::gossez(s);
  const DualPoint f = DualPoint::constant(s, -1.0);
  for (double lambda : {2.0, 4.0}) {
    SearchConfig c = small_config(6, lambda);
    c.witness_order = 2;
    const WitnessRecord rec = combo_witness_search(g, lambda, f, c);
    EXPECT_LE(rec.combo_distance, 1e-9) << lambda;
    EXPECT_TRUE(rec.certified) << lambda;
    expect_valid_record(rec, g, lambda, f);
  }
}

TEST(ComboSearch, SinglePointNeverCertified) {
  const auto s = SpaceSpec::l1_truncation(6);
  const OperatorSpec g = OperatorSpec::gossez(s);
  const DualPoint f = DualPoint::constant(s, -1.0);
  for (double lambda : {0.5, 2.0}) {
    SearchConfig c = small_config(6, lambda);
    c.witness_order = 1;
    const WitnessRecord rec = combo_witness_search(g, lambda, f, c);
    EXPECT_FALSE(rec.certified);
    EXPECT_GE(rec.combo_distance, m_of_lambda(lambda) - kFloorTol);
  }
}

TEST(DistanceSearch, ZeroOperatorReachesTarget) {
  // J alone at lambda = 1: J(-e_1) is {-1} on cell 1 and [-1,1] elsewhere,
  // so the distance 0 is attained, not just approached.
  const auto s = SpaceSpec::l1_truncation(40);
  const OperatorSpec z = OperatorSpec::zero(s);
  const DualPoint f = DualPoint::constant(s, -1.0);
  EXPECT_EQ(box_distance_sup(range_box(z, 1.0, PrimalVec::unit(s, 0, -1.0)), f), 0.0);
  const DistanceSearchResult r = distance_minimize(z, 1.0, f, small_config(40, 1.0));
  EXPECT_LE(r.best_distance, 0.05);
  EXPECT_EQ(r.floor_checks, 0u);
}

TEST(DistanceSearch, GossezLambdaOne) {
  const auto s = SpaceSpec::l1_truncation(10);
  const OperatorSpec g = OperatorSpec::gossez(s);
  const DualPoint f = DualPoint::constant(s, -1.0);
  EXPECT_EQ(box_distance_sup(range_box(g, 1.0, PrimalVec::unit(s, 0, -1.0)), f), 1.0);
  const DistanceSearchResult r = distance_minimize(g, 1.0, f, small_config(10, 1.0));
  EXPECT_GE(r.best_distance, m_of_lambda(1.0) - 1e-9);
  EXPECT_LE(r.best_distance, 1.0);
  EXPECT_EQ(r.floor_violations, 0u);
  EXPECT_GT(r.floor_checks, 1000u);
  EXPECT_EQ(r.best_distance, box_distance_sup(range_box(g, 1.0, r.best), f));
}

TEST(DistanceSearch, ZeroBudgetReturnsStart) {
  const auto s = SpaceSpec::l1_truncation(4);
  const OperatorSpec g = OperatorSpec::gossez(s);
  const DualPoint f = DualPoint::constant(s, -1.0);
  SearchConfig c = small_config(4, 2.0);
  c.restarts = 1;
  c.budget = 0;
  const DistanceSearchResult r = distance_minimize(g, 2.0, f, c);
  // Restart 0 starts at -e_1.
  EXPECT_EQ(r.best[0], -1.0);
  EXPECT_EQ(r.best_distance, 1.0);
  EXPECT_EQ(r.evaluations, 1u);
}

TEST(DistanceSearch, TraceMonotoneAndDeterministic) {
  const auto s = SpaceSpec::l1_grid(24);
  const OperatorSpec op = OperatorSpec::fp_grid(s);
  const DualPoint f = DualPoint::constant(s, -1.0);
  const SearchConfig c = small_config(24, 0.5);
  const DistanceSearchResult a = distance_minimize(op, 0.5, f, c);
  const DistanceSearchResult b = distance_minimize(op, 0.5, f, c);
  ASSERT_FALSE(a.trace.empty());
  for (std::size_t i = 1; i < a.trace.size(); ++i) EXPECT_LE(a.trace[i], a.trace[i - 1]);
  EXPECT_EQ(a.trace, b.trace);
  EXPECT_EQ(a.best_distance, b.best_distance);
  EXPECT_EQ(a.best_restart, b.best_restart);
  EXPECT_TRUE(std::equal(a.best.coeffs().begin(), a.best.coeffs().end(), b.best.coeffs().begin()));
  EXPECT_EQ(a.floor_violations, 0u);

  SearchConfig other = c;
  other.seed = 8;
  const DistanceSearchResult d = distance_minimize(op, 0.5, f, other);
  EXPECT_EQ(d.floor_violations, 0u);
}

TEST(DistanceSearch, FloorHoldsForEveryVisitedPoint) {
  const auto l1 = SpaceSpec::l1_truncation(12);
  const auto grid = SpaceSpec::l1_grid(36);
  for (double lambda : {0.5, 1.0, 2.0, 4.0, 8.0}) {
    for (const OperatorSpec& op : {OperatorSpec::gossez(l1), negate(OperatorSpec::gossez(l1)),
                                   OperatorSpec::fp_grid(grid), negate(OperatorSpec::fp_grid(grid))}) {
      SearchConfig c = small_config(op.space().head_dim(), lambda);
      c.budget = 600;
      const DistanceSearchResult r =
          distance_minimize(op, lambda, DualPoint::constant(op.space(), -1.0), c);
      EXPECT_EQ(r.floor_violations, 0u) << to_string(op.kind()) << " " << lambda;
      EXPECT_GE(r.min_floor_margin, -kFloorTol);
    }
  }
}

TEST(DistanceSearch, ConfigValidation) {
  const auto s = SpaceSpec::l1_truncation(4);
  const OperatorSpec g = OperatorSpec::gossez(s);
  const DualPoint f = DualPoint::constant(s, -1.0);
  SearchConfig c = small_config(4, 1.0);
  c.shrink = 1.0;
  EXPECT_THROW((void)distance_minimize(g, 1.0, f, c), std::invalid_argument);
  c = small_config(4, 1.0);
  c.restarts = 0;
  EXPECT_THROW((void)distance_minimize(g, 1.0, f, c), std::invalid_argument);
  c = small_config(5, 1.0);
  EXPECT_THROW((void)distance_minimize(g, 1.0, f, c), std::invalid_argument);
}

TEST(Seeds, DerivedSeedsDiffer) {
  EXPECT_EQ(derive_seed(1, 2), derive_seed(1, 2));
  EXPECT_NE(derive_seed(1, 2), derive_seed(1, 3));
  EXPECT_NE(derive_seed(1, 2), derive_seed(2, 2));
}

TEST(Scaling, WitnessAndFloor) {
  const auto s = SpaceSpec::l1_truncation(5);
  const OperatorSpec g = OperatorSpec::gossez(s);
  const DualPoint f = DualPoint::constant(s, -1.0);
  for (double lambda : {2.0, 4.0}) {
    const WitnessRecord base = build_midpoint_witness(g, lambda);
    for (double alpha : {-2.0, 0.5}) {
      const DualPoint fa = f.scaled(alpha);
      const WitnessRecord rec = scale_witness(base, alpha, g, lambda, f);
      EXPECT_NEAR(rec.floor, std::abs(alpha) * m_of_lambda(lambda), 1e-9);
      EXPECT_LE(rec.combo_distance, 1e-12);
      EXPECT_TRUE(rec.certified);
      expect_valid_record(rec, g, lambda, fa);
      for (std::size_t j = 0; j < 2; ++j) {
        EXPECT_NEAR(rec.single_distances[j], std::abs(alpha) * base.single_distances[j], 1e-12);
      }
      EXPECT_NEAR(target_floor(g, lambda, rec.points[0].x, fa), std::abs(alpha) * m_of_lambda(lambda), 1e-9);
    }
  }
}

TEST(Ruggedness, L1) {
  for (std::size_t k : {2u, 3u, 8u}) {
    const RuggednessReport r = ruggedness_check(SpaceSpec::l1_truncation(k));
    EXPECT_TRUE(r.passed);
    EXPECT_EQ(r.sum[0], Interval::symmetric(2.0));
    EXPECT_EQ(r.sum[1], Interval::symmetric(2.0));
    for (std::size_t i = 2; i < k; ++i) EXPECT_EQ(r.sum[i], Interval::symmetric(4.0));
    EXPECT_EQ(*r.sum.tail(), Interval::symmetric(4.0));
  }
  EXPECT_THROW((void)ruggedness_check(SpaceSpec::l1_truncation(1)), std::invalid_argument);
}

TEST(Ruggedness, Grid) {
  const RuggednessReport r3 = ruggedness_check(SpaceSpec::l1_grid(3));
  EXPECT_TRUE(r3.passed);
  EXPECT_DOUBLE_EQ(r3.e1[0], 3.0);
  EXPECT_DOUBLE_EQ(r3.e2[2], 3.0);
  EXPECT_DOUBLE_EQ(weighted_l1_norm(r3.e1), 1.0);
  EXPECT_EQ(r3.sum[0], Interval::symmetric(2.0));
  EXPECT_EQ(r3.sum[1], Interval::symmetric(4.0));
  EXPECT_EQ(r3.sum[2], Interval::symmetric(2.0));

  for (std::size_t k : {6u, 9u, 30u}) EXPECT_TRUE(ruggedness_check(SpaceSpec::l1_grid(k)).passed);
  EXPECT_THROW((void)ruggedness_check(SpaceSpec::l1_grid(2)), std::invalid_argument);
}

TEST(Ruggedness, SingleGeneratorFails) {
  const auto s = SpaceSpec::l1_truncation(3);
  const DualBox j1 = duality_box(PrimalVec::unit(s, 0));
  EXPECT_FALSE(box_contains_interval_everywhere(box_minkowski(j1, j1, -1), Interval{-2, 2}));
}

TEST(GapReport, CertifiedAboveThreeHalves) {
  const OperatorSpec g = OperatorSpec::gossez(SpaceSpec::l1_truncation(6));
  SearchConfig c = small_config(6, 4.0);
  c.restarts = 4;
  c.budget = 800;
  const GapReport r = convexity_gap_report(g, 4.0, c);
  EXPECT_TRUE(r.certified);
  EXPECT_GE(r.best_single, m_of_lambda(4.0) - kFloorTol);
  EXPECT_LE(r.best_combo.at(2), 1e-9);
  EXPECT_EQ(r.floor_violations, 0u);
  ASSERT_TRUE(r.midpoint);
  EXPECT_EQ(r.grid_slack, 0.0);
}

TEST(GapReport, GridOperator) {
  const OperatorSpec op = OperatorSpec::fp_grid(SpaceSpec::l1_grid(32));
  SearchConfig c = small_config(32, 2.0);
  c.restarts = 2;
  c.budget = 300;
  const GapReport r = convexity_gap_report(op, 2.0, c);
  EXPECT_TRUE(r.certified);
  EXPECT_EQ(r.floor_violations, 0u);
  EXPECT_GE(r.grid_slack, 0.0);
  EXPECT_NEAR(r.floor + r.grid_slack, m_of_lambda(2.0), 1e-15);
}
