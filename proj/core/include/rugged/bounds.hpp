#pragma once

// Scalar bounds on the distance from f* to ran(A + lambda J) and the
// pointwise certificates that feed them.
//
// Conventions: ||A|| = 1 and ||f*|| = 1 unless stated.  The half-space
// certificate holds exactly in the l1 tail model for the Gossez operator.
// On tailless grids (and for -G) the limiting coordinate is replaced by an
// end cell, which leaves a slack s = w_end * |x_end| in the inequality
// <x, f*> <= 3 eps + s.  Carrying s through the quadratic gives the model
// floor: the smaller root of (2l+1) xi^2 - (3l^2+9l+4) xi + l - s (1+l)^2.

#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "rugged/operators.hpp"
#include "rugged/space.hpp"

namespace rugged {

inline constexpr double kIdentityRelTol = 1e-9;
inline constexpr double kFloorTol = 1e-9;

struct QuadraticRoots {
  double smaller = 0.0;
  double larger = 0.0;
};

struct BoundsReport {
  double lambda = 0.0;
  double m_value = 0.0;
  QuadraticRoots roots;
  double threshold = 0.0;
  double tau = 0.0;
  std::map<std::string, double> identity_residuals;

  [[nodiscard]] double max_identity_residual() const;
};

struct LemmaOverReport {
  double lower = 0.0;           // ||r*|| / (||A|| + lambda)
  double norm_x = 0.0;
  double upper = 0.0;           // ||r*|| / lambda
  double lambda_norm_sq = 0.0;  // lambda ||x||^2
  double inner = 0.0;           // <x, r*>
  bool norm_bounds_ok = false;
  bool inner_bound_ok = false;
  bool skew_equality_ok = true;  // only evaluated for skew operators
  [[nodiscard]] bool passed() const { return norm_bounds_ok && inner_bound_ok && skew_equality_ok; }
};

struct GapIdentities {
  double lambda = 0.0;
  double tau = 0.0;
  // "wolfram", "cubic", "discriminant": relative residuals.
  std::map<std::string, double> residuals;
  [[nodiscard]] double max_residual() const;
  [[nodiscard]] bool passed(double rel_tol = kIdentityRelTol) const;
};

struct MScanReport {
  double argmax = 0.0;
  double max_value = 0.0;
  bool increasing_before = false;
  bool decreasing_after = false;
  double left_end_value = 0.0;
  double right_end_value = 0.0;
  [[nodiscard]] bool passed() const { return increasing_before && decreasing_after; }
};

struct WhsCertificate {
  PrimalVec x;
  double eps = 0.0;            // exact distance from f* to Ax + lambda Jx
  double inner_product = 0.0;  // <x, f*>
  double slack = 0.0;
  bool passed = false;         // inner <= 3 eps + slack + tol
  bool sharp_passed = false;   // inner <= 2 eps + slack + tol
};

struct FloorCheck {
  double distance = 0.0;
  double floor = 0.0;  // m(lambda) lowered by the model slack
  double slack = 0.0;
  bool passed = false;
};

double m_of_lambda(double lambda);
QuadraticRoots whs_quadratic_roots(double lambda);
double eps_threshold(double lambda, double norm_a, double norm_f);
double tuesday_lower_bound(double lambda, double eps, double norm_a, double norm_f);
// tau = (3l+1) sqrt(9l^2+36l+16) - (9l^2+13l+4); positive for l > 0.
double gap_tau(double lambda);

BoundsReport bounds_report(double lambda);

LemmaOverReport lemma_over_check(const OperatorSpec& op, double lambda, const PrimalVec& x,
                                 const DualPoint& r_star);
GapIdentities gap_identity_check(double lambda);
MScanReport m_properties_scan(std::span<const double> grid);

// Operators with a certified half-space inequality for f* = -1.
bool whs_capable(OperatorKind kind);
// w_end * |x_end| for the kinds that replace a limit by an end cell; 0 for G.
double whs_model_slack(const OperatorSpec& op, const PrimalVec& x);
// Smaller root of the slack-perturbed quadratic, clamped at 0; equals
// m(lambda) when slack == 0.
double model_floor(double lambda, double slack);

WhsCertificate whs_certify_sample(const OperatorSpec& op, double lambda, const PrimalVec& x,
                                  const DualPoint& f_star);
FloorCheck pointwise_floor_check(const OperatorSpec& op, double lambda, const PrimalVec& x,
                                 const DualPoint& f_star);

}  // namespace rugged
