#include "rugged/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <stdexcept>

namespace rugged {

namespace {

void require_positive_lambda(double lambda, const char* what) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw std::invalid_argument(std::string(what) + ": lambda must be positive and finite");
  }
}

double rel_residual(double residual, std::initializer_list<double> terms) {
  double scale = 1.0;
  for (double t : terms) scale = std::max(scale, std::abs(t));
  return std::abs(residual) / scale;
}

// sqrt(9l^2 + 36l + 16), the factor left after pulling (l+1)^2 out of the
// discriminant.
double reduced_root(double lambda) {
  return std::sqrt(9.0 * lambda * lambda + 36.0 * lambda + 16.0);
}

}  // namespace

double BoundsReport::max_identity_residual() const {
  double m = 0.0;
  for (const auto& [_, r] : identity_residuals) m = std::max(m, r);
  return m;
}

double GapIdentities::max_residual() const {
  double m = 0.0;
  for (const auto& [_, r] : residuals) m = std::max(m, r);
  return m;
}

bool GapIdentities::passed(double rel_tol) const { return tau > 0.0 && max_residual() <= rel_tol; }

double m_of_lambda(double lambda) {
  require_positive_lambda(lambda, "m_of_lambda");
  // The closed form (b - (l+1) sqrt(...)) / (4l+2) times its conjugate; the
  // difference form loses ~7 digits by l = 1000.
  const double l = lambda;
  const double b = 3.0 * l * l + 9.0 * l + 4.0;
  return 2.0 * l / (b + (l + 1.0) * reduced_root(l));
}

QuadraticRoots whs_quadratic_roots(double lambda) {
  require_positive_lambda(lambda, "whs_quadratic_roots");
  const double l = lambda;
  const double a = 2.0 * l + 1.0;
  const double b = 3.0 * l * l + 9.0 * l + 4.0;
  const double c = l;
  const double sqrt_disc = (l + 1.0) * reduced_root(l);
  // b > 0, so b + sqrt_disc has no cancellation; the smaller root comes from Vieta.
  const double q = b + sqrt_disc;
  return {2.0 * c / q, q / (2.0 * a)};
}

double eps_threshold(double lambda, double norm_a, double norm_f) {
  require_positive_lambda(lambda, "eps_threshold");
  if (norm_a < 0.0 || norm_f < 0.0) throw std::invalid_argument("eps_threshold: negative norm");
  return 2.0 * lambda * norm_f / (norm_a + 3.0 * lambda);
}

double tuesday_lower_bound(double lambda, double eps, double norm_a, double norm_f) {
  const double thr = eps_threshold(lambda, norm_a, norm_f);
  if (eps < 0.0) throw std::invalid_argument("tuesday_lower_bound: eps must be nonnegative");
  if (eps > thr * (1.0 + 1e-12)) {
    throw std::domain_error("tuesday_lower_bound: eps exceeds 2 lambda ||f*|| / (||A|| + 3 lambda)");
  }
  const double l = (norm_f - eps) / (norm_a + lambda);
  return lambda * l * l - eps * l;
}

double gap_tau(double lambda) {
  require_positive_lambda(lambda, "gap_tau");
  const double l = lambda;
  return (3.0 * l + 1.0) * reduced_root(l) - (9.0 * l * l + 13.0 * l + 4.0);
}

BoundsReport bounds_report(double lambda) {
  BoundsReport r;
  r.lambda = lambda;
  r.m_value = m_of_lambda(lambda);
  r.roots = whs_quadratic_roots(lambda);
  r.threshold = eps_threshold(lambda, 1.0, 1.0);
  const GapIdentities g = gap_identity_check(lambda);
  r.tau = g.tau;
  r.identity_residuals = g.residuals;
  r.identity_residuals["m_vs_root"] =
      rel_residual(r.m_value - r.roots.smaller, {r.m_value, r.roots.smaller});
  return r;
}

LemmaOverReport lemma_over_check(const OperatorSpec& op, double lambda, const PrimalVec& x,
                                 const DualPoint& r_star) {
  require_positive_lambda(lambda, "lemma_over_check");
  const DualBox box = range_box(op, lambda, x);
  const double rn = sup_norm(r_star);
  const double xn = weighted_l1_norm(x);
  const double scale = std::max({1.0, rn * rn, xn * xn, rn * xn});
  const double tol = 1e-10 * scale;
  if (!box_contains(box, r_star, 1e-10 * std::max(1.0, rn))) {
    throw std::invalid_argument("lemma_over_check: r* is not in Ax + lambda Jx");
  }

  LemmaOverReport rep;
  rep.lower = rn / (op.declared_norm_bound() + lambda);
  rep.norm_x = xn;
  rep.upper = rn / lambda;
  rep.lambda_norm_sq = lambda * xn * xn;
  rep.inner = pairing(x, r_star);
  const double ntol = 1e-10 * std::max(1.0, rn);
  rep.norm_bounds_ok = rep.lower <= xn + ntol && xn <= rep.upper + ntol;
  rep.inner_bound_ok = rep.lambda_norm_sq <= rep.inner + tol;
  if (op.skew()) rep.skew_equality_ok = std::abs(rep.inner - rep.lambda_norm_sq) <= tol;
  return rep;
}

GapIdentities gap_identity_check(double lambda) {
  require_positive_lambda(lambda, "gap_identity_check");
  const double l = lambda;
  GapIdentities g;
  g.lambda = l;
  g.tau = gap_tau(l);

  const double thr = eps_threshold(l, 1.0, 1.0);
  const double m = m_of_lambda(l);
  const double rhs = (1.0 + l) / (2.0 * (1.0 + 2.0 * l) * (1.0 + 3.0 * l)) * g.tau;
  g.residuals["wolfram"] = rel_residual((thr - m) - rhs, {thr, m, rhs});

  const double p = (3.0 * l + 1.0) * (3.0 * l + 1.0) * (9.0 * l * l + 36.0 * l + 16.0);
  const double q = 9.0 * l * l + 13.0 * l + 4.0;
  const double cubic = 144.0 * l * l * l + 128.0 * l * l + 28.0 * l;
  g.residuals["cubic"] = rel_residual(p - q * q - cubic, {p, q * q, cubic});

  const double b = 3.0 * l * l + 9.0 * l + 4.0;
  const double four_ac = 4.0 * (2.0 * l + 1.0) * l;
  const double factored = (l + 1.0) * (l + 1.0) * (9.0 * l * l + 36.0 * l + 16.0);
  g.residuals["discriminant"] = rel_residual(b * b - four_ac - factored, {b * b, four_ac, factored});
  return g;
}

MScanReport m_properties_scan(std::span<const double> grid) {
  if (grid.size() < 3) throw std::invalid_argument("m_properties_scan: need at least three grid points");
  if (!(grid.front() > 0.0) || !std::is_sorted(grid.begin(), grid.end())) {
    throw std::invalid_argument("m_properties_scan: grid must be sorted and positive");
  }
  std::vector<double> values(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) values[i] = m_of_lambda(grid[i]);
  const auto it = std::max_element(values.begin(), values.end());
  const std::size_t peak = static_cast<std::size_t>(it - values.begin());

  // Golden-section refinement on the bracket around the grid peak.
  double a = grid[peak == 0 ? 0 : peak - 1];
  double b = grid[std::min(peak + 1, grid.size() - 1)];
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = m_of_lambda(c);
  double fd = m_of_lambda(d);
  for (int iter = 0; iter < 200 && (b - a) > 1e-12 * std::max(1.0, b); ++iter) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = m_of_lambda(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = m_of_lambda(d);
    }
  }

  MScanReport rep;
  rep.argmax = 0.5 * (a + b);
  rep.max_value = m_of_lambda(rep.argmax);
  rep.increasing_before = true;
  rep.decreasing_after = true;
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (grid[i] <= rep.argmax && !(values[i] > values[i - 1])) rep.increasing_before = false;
    if (grid[i - 1] >= rep.argmax && !(values[i] < values[i - 1])) rep.decreasing_after = false;
  }
  rep.left_end_value = values.front();
  rep.right_end_value = values.back();
  return rep;
}

bool whs_capable(OperatorKind kind) { return kind != OperatorKind::Matrix; }

double whs_model_slack(const OperatorSpec& op, const PrimalVec& x) {
  const auto w = x.space().weights();
  const std::size_t last = x.size() - 1;
  switch (op.kind()) {
    case OperatorKind::Gossez: return 0.0;
    case OperatorKind::NegGossez:
    case OperatorKind::FPGrid: return w[0] * std::abs(x[0]);
    case OperatorKind::NegFPGrid: return w[last] * std::abs(x[last]);
    case OperatorKind::Matrix: break;
  }
  throw std::invalid_argument("whs_model_slack: no half-space certificate for matrix operators");
}

double model_floor(double lambda, double slack) {
  require_positive_lambda(lambda, "model_floor");
  if (slack < 0.0) throw std::invalid_argument("model_floor: negative slack");
  if (slack == 0.0) return m_of_lambda(lambda);
  const double l = lambda;
  const double a = 2.0 * l + 1.0;
  const double b = 3.0 * l * l + 9.0 * l + 4.0;
  const double c = l - slack * (1.0 + l) * (1.0 + l);
  if (c <= 0.0) return 0.0;
  return 2.0 * c / (b + std::sqrt(b * b - 4.0 * a * c));
}

WhsCertificate whs_certify_sample(const OperatorSpec& op, double lambda, const PrimalVec& x,
                                  const DualPoint& f_star) {
  if (!whs_capable(op.kind())) {
    throw std::invalid_argument("whs_certify_sample: operator kind has no half-space certificate");
  }
  if (std::abs(sup_norm(f_star) - 1.0) > 1e-12) {
    throw std::invalid_argument("whs_certify_sample: f* must have unit sup norm");
  }
  WhsCertificate cert{x};
  cert.eps = box_distance_sup(range_box(op, lambda, x), f_star);
  cert.inner_product = pairing(x, f_star);
  cert.slack = whs_model_slack(op, x);
  const double tol = 1e-10 * std::max(1.0, std::abs(cert.inner_product));
  cert.passed = cert.inner_product <= 3.0 * cert.eps + cert.slack + tol;
  cert.sharp_passed = cert.inner_product <= 2.0 * cert.eps + cert.slack + tol;
  return cert;
}

FloorCheck pointwise_floor_check(const OperatorSpec& op, double lambda, const PrimalVec& x,
                                 const DualPoint& f_star) {
  if (!whs_capable(op.kind())) {
    throw std::invalid_argument("pointwise_floor_check: operator kind has no distance floor");
  }
  FloorCheck fc;
  fc.distance = box_distance_sup(range_box(op, lambda, x), f_star);
  fc.slack = whs_model_slack(op, x);
  fc.floor = model_floor(lambda, fc.slack);
  fc.passed = fc.distance >= fc.floor - kFloorTol;
  return fc;
}

}  // namespace rugged
