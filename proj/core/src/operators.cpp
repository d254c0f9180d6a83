#include "rugged/operators.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace rugged {

std::string_view to_string(OperatorKind kind) {
  switch (kind) {
    case OperatorKind::Gossez: return "gossez";
    case OperatorKind::NegGossez: return "neg-gossez";
    case OperatorKind::FPGrid: return "fp-grid";
    case OperatorKind::NegFPGrid: return "neg-fp-grid";
    case OperatorKind::Matrix: return "matrix";
  }
  return "unknown";
}

std::optional<OperatorKind> parse_operator_kind(std::string_view name) {
  for (auto k : {OperatorKind::Gossez, OperatorKind::NegGossez, OperatorKind::FPGrid,
                 OperatorKind::NegFPGrid, OperatorKind::Matrix}) {
    if (to_string(k) == name) return k;
  }
  return std::nullopt;
}

namespace {

bool unit_weights(const SpaceSpec& s) {
  const auto w = s.weights();
  return std::all_of(w.begin(), w.end(), [](double v) { return v == 1.0; });
}

void require_gossez_space(const SpaceSpec& s) {
  if (!s.has_tail() || !unit_weights(s)) {
    throw std::invalid_argument("Gossez operator needs the l1 truncation space (unit weights, tail); got " +
                                s.describe());
  }
}

void require_grid_space(const SpaceSpec& s) {
  if (s.has_tail()) {
    throw std::invalid_argument("Fitzpatrick-Phelps grid operator needs a tailless grid; got " +
                                s.describe());
  }
}

// head_i = sign * (sum_{k>i} w_k x_k - sum_{k<i} w_k x_k); tail = -sign * sum_k w_k x_k.
DualPoint weighted_gossez_form(const PrimalVec& x, double sign) {
  const auto w = x.space().weights();
  const std::size_t n = x.size();
  double total = 0.0;
  for (std::size_t k = 0; k < n; ++k) total += w[k] * x[k];
  std::vector<double> head(n);
  double prefix = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double here = w[i] * x[i];
    const double suffix = total - prefix - here;
    head[i] = sign * (suffix - prefix);
    prefix += here;
  }
  std::optional<double> tail;
  if (x.space().has_tail()) tail = -sign * total;
  return DualPoint(x.space(), std::move(head), tail);
}

void require_space(const OperatorSpec& op, const PrimalVec& x) {
  if (!(op.space() == x.space())) {
    throw std::invalid_argument("operator and vector live in different spaces");
  }
}

}  // namespace

OperatorSpec OperatorSpec::gossez(const SpaceSpec& space) {
  require_gossez_space(space);
  return OperatorSpec(OperatorKind::Gossez, space, 1.0, true);
}

OperatorSpec OperatorSpec::fp_grid(const SpaceSpec& space) {
  require_grid_space(space);
  return OperatorSpec(OperatorKind::FPGrid, space, 1.0, true);
}

OperatorSpec OperatorSpec::matrix(const SpaceSpec& space, std::vector<double> entries,
                                  std::vector<double> tail_row, bool skew) {
  const std::size_t n = space.head_dim();
  if (entries.size() != n * n) throw std::invalid_argument("matrix operator: expected K*K entries");
  if (space.has_tail() && tail_row.empty()) tail_row.assign(n, 0.0);
  if (space.has_tail() != !tail_row.empty() || (!tail_row.empty() && tail_row.size() != n)) {
    throw std::invalid_argument("matrix operator: tail row must have K entries iff the space has a tail");
  }
  const auto w = space.weights();
  double bound = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) bound = std::max(bound, std::abs(entries[i * n + k]) / w[k]);
  }
  for (std::size_t k = 0; k < tail_row.size(); ++k) bound = std::max(bound, std::abs(tail_row[k]) / w[k]);
  OperatorSpec op(OperatorKind::Matrix, space, bound, skew);
  op.entries_ = std::move(entries);
  op.tail_row_ = std::move(tail_row);
  return op;
}

OperatorSpec OperatorSpec::zero(const SpaceSpec& space) {
  const std::size_t n = space.head_dim();
  return matrix(space, std::vector<double>(n * n, 0.0), {}, true);
}

DualPoint OperatorSpec::apply(const PrimalVec& x) const {
  require_space(*this, x);
  switch (kind_) {
    case OperatorKind::Gossez: return weighted_gossez_form(x, 1.0);
    case OperatorKind::NegGossez: return weighted_gossez_form(x, -1.0);
    case OperatorKind::FPGrid: return weighted_gossez_form(x, -1.0);
    case OperatorKind::NegFPGrid: return weighted_gossez_form(x, 1.0);
    case OperatorKind::Matrix: break;
  }
  const std::size_t n = x.size();
  std::vector<double> head(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (std::size_t k = 0; k < n; ++k) s += entries_[i * n + k] * x[k];
    head[i] = s;
  }
  std::optional<double> tail;
  if (space_.has_tail()) {
    double s = 0.0;
    for (std::size_t k = 0; k < n; ++k) s += tail_row_[k] * x[k];
    tail = s;
  }
  return DualPoint(space_, std::move(head), tail);
}

DualPoint gossez_apply(const PrimalVec& x) {
  require_gossez_space(x.space());
  return weighted_gossez_form(x, 1.0);
}

DualPoint fp_apply(const PrimalVec& x) {
  require_grid_space(x.space());
  // The +-w_i x_i / 2 half-cell terms cancel at the midpoint.
  return weighted_gossez_form(x, -1.0);
}

OperatorSpec negate(const OperatorSpec& op) {
  OperatorSpec out = op;
  switch (op.kind_) {
    case OperatorKind::Gossez: out.kind_ = OperatorKind::NegGossez; break;
    case OperatorKind::NegGossez: out.kind_ = OperatorKind::Gossez; break;
    case OperatorKind::FPGrid: out.kind_ = OperatorKind::NegFPGrid; break;
    case OperatorKind::NegFPGrid: out.kind_ = OperatorKind::FPGrid; break;
    case OperatorKind::Matrix:
      for (double& v : out.entries_) v = -v;
      for (double& v : out.tail_row_) v = -v;
      break;
  }
  return out;
}

DualBox range_box(const OperatorSpec& op, double lambda, const PrimalVec& x) {
  if (!(lambda > 0.0)) throw std::invalid_argument("range_box: lambda must be positive");
  return box_affine(duality_box(x), op.apply(x), lambda);
}

DualPoint range_point(const OperatorSpec& op, double lambda, const PrimalVec& x,
                      const Selection& selection) {
  if (!(lambda > 0.0)) throw std::invalid_argument("range_point: lambda must be positive");
  const std::size_t n = x.size();
  if (selection.head.size() != n) throw std::invalid_argument("range_point: selection length mismatch");
  if (selection.tail.has_value() != x.space().has_tail()) {
    throw std::invalid_argument("range_point: tail selection required iff the space has a tail");
  }
  for (std::size_t i = 0; i < n; ++i) {
    const double s = selection.head[i];
    if (!(std::abs(s) <= 1.0)) throw std::invalid_argument("range_point: selection outside [-1,1]");
    if (x[i] > 0.0 && s != 1.0) throw std::invalid_argument("range_point: selection must be +1 where x_i > 0");
    if (x[i] < 0.0 && s != -1.0) throw std::invalid_argument("range_point: selection must be -1 where x_i < 0");
  }
  if (selection.tail && !(std::abs(*selection.tail) <= 1.0)) {
    throw std::invalid_argument("range_point: tail selection outside [-1,1]");
  }

  const double scale = lambda * weighted_l1_norm(x);
  DualPoint ax = op.apply(x);
  std::vector<double> head(n);
  for (std::size_t i = 0; i < n; ++i) head[i] = ax[i] + scale * selection.head[i];
  std::optional<double> tail;
  if (ax.tail()) tail = *ax.tail() + scale * *selection.tail;
  DualPoint r(x.space(), std::move(head), tail);

  const double tol = 1e-12 * std::max(1.0, sup_norm(r));
  if (!box_contains(range_box(op, lambda, x), r, tol)) {
    throw std::logic_error("range_point: result escaped the range box");
  }
  return r;
}

}  // namespace rugged
