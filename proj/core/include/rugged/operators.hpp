#pragma once

// Bounded linear monotone operators on the model spaces.

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rugged/space.hpp"

namespace rugged {

enum class OperatorKind { Gossez, NegGossez, FPGrid, NegFPGrid, Matrix };

std::string_view to_string(OperatorKind kind);
std::optional<OperatorKind> parse_operator_kind(std::string_view name);

class OperatorSpec {
 public:
  // (Gx)_n = -sum_{k<n} x_k + sum_{k>n} x_k on l1 with a tail class.
  static OperatorSpec gossez(const SpaceSpec& space);
  // Midpoint discretization of (Fx)(t) = int_0^t x - int_t^1 x on a tailless grid.
  static OperatorSpec fp_grid(const SpaceSpec& space);
  // Row-major K x K matrix acting on head coefficients.  tail_row gives the
  // common tail value sum_k tail_row[k] * x_k and is required iff the space
  // has a tail.  The norm bound is computed from the entries.
  static OperatorSpec matrix(const SpaceSpec& space, std::vector<double> entries,
                             std::vector<double> tail_row = {}, bool skew = false);
  static OperatorSpec zero(const SpaceSpec& space);

  [[nodiscard]] OperatorKind kind() const { return kind_; }
  [[nodiscard]] const SpaceSpec& space() const { return space_; }
  [[nodiscard]] double declared_norm_bound() const { return norm_bound_; }
  [[nodiscard]] bool skew() const { return skew_; }
  [[nodiscard]] const std::vector<double>& entries() const { return entries_; }
  [[nodiscard]] const std::vector<double>& tail_row() const { return tail_row_; }

  [[nodiscard]] DualPoint apply(const PrimalVec& x) const;

  friend OperatorSpec negate(const OperatorSpec& op);

 private:
  OperatorSpec(OperatorKind kind, SpaceSpec space, double bound, bool skew)
      : kind_(kind), space_(std::move(space)), norm_bound_(bound), skew_(skew) {}

  OperatorKind kind_;
  SpaceSpec space_;
  double norm_bound_;
  bool skew_;
  std::vector<double> entries_;
  std::vector<double> tail_row_;
};

DualPoint gossez_apply(const PrimalVec& x);
DualPoint fp_apply(const PrimalVec& x);
OperatorSpec negate(const OperatorSpec& op);

// Sign selection for an element of Jx: head values in [-1,1] (forced to
// sign(x_i) on the support) and a tail value when the space has a tail.
struct Selection {
  std::vector<double> head;
  std::optional<double> tail;
};

// The exact set Ax + lambda Jx.
DualBox range_box(const OperatorSpec& op, double lambda, const PrimalVec& x);
// Ax + lambda * norm(x) * selection; throws if the selection is inadmissible.
DualPoint range_point(const OperatorSpec& op, double lambda, const PrimalVec& x,
                      const Selection& selection);

}  // namespace rugged
