#pragma once

// Weighted-l1 model spaces, their sup-norm duals, and interval boxes.
//
// A model space has K head coordinates with positive weights.  When it
// carries a tail, every coordinate beyond K is represented by one shared
// class: primal vectors vanish there, dual vectors take one common value,
// and boxes carry one common interval.  With unit weights and a tail this
// reproduces finitely supported l1 exactly; with weights 1/K and no tail it
// is the midpoint grid on L1[0,1].

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace rugged {

inline constexpr double kDefaultMembershipTol = 1e-10;

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  static Interval point(double v) { return {v, v}; }
  static Interval symmetric(double r) { return {-r, r}; }

  [[nodiscard]] bool contains(double v, double tol = 0.0) const {
    return v >= lo - tol && v <= hi + tol;
  }
  [[nodiscard]] bool contains(const Interval& other, double tol = 0.0) const {
    return other.lo >= lo - tol && other.hi <= hi + tol;
  }
  [[nodiscard]] double distance_to(double v) const {
    if (v < lo) return lo - v;
    if (v > hi) return v - hi;
    return 0.0;
  }
  [[nodiscard]] double clamp(double v) const {
    return v < lo ? lo : (v > hi ? hi : v);
  }
  [[nodiscard]] bool is_point() const { return lo == hi; }

  friend bool operator==(const Interval&, const Interval&) = default;
};

// scale * I + shift; a negative scale swaps the endpoints.
Interval affine(const Interval& i, double scale, double shift);
Interval operator+(const Interval& a, const Interval& b);
Interval operator-(const Interval& a, const Interval& b);

class SpaceSpec {
 public:
  enum class Preset { L1Truncation, L1Grid, Custom };

  // l1 truncated at K coordinates plus one tail class (w_i = 1).
  static SpaceSpec l1_truncation(std::size_t head_dim);
  // Midpoint grid on L1[0,1] (w_i = 1/K, no tail).
  static SpaceSpec l1_grid(std::size_t head_dim);
  static SpaceSpec weighted(std::vector<double> weights, bool has_tail);

  [[nodiscard]] std::size_t head_dim() const { return data_->weights.size(); }
  [[nodiscard]] std::span<const double> weights() const { return data_->weights; }
  [[nodiscard]] double weight(std::size_t i) const { return data_->weights[i]; }
  [[nodiscard]] bool has_tail() const { return data_->has_tail; }
  [[nodiscard]] Preset preset() const { return data_->preset; }
  [[nodiscard]] std::string describe() const;

  friend bool operator==(const SpaceSpec& a, const SpaceSpec& b);

 private:
  struct Data {
    std::vector<double> weights;
    bool has_tail = false;
    Preset preset = Preset::Custom;
  };
  explicit SpaceSpec(std::shared_ptr<const Data> data) : data_(std::move(data)) {}
  std::shared_ptr<const Data> data_;
};

// Finitely supported primal vector; coordinates past the head are zero.
class PrimalVec {
 public:
  explicit PrimalVec(SpaceSpec space);  // zero vector
  PrimalVec(SpaceSpec space, std::vector<double> coeffs);

  // scale * e_i, where e_i is the i-th canonical unit coordinate (0-based).
  static PrimalVec unit(const SpaceSpec& space, std::size_t i, double scale = 1.0);

  [[nodiscard]] const SpaceSpec& space() const { return space_; }
  [[nodiscard]] std::span<const double> coeffs() const { return coeffs_; }
  [[nodiscard]] double operator[](std::size_t i) const { return coeffs_[i]; }
  [[nodiscard]] std::size_t size() const { return coeffs_.size(); }
  [[nodiscard]] bool is_zero() const;

  [[nodiscard]] PrimalVec scaled(double alpha) const;
  // alpha * this + beta * other
  [[nodiscard]] PrimalVec combined(double alpha, double beta, const PrimalVec& other) const;

 private:
  SpaceSpec space_;
  std::vector<double> coeffs_;
};

// Bounded dual vector.  The tail is present iff the space has one.
class DualPoint {
 public:
  explicit DualPoint(SpaceSpec space);  // zero
  DualPoint(SpaceSpec space, std::vector<double> head, std::optional<double> tail);

  // Every coordinate (head and tail) equal to v.
  static DualPoint constant(const SpaceSpec& space, double v);

  [[nodiscard]] const SpaceSpec& space() const { return space_; }
  [[nodiscard]] std::span<const double> head() const { return head_; }
  [[nodiscard]] double operator[](std::size_t i) const { return head_[i]; }
  [[nodiscard]] std::optional<double> tail() const { return tail_; }

  [[nodiscard]] DualPoint scaled(double alpha) const;
  [[nodiscard]] DualPoint combined(double alpha, double beta, const DualPoint& other) const;

 private:
  SpaceSpec space_;
  std::vector<double> head_;
  std::optional<double> tail_;
};

class DualBox {
 public:
  DualBox(SpaceSpec space, std::vector<Interval> head, std::optional<Interval> tail);

  // Degenerate box {y}.
  static DualBox singleton(const DualPoint& y);

  [[nodiscard]] const SpaceSpec& space() const { return space_; }
  [[nodiscard]] std::span<const Interval> head() const { return head_; }
  [[nodiscard]] const Interval& operator[](std::size_t i) const { return head_[i]; }
  [[nodiscard]] std::optional<Interval> tail() const { return tail_; }

  // Point of the box closest to y in the sup norm (coordinatewise clamp).
  [[nodiscard]] DualPoint nearest_point(const DualPoint& y) const;

 private:
  SpaceSpec space_;
  std::vector<Interval> head_;
  std::optional<Interval> tail_;
};

double weighted_l1_norm(const PrimalVec& x);
double sup_norm(const DualPoint& y);
double pairing(const PrimalVec& x, const DualPoint& y);

// Exact set Jx: {norm(x) * sign(x_i)} on the support, [-norm(x), norm(x)]
// elsewhere, including the tail class.
DualBox duality_box(const PrimalVec& x);

// <x,y> = norm(x)^2 = sup_norm(y)^2, each equality within tol.
bool j_membership_check(const PrimalVec& x, const DualPoint& y,
                        double tol = kDefaultMembershipTol);

// min over p in b of sup_norm(p - y).
double box_distance_sup(const DualBox& b, const DualPoint& y);
bool box_contains(const DualBox& b, const DualPoint& y, double tol = 0.0);

DualBox box_affine(const DualBox& b, const DualPoint& shift, double scale);
DualBox box_scale(const DualBox& b, double scale);
// b1 + sign * b2 in the Minkowski sense; sign must be +1 or -1.
DualBox box_minkowski(const DualBox& b1, const DualBox& b2, int sign);
// sum_j weights[j] * boxes[j] for nonnegative weights.
DualBox box_weighted_sum(std::span<const DualBox> boxes, std::span<const double> weights);
bool box_contains_interval_everywhere(const DualBox& b, const Interval& target,
                                      double tol = 0.0);

}  // namespace rugged
