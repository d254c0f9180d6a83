#include "rugged/space.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace rugged {

namespace {

void require_same_space(const SpaceSpec& a, const SpaceSpec& b, const char* what) {
  if (!(a == b)) {
    throw std::invalid_argument(std::string(what) + ": operands live in different spaces (" +
                                a.describe() + " vs " + b.describe() + ")");
  }
}

}  // namespace

Interval affine(const Interval& i, double scale, double shift) {
  const double a = scale * i.lo + shift;
  const double b = scale * i.hi + shift;
  return a <= b ? Interval{a, b} : Interval{b, a};
}

Interval operator+(const Interval& a, const Interval& b) { return {a.lo + b.lo, a.hi + b.hi}; }
Interval operator-(const Interval& a, const Interval& b) { return {a.lo - b.hi, a.hi - b.lo}; }

// ---------------------------------------------------------------------------
// SpaceSpec

SpaceSpec SpaceSpec::l1_truncation(std::size_t head_dim) {
  if (head_dim == 0) throw std::invalid_argument("l1_truncation: head_dim must be positive");
  Data d;
  d.weights.assign(head_dim, 1.0);
  d.has_tail = true;
  d.preset = Preset::L1Truncation;
  return SpaceSpec(std::make_shared<const Data>(std::move(d)));
}

SpaceSpec SpaceSpec::l1_grid(std::size_t head_dim) {
  if (head_dim == 0) throw std::invalid_argument("l1_grid: head_dim must be positive");
  Data d;
  d.weights.assign(head_dim, 1.0 / static_cast<double>(head_dim));
  d.has_tail = false;
  d.preset = Preset::L1Grid;
  return SpaceSpec(std::make_shared<const Data>(std::move(d)));
}

SpaceSpec SpaceSpec::weighted(std::vector<double> weights, bool has_tail) {
  if (weights.empty()) throw std::invalid_argument("weighted space: no coordinates");
  for (double w : weights) {
    if (!(w > 0.0) || !std::isfinite(w)) {
      throw std::invalid_argument("weighted space: weights must be positive and finite");
    }
  }
  Data d;
  d.weights = std::move(weights);
  d.has_tail = has_tail;
  d.preset = Preset::Custom;
  return SpaceSpec(std::make_shared<const Data>(std::move(d)));
}

std::string SpaceSpec::describe() const {
  switch (preset()) {
    case Preset::L1Truncation:
      return "l1(K=" + std::to_string(head_dim()) + ",tail)";
    case Preset::L1Grid:
      return "L1grid(K=" + std::to_string(head_dim()) + ")";
    case Preset::Custom:
      break;
  }
  return std::string("weighted(K=") + std::to_string(head_dim()) +
         (has_tail() ? ",tail)" : ")");
}

bool operator==(const SpaceSpec& a, const SpaceSpec& b) {
  if (a.data_ == b.data_) return true;
  return a.data_->has_tail == b.data_->has_tail && a.data_->weights == b.data_->weights;
}

// ---------------------------------------------------------------------------
// PrimalVec

PrimalVec::PrimalVec(SpaceSpec space)
    : space_(std::move(space)), coeffs_(space_.head_dim(), 0.0) {}

PrimalVec::PrimalVec(SpaceSpec space, std::vector<double> coeffs)
    : space_(std::move(space)), coeffs_(std::move(coeffs)) {
  if (coeffs_.size() != space_.head_dim()) {
    throw std::invalid_argument("PrimalVec: expected " + std::to_string(space_.head_dim()) +
                                " coefficients, got " + std::to_string(coeffs_.size()));
  }
  for (double c : coeffs_) {
    if (!std::isfinite(c)) throw std::invalid_argument("PrimalVec: non-finite coefficient");
  }
}

PrimalVec PrimalVec::unit(const SpaceSpec& space, std::size_t i, double scale) {
  if (i >= space.head_dim()) throw std::out_of_range("PrimalVec::unit: index past head");
  std::vector<double> c(space.head_dim(), 0.0);
  c[i] = scale;
  return PrimalVec(space, std::move(c));
}

bool PrimalVec::is_zero() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(), [](double c) { return c == 0.0; });
}

PrimalVec PrimalVec::scaled(double alpha) const {
  std::vector<double> c(coeffs_);
  for (double& v : c) v *= alpha;
  return PrimalVec(space_, std::move(c));
}

PrimalVec PrimalVec::combined(double alpha, double beta, const PrimalVec& other) const {
  require_same_space(space_, other.space_, "PrimalVec::combined");
  std::vector<double> c(coeffs_.size());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = alpha * coeffs_[i] + beta * other.coeffs_[i];
  return PrimalVec(space_, std::move(c));
}

// ---------------------------------------------------------------------------
// DualPoint

DualPoint::DualPoint(SpaceSpec space)
    : space_(std::move(space)), head_(space_.head_dim(), 0.0) {
  if (space_.has_tail()) tail_ = 0.0;
}

DualPoint::DualPoint(SpaceSpec space, std::vector<double> head, std::optional<double> tail)
    : space_(std::move(space)), head_(std::move(head)), tail_(tail) {
  if (head_.size() != space_.head_dim()) {
    throw std::invalid_argument("DualPoint: head length does not match space");
  }
  if (tail_.has_value() != space_.has_tail()) {
    throw std::invalid_argument("DualPoint: tail value required iff the space has a tail");
  }
}

DualPoint DualPoint::constant(const SpaceSpec& space, double v) {
  std::optional<double> tail;
  if (space.has_tail()) tail = v;
  return DualPoint(space, std::vector<double>(space.head_dim(), v), tail);
}

DualPoint DualPoint::scaled(double alpha) const {
  std::vector<double> h(head_);
  for (double& v : h) v *= alpha;
  std::optional<double> t;
  if (tail_) t = alpha * *tail_;
  return DualPoint(space_, std::move(h), t);
}

DualPoint DualPoint::combined(double alpha, double beta, const DualPoint& other) const {
  require_same_space(space_, other.space_, "DualPoint::combined");
  std::vector<double> h(head_.size());
  for (std::size_t i = 0; i < h.size(); ++i) h[i] = alpha * head_[i] + beta * other.head_[i];
  std::optional<double> t;
  if (tail_) t = alpha * *tail_ + beta * *other.tail_;
  return DualPoint(space_, std::move(h), t);
}

// ---------------------------------------------------------------------------
// DualBox

DualBox::DualBox(SpaceSpec space, std::vector<Interval> head, std::optional<Interval> tail)
    : space_(std::move(space)), head_(std::move(head)), tail_(tail) {
  if (head_.size() != space_.head_dim()) {
    throw std::invalid_argument("DualBox: head length does not match space");
  }
  if (tail_.has_value() != space_.has_tail()) {
    throw std::invalid_argument("DualBox: tail interval required iff the space has a tail");
  }
  for (const auto& iv : head_) {
    if (!(iv.lo <= iv.hi)) throw std::invalid_argument("DualBox: interval with lo > hi");
  }
  if (tail_ && !(tail_->lo <= tail_->hi)) {
    throw std::invalid_argument("DualBox: tail interval with lo > hi");
  }
}

DualBox DualBox::singleton(const DualPoint& y) {
  std::vector<Interval> h;
  h.reserve(y.head().size());
  for (double v : y.head()) h.push_back(Interval::point(v));
  std::optional<Interval> t;
  if (y.tail()) t = Interval::point(*y.tail());
  return DualBox(y.space(), std::move(h), t);
}

DualPoint DualBox::nearest_point(const DualPoint& y) const {
  require_same_space(space_, y.space(), "DualBox::nearest_point");
  std::vector<double> h(head_.size());
  for (std::size_t i = 0; i < h.size(); ++i) h[i] = head_[i].clamp(y[i]);
  std::optional<double> t;
  if (tail_) t = tail_->clamp(*y.tail());
  return DualPoint(space_, std::move(h), t);
}

// ---------------------------------------------------------------------------
// Free operations

double weighted_l1_norm(const PrimalVec& x) {
  const auto w = x.space().weights();
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += w[i] * std::abs(x[i]);
  return s;
}

double sup_norm(const DualPoint& y) {
  double m = 0.0;
  for (double v : y.head()) m = std::max(m, std::abs(v));
  if (y.tail()) m = std::max(m, std::abs(*y.tail()));
  return m;
}

double pairing(const PrimalVec& x, const DualPoint& y) {
  require_same_space(x.space(), y.space(), "pairing");
  const auto w = x.space().weights();
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += w[i] * x[i] * y[i];
  return s;
}

DualBox duality_box(const PrimalVec& x) {
  const double n = weighted_l1_norm(x);
  std::vector<Interval> h;
  h.reserve(x.size());
  for (double c : x.coeffs()) {
    if (c > 0.0) {
      h.push_back(Interval::point(n));
    } else if (c < 0.0) {
      h.push_back(Interval::point(-n));
    } else {
      h.push_back(Interval::symmetric(n));
    }
  }
  std::optional<Interval> t;
  if (x.space().has_tail()) t = Interval::symmetric(n);
  return DualBox(x.space(), std::move(h), t);
}

bool j_membership_check(const PrimalVec& x, const DualPoint& y, double tol) {
  require_same_space(x.space(), y.space(), "j_membership_check");
  const double n = weighted_l1_norm(x);
  const double n2 = n * n;
  const double s = sup_norm(y);
  return std::abs(pairing(x, y) - n2) <= tol && std::abs(s * s - n2) <= tol;
}

double box_distance_sup(const DualBox& b, const DualPoint& y) {
  require_same_space(b.space(), y.space(), "box_distance_sup");
  if (b.tail().has_value() != y.tail().has_value()) {
    throw std::invalid_argument("box_distance_sup: tail presence mismatch");
  }
  double d = 0.0;
  const auto head = b.head();
  for (std::size_t i = 0; i < head.size(); ++i) d = std::max(d, head[i].distance_to(y[i]));
  if (b.tail()) d = std::max(d, b.tail()->distance_to(*y.tail()));
  return d;
}

bool box_contains(const DualBox& b, const DualPoint& y, double tol) {
  return box_distance_sup(b, y) <= tol;
}

DualBox box_affine(const DualBox& b, const DualPoint& shift, double scale) {
  require_same_space(b.space(), shift.space(), "box_affine");
  std::vector<Interval> h(b.head().size());
  for (std::size_t i = 0; i < h.size(); ++i) h[i] = affine(b[i], scale, shift[i]);
  std::optional<Interval> t;
  if (b.tail()) t = affine(*b.tail(), scale, *shift.tail());
  return DualBox(b.space(), std::move(h), t);
}

DualBox box_scale(const DualBox& b, double scale) {
  return box_affine(b, DualPoint(b.space()), scale);
}

DualBox box_minkowski(const DualBox& b1, const DualBox& b2, int sign) {
  require_same_space(b1.space(), b2.space(), "box_minkowski");
  if (sign != 1 && sign != -1) throw std::invalid_argument("box_minkowski: sign must be +1 or -1");
  std::vector<Interval> h(b1.head().size());
  for (std::size_t i = 0; i < h.size(); ++i) h[i] = sign > 0 ? b1[i] + b2[i] : b1[i] - b2[i];
  std::optional<Interval> t;
  if (b1.tail()) t = sign > 0 ? *b1.tail() + *b2.tail() : *b1.tail() - *b2.tail();
  return DualBox(b1.space(), std::move(h), t);
}

DualBox box_weighted_sum(std::span<const DualBox> boxes, std::span<const double> weights) {
  if (boxes.empty() || boxes.size() != weights.size()) {
    throw std::invalid_argument("box_weighted_sum: need one weight per box");
  }
  const SpaceSpec& space = boxes.front().space();
  std::vector<Interval> h(space.head_dim(), Interval{});
  std::optional<Interval> t;
  if (space.has_tail()) t = Interval{};
  for (std::size_t j = 0; j < boxes.size(); ++j) {
    require_same_space(space, boxes[j].space(), "box_weighted_sum");
    const double w = weights[j];
    if (w < 0.0) throw std::invalid_argument("box_weighted_sum: negative weight");
    for (std::size_t i = 0; i < h.size(); ++i) {
      h[i].lo += w * boxes[j][i].lo;
      h[i].hi += w * boxes[j][i].hi;
    }
    if (t) {
      t->lo += w * boxes[j].tail()->lo;
      t->hi += w * boxes[j].tail()->hi;
    }
  }
  return DualBox(space, std::move(h), t);
}

bool box_contains_interval_everywhere(const DualBox& b, const Interval& target, double tol) {
  for (const auto& iv : b.head()) {
    if (!iv.contains(target, tol)) return false;
  }
  return !b.tail() || b.tail()->contains(target, tol);
}

}  // namespace rugged
