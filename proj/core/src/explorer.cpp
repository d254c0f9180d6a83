#include "rugged/explorer.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>
#include <thread>

namespace rugged {

void SearchConfig::validate() const {
  if (head_dim == 0) throw std::invalid_argument("SearchConfig: head_dim must be positive");
  if (!(lambda > 0.0)) throw std::invalid_argument("SearchConfig: lambda must be positive");
  if (restarts < 1) throw std::invalid_argument("SearchConfig: restarts must be at least 1");
  if (!(initial_step > 0.0)) throw std::invalid_argument("SearchConfig: initial_step must be positive");
  if (!(shrink > 0.0 && shrink < 1.0)) throw std::invalid_argument("SearchConfig: shrink must lie in (0,1)");
  if (witness_order < 1) throw std::invalid_argument("SearchConfig: witness_order must be at least 1");
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  std::uint64_t z = master + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

namespace {

void require_config_matches(const OperatorSpec& op, double lambda, const SearchConfig& cfg) {
  cfg.validate();
  if (cfg.head_dim != op.space().head_dim()) {
    throw std::invalid_argument("SearchConfig: head_dim does not match the operator's space");
  }
  if (!(lambda > 0.0)) throw std::invalid_argument("search: lambda must be positive");
}

// Runs fn(i) for i in [0, n) on up to hardware_concurrency threads and
// returns the results in index order.
template <class Fn>
auto run_indexed(std::size_t n, Fn fn) -> std::vector<decltype(fn(std::size_t{}))> {
  using Result = decltype(fn(std::size_t{}));
  std::vector<Result> out;
  out.reserve(n);
  const std::size_t width = std::max<std::size_t>(1, std::thread::hardware_concurrency());
  for (std::size_t base = 0; base < n; base += width) {
    std::vector<std::future<Result>> batch;
    const std::size_t end = std::min(n, base + width);
    for (std::size_t i = base; i < end; ++i) batch.push_back(std::async(std::launch::async, fn, i));
    for (auto& f : batch) out.push_back(f.get());
  }
  return out;
}

std::optional<double> constant_value(const DualPoint& y) {
  const auto h = y.head();
  const double c = h.empty() ? 0.0 : h[0];
  for (double v : h) {
    if (v != c) return std::nullopt;
  }
  if (y.tail() && *y.tail() != c) return std::nullopt;
  return c;
}

// Unit-norm vector concentrated on one cell.
std::vector<double> lead_direction(const OperatorSpec& op, std::size_t j, double scale) {
  const SpaceSpec& s = op.space();
  const std::size_t cell = lead_cell(op, j % s.head_dim());
  std::vector<double> v(s.head_dim(), 0.0);
  v[cell] = scale / s.weight(cell);
  return v;
}

std::vector<double> random_sparse(std::mt19937_64& rng, const SpaceSpec& s, double lambda) {
  const std::size_t k = s.head_dim();
  std::uniform_int_distribution<std::size_t> support_size(1, std::min<std::size_t>(k, 8));
  std::vector<std::size_t> cells(k);
  std::iota(cells.begin(), cells.end(), std::size_t{0});
  const std::size_t m = support_size(rng);
  for (std::size_t i = 0; i < m; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, k - 1);
    std::swap(cells[i], cells[pick(rng)]);
  }
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> v(k, 0.0);
  double norm = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    v[cells[i]] = normal(rng);
    norm += s.weight(cells[i]) * std::abs(v[cells[i]]);
  }
  if (norm == 0.0) {
    v[cells[0]] = 1.0;
    norm = s.weight(cells[0]);
  }
  std::uniform_real_distribution<double> log_scale(std::log(0.1), std::log(10.0));
  const double target = std::exp(log_scale(rng)) / lambda;
  for (double& c : v) c *= target / norm;
  return v;
}

struct CompassState {
  std::vector<double> v;
  double value = 0.0;
  std::vector<double> trace;
  std::size_t evals = 0;
};

// Coordinate compass search with geometric step decay.  extra_poll may try
// further moves; it returns true when it improved the state.
template <class Objective, class ExtraPoll>
CompassState compass_search(std::vector<double> start, Objective&& objective, double step,
                            double shrink, std::size_t budget, ExtraPoll&& extra_poll) {
  CompassState st;
  st.v = std::move(start);
  st.value = objective(st.v);
  st.trace.push_back(st.value);
  const double min_step = step * 1e-12;
  while (st.evals < budget && step >= min_step && st.value > 0.0) {
    bool improved = false;
    for (std::size_t i = 0; i < st.v.size() && st.evals < budget; ++i) {
      for (double dir : {1.0, -1.0}) {
        if (st.evals >= budget) break;
        const double old = st.v[i];
        st.v[i] = old + dir * step;
        const double f = objective(st.v);
        ++st.evals;
        if (f < st.value) {
          st.value = f;
          improved = true;
          break;
        }
        st.v[i] = old;
      }
    }
    if (st.evals < budget && extra_poll(st, step)) improved = true;
    st.trace.push_back(st.value);
    if (!improved) step *= shrink;
  }
  return st;
}

struct NoExtraPoll {
  bool operator()(CompassState&, double) const { return false; }
};

// Splits target value p in sum_j theta_j [lo_j, hi_j] into r_j in [lo_j, hi_j].
void split_coordinate(double p, std::span<const Interval> ivs, std::span<const double> thetas,
                      std::span<double> out) {
  double rem = p;
  for (std::size_t j = 0; j < ivs.size(); ++j) {
    out[j] = ivs[j].lo;
    rem -= thetas[j] * ivs[j].lo;
  }
  for (std::size_t j = 0; j < ivs.size() && rem > 0.0; ++j) {
    if (thetas[j] <= 0.0) continue;
    const double cap = thetas[j] * (ivs[j].hi - ivs[j].lo);
    const double take = std::min(rem, cap);
    out[j] = ivs[j].clamp(ivs[j].lo + take / thetas[j]);
    rem -= take;
  }
}

double selection_for(double r, double ax, double coeff, double scale) {
  if (coeff > 0.0) return 1.0;
  if (coeff < 0.0) return -1.0;
  if (scale == 0.0) return 0.0;
  return std::clamp((r - ax) / scale, -1.0, 1.0);
}

}  // namespace

std::size_t lead_cell(const OperatorSpec& op, std::size_t j) {
  const std::size_t k = op.space().head_dim();
  if (j >= k) throw std::out_of_range("lead_cell: index past head");
  return op.kind() == OperatorKind::FPGrid ? k - 1 - j : j;
}

double target_floor(const OperatorSpec& op, double lambda, const PrimalVec& x,
                    const DualPoint& f_star) {
  if (!whs_capable(op.kind())) return 0.0;
  const auto c = constant_value(f_star);
  if (!c || *c == 0.0) return 0.0;
  const double a = std::abs(*c);
  return a * model_floor(lambda, whs_model_slack(op, x) / a);
}

DistanceSearchResult distance_minimize(const OperatorSpec& op, double lambda,
                                       const DualPoint& f_star, const SearchConfig& cfg) {
  require_config_matches(op, lambda, cfg);
  const SpaceSpec& space = op.space();
  const bool check_floor = whs_capable(op.kind()) && constant_value(f_star).has_value() &&
                           *constant_value(f_star) != 0.0;
  const std::size_t fixed_starts = 2 * std::min<std::size_t>(space.head_dim(), 2);

  struct RestartResult {
    CompassState state;
    std::size_t floor_checks = 0;
    std::size_t floor_violations = 0;
    double min_margin = std::numeric_limits<double>::infinity();
  };

  auto run_restart = [&](std::size_t r) {
    std::vector<double> start;
    if (r < fixed_starts) {
      start = lead_direction(op, r / 2, r % 2 == 0 ? -1.0 : 1.0);
    } else {
      std::mt19937_64 rng(derive_seed(cfg.seed, r));
      start = random_sparse(rng, space, lambda);
    }
    RestartResult res;
    auto objective = [&](const std::vector<double>& v) {
      const PrimalVec x(space, v);
      const double d = box_distance_sup(range_box(op, lambda, x), f_star);
      if (check_floor) {
        const double margin = d - target_floor(op, lambda, x, f_star);
        ++res.floor_checks;
        if (margin < -kFloorTol) ++res.floor_violations;
        res.min_margin = std::min(res.min_margin, margin);
      }
      return d;
    };
    res.state = compass_search(std::move(start), objective, cfg.initial_step, cfg.shrink, cfg.budget,
                               NoExtraPoll{});
    return res;
  };

  auto results = run_indexed(cfg.restarts, run_restart);

  DistanceSearchResult out{.best = PrimalVec(space)};
  out.best_distance = std::numeric_limits<double>::infinity();
  out.min_floor_margin = std::numeric_limits<double>::infinity();
  double running = std::numeric_limits<double>::infinity();
  for (std::size_t r = 0; r < results.size(); ++r) {
    const auto& res = results[r];
    if (res.state.value < out.best_distance) {
      out.best_distance = res.state.value;
      out.best = PrimalVec(space, res.state.v);
      out.best_restart = r;
    }
    for (double t : res.state.trace) {
      running = std::min(running, t);
      out.trace.push_back(running);
    }
    out.evaluations += res.state.evals + 1;
    out.floor_checks += res.floor_checks;
    out.floor_violations += res.floor_violations;
    out.min_floor_margin = std::min(out.min_floor_margin, res.min_margin);
  }
  return out;
}

WitnessRecord make_witness_record(const OperatorSpec& op, double lambda, const DualPoint& f_star,
                                  std::span<const PrimalVec> xs, std::span<const double> thetas) {
  if (xs.empty() || xs.size() != thetas.size()) {
    throw std::invalid_argument("make_witness_record: need one weight per point");
  }
  const double theta_sum = std::accumulate(thetas.begin(), thetas.end(), 0.0);
  if (std::abs(theta_sum - 1.0) > 1e-12 ||
      std::any_of(thetas.begin(), thetas.end(), [](double t) { return t < 0.0; })) {
    throw std::invalid_argument("make_witness_record: weights must be a probability vector");
  }
  const SpaceSpec& space = op.space();
  const std::size_t k = xs.size();
  const std::size_t n = space.head_dim();

  std::vector<DualBox> boxes;
  std::vector<DualPoint> ax;
  boxes.reserve(k);
  ax.reserve(k);
  for (const auto& x : xs) {
    boxes.push_back(range_box(op, lambda, x));
    ax.push_back(op.apply(x));
  }
  const DualBox combined = box_weighted_sum(boxes, thetas);
  const DualPoint target = combined.nearest_point(f_star);

  std::vector<std::vector<double>> head_r(k, std::vector<double>(n));
  std::vector<double> tail_r(k, 0.0);
  std::vector<Interval> ivs(k);
  std::vector<double> split(k);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < k; ++j) ivs[j] = boxes[j][i];
    split_coordinate(target[i], ivs, thetas, split);
    for (std::size_t j = 0; j < k; ++j) head_r[j][i] = split[j];
  }
  if (space.has_tail()) {
    for (std::size_t j = 0; j < k; ++j) ivs[j] = *boxes[j].tail();
    split_coordinate(*target.tail(), ivs, thetas, split);
    tail_r = split;
  }

  WitnessRecord rec;
  rec.search_distance = box_distance_sup(combined, f_star);
  rec.floor = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < k; ++j) {
    const PrimalVec& x = xs[j];
    const double scale = lambda * weighted_l1_norm(x);
    Selection sel;
    sel.head.resize(n);
    for (std::size_t i = 0; i < n; ++i) sel.head[i] = selection_for(head_r[j][i], ax[j][i], x[i], scale);
    if (space.has_tail()) sel.tail = selection_for(tail_r[j], *ax[j].tail(), 0.0, scale);
    DualPoint r = range_point(op, lambda, x, sel);
    rec.single_distances.push_back(box_distance_sup(boxes[j], f_star));
    rec.floor = std::min(rec.floor, target_floor(op, lambda, x, f_star));
    rec.points.push_back(WitnessPoint{x, std::move(sel), thetas[j], std::move(r)});
  }

  DualPoint combo(space);
  for (const auto& p : rec.points) combo = combo.combined(1.0, p.theta, p.range_point);
  rec.combo_distance = sup_norm(combo.combined(1.0, -1.0, f_star));
  rec.certified = rec.combo_distance < rec.floor &&
                  std::all_of(rec.single_distances.begin(), rec.single_distances.end(),
                              [&](double d) { return d >= rec.floor - kWitnessTol; });
  return rec;
}

std::optional<TWindow> midpoint_window(double lambda) {
  if (!(lambda >= 1.5)) return std::nullopt;
  return TWindow{1.0 / (lambda - 1.0), 2.0};
}

WitnessRecord build_midpoint_witness(const OperatorSpec& op, double lambda, std::optional<double> t) {
  const OperatorKind kind = op.kind();
  if (kind != OperatorKind::Gossez && kind != OperatorKind::FPGrid && kind != OperatorKind::NegFPGrid) {
    throw std::invalid_argument("build_midpoint_witness: needs the Gossez operator or a grid operator");
  }
  const std::size_t min_dim = op.space().has_tail() ? 2 : 3;
  if (op.space().head_dim() < min_dim) {
    throw std::invalid_argument("build_midpoint_witness: head too small for the two-cell witness");
  }
  const auto window = midpoint_window(lambda);
  if (!window) throw std::domain_error("build_midpoint_witness: lambda < 3/2 leaves an empty window");
  const double tt = t.value_or(std::clamp(1.0, window->lo, window->hi));
  if (tt < window->lo || tt > window->hi) {
    throw std::domain_error("build_midpoint_witness: t outside [1/(lambda-1), 2]");
  }
  const SpaceSpec& space = op.space();
  const std::vector<PrimalVec> xs{PrimalVec(space, lead_direction(op, 0, -tt)),
                                  PrimalVec(space, lead_direction(op, 1, -tt))};
  const std::vector<double> thetas{0.5, 0.5};
  return make_witness_record(op, lambda, DualPoint::constant(space, -1.0), xs, thetas);
}

WitnessRecord combo_witness_search(const OperatorSpec& op, double lambda, const DualPoint& f_star,
                                   const SearchConfig& cfg) {
  require_config_matches(op, lambda, cfg);
  const SpaceSpec& space = op.space();
  const std::size_t k = cfg.witness_order;

  if (k == 1) {
    const DistanceSearchResult single = distance_minimize(op, lambda, f_star, cfg);
    const std::vector<PrimalVec> xs{single.best};
    const std::vector<double> thetas{1.0};
    return make_witness_record(op, lambda, f_star, xs, thetas);
  }

  const std::size_t n = space.head_dim();
  struct ComboResult {
    std::vector<double> v;
    std::vector<double> theta;
    double value = 0.0;
  };

  auto run_restart = [&](std::size_t r) {
    std::vector<double> start(k * n, 0.0);
    auto place = [&](std::size_t j, const std::vector<double>& x) {
      std::copy(x.begin(), x.end(), start.begin() + static_cast<std::ptrdiff_t>(j * n));
    };
    std::mt19937_64 rng(derive_seed(cfg.seed, r));
    for (std::size_t j = 0; j < k; ++j) {
      switch (r) {
        case 0: place(j, lead_direction(op, j, -1.0)); break;
        case 1: place(j, lead_direction(op, j, -2.0)); break;
        case 2: place(j, lead_direction(op, j, -1.0 / lambda)); break;
        case 3: place(j, lead_direction(op, j, j % 2 == 0 ? -1.0 : 1.0)); break;
        default: place(j, random_sparse(rng, space, lambda)); break;
      }
    }

    std::vector<double> theta(k, 1.0 / static_cast<double>(k));
    std::vector<DualBox> boxes;
    boxes.reserve(k);
    auto evaluate = [&](const std::vector<double>& v, const std::vector<double>& th) {
      boxes.clear();
      for (std::size_t j = 0; j < k; ++j) {
        const auto first = v.begin() + static_cast<std::ptrdiff_t>(j * n);
        boxes.push_back(range_box(op, lambda, PrimalVec(space, std::vector<double>(first, first + static_cast<std::ptrdiff_t>(n)))));
      }
      return box_distance_sup(box_weighted_sum(boxes, th), f_star);
    };
    auto objective = [&](const std::vector<double>& v) { return evaluate(v, theta); };
    // Mass transfer between pairs of weights.
    auto theta_poll = [&](CompassState& st, double step) {
      const double delta = 0.25 * step / cfg.initial_step;
      bool improved = false;
      for (std::size_t a = 0; a < k; ++a) {
        for (std::size_t b = 0; b < k; ++b) {
          if (a == b || theta[a] <= 0.0 || st.evals >= cfg.budget) continue;
          std::vector<double> trial = theta;
          const double moved = std::min(delta, trial[a]);
          trial[a] -= moved;
          trial[b] += moved;
          const double f = evaluate(st.v, trial);
          ++st.evals;
          if (f < st.value) {
            st.value = f;
            theta = std::move(trial);
            improved = true;
          }
        }
      }
      return improved;
    };
    CompassState st =
        compass_search(std::move(start), objective, cfg.initial_step, cfg.shrink, cfg.budget, theta_poll);
    // Renormalize to remove drift from repeated transfers.
    const double s = std::accumulate(theta.begin(), theta.end(), 0.0);
    for (double& t : theta) t /= s;
    return ComboResult{std::move(st.v), std::move(theta), st.value};
  };

  auto results = run_indexed(cfg.restarts, run_restart);
  std::size_t best = 0;
  for (std::size_t r = 1; r < results.size(); ++r) {
    if (results[r].value < results[best].value) best = r;
  }
  std::vector<PrimalVec> xs;
  for (std::size_t j = 0; j < k; ++j) {
    const auto first = results[best].v.begin() + static_cast<std::ptrdiff_t>(j * n);
    xs.emplace_back(space, std::vector<double>(first, first + static_cast<std::ptrdiff_t>(n)));
  }
  return make_witness_record(op, lambda, f_star, xs, results[best].theta);
}

WitnessRecord scale_witness(const WitnessRecord& rec, double alpha, const OperatorSpec& op,
                            double lambda, const DualPoint& f_star) {
  if (alpha == 0.0) throw std::invalid_argument("scale_witness: alpha must be nonzero");
  std::vector<PrimalVec> xs;
  std::vector<double> thetas;
  for (const auto& p : rec.points) {
    xs.push_back(p.x.scaled(alpha));
    thetas.push_back(p.theta);
  }
  return make_witness_record(op, lambda, f_star.scaled(alpha), xs, thetas);
}

RuggednessReport ruggedness_check(const SpaceSpec& space) {
  const std::size_t k = space.head_dim();
  std::vector<double> e1(k, 0.0);
  std::vector<double> e2(k, 0.0);
  if (space.has_tail()) {
    if (k < 2) throw std::invalid_argument("ruggedness_check: need at least two head coordinates");
    e1[0] = 1.0 / space.weight(0);
    e2[1] = 1.0 / space.weight(1);
  } else {
    if (k < 3) throw std::invalid_argument("ruggedness_check: grid needs at least three cells");
    // A1 = first third of the cells, A2 = last third; e_i = indicator / |A_i|.
    const std::size_t third = k / 3;
    double m1 = 0.0;
    double m2 = 0.0;
    for (std::size_t i = 0; i < third; ++i) {
      m1 += space.weight(i);
      m2 += space.weight(k - 1 - i);
    }
    for (std::size_t i = 0; i < third; ++i) {
      e1[i] = 1.0 / m1;
      e2[k - 1 - i] = 1.0 / m2;
    }
  }
  PrimalVec x1(space, std::move(e1));
  PrimalVec x2(space, std::move(e2));
  const DualBox j1 = duality_box(x1);
  const DualBox j2 = duality_box(x2);
  DualBox sum = box_minkowski(box_minkowski(box_minkowski(j1, j1, -1), j2, 1), j2, -1);
  const bool passed = box_contains_interval_everywhere(sum, Interval{-2.0, 2.0}, 1e-12);
  return RuggednessReport{std::move(x1), std::move(x2), std::move(sum), passed};
}

GapReport convexity_gap_report(const OperatorSpec& op, double lambda, const SearchConfig& cfg) {
  require_config_matches(op, lambda, cfg);
  const DualPoint f_star = DualPoint::constant(op.space(), -1.0);
  GapReport rep;
  rep.kind = op.kind();
  rep.lambda = lambda;
  rep.head_dim = op.space().head_dim();
  rep.m_lambda = m_of_lambda(lambda);
  rep.threshold = eps_threshold(lambda, 1.0, 1.0);
  rep.floor = whs_capable(op.kind()) ? rep.m_lambda : 0.0;

  const DistanceSearchResult single = distance_minimize(op, lambda, f_star, cfg);
  rep.best_single = single.best_distance;
  rep.floor_violations = single.floor_violations;

  const bool midpoint_kind = op.kind() == OperatorKind::Gossez || op.kind() == OperatorKind::FPGrid ||
                             op.kind() == OperatorKind::NegFPGrid;
  if (midpoint_kind && midpoint_window(lambda)) {
    rep.midpoint = build_midpoint_witness(op, lambda);
  }
  for (std::size_t k = 2; k <= 4; ++k) {
    SearchConfig c = cfg;
    c.witness_order = k;
    WitnessRecord w = combo_witness_search(op, lambda, f_star, c);
    rep.best_combo[k] = w.combo_distance;
    rep.combos.emplace(k, std::move(w));
  }

  const WitnessRecord* cert = nullptr;
  if (rep.midpoint && rep.midpoint->certified) cert = &*rep.midpoint;
  for (const auto& [k, w] : rep.combos) {
    if (!cert && w.certified) cert = &w;
  }
  rep.certified = cert != nullptr;
  if (cert) {
    rep.floor = cert->floor;
    rep.grid_slack = rep.m_lambda - cert->floor;
  }
  return rep;
}

}  // namespace rugged
