#include "harness.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

#include <fmt/format.h>

namespace rugged::harness {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Configuration

namespace {

template <class T>
T get_as(const json& doc, const char* key) {
  try {
    return doc.at(key).get<T>();
  } catch (const json::exception& e) {
    throw UsageError(std::string("config key '") + key + "': " + e.what());
  }
}

std::vector<double> log_grid(double lo, double hi, std::size_t count) {
  if (!(lo > 0.0) || !(hi >= lo) || count == 0) {
    throw UsageError("lambda_grid: need 0 < min <= max and count >= 1");
  }
  std::vector<double> g(count);
  if (count == 1) {
    g[0] = lo;
    return g;
  }
  const double a = std::log(lo);
  const double b = std::log(hi);
  for (std::size_t i = 0; i < count; ++i) {
    g[i] = std::exp(a + (b - a) * static_cast<double>(i) / static_cast<double>(count - 1));
  }
  g.front() = lo;
  g.back() = hi;
  return g;
}

}  // namespace

SearchConfig ExperimentConfig::search_config(const OperatorSpec& op, double lambda) const {
  SearchConfig c;
  c.head_dim = op.space().head_dim();
  c.lambda = lambda;
  c.restarts = restarts;
  c.budget = budget;
  c.initial_step = initial_step;
  c.shrink = shrink;
  c.seed = seed;
  return c;
}

ExperimentConfig parse_config(const json& doc) {
  if (!doc.is_object()) throw UsageError("config must be a JSON object");
  static const std::vector<std::string> known{
      "lambdas", "lambda_grid", "head_dim", "grid_size", "restarts", "budget", "initial_step",
      "shrink",  "seed",        "op",       "suite",     "samples",  "tol_membership", "out"};
  for (const auto& [key, _] : doc.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw UsageError("unknown config key '" + key + "'");
    }
  }
  ExperimentConfig cfg;
  if (doc.contains("lambdas") && doc.contains("lambda_grid")) {
    throw UsageError("config: give either 'lambdas' or 'lambda_grid', not both");
  }
  if (doc.contains("lambdas")) cfg.lambdas = get_as<std::vector<double>>(doc, "lambdas");
  if (doc.contains("lambda_grid")) {
    const json& g = doc.at("lambda_grid");
    if (!g.is_object()) throw UsageError("lambda_grid must be an object {min,max,count}");
    for (const auto& [key, _] : g.items()) {
      if (key != "min" && key != "max" && key != "count") {
        throw UsageError("unknown lambda_grid key '" + key + "'");
      }
    }
    cfg.lambdas = log_grid(get_as<double>(g, "min"), get_as<double>(g, "max"),
                           get_as<std::size_t>(g, "count"));
  }
  if (doc.contains("head_dim")) cfg.head_dim = get_as<std::size_t>(doc, "head_dim");
  if (doc.contains("grid_size")) cfg.grid_size = get_as<std::size_t>(doc, "grid_size");
  if (doc.contains("restarts")) cfg.restarts = get_as<std::size_t>(doc, "restarts");
  if (doc.contains("budget")) cfg.budget = get_as<std::size_t>(doc, "budget");
  if (doc.contains("initial_step")) cfg.initial_step = get_as<double>(doc, "initial_step");
  if (doc.contains("shrink")) cfg.shrink = get_as<double>(doc, "shrink");
  if (doc.contains("seed")) cfg.seed = get_as<std::uint64_t>(doc, "seed");
  if (doc.contains("op")) cfg.op = get_as<std::string>(doc, "op");
  if (doc.contains("suite")) cfg.suite = get_as<std::string>(doc, "suite");
  if (doc.contains("samples")) cfg.samples = get_as<std::size_t>(doc, "samples");
  if (doc.contains("tol_membership")) cfg.tol_membership = get_as<double>(doc, "tol_membership");
  if (doc.contains("out")) cfg.out = get_as<std::string>(doc, "out");
  for (double l : cfg.lambdas) {
    if (!(l > 0.0) || !std::isfinite(l)) throw UsageError("config: every lambda must be positive");
  }
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config file " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw UsageError("config file " + path.string() + " is not valid JSON: " + e.what());
  }
  return parse_config(doc);
}

json to_json(const ExperimentConfig& cfg) {
  json j{{"lambdas", cfg.lambdas},     {"head_dim", cfg.head_dim},
         {"grid_size", cfg.grid_size}, {"restarts", cfg.restarts},
         {"budget", cfg.budget},       {"initial_step", cfg.initial_step},
         {"shrink", cfg.shrink},       {"seed", cfg.seed},
         {"op", cfg.op},               {"suite", cfg.suite},
         {"samples", cfg.samples},     {"tol_membership", cfg.tol_membership}};
  if (cfg.out) j["out"] = *cfg.out;
  return j;
}

std::vector<double> parse_lambda_list(std::string_view csv) {
  std::vector<double> out;
  std::string item;
  std::istringstream in{std::string(csv)};
  in.imbue(std::locale::classic());
  while (std::getline(in, item, ',')) {
    std::istringstream one(item);
    one.imbue(std::locale::classic());
    double v = 0.0;
    if (!(one >> v) || !(one >> std::ws).eof() || !(v > 0.0) || !std::isfinite(v)) {
      throw UsageError("--lambda: '" + item + "' is not a positive number");
    }
    out.push_back(v);
  }
  if (out.empty()) throw UsageError("--lambda: empty list");
  return out;
}

std::string format_double(double v) { return fmt::format("{:.17g}", v); }

OperatorSpec make_operator(std::string_view name, const ExperimentConfig& cfg) {
  const auto kind = parse_operator_kind(name);
  if (!kind || *kind == OperatorKind::Matrix) {
    throw UsageError("unknown operator '" + std::string(name) +
                     "' (expected gossez, neg-gossez, fp-grid or neg-fp-grid)");
  }
  switch (*kind) {
    case OperatorKind::Gossez:
    case OperatorKind::NegGossez: {
      if (cfg.head_dim < 2) throw UsageError("head_dim must be at least 2");
      const OperatorSpec g = OperatorSpec::gossez(SpaceSpec::l1_truncation(cfg.head_dim));
      return *kind == OperatorKind::Gossez ? g : negate(g);
    }
    default: {
      if (cfg.grid_size < 3) throw UsageError("grid_size must be at least 3");
      const OperatorSpec f = OperatorSpec::fp_grid(SpaceSpec::l1_grid(cfg.grid_size));
      return *kind == OperatorKind::FPGrid ? f : negate(f);
    }
  }
}

PrimalVec random_model_vector(std::mt19937_64& rng, const SpaceSpec& space, double lambda) {
  const std::size_t k = space.head_dim();
  std::uniform_int_distribution<int> family(0, 5);
  std::uniform_int_distribution<std::size_t> cell(0, k - 1);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> log_norm(std::log(0.05), std::log(20.0));
  std::vector<double> v(k, 0.0);

  const int f = family(rng);
  switch (f) {
    case 0: {  // sparse
      std::uniform_int_distribution<std::size_t> count(1, std::min<std::size_t>(k, 8));
      const std::size_t m = count(rng);
      for (std::size_t i = 0; i < m; ++i) v[cell(rng)] = normal(rng);
      break;
    }
    case 1:  // dense
      for (double& c : v) c = normal(rng);
      break;
    case 2: {  // one cell, optionally perturbed
      const std::size_t i = cell(rng);
      v[i] = (normal(rng) < 0.0 ? -1.0 : 1.0) / space.weight(i);
      if (normal(rng) > 0.0) v[cell(rng)] += 0.1 * normal(rng);
      break;
    }
    case 3: {  // small integers
      std::uniform_int_distribution<int> val(-2, 2);
      for (double& c : v) c = val(rng);
      break;
    }
    case 4:  // nonnegative entries: <x, f*> > 0
      for (double& c : v) c = std::abs(normal(rng));
      break;
    default:  // mostly negative with a positive spike
      for (double& c : v) c = -std::abs(normal(rng));
      v[cell(rng)] = 3.0 * std::abs(normal(rng));
      break;
  }
  double norm = 0.0;
  for (std::size_t i = 0; i < k; ++i) norm += space.weight(i) * std::abs(v[i]);
  if (norm == 0.0) return PrimalVec(space);
  if (f == 3) return PrimalVec(space, std::move(v));
  const double target = std::exp(log_norm(rng)) / lambda;
  for (double& c : v) c *= target / norm;
  return PrimalVec(space, std::move(v));
}

// ---------------------------------------------------------------------------
// bounds-table

std::string bounds_table_csv(std::span<const double> lambdas) {
  std::string out = "lambda,m_lambda,smaller_root,larger_root,threshold,tau,identity_residual_max\n";
  for (double l : lambdas) {
    const BoundsReport r = bounds_report(l);
    out += fmt::format("{},{},{},{},{},{},{}\n", format_double(l), format_double(r.m_value),
                       format_double(r.roots.smaller), format_double(r.roots.larger),
                       format_double(r.threshold), format_double(r.tau),
                       format_double(r.max_identity_residual()));
  }
  return out;
}

// ---------------------------------------------------------------------------
// verify

namespace {

struct CheckList {
  json checks = json::array();
  bool passed = true;

  void add(std::string name, bool ok, double residual, double bound) {
    checks.push_back({{"name", std::move(name)}, {"passed", ok}, {"value", residual}, {"bound", bound}});
    passed = passed && ok;
  }
};

void suite_space(CheckList& cl, const ExperimentConfig& cfg) {
  std::mt19937_64 rng(derive_seed(cfg.seed, 101));
  std::uniform_int_distribution<int> coeff(-2, 2);
  std::size_t mismatches = 0;
  std::size_t cases = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t k = 1 + static_cast<std::size_t>(trial % 4);
    const SpaceSpec space = SpaceSpec::l1_truncation(k);
    std::vector<double> c(k);
    for (double& v : c) v = coeff(rng);
    const PrimalVec x(space, c);
    const double n = weighted_l1_norm(x);
    const DualBox box = duality_box(x);
    // Half-integer grid around the box: every y agrees or disagrees by >= 1/2.
    std::uniform_int_distribution<int> grid(-2 * static_cast<int>(n) - 2, 2 * static_cast<int>(n) + 2);
    for (int s = 0; s < 64; ++s) {
      std::vector<double> h(k);
      for (double& v : h) v = 0.5 * grid(rng);
      const DualPoint y(space, h, 0.5 * grid(rng));
      const bool in_box = box_contains(box, y, cfg.tol_membership);
      if (in_box != j_membership_check(x, y, cfg.tol_membership)) ++mismatches;
      ++cases;
    }
    const DualPoint inside = box.nearest_point(DualPoint::constant(space, 0.25));
    if (!j_membership_check(x, inside, cfg.tol_membership)) ++mismatches;
    ++cases;
  }
  cl.add("duality_box_vs_membership_oracle", mismatches == 0, static_cast<double>(mismatches), 0.0);

  double homog = 0.0;
  const SpaceSpec l1 = SpaceSpec::l1_truncation(6);
  for (int trial = 0; trial < 100; ++trial) {
    const PrimalVec x = random_model_vector(rng, l1, 1.0);
    for (double a : {-2.0, -1.0, 0.5, 3.0}) {
      const DualBox lhs = duality_box(x.scaled(a));
      const DualBox rhs = box_scale(duality_box(x), a);
      for (std::size_t i = 0; i < 6; ++i) {
        homog = std::max({homog, std::abs(lhs[i].lo - rhs[i].lo), std::abs(lhs[i].hi - rhs[i].hi)});
      }
      homog = std::max({homog, std::abs(lhs.tail()->lo - rhs.tail()->lo),
                        std::abs(lhs.tail()->hi - rhs.tail()->hi)});
    }
  }
  cl.add("duality_box_homogeneity", homog <= 1e-12, homog, 1e-12);
}

double skew_residual(const OperatorSpec& op, std::mt19937_64& rng, std::size_t samples) {
  double worst = 0.0;
  for (std::size_t s = 0; s < samples; ++s) {
    const PrimalVec x = random_model_vector(rng, op.space(), 1.0);
    const double n = weighted_l1_norm(x);
    if (n == 0.0) continue;
    worst = std::max(worst, std::abs(pairing(x, op.apply(x))) / (n * n));
  }
  return worst;
}

void suite_skew(CheckList& cl, const ExperimentConfig& cfg) {
  std::mt19937_64 rng(derive_seed(cfg.seed, 202));
  const double g = skew_residual(OperatorSpec::gossez(SpaceSpec::l1_truncation(cfg.head_dim)), rng, 1000);
  cl.add("gossez_skew", g <= 1e-12, g, 1e-12);
  for (std::size_t k : {std::size_t{8}, std::size_t{64}, std::size_t{512}}) {
    const double f = skew_residual(OperatorSpec::fp_grid(SpaceSpec::l1_grid(k)), rng, 1000);
    cl.add("fp_grid_skew_K" + std::to_string(k), f <= 1e-12, f, 1e-12);
  }
}

void suite_operators(CheckList& cl, const ExperimentConfig& cfg) {
  std::mt19937_64 rng(derive_seed(cfg.seed, 303));
  const std::vector<OperatorSpec> ops{OperatorSpec::gossez(SpaceSpec::l1_truncation(cfg.head_dim)),
                                      OperatorSpec::fp_grid(SpaceSpec::l1_grid(cfg.grid_size))};
  std::normal_distribution<double> normal(0.0, 1.0);
  for (const auto& base : ops) {
    for (const auto& op : {base, negate(base)}) {
      const std::string tag(to_string(op.kind()));
      double lin = 0.0;
      double ratio = 0.0;
      double invol = 0.0;
      std::size_t escapes = 0;
      for (int s = 0; s < 300; ++s) {
        const PrimalVec x = random_model_vector(rng, op.space(), 1.0);
        const PrimalVec z = random_model_vector(rng, op.space(), 1.0);
        const double a = normal(rng);
        const double b = normal(rng);
        const DualPoint lhs = op.apply(x.combined(a, b, z));
        const DualPoint rhs = op.apply(x).combined(a, b, op.apply(z));
        const double scale = std::max(1.0, std::abs(a) * weighted_l1_norm(x) + std::abs(b) * weighted_l1_norm(z));
        lin = std::max(lin, sup_norm(lhs.combined(1.0, -1.0, rhs)) / scale);
        const double n = weighted_l1_norm(x);
        if (n > 0.0) ratio = std::max(ratio, sup_norm(op.apply(x)) / n);
        invol = std::max(invol, sup_norm(negate(negate(op)).apply(x).combined(1.0, -1.0, op.apply(x))));
        Selection sel;
        for (std::size_t i = 0; i < x.size(); ++i) {
          sel.head.push_back(x[i] > 0 ? 1.0 : (x[i] < 0 ? -1.0 : std::tanh(normal(rng))));
        }
        if (op.space().has_tail()) sel.tail = std::tanh(normal(rng));
        try {
          (void)range_point(op, 1.0 + std::abs(a), x, sel);
        } catch (const std::logic_error&) {
          ++escapes;
        }
      }
      cl.add(tag + "_linearity", lin <= 1e-12, lin, 1e-12);
      cl.add(tag + "_norm_bound", ratio <= op.declared_norm_bound() * (1.0 + 1e-12), ratio,
             op.declared_norm_bound());
      cl.add(tag + "_negate_involution", invol == 0.0, invol, 0.0);
      cl.add(tag + "_range_point_membership", escapes == 0, static_cast<double>(escapes), 0.0);
    }
  }
}

void suite_bounds(CheckList& cl, const ExperimentConfig&) {
  std::vector<double> grid(200);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    grid[i] = 0.01 * std::pow(1e4, static_cast<double>(i) / 199.0);
  }
  double worst = 0.0;
  bool tau_ok = true;
  bool gap_ok = true;
  for (double l : grid) {
    const BoundsReport r = bounds_report(l);
    worst = std::max(worst, r.max_identity_residual());
    tau_ok = tau_ok && r.tau > 0.0;
    gap_ok = gap_ok && r.m_value > 0.0 && r.m_value < r.threshold;
  }
  cl.add("identity_residual_max", worst <= kIdentityRelTol, worst, kIdentityRelTol);
  cl.add("tau_positive", tau_ok, tau_ok ? 1.0 : 0.0, 1.0);
  cl.add("m_strictly_inside_threshold", gap_ok, gap_ok ? 1.0 : 0.0, 1.0);
  const MScanReport scan = m_properties_scan(grid);
  const double lbar = (3.0 + std::sqrt(15.0)) / 6.0;
  cl.add("m_argmax", std::abs(scan.argmax - lbar) <= 1e-3, scan.argmax, lbar);
  cl.add("m_unimodal", scan.passed(), scan.max_value, 0.06349);
}

std::vector<OperatorSpec> whs_operators(const ExperimentConfig& cfg) {
  return {OperatorSpec::gossez(SpaceSpec::l1_truncation(cfg.head_dim)),
          OperatorSpec::fp_grid(SpaceSpec::l1_grid(cfg.grid_size))};
}

void suite_whs(CheckList& cl, const ExperimentConfig& cfg) {
  std::mt19937_64 rng(derive_seed(cfg.seed, 404));
  for (const auto& op : whs_operators(cfg)) {
    const DualPoint f = DualPoint::constant(op.space(), -1.0);
    for (double l : cfg.lambdas) {
      std::size_t violations = 0;
      double worst = -std::numeric_limits<double>::infinity();
      for (std::size_t s = 0; s < cfg.samples; ++s) {
        const WhsCertificate c = whs_certify_sample(op, l, random_model_vector(rng, op.space(), l), f);
        const bool ok = op.kind() == OperatorKind::Gossez ? c.sharp_passed : c.passed;
        if (!ok) ++violations;
        worst = std::max(worst, c.inner_product - 3.0 * c.eps - c.slack);
      }
      cl.add(fmt::format("whs_{}_lambda_{}", to_string(op.kind()), format_double(l)), violations == 0,
             worst, 0.0);
    }
  }
}

void suite_floor(CheckList& cl, const ExperimentConfig& cfg) {
  std::mt19937_64 rng(derive_seed(cfg.seed, 505));
  for (const auto& op : whs_operators(cfg)) {
    const DualPoint f = DualPoint::constant(op.space(), -1.0);
    for (double l : cfg.lambdas) {
      std::size_t violations = 0;
      double margin = std::numeric_limits<double>::infinity();
      for (std::size_t s = 0; s < cfg.samples; ++s) {
        const FloorCheck fc = pointwise_floor_check(op, l, random_model_vector(rng, op.space(), l), f);
        if (!fc.passed) ++violations;
        margin = std::min(margin, fc.distance - fc.floor);
      }
      cl.add(fmt::format("floor_{}_lambda_{}", to_string(op.kind()), format_double(l)), violations == 0,
             margin, -kFloorTol);
    }
  }
}

void suite_rugged(CheckList& cl, const ExperimentConfig& cfg) {
  const RuggedOutcome r = run_rugged_check(cfg);
  for (const auto& s : r.summary.at("spaces")) {
    cl.add("rugged_" + s.at("space").get<std::string>(), s.at("passed").get<bool>(), 0.0, 0.0);
  }
}

}  // namespace

VerifyOutcome run_verify(std::string_view suite, const ExperimentConfig& cfg) {
  std::vector<std::string_view> selected;
  if (suite == "all") {
    selected.assign(std::begin(kSuiteNames), std::end(kSuiteNames));
  } else if (std::find(std::begin(kSuiteNames), std::end(kSuiteNames), suite) != std::end(kSuiteNames)) {
    selected.push_back(suite);
  } else {
    throw UsageError("unknown suite '" + std::string(suite) +
                     "' (expected all, space, operators, skew, bounds, whs, floor, rugged)");
  }
  VerifyOutcome out;
  out.passed = true;
  out.summary = {{"suites", json::array()}};
  for (auto name : selected) {
    CheckList cl;
    if (name == "space") suite_space(cl, cfg);
    else if (name == "operators") suite_operators(cl, cfg);
    else if (name == "skew") suite_skew(cl, cfg);
    else if (name == "bounds") suite_bounds(cl, cfg);
    else if (name == "whs") suite_whs(cl, cfg);
    else if (name == "floor") suite_floor(cl, cfg);
    else suite_rugged(cl, cfg);
    out.summary["suites"].push_back({{"suite", name}, {"passed", cl.passed}, {"checks", cl.checks}});
    out.passed = out.passed && cl.passed;
  }
  out.summary["passed"] = out.passed;
  return out;
}

// ---------------------------------------------------------------------------
// explore

json witness_to_json(const WitnessRecord& rec) {
  json pts = json::array();
  for (const auto& p : rec.points) {
    json sel{{"head", p.selection.head}};
    json rp{{"head", std::vector<double>(p.range_point.head().begin(), p.range_point.head().end())}};
    if (p.selection.tail) sel["tail"] = *p.selection.tail;
    if (p.range_point.tail()) rp["tail"] = *p.range_point.tail();
    pts.push_back({{"x", std::vector<double>(p.x.coeffs().begin(), p.x.coeffs().end())},
                   {"selection", sel},
                   {"theta", p.theta},
                   {"range_point", rp}});
  }
  return {{"points", pts},
          {"combo_distance", rec.combo_distance},
          {"search_distance", rec.search_distance},
          {"floor", rec.floor},
          {"single_distances", rec.single_distances},
          {"certified", rec.certified}};
}

ExploreOutcome run_explore(const ExperimentConfig& cfg) {
  const OperatorSpec op = make_operator(cfg.op, cfg);
  if (cfg.restarts < 1 || cfg.budget < 1 || !(cfg.shrink > 0.0 && cfg.shrink < 1.0) ||
      !(cfg.initial_step > 0.0)) {
    throw UsageError("explore: need restarts >= 1, budget >= 1, 0 < shrink < 1, initial_step > 0");
  }
  ExploreOutcome out;
  out.csv =
      "op,lambda,head_dim,m_lambda,threshold,best_single,best_combo_2,best_combo_3,best_combo_4,"
      "midpoint_combo,floor,grid_slack,floor_violations,certified\n";
  out.witnesses = json::array();
  for (double l : cfg.lambdas) {
    const GapReport r = convexity_gap_report(op, l, cfg.search_config(op, l));
    out.all_floors_held = out.all_floors_held && r.floor_violations == 0;
    out.csv += fmt::format("{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n", to_string(r.kind),
                           format_double(l), r.head_dim, format_double(r.m_lambda),
                           format_double(r.threshold), format_double(r.best_single),
                           format_double(r.best_combo.at(2)), format_double(r.best_combo.at(3)),
                           format_double(r.best_combo.at(4)),
                           r.midpoint ? format_double(r.midpoint->combo_distance) : std::string(),
                           format_double(r.floor), format_double(r.grid_slack), r.floor_violations,
                           r.certified ? "true" : "false");
    json entry{{"op", to_string(r.kind)}, {"lambda", l}, {"certified", r.certified}};
    if (r.midpoint) entry["midpoint"] = witness_to_json(*r.midpoint);
    for (const auto& [k, w] : r.combos) entry["combo_" + std::to_string(k)] = witness_to_json(w);
    out.witnesses.push_back(std::move(entry));
  }
  return out;
}

// ---------------------------------------------------------------------------
// rugged-check

RuggedOutcome run_rugged_check(const ExperimentConfig& cfg) {
  RuggedOutcome out;
  out.passed = true;
  out.csv = "space,coordinate,lo,hi,contains_minus2_2\n";
  out.summary = {{"spaces", json::array()}};
  const Interval target{-2.0, 2.0};
  for (const SpaceSpec& space : {SpaceSpec::l1_truncation(cfg.head_dim), SpaceSpec::l1_grid(cfg.grid_size)}) {
    const RuggednessReport r = ruggedness_check(space);
    const std::string name = space.describe();
    for (std::size_t i = 0; i < space.head_dim(); ++i) {
      out.csv += fmt::format("\"{}\",{},{},{},{}\n", name, i + 1, format_double(r.sum[i].lo),
                             format_double(r.sum[i].hi), r.sum[i].contains(target, 1e-12) ? "true" : "false");
    }
    if (r.sum.tail()) {
      out.csv += fmt::format("\"{}\",tail,{},{},{}\n", name, format_double(r.sum.tail()->lo),
                             format_double(r.sum.tail()->hi),
                             r.sum.tail()->contains(target, 1e-12) ? "true" : "false");
    }
    out.summary["spaces"].push_back({{"space", name}, {"passed", r.passed}});
    out.passed = out.passed && r.passed;
  }
  out.summary["passed"] = out.passed;
  return out;
}

// ---------------------------------------------------------------------------
// Output

std::filesystem::path write_run_directory(const std::filesystem::path& base, std::string_view command,
                                          const json& config, const std::string& csv,
                                          const json& summary) {
  std::filesystem::create_directories(base);
  std::filesystem::path dir;
  for (int n = 1;; ++n) {
    dir = base / fmt::format("{}-{:03d}", command, n);
    if (std::filesystem::create_directory(dir)) break;
  }
  auto write = [&](const char* file, const std::string& text) {
    std::ofstream f(dir / file, std::ios::binary);
    f << text;
    if (!f) throw std::runtime_error("failed to write " + (dir / file).string());
  };
  write("config.json", config.dump(2) + "\n");
  if (!csv.empty()) write("results.csv", csv);
  write("summary.json", summary.dump(2) + "\n");
  return dir;
}

}  // namespace rugged::harness
