// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Each criterion pins its tolerances in code.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "mbvqe/heavy_hex.hpp"
#include "mbvqe/prep_circuit.hpp"
#include "mbvqe/vqe.hpp"

using namespace mbvqe;

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kHalfPi = kPi / 2;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt_double_short(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

StateVector corrected_branch(const MeasurementPattern& p, const std::vector<double>& angles,
                             const std::vector<std::uint8_t>& outcomes) {
  ExecutionResult r = execute(p, angles, ExecMode::Forced, &outcomes);
  apply_frame_to_state(r.state, r.frame);
  return std::move(r.state);
}

// ---- C1: exhaustive determinism of flowed patterns ----
Outcome c1_determinism() {
  SplitMix64 rng(101);
  auto check_pattern = [&](const MeasurementPattern& p) -> double {
    std::vector<double> angles(static_cast<std::size_t>(p.num_params));
    for (auto& a : angles) a = rng.next_angle();
    const int k = p.num_measured();
    std::vector<StateVector> states;
    for (int bits = 0; bits < (1 << k); ++bits) {
      std::vector<std::uint8_t> outcomes(static_cast<std::size_t>(k));
      for (int i = 0; i < k; ++i) outcomes[static_cast<std::size_t>(i)] = (bits >> i) & 1;
      states.push_back(corrected_branch(p, angles, outcomes));
    }
    double worst = 1.0;
    for (std::size_t i = 0; i < states.size(); ++i)
      for (std::size_t j = i + 1; j < states.size(); ++j)
        worst = std::min(worst, overlap_magnitude(states[i], states[j]));
    return worst;
  };
  double worst = 1.0;
  for (int n : {2, 3})
    for (int l : {1, 2, 3})
      worst = std::min(worst, check_pattern(node_wise_pattern(Graph::path(n), l)));
  worst = std::min(worst, check_pattern(tree_pattern()));
  return {worst >= 1.0 - 1e-9,
          "worst pairwise corrected fidelity " + fmt_double_short(worst)};
}

// ---- C2: flowless counterexample ----
Outcome c2_flowless() {
  MeasurementPattern p = edge_wise_pattern(Graph::path(3));
  if (find_causal_flow(p.og)) return {false, "edge-wise pattern unexpectedly has a flow"};
  std::vector<double> angles(static_cast<std::size_t>(p.num_params), 0.7);
  const auto order = p.measurement_order();
  std::vector<int> inner_mid;
  for (int v : p.og.g.neighbors(1))
    if (!p.og.is_output(v)) inner_mid.push_back(v);
  auto pos_of = [&order](int v) {
    for (std::size_t i = 0; i < order.size(); ++i)
      if (order[i] == v) return i;
    return order.size();
  };
  const int k = p.num_measured();
  std::vector<std::uint8_t> all_plus(static_cast<std::size_t>(k), 0);
  std::vector<std::uint8_t> one_minus = all_plus;
  one_minus[pos_of(inner_mid[1])] = 1;
  ExecutionResult a = execute(p, angles, ExecMode::Forced, &all_plus);
  ExecutionResult b = execute(p, angles, ExecMode::Forced, &one_minus);
  double best = 0;
  for (int fx = 0; fx < 8; ++fx)
    for (int fz = 0; fz < 8; ++fz) {
      StateVector t = b.state;
      PauliFrame f{{static_cast<std::uint8_t>(fx & 1), static_cast<std::uint8_t>((fx >> 1) & 1),
                    static_cast<std::uint8_t>((fx >> 2) & 1)},
                   {static_cast<std::uint8_t>(fz & 1), static_cast<std::uint8_t>((fz >> 1) & 1),
                    static_cast<std::uint8_t>((fz >> 2) & 1)}};
      apply_frame_to_state(t, f);
      best = std::max(best, overlap_magnitude(a.state, t));
    }
  // The paired single-minus branches must agree exactly through Z X Z.
  std::vector<std::uint8_t> mp = all_plus, pm = all_plus;
  mp[pos_of(inner_mid[0])] = 1;
  pm[pos_of(inner_mid[1])] = 1;
  ExecutionResult ra = execute(p, angles, ExecMode::Forced, &mp);
  ExecutionResult rb = execute(p, angles, ExecMode::Forced, &pm);
  apply_pauli(rb.state, Pauli::Z, 0);
  apply_pauli(rb.state, Pauli::X, 1);
  apply_pauli(rb.state, Pauli::Z, 2);
  double paired = overlap_magnitude(ra.state, rb.state);
  bool ok = best <= 1.0 - 1e-3 && paired >= 1.0 - 1e-10;
  return {ok, "best frame-corrected fidelity " + fmt_double_short(best) +
                  " (<= 1-1e-3), paired-branch fidelity " + fmt_double_short(paired)};
}

// ---- C3: closed-form reproduction on the tree ----
Outcome c3_tree_closed_form() {
  MeasurementPattern tree = tree_pattern();
  double worst = 0;
  for (double g : {0.0, 0.5, 1.0}) {
    PeriodicXY model = xy_periodic4(g);
    for (int k = 0; k < 21; ++k) {
      double t1 = kPi * k / 20.0;
      std::vector<double> angles{t1, kHalfPi, kHalfPi};
      std::vector<std::uint8_t> all_plus(3, 0);
      ExecutionResult r = execute(tree, angles, ExecMode::Forced, &all_plus);
      double sim = expectation(r.state, model.hxy);
      worst = std::max(worst,
                       std::abs(sim - tree_expectation_analytic(t1, kHalfPi, kHalfPi, g)));
    }
  }
  return {worst <= 1e-9, "worst |simulated - closed form| = " + fmt_double_short(worst)};
}

// ---- C4: published two-layer accuracy figure ----
Outcome c4_schwinger_accuracy() {
  std::string detail;
  bool pass = true;
  for (double mu : {4.0, -0.7}) {
    ObjectiveSpec spec;
    spec.pattern = node_wise_pattern(Graph::path(4), 2);
    spec.hamiltonian = schwinger({4, 1.0, 1.0, mu});
    spec.u3_layer = true;
    OptimizerConfig cfg;
    cfg.restarts = 10;
    cfg.seed = 20240;
    cfg.max_iterations = 800;
    RunResult rr = optimize(spec, cfg);
    pass = pass && rr.relative_error < 1e-5;
    detail += "mu=" + fmt_double_short(mu) + ": rel " + fmt_double_short(rr.relative_error) + "  ";
  }
  return {pass, detail + "(threshold 1e-5 at l=2)"};
}

// supplementary, not a criterion: the same figure at three layers
std::string c4_supplement() {
  std::string s;
  for (double mu : {4.0, -0.7}) {
    ObjectiveSpec spec;
    spec.pattern = node_wise_pattern(Graph::path(4), 3);
    spec.hamiltonian = schwinger({4, 1.0, 1.0, mu});
    spec.u3_layer = true;
    OptimizerConfig cfg;
    cfg.restarts = 60;
    cfg.seed = 20241;
    cfg.max_iterations = 800;
    RunResult rr = optimize(spec, cfg);
    s += "mu=" + fmt_double_short(mu) + ": rel " + fmt_double_short(rr.relative_error) + "  ";
  }
  return s;
}

// ---- C5: scaling-trend properties ----
Outcome c5_trends(int threads) {
  OptimizerConfig opt;
  opt.restarts = 3;
  opt.max_iterations = 400;

  auto run_scan = [&](ScanModel model, std::vector<int> ns, bool u3, std::uint64_t seed) {
    ScanConfig cfg;
    cfg.model = std::move(model);
    cfg.qubit_counts = std::move(ns);
    cfg.layer_counts = {1, 2, 3};
    cfg.u3 = u3;
    cfg.runs = 10;
    cfg.optimizer = opt;
    cfg.seed = seed;
    cfg.threads = threads;
    return scan_experiment(cfg);
  };
  ScanModel schw4;
  schw4.family = ScanModel::Family::Schwinger;
  schw4.schwinger = {4, 1.0, 1.0, 4.0};
  schw4.label = "schwinger_mu4";
  ScanModel schwc = schw4;
  schwc.schwinger.mu = -0.7;
  schwc.label = "schwinger_mu-0.7";
  ScanModel xy;
  xy.family = ScanModel::Family::XYChain;
  xy.xy = {4, 1.0, 0.01, PerturbSites::FirstTwo};
  xy.label = "xy_g1";

  auto schw4_cells = run_scan(schw4, {4, 6}, true, 501);
  auto schwc_cells = run_scan(schwc, {6}, true, 502);
  auto xy_cells = run_scan(xy, {4, 6}, true, 503);
  auto xy_raw = run_scan(xy, {4, 6}, false, 504);

  auto median_of = [](const std::vector<ScanCell>& cells, int n, int l) {
    for (const auto& c : cells)
      if (c.n == n && c.layers == l) return c.median_rel_error;
    return -1.0;
  };
  bool pass = true;
  std::string detail;
  for (const auto* cells : {&schw4_cells, &xy_cells}) {
    for (int n : {4, 6}) {
      double m1 = median_of(*cells, n, 1), m2 = median_of(*cells, n, 2),
             m3 = median_of(*cells, n, 3);
      if (!(m2 <= m1 && m3 <= m2)) {
        pass = false;
        detail += "non-monotone at n=" + std::to_string(n) + "  ";
      }
    }
  }
  for (int l : {1, 2, 3}) {
    double mono1 = median_of(schwc_cells, 6, l);
    if (l > 1 && mono1 > median_of(schwc_cells, 6, l - 1)) {
      pass = false;
      detail += "critical non-monotone at l=" + std::to_string(l) + "  ";
    }
    if (median_of(schw4_cells, 6, l) > median_of(schwc_cells, 6, l)) {
      pass = false;
      detail += "uncritical > critical at l=" + std::to_string(l) + "  ";
    }
  }
  for (int n : {4, 6})
    for (int l : {1, 2, 3})
      if (median_of(xy_cells, n, l) > median_of(xy_raw, n, l)) {
        pass = false;
        detail += "U3 worse at n=" + std::to_string(n) + ",l=" + std::to_string(l) + "  ";
      }
  if (detail.empty()) detail = "medians monotone; uncritical <= critical; U3 <= bare";
  return {pass, detail};
}

// ---- C6: equivalent circuit vs pattern ----
Outcome c6_circuit_equivalence() {
  SplitMix64 rng(606);
  double worst = 1.0;
  for (int l : {1, 2}) {
    MeasurementPattern p = node_wise_pattern(Graph::path(3), l);
    for (int t = 0; t < 20; ++t) {
      std::vector<double> angles(static_cast<std::size_t>(p.num_params));
      for (auto& a : angles) a = rng.next_angle();
      std::vector<std::uint8_t> all_plus(static_cast<std::size_t>(p.num_measured()), 0);
      ExecutionResult r = execute(p, angles, ExecMode::Forced, &all_plus);
      StateVector circ = simulate_circuit(equivalent_circuit(p, angles), 3);
      worst = std::min(worst, overlap_magnitude(r.state, circ));
    }
  }
  return {worst >= 1.0 - 1e-9, "worst fidelity " + fmt_double_short(worst)};
}

// ---- C7: heavy-hex compiler ----
Outcome c7_heavy_hex() {
  // Honeycomb: exhaustive statevector verification.
  HeavyHexLattice honey = HeavyHexLattice::single_honeycomb();
  HexClusterPlan hplan = hexcluster_pattern(honey);
  for (int bits = 0; bits < 256; ++bits) {
    std::vector<std::uint8_t> forced(8);
    for (int i = 0; i < 8; ++i) forced[static_cast<std::size_t>(i)] = (bits >> i) & 1;
    HexRunResult run = run_plan(honey, hplan, &forced, nullptr);
    HexValidation val = validate_hex_run(honey, hplan, run);
    if (!val.graph_matches || !val.byproducts_confined)
      return {false, "honeycomb branch " + std::to_string(bits) + ": " + val.detail};
    // Statevector oracle with adjusted stabilizers.
    StateVector sv = prepare_graph_state(honey.coupling, {}, 12);
    std::vector<int> axis(12);
    for (int i = 0; i < 12; ++i) axis[static_cast<std::size_t>(i)] = i;
    for (std::size_t i = 0; i < hplan.steps.size(); ++i) {
      int ax = axis[static_cast<std::size_t>(hplan.steps[i].vertex)];
      measure_pauli(sv, ax, hplan.steps[i].basis, forced[i]);
      for (auto& a : axis)
        if (a > ax) --a;
    }
    if (overlap_magnitude(sv, run.state.to_statevector()) < 1.0 - 1e-9)
      return {false, "honeycomb statevector mismatch at branch " + std::to_string(bits)};
    for (const auto& [stab, sign] : adjusted_stabilizers(run.state))
      if (std::abs(expectation(sv, stab).real() * sign - 1.0) > 1e-9)
        return {false, "honeycomb adjusted stabilizer != +1 at branch " +
                           std::to_string(bits)};
  }
  // 2x3 and 4x7 at stabilizer level.
  for (auto [r, c] : {std::pair{2, 3}, std::pair{4, 7}}) {
    HeavyHexLattice dev = HeavyHexLattice::make_abstract(r, c);
    HexClusterPlan plan = hexcluster_pattern(dev);
    SplitMix64 rng(700 + static_cast<std::uint64_t>(r * 10 + c));
    for (int t = 0; t < 1000; ++t) {
      HexRunResult run = run_plan(dev, plan, nullptr, &rng);
      HexValidation val = validate_hex_run(dev, plan, run);
      if (!val.graph_matches || !val.byproducts_confined)
        return {false, std::to_string(r) + "x" + std::to_string(c) + ": " + val.detail};
    }
  }
  // Depth scaling.
  std::vector<int> mb_depths, naive_depths;
  for (auto [r, c] : {std::pair{2, 2}, std::pair{2, 3}, std::pair{3, 3}, std::pair{4, 7}}) {
    HeavyHexLattice dev = HeavyHexLattice::make_abstract(r, c);
    mb_depths.push_back(prep_circuit_mb(dev).cnot_depth);
    naive_depths.push_back(prep_circuit_naive(dev).cnot_depth);
  }
  for (std::size_t i = 1; i < mb_depths.size(); ++i) {
    if (mb_depths[i] != mb_depths[0]) return {false, "MB depth not constant"};
    if (naive_depths[i] < naive_depths[i - 1])
      return {false, "naive depth decreased with grid size"};
  }
  if (naive_depths.back() <= mb_depths.back())
    return {false, "naive routing unexpectedly beati the MB depth at 4x7"};
  std::string detail = "honeycomb 256/256 branches exact; 2x3 and 4x7 confined over 1000 "
                       "draws each; MB depth " + std::to_string(mb_depths[0]) +
                       " constant, naive depth grows to " +
                       std::to_string(naive_depths.back());
  detail += " | reference device-compiled counts, not asserted: 2x3 MB 22/depth 3 vs "
            "gate-based 16/depth 11; 4x7 MB 142/depth 5 vs 186/depth 69";
  return {true, detail};
}

// ---- C8: CDR recovery ----
Outcome c8_cdr() {
  TreeXYConfig cfg;
  cfg.g = 1.0;
  cfg.points = 20;
  cfg.noise.depolarizing = 0.3;
  cfg.modes = {ExecMode::Forced};
  cfg.seed = 808;
  TreeXYReport rep = tree_xy_experiment(cfg);
  const auto& mr = rep.modes.front();
  bool pass = std::abs(mr.fit_x.a0 - 1.0 / 0.7) <= 1e-8 && std::abs(mr.fit_x.a1) <= 1e-8 &&
              std::abs(mr.fit_y.a0 - 1.0 / 0.7) <= 1e-8 && std::abs(mr.fit_y.a1) <= 1e-8;
  double worst = 0;
  for (const auto& pt : mr.points)
    worst = std::max({worst, std::abs(pt.mit_hx - pt.exact_hx),
                      std::abs(pt.mit_hy - pt.exact_hy)});
  pass = pass && worst <= 1e-8;
  return {pass, "a0_x=" + fmt_double_short(mr.fit_x.a0) + " (ideal " +
                    fmt_double_short(1.0 / 0.7) + "), worst mitigated deviation " +
                    fmt_double_short(worst)};
}

// ---- C9: gradient checks ----
Outcome c9_gradients() {
  SplitMix64 rng(909);
  ObjectiveSpec spec;
  spec.pattern = node_wise_pattern(Graph::path(4), 1);
  spec.hamiltonian = xy_chain({4, 1.0, 0.01, PerturbSites::FirstTwo});
  spec.u3_layer = true;
  GradConfig fd{GradKind::FiniteDifference, 1e-5};
  double worst = 0;
  for (int t = 0; t < 50; ++t) {
    std::vector<double> theta(static_cast<std::size_t>(spec.num_free_params()));
    for (auto& x : theta) x = rng.next_angle();
    Eigen::VectorXd a = gradient(spec, theta);
    Eigen::VectorXd b = gradient(spec, theta, fd);
    worst = std::max(worst, (a - b).lpNorm<Eigen::Infinity>());
  }
  ObjectiveSpec tree;
  tree.pattern = tree_pattern();
  tree.hamiltonian = xy_periodic4(1.0).hxy;
  tree.pinned = {{1, kHalfPi}, {2, kHalfPi}};
  std::vector<double> theta{kHalfPi};
  double tree_err = std::abs(gradient(tree, theta)(0) - 2.0);
  bool pass = worst <= 1e-6 && tree_err <= 1e-6;
  return {pass, "worst shift-vs-FD " + fmt_double_short(worst) + ", tree gradient error " +
                    fmt_double_short(tree_err)};
}

// ---- C10: mode equivalence ----
Outcome c10_mode_equivalence() {
  // Exact mode equality.
  ObjectiveSpec spec;
  spec.pattern = tree_pattern();
  spec.hamiltonian = xy_periodic4(1.0).hxy;
  spec.pinned = {{1, kHalfPi}, {2, kHalfPi}};
  double worst_exact = 0;
  for (int k = 0; k < 7; ++k) {
    std::vector<double> theta{0.31 + 0.4 * k};
    spec.exec = ExecMode::Adaptive;
    SplitMix64 r1(derive_seed(1000, static_cast<std::uint64_t>(k)));
    double a = evaluate(spec, theta, &r1);
    spec.exec = ExecMode::PostselectAllPlus;
    SplitMix64 r2(derive_seed(2000, static_cast<std::uint64_t>(k)));
    double p = evaluate(spec, theta, &r2);
    worst_exact = std::max(worst_exact, std::abs(a - p));
  }
  if (worst_exact > 1e-10)
    return {false, "exact-mode gap " + fmt_double_short(worst_exact)};
  // Sampled tree experiment at the full shot budget.
  TreeXYConfig cfg;
  cfg.g = 1.0;
  cfg.points = 20;
  cfg.eval.shots = 100000;
  cfg.modes = {ExecMode::Adaptive, ExecMode::PostselectAllPlus};
  cfg.seed = 1010;
  TreeXYReport rep = tree_xy_experiment(cfg);
  double worst_sigma = 0;
  for (std::size_t k = 0; k < rep.modes[0].points.size(); ++k) {
    const auto& a = rep.modes[0].points[k];
    const auto& p = rep.modes[1].points[k];
    auto gap = [&](double va, double vp, double sa, double sp) {
      double sigma = std::sqrt(sa * sa + sp * sp);
      if (sigma == 0) return std::abs(va - vp) > 0 ? 1e9 : 0.0;
      return std::abs(va - vp) / sigma;
    };
    worst_sigma = std::max(worst_sigma, gap(a.raw_hx, p.raw_hx, a.stderr_hx, p.stderr_hx));
    worst_sigma = std::max(worst_sigma, gap(a.raw_hy, p.raw_hy, a.stderr_hy, p.stderr_hy));
  }
  bool pass = worst_sigma <= 4.0;
  return {pass, "exact gap " + fmt_double_short(worst_exact) + ", worst sampled gap " +
                    fmt_double_short(worst_sigma) + " sigma (hardware asymmetry between "
                    "the modes is a device effect, out of scope)"};
}

}  // namespace

int main(int argc, char** argv) {
  int threads = 2;
  if (argc > 1) threads = std::atoi(argv[1]);
  struct Criterion {
    const char* name;
    std::function<Outcome()> fn;
  };
  std::vector<Criterion> criteria = {
      {"C1 determinism of flowed patterns (pairwise fidelity >= 1-1e-9)", c1_determinism},
      {"C2 flowless counterexample (post-correction fidelity <= 1-1e-3)", c2_flowless},
      {"C3 tree closed-form reproduction (21 x 3 grid, 1e-9)", c3_tree_closed_form},
      {"C4 two-layer accuracy figure (rel error < 1e-5, best of 10)", c4_schwinger_accuracy},
      {"C5 scaling trends (median monotonicity, criticality, U3)",
       [&] { return c5_trends(threads); }},
      {"C6 circuit-vs-pattern equivalence (fidelity >= 1-1e-9)", c6_circuit_equivalence},
      {"C7 heavy-hex compiler (exhaustive honeycomb; 1000-draw confinement)", c7_heavy_hex},
      {"C8 CDR recovery under p=0.3 (a0=1/0.7 +- 1e-8, points to 1e-8)", c8_cdr},
      {"C9 gradients (shift vs FD 1e-6; tree analytic 1e-6)", c9_gradients},
      {"C10 mode equivalence (1e-10 exact; 4 sigma at 100k shots)", c10_mode_equivalence},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("[%s] %s — %s (%.1fs)\n", o.pass ? "PASS" : "FAIL", c.name,
                o.detail.c_str(), secs);
    std::fflush(stdout);
    if (!o.pass) ++failures;
    if (std::string(c.name).rfind("C4", 0) == 0 && !o.pass) {
      std::printf("       note: the same ansatz at l=3 reaches %s(see README on the "
                  "two-vs-three layer count)\n",
                  c4_supplement().c_str());
      std::fflush(stdout);
    }
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
              criteria.size());
  return failures == 0 ? 0 : 1;
}
