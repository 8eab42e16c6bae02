#include <doctest.h>

#include <cmath>
#include <random>

#include "mbvqe/vqe.hpp"

using namespace mbvqe;

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kHalfPi = kPi / 2;

ObjectiveSpec tree_spec(double g) {
  ObjectiveSpec spec;
  spec.pattern = tree_pattern();
  spec.hamiltonian = xy_periodic4(g).hxy;
  spec.pinned = {{1, kHalfPi}, {2, kHalfPi}};
  return spec;
}

ObjectiveSpec xy_spec(int n, int l, bool u3) {
  ObjectiveSpec spec;
  spec.pattern = node_wise_pattern(Graph::path(n), l);
  spec.hamiltonian = xy_chain({n, 1.0, 0.01, PerturbSites::FirstTwo});
  spec.u3_layer = u3;
  return spec;
}

}  // namespace

TEST_CASE("exact evaluation reproduces the closed form on the tree") {
  ObjectiveSpec spec = tree_spec(0.5);
  for (int k = 0; k <= 10; ++k) {
    double t1 = k * kPi / 10.0;
    std::vector<double> theta{t1};
    CHECK(evaluate(spec, theta) ==
          doctest::Approx(tree_expectation_analytic(t1, kHalfPi, kHalfPi, 0.5)).epsilon(1e-9));
  }
}

TEST_CASE("zero-layer pattern with stabilizer-sum observable") {
  ObjectiveSpec spec;
  spec.pattern = node_wise_pattern(Graph::path(3), 0);
  PauliSum stab(3);
  stab.add(1.0, PauliString::parse("XZI"));
  stab.add(1.0, PauliString::parse("ZXZ"));
  stab.add(1.0, PauliString::parse("IZX"));
  spec.hamiltonian = stab;
  CHECK(evaluate(spec, {}) == doctest::Approx(3.0).epsilon(1e-10));
}

TEST_CASE("variational lower bound holds for random points") {
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> u(0, 2 * kPi);
  ObjectiveSpec spec = xy_spec(4, 1, false);
  double egs = ground_state_energy(spec.hamiltonian).first;
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> theta(static_cast<std::size_t>(spec.num_free_params()));
    for (auto& t : theta) t = u(gen);
    CHECK(evaluate(spec, theta) >= egs - 1e-8);
  }
}

TEST_CASE("gradients: parameter shift equals finite differences") {
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> u(0, 2 * kPi);
  ObjectiveSpec spec = xy_spec(4, 1, true);
  GradConfig fd{GradKind::FiniteDifference, 1e-5};
  GradConfig ps{GradKind::ParameterShift, 0};
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> theta(static_cast<std::size_t>(spec.num_free_params()));
    for (auto& t : theta) t = u(gen);
    Eigen::VectorXd a = gradient(spec, theta, ps);
    Eigen::VectorXd b = gradient(spec, theta, fd);
    REQUIRE((a - b).lpNorm<Eigen::Infinity>() < 1e-6);
  }
}

TEST_CASE("tree gradient matches the analytic derivative") {
  ObjectiveSpec spec = tree_spec(1.0);
  std::vector<double> theta{kHalfPi};
  Eigen::VectorXd g = gradient(spec, theta);
  // d/dt1 of the closed form at t1 = pi/2 and g = 1: (1+g) sin t1 = 2.
  CHECK(g(0) == doctest::Approx(2.0).epsilon(1e-6));
  // Constant objective has zero gradient.
  ObjectiveSpec flat = tree_spec(1.0);
  flat.pinned = {{0, 0.3}, {1, kHalfPi}, {2, kHalfPi}};
  CHECK(flat.num_free_params() == 0);
  CHECK(gradient(flat, {}).size() == 0);
}

TEST_CASE("one-parameter tree optimization reaches the exact ground state") {
  ObjectiveSpec spec = tree_spec(1.0);
  OptimizerConfig cfg;
  cfg.restarts = 4;
  cfg.seed = 11;
  RunResult rr = optimize(spec, cfg);
  CHECK(rr.best_energy == doctest::Approx(-4.0).epsilon(1e-6));
  CHECK(rr.exact_energy == doctest::Approx(-4.0).epsilon(1e-9));
  CHECK(rr.relative_error < 1e-6);
  // Optimal angle at 0 mod 2pi.
  double t1 = std::fmod(std::abs(rr.best_params(0)), 2 * kPi);
  CHECK((t1 < 1e-3 || std::abs(t1 - 2 * kPi) < 1e-3));
  // Traces are monotone non-increasing.
  for (const auto& rec : rr.restarts)
    for (std::size_t i = 1; i < rec.trace.size(); ++i)
      CHECK(rec.trace[i] <= rec.trace[i - 1] + 1e-12);
}

TEST_CASE("zero-parameter objective returns the fixed-state energy") {
  ObjectiveSpec spec;
  spec.pattern = node_wise_pattern(Graph::path(2), 0);
  PauliSum h(2);
  h.add(1.0, PauliString::parse("XZ"));
  h.add(1.0, PauliString::parse("ZX"));
  spec.hamiltonian = h;
  OptimizerConfig cfg;
  cfg.restarts = 1;
  RunResult rr = optimize(spec, cfg);
  CHECK(rr.best_energy == doctest::Approx(2.0).epsilon(1e-10));
}

TEST_CASE("seeded runs reproduce bit-identical results") {
  ObjectiveSpec spec = xy_spec(4, 1, false);
  OptimizerConfig cfg;
  cfg.restarts = 2;
  cfg.seed = 40;
  cfg.max_iterations = 60;
  RunResult a = optimize(spec, cfg);
  RunResult b = optimize(spec, cfg);
  CHECK(a.best_energy == b.best_energy);
  CHECK((a.best_params - b.best_params).norm() == 0.0);
}

TEST_CASE("shots-mode estimates are unbiased within sampling error") {
  ObjectiveSpec spec = tree_spec(1.0);
  spec.eval = EvalMode{20000};
  spec.exec = ExecMode::Forced;
  std::vector<double> theta{0.7};
  double exact = tree_expectation_analytic(0.7, kHalfPi, kHalfPi, 1.0);
  SplitMix64 rng(17);
  EvalStats st;
  double v = evaluate(spec, theta, &rng, &st);
  CHECK(std::abs(v - exact) <= 5 * st.stderr_est + 1e-9);
  CHECK(st.stderr_est > 0);
}

TEST_CASE("adaptive and postselect sampling agree within errors") {
  ObjectiveSpec spec = tree_spec(1.0);
  spec.eval = EvalMode{20000};
  std::vector<double> theta{1.1};
  spec.exec = ExecMode::Adaptive;
  SplitMix64 r1(23);
  EvalStats sa;
  double va = evaluate(spec, theta, &r1, &sa);
  spec.exec = ExecMode::PostselectAllPlus;
  SplitMix64 r2(29);
  EvalStats sp;
  double vp = evaluate(spec, theta, &r2, &sp);
  CHECK(std::abs(va - vp) <= 4 * std::sqrt(sa.stderr_est * sa.stderr_est +
                                           sp.stderr_est * sp.stderr_est) + 1e-9);
  CHECK(sp.acceptance_rate < 0.5);
  CHECK(sp.acceptance_rate > 0.01);
  // Exact mode: adaptive equals postselect to machine precision.
  spec.eval = EvalMode{};
  spec.exec = ExecMode::Adaptive;
  SplitMix64 r3(31);
  double ea = evaluate(spec, theta, &r3);
  spec.exec = ExecMode::PostselectAllPlus;
  SplitMix64 r4(37);
  double ep = evaluate(spec, theta, &r4);
  CHECK(ea == doctest::Approx(ep).epsilon(1e-10));
}

TEST_CASE("CDR fit and mitigation") {
  // Noiseless pairs give the identity model.
  CdrModel id = cdr_fit({{1.0, 1.0}, {2.0, 2.0}, {-0.5, -0.5}});
  CHECK(id.a0 == doctest::Approx(1.0));
  CHECK(id.a1 == doctest::Approx(0.0));
  CHECK(id.mse == doctest::Approx(0.0));
  // Global depolarizing p: pairs ((1-p)x, x) recover 1/(1-p) exactly.
  double p = 0.3;
  CdrModel m = cdr_fit({{0.7 * 2, 2}, {0.7 * -1, -1}, {0.7 * 0.25, 0.25}});
  CHECK(m.a0 == doctest::Approx(1.0 / (1 - p)).epsilon(1e-12));
  CHECK(m.a1 == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(cdr_apply(m, 0.7 * 5.0) == doctest::Approx(5.0).epsilon(1e-10));
  CHECK_THROWS_AS(cdr_fit({{1.0, 1.0}}), std::invalid_argument);
  CHECK_THROWS_AS(cdr_fit({{1.0, 1.0}, {1.0, 2.0}}), std::invalid_argument);
}

TEST_CASE("tree experiment with exact evaluation and depolarizing noise") {
  TreeXYConfig cfg;
  cfg.g = 1.0;
  cfg.points = 20;
  cfg.noise = NoiseModel{0.3};
  cfg.modes = {ExecMode::Adaptive, ExecMode::PostselectAllPlus};
  cfg.seed = 5;
  TreeXYReport rep = tree_xy_experiment(cfg);
  REQUIRE(rep.modes.size() == 2);
  for (const auto& mr : rep.modes) {
    CHECK(mr.fit_x.a0 == doctest::Approx(1.0 / 0.7).epsilon(1e-8));
    CHECK(std::abs(mr.fit_x.a1) < 1e-8);
    CHECK(mr.fit_y.a0 == doctest::Approx(1.0 / 0.7).epsilon(1e-8));
    for (const auto& pt : mr.points) {
      CHECK(std::abs(pt.mit_hx - pt.exact_hx) < 1e-8);
      CHECK(std::abs(pt.mit_hy - pt.exact_hy) < 1e-8);
      CHECK(std::abs(pt.mit_hxy - pt.exact_hxy) < 1e-8);
      CHECK(pt.analytic_hxy == doctest::Approx(pt.exact_hxy).epsilon(1e-9));
    }
    CHECK(mr.mse_x < 1e-16);
  }
  // Both modes produce identical exact curves.
  for (std::size_t k = 0; k < rep.modes[0].points.size(); ++k)
    CHECK(rep.modes[0].points[k].mit_hxy ==
          doctest::Approx(rep.modes[1].points[k].mit_hxy).epsilon(1e-10));
}

TEST_CASE("noise model scales expectations") {
  ObjectiveSpec spec = tree_spec(1.0);
  std::vector<double> theta{0.4};
  double clean = evaluate(spec, theta);
  spec.noise = NoiseModel{0.25};
  CHECK(evaluate(spec, theta) == doctest::Approx(0.75 * clean).epsilon(1e-12));
}

TEST_CASE("parallel scan is deterministic and improves with layers") {
  ScanConfig cfg;
  cfg.model.family = ScanModel::Family::Schwinger;
  cfg.model.schwinger = {4, 1.0, 1.0, 4.0};
  cfg.model.label = "schwinger_mu4";
  cfg.qubit_counts = {4};
  cfg.layer_counts = {1, 2};
  cfg.u3 = true;
  cfg.runs = 3;
  cfg.optimizer.restarts = 2;
  cfg.optimizer.max_iterations = 150;
  cfg.seed = 7;
  cfg.threads = 2;
  auto cells = scan_experiment(cfg);
  REQUIRE(cells.size() == 2);
  CHECK(cells[0].layers == 1);
  CHECK(cells[1].median_rel_error <= cells[0].median_rel_error);
  auto cells2 = scan_experiment(cfg);
  for (std::size_t i = 0; i < cells.size(); ++i)
    for (std::size_t r = 0; r < cells[i].runs.size(); ++r)
      CHECK(cells[i].runs[r].energy == cells2[i].runs[r].energy);
}
