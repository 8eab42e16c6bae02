#include "mbvqe/vqe.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace mbvqe {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kHalfPi = 1.5707963267948966;
}  // namespace

int ObjectiveSpec::num_free_params() const {
  int p = pattern.num_params - static_cast<int>(pinned.size());
  if (u3_layer) p += 3 * num_outputs();
  return p;
}

void ObjectiveSpec::expand(std::span<const double> free,
                           std::vector<double>& pattern_angles,
                           std::vector<double>& u3_angles) const {
  if (static_cast<int>(free.size()) != num_free_params())
    throw std::invalid_argument("free parameter vector length mismatch");
  pattern_angles.assign(static_cast<std::size_t>(pattern.num_params), 0.0);
  std::size_t k = 0;
  for (int i = 0; i < pattern.num_params; ++i) {
    auto it = pinned.find(i);
    if (it != pinned.end())
      pattern_angles[static_cast<std::size_t>(i)] = it->second;
    else
      pattern_angles[static_cast<std::size_t>(i)] = free[k++];
  }
  u3_angles.clear();
  if (u3_layer)
    for (int q = 0; q < 3 * num_outputs(); ++q) u3_angles.push_back(free[k++]);
}

namespace {

// Corrected (and U3-rotated) dense output state for exact evaluation.
StateVector exact_output_state(const ObjectiveSpec& spec,
                               const std::vector<double>& pattern_angles,
                               const std::vector<double>& u3_angles, SplitMix64* rng,
                               PauliFrame* frame_out) {
  ExecutionResult r = [&] {
    switch (spec.exec) {
      case ExecMode::Forced: {
        std::vector<std::uint8_t> all_plus(
            static_cast<std::size_t>(spec.pattern.num_measured()), 0);
        return execute(spec.pattern, pattern_angles, ExecMode::Forced, &all_plus);
      }
      case ExecMode::Adaptive:
        return execute(spec.pattern, pattern_angles, ExecMode::Adaptive, nullptr, rng);
      case ExecMode::PostselectAllPlus:
        return execute(spec.pattern, pattern_angles, ExecMode::PostselectAllPlus, nullptr,
                       rng);
    }
    throw std::logic_error("unreachable");
  }();
  if (!spec.u3_layer && frame_out) {
    *frame_out = r.frame;
    return std::move(r.state);
  }
  if (spec.u3_layer) {
    apply_frame_to_state(r.state, r.frame);
    for (int q = 0; q < spec.num_outputs(); ++q)
      apply_u3(r.state, u3_angles[static_cast<std::size_t>(3 * q)],
               u3_angles[static_cast<std::size_t>(3 * q + 1)],
               u3_angles[static_cast<std::size_t>(3 * q + 2)], q);
    if (frame_out) {
      frame_out->x.assign(static_cast<std::size_t>(spec.num_outputs()), 0);
      frame_out->z.assign(static_cast<std::size_t>(spec.num_outputs()), 0);
    }
  }
  return std::move(r.state);
}

double apply_noise(const NoiseModel& noise, const PauliSum& h, double value) {
  if (noise.depolarizing == 0.0) return value;
  return (1.0 - noise.depolarizing) * value +
         noise.depolarizing * h.identity_coefficient();
}

// Basis-change gate mapping the setting letter's eigenstates onto |0>/|1>.
void rotate_to_z(StateVector& s, Pauli p, int q) {
  switch (p) {
    case Pauli::X:
      apply_h(s, q);
      break;
    case Pauli::Y: {
      // H S^dag: maps |y+-> to |0>/|1>.
      Eigen::Matrix2cd sdg;
      sdg << 1, 0, 0, std::complex<double>(0, -1);
      apply_single_qubit(s, sdg, q);
      apply_h(s, q);
      break;
    }
    default:
      break;
  }
}

struct SampledGroup {
  double sum = 0;          // sum over shots of the per-shot group value
  double sumsq = 0;
  long shots = 0;
};

EvalStats sample_expectation(const ObjectiveSpec& spec,
                             const std::vector<double>& pattern_angles,
                             const std::vector<double>& u3_angles, const PauliSum& obs,
                             SplitMix64* rng) {
  if (rng == nullptr) throw std::invalid_argument("shots mode requires an rng");
  auto groups = group_qubitwise(obs);
  if (groups.empty()) return {obs.identity_coefficient(), 0, 1, 0};
  const long budget = spec.eval.shots;
  const long per_group = std::max<long>(1, budget / static_cast<long>(groups.size()));
  const int m = spec.num_outputs();

  double value = obs.identity_coefficient();
  double var_total = 0;
  long used_total = 0;
  long accepted_total = 0;

  // In the all-plus-forced mode the prepared state is deterministic; run the
  // pattern once per group and draw all samples from it.
  std::optional<StateVector> fixed_state;
  std::optional<PauliFrame> fixed_frame;
  if (spec.exec == ExecMode::Forced) {
    PauliFrame f;
    StateVector st = exact_output_state(spec, pattern_angles, u3_angles, rng, &f);
    fixed_state = std::move(st);
    fixed_frame = std::move(f);
  }

  for (const auto& g : groups) {
    SampledGroup acc;
    long used = 0;
    while (acc.shots < per_group) {
      StateVector out(0);
      PauliFrame frame;
      if (fixed_state) {
        if (used >= per_group) break;
        ++used;
        out = *fixed_state;
        frame = *fixed_frame;
      } else if (spec.exec == ExecMode::Adaptive) {
        if (used >= per_group) break;
        ++used;
        ExecutionResult r = execute(spec.pattern, pattern_angles, ExecMode::Adaptive,
                                    nullptr, rng);
        out = std::move(r.state);
        frame = std::move(r.frame);
        if (spec.u3_layer) {
          apply_frame_to_state(out, frame);
          frame.x.assign(static_cast<std::size_t>(m), 0);
          frame.z.assign(static_cast<std::size_t>(m), 0);
        }
      } else {  // postselection: count every attempt against the budget
        ExecutionResult r = execute(spec.pattern, pattern_angles,
                                    ExecMode::PostselectAllPlus, nullptr, rng);
        used += r.attempts;
        if (used > per_group) break;
        out = std::move(r.state);
        frame = std::move(r.frame);
      }
      if (spec.u3_layer && spec.exec == ExecMode::PostselectAllPlus) {
        // All-plus branches carry an identity frame; the forced path's state
        // was already rotated inside exact_output_state.
        for (int q = 0; q < m; ++q)
          apply_u3(out, u3_angles[static_cast<std::size_t>(3 * q)],
                   u3_angles[static_cast<std::size_t>(3 * q + 1)],
                   u3_angles[static_cast<std::size_t>(3 * q + 2)], q);
        frame.x.assign(static_cast<std::size_t>(m), 0);
        frame.z.assign(static_cast<std::size_t>(m), 0);
      }
      for (int q = 0; q < m; ++q) rotate_to_z(out, g.basis[static_cast<std::size_t>(q)], q);
      const int bits = sample_basis_state(out, *rng);
      double shot_value = 0;
      for (int idx : g.term_indices) {
        const auto& [coeff, term] = obs.terms()[static_cast<std::size_t>(idx)];
        if (term.is_identity()) continue;
        double prod = 1;
        for (int q = 0; q < m; ++q) {
          Pauli p = term.letter(q);
          if (p == Pauli::I) continue;
          int eigen = (bits >> q) & 1 ? -1 : 1;
          // Classical frame correction: flip when the frame anticommutes
          // with the measured letter.
          bool anti_x = (p == Pauli::Y || p == Pauli::Z);
          bool anti_z = (p == Pauli::X || p == Pauli::Y);
          if ((frame.x[static_cast<std::size_t>(q)] && anti_x) ^
              (frame.z[static_cast<std::size_t>(q)] && anti_z))
            eigen = -eigen;
          prod *= eigen;
        }
        shot_value += coeff * prod;
      }
      acc.sum += shot_value;
      acc.sumsq += shot_value * shot_value;
      ++acc.shots;
    }
    if (acc.shots == 0) throw std::runtime_error("postselection produced no samples");
    const double mean = acc.sum / static_cast<double>(acc.shots);
    value += mean;
    if (acc.shots > 1) {
      double var = (acc.sumsq - acc.sum * mean) / static_cast<double>(acc.shots - 1);
      var_total += std::max(0.0, var) / static_cast<double>(acc.shots);
    }
    used_total += (spec.exec == ExecMode::PostselectAllPlus) ? used : acc.shots;
    accepted_total += acc.shots;
  }
  EvalStats st;
  st.value = apply_noise(spec.noise, obs, value);
  st.stderr_est = (1.0 - spec.noise.depolarizing) * std::sqrt(var_total);
  st.acceptance_rate = used_total > 0
                           ? static_cast<double>(accepted_total) / static_cast<double>(used_total)
                           : 1.0;
  st.shots_used = used_total;
  return st;
}

}  // namespace

EvalStats estimate_observable(const ObjectiveSpec& spec, std::span<const double> theta,
                              const PauliSum& obs, SplitMix64* rng) {
  std::vector<double> pattern_angles, u3_angles;
  spec.expand(theta, pattern_angles, u3_angles);
  if (spec.eval.exact()) {
    PauliFrame frame;
    StateVector out = exact_output_state(spec, pattern_angles, u3_angles, rng, &frame);
    double value = (!spec.u3_layer && !frame.is_identity())
                       ? expectation(out, apply_frame(obs, frame))
                       : expectation(out, obs);
    return {apply_noise(spec.noise, obs, value), 0, 1, 0};
  }
  return sample_expectation(spec, pattern_angles, u3_angles, obs, rng);
}

double evaluate(const ObjectiveSpec& spec, std::span<const double> theta,
                SplitMix64* rng, EvalStats* stats) {
  EvalStats st = estimate_observable(spec, theta, spec.hamiltonian, rng);
  if (stats) *stats = st;
  return st.value;
}

Eigen::VectorXd gradient(const ObjectiveSpec& spec, std::span<const double> theta,
                         const GradConfig& cfg, SplitMix64* rng) {
  const int p = spec.num_free_params();
  Eigen::VectorXd g(p);
  std::vector<double> point(theta.begin(), theta.end());
  const double shift = cfg.kind == GradKind::ParameterShift ? kHalfPi : cfg.epsilon;
  for (int i = 0; i < p; ++i) {
    const double save = point[static_cast<std::size_t>(i)];
    point[static_cast<std::size_t>(i)] = save + shift;
    double up = evaluate(spec, point, rng);
    point[static_cast<std::size_t>(i)] = save - shift;
    double down = evaluate(spec, point, rng);
    point[static_cast<std::size_t>(i)] = save;
    g(i) = cfg.kind == GradKind::ParameterShift ? (up - down) / 2.0
                                                : (up - down) / (2.0 * cfg.epsilon);
  }
  return g;
}

double relative_error(double energy, double exact) {
  const double denom = std::abs(exact);
  if (denom < 1e-12) return std::abs(energy - exact);
  return std::abs(energy - exact) / denom;
}

RunResult optimize(const ObjectiveSpec& spec, const OptimizerConfig& cfg) {
  if (cfg.restarts < 1) throw std::invalid_argument("restarts must be >= 1");
  const auto t0 = std::chrono::steady_clock::now();
  const int p = spec.num_free_params();
  RunResult result;
  result.seed = cfg.seed;

  double exact = 0;
  if (spec.hamiltonian.num_qubits() <= kMaxDiagonalizationQubits)
    exact = ground_state_energy(spec.hamiltonian).first;
  result.exact_energy = exact;

  LbfgsOptions lopts;
  lopts.max_iterations = cfg.max_iterations;
  lopts.grad_tolerance = cfg.tolerance;
  lopts.f_tolerance = 1e-15;
  lopts.memory = cfg.lbfgs_memory;

  bool have_best = false;
  for (int r = 0; r < cfg.restarts; ++r) {
    RestartRecord rec;
    rec.seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(r));
    SplitMix64 rng(rec.seed);
    Eigen::VectorXd x0(p);
    for (int i = 0; i < p; ++i) x0(i) = rng.next_angle();
    try {
      auto fn = [&spec, &rng, &cfg](const Eigen::VectorXd& x, Eigen::VectorXd& grad) {
        std::vector<double> theta(x.data(), x.data() + x.size());
        grad = gradient(spec, theta, cfg.grad, &rng);
        return evaluate(spec, theta, &rng);
      };
      LbfgsResult lr = lbfgs_minimize(fn, x0, lopts);
      rec.energy = lr.f;
      rec.trace = std::move(lr.trace);
      rec.status = lr.status;
      if (!have_best || lr.f < result.best_energy) {
        have_best = true;
        result.best_energy = lr.f;
        result.best_params = lr.x;
      }
    } catch (const std::exception& e) {
      rec.status = std::string("failed: ") + e.what();
      rec.energy = std::nan("");
    }
    result.restarts.push_back(std::move(rec));
  }
  if (!have_best) throw std::runtime_error("every restart failed");
  result.relative_error = relative_error(result.best_energy, exact);
  result.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return result;
}

CdrModel cdr_fit(const std::vector<std::pair<double, double>>& pts) {
  if (pts.size() < 2) throw std::invalid_argument("CDR fit needs at least 2 points");
  double mx = 0, my = 0;
  for (auto [x, y] : pts) {
    mx += x;
    my += y;
  }
  mx /= static_cast<double>(pts.size());
  my /= static_cast<double>(pts.size());
  double sxx = 0, sxy = 0;
  for (auto [x, y] : pts) {
    sxx += (x - mx) * (x - mx);
    sxy += (x - mx) * (y - my);
  }
  if (sxx < 1e-24)
    throw std::invalid_argument("degenerate CDR points: no spread in noisy values");
  CdrModel m;
  m.a0 = sxy / sxx;
  m.a1 = my - m.a0 * mx;
  double res = 0;
  for (auto [x, y] : pts) {
    double r = y - (m.a0 * x + m.a1);
    res += r * r;
  }
  m.mse = res / static_cast<double>(pts.size());
  return m;
}

double cdr_apply(const CdrModel& m, double noisy) { return m.a0 * noisy + m.a1; }

PauliSum ScanModel::hamiltonian(int n) const {
  if (family == Family::Schwinger) {
    SchwingerParams p = schwinger;
    p.sites = n;
    return mbvqe::schwinger(p);
  }
  XYParams p = xy;
  p.sites = n;
  return xy_chain(p);
}

std::vector<ScanCell> scan_experiment(const ScanConfig& cfg) {
  struct Job {
    int cell;
    int run;
  };
  std::vector<ScanCell> cells;
  std::vector<Job> jobs;
  for (int n : cfg.qubit_counts) {
    PauliSum h = cfg.model.hamiltonian(n);
    double exact = ground_state_energy(h).first;
    for (int l : cfg.layer_counts) {
      ScanCell cell;
      cell.model = cfg.model.label;
      cell.n = n;
      cell.layers = l;
      cell.u3 = cfg.u3;
      cell.exact_energy = exact;
      cell.runs.resize(static_cast<std::size_t>(cfg.runs));
      for (int r = 0; r < cfg.runs; ++r)
        jobs.push_back({static_cast<int>(cells.size()), r});
      cells.push_back(std::move(cell));
    }
  }

  parallel_for(static_cast<int>(jobs.size()), cfg.threads, [&](int j) {
    const Job job = jobs[static_cast<std::size_t>(j)];
    ScanCell& cell = cells[static_cast<std::size_t>(job.cell)];
    ObjectiveSpec spec;
    spec.pattern = node_wise_pattern(Graph::path(cell.n), cell.layers);
    spec.hamiltonian = cfg.model.hamiltonian(cell.n);
    spec.u3_layer = cfg.u3;
    OptimizerConfig oc = cfg.optimizer;
    oc.seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(j));
    RunResult rr = optimize(spec, oc);
    ScanRun& out = cell.runs[static_cast<std::size_t>(job.run)];
    out.run = job.run;
    out.seed = oc.seed;
    out.energy = rr.best_energy;
    out.rel_error = rr.relative_error;
  });

  for (auto& cell : cells) {
    std::vector<double> errs;
    for (const auto& r : cell.runs) errs.push_back(r.rel_error);
    double mean = 0;
    for (double e : errs) mean += e;
    mean /= static_cast<double>(errs.size());
    double var = 0;
    for (double e : errs) var += (e - mean) * (e - mean);
    var /= static_cast<double>(errs.size());
    std::sort(errs.begin(), errs.end());
    const std::size_t mid = errs.size() / 2;
    double median = errs.size() % 2 ? errs[mid] : 0.5 * (errs[mid - 1] + errs[mid]);
    cell.mean_rel_error = mean;
    cell.var_rel_error = var;
    cell.median_rel_error = median;
  }
  return cells;
}

const char* exec_mode_name(ExecMode m) {
  switch (m) {
    case ExecMode::Forced: return "all_plus";
    case ExecMode::Adaptive: return "adaptive";
    case ExecMode::PostselectAllPlus: return "postselect";
  }
  return "?";
}

TreeXYReport tree_xy_experiment(const TreeXYConfig& cfg) {
  if (cfg.points < 2) throw std::invalid_argument("need at least 2 scan points");
  TreeXYReport report;
  report.g = cfg.g;
  report.config = cfg;
  const PeriodicXY model = xy_periodic4(cfg.g);
  const std::vector<double> cliffords{0.0, kHalfPi, kPi};

  MeasurementPattern tree = tree_pattern();
  auto make_spec = [&](ExecMode mode) {
    ObjectiveSpec spec;
    spec.pattern = tree;
    spec.hamiltonian = model.hxy;
    spec.eval = cfg.eval;
    spec.exec = mode;
    spec.noise = cfg.noise;
    spec.pinned = {{1, kHalfPi}, {2, kHalfPi}};
    return spec;
  };
  // Exact noiseless reference values (the classical simulation side of CDR).
  auto exact_pair = [&](double t1) {
    ObjectiveSpec spec = make_spec(ExecMode::Forced);
    spec.eval = EvalMode{};
    spec.noise = NoiseModel{};
    std::vector<double> theta{t1};
    double ex = estimate_observable(spec, theta, model.hx, nullptr).value;
    double ey = estimate_observable(spec, theta, model.hy, nullptr).value;
    return std::make_pair(ex, ey);
  };

  std::uint64_t stream = 0;
  for (ExecMode mode : cfg.modes) {
    TreeXYModeReport mr;
    mr.mode = mode;
    ObjectiveSpec spec = make_spec(mode);

    // Clifford regression points.
    std::vector<std::pair<double, double>> fit_x, fit_y;
    for (double t1 : cliffords) {
      SplitMix64 rng(derive_seed(cfg.seed, stream++));
      std::vector<double> theta{t1};
      auto [ex, ey] = exact_pair(t1);
      EvalStats nx = estimate_observable(spec, theta, model.hx, &rng);
      EvalStats ny = estimate_observable(spec, theta, model.hy, &rng);
      fit_x.emplace_back(nx.value, ex);
      fit_y.emplace_back(ny.value, ey);
    }
    mr.fit_x = cdr_fit(fit_x);
    mr.fit_y = cdr_fit(fit_y);

    double res_x = 0, res_y = 0;
    int n_non_clifford = 0;
    for (int k = 0; k < cfg.points; ++k) {
      TreeXYPoint pt;
      pt.theta1 = kPi * static_cast<double>(k) / static_cast<double>(cfg.points - 1);
      SplitMix64 rng(derive_seed(cfg.seed, stream++));
      std::vector<double> theta{pt.theta1};
      EvalStats sx = estimate_observable(spec, theta, model.hx, &rng);
      EvalStats sy = estimate_observable(spec, theta, model.hy, &rng);
      pt.raw_hx = sx.value;
      pt.raw_hy = sy.value;
      pt.stderr_hx = sx.stderr_est;
      pt.stderr_hy = sy.stderr_est;
      pt.acceptance = std::min(sx.acceptance_rate, sy.acceptance_rate);
      pt.mit_hx = cdr_apply(mr.fit_x, pt.raw_hx);
      pt.mit_hy = cdr_apply(mr.fit_y, pt.raw_hy);
      auto [ex, ey] = exact_pair(pt.theta1);
      pt.exact_hx = ex;
      pt.exact_hy = ey;
      const double wx = -(1.0 + cfg.g) / 2.0, wy = (1.0 - cfg.g) / 2.0;
      pt.raw_hxy = wx * pt.raw_hx + wy * pt.raw_hy;
      pt.mit_hxy = wx * pt.mit_hx + wy * pt.mit_hy;
      pt.exact_hxy = wx * ex + wy * ey;
      pt.analytic_hxy = tree_expectation_analytic(pt.theta1, kHalfPi, kHalfPi, cfg.g);
      bool is_clifford = false;
      for (double c : cliffords)
        if (std::abs(pt.theta1 - c) < 1e-12) is_clifford = true;
      if (!is_clifford) {
        double rx = ex - cdr_apply(mr.fit_x, pt.raw_hx);
        double ry = ey - cdr_apply(mr.fit_y, pt.raw_hy);
        res_x += rx * rx;
        res_y += ry * ry;
        ++n_non_clifford;
      }
      mr.points.push_back(pt);
    }
    const double denom = std::max(1, n_non_clifford);
    mr.mse_x = res_x / denom;
    mr.mse_y = res_y / denom;
    report.modes.push_back(std::move(mr));
  }
  return report;
}

void parallel_for(int jobs, int threads, const std::function<void(int)>& fn) {
  threads = std::max(1, std::min(threads, jobs));
  if (threads == 1) {
    for (int i = 0; i < jobs; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(threads));
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (int i = next.fetch_add(1); i < jobs; i = next.fetch_add(1)) fn(i);
      } catch (...) {
        errors[static_cast<std::size_t>(t)] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace mbvqe
