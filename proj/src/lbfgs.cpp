#include "mbvqe/lbfgs.hpp"

#include <cmath>
#include <deque>

namespace mbvqe {

LbfgsResult lbfgs_minimize(const ObjectiveFn& fn, Eigen::VectorXd x0,
                           const LbfgsOptions& opts) {
  LbfgsResult res;
  const long n = x0.size();
  Eigen::VectorXd x = std::move(x0);
  Eigen::VectorXd g(n), g_new(n);
  double f = fn(x, g);
  res.trace.push_back(f);
  if (n == 0) {
    res.x = x;
    res.f = f;
    res.status = "converged";
    return res;
  }

  struct Pair {
    Eigen::VectorXd s, y;
    double rho;
  };
  std::deque<Pair> mem;

  for (int it = 0; it < opts.max_iterations; ++it) {
    if (g.lpNorm<Eigen::Infinity>() <= opts.grad_tolerance) {
      res.status = "converged";
      res.x = x;
      res.f = f;
      res.iterations = it;
      return res;
    }
    // Two-loop recursion.
    Eigen::VectorXd q = g;
    std::vector<double> alpha(mem.size());
    for (std::size_t i = mem.size(); i-- > 0;) {
      alpha[i] = mem[i].rho * mem[i].s.dot(q);
      q -= alpha[i] * mem[i].y;
    }
    if (!mem.empty()) {
      const auto& last = mem.back();
      double gamma = last.s.dot(last.y) / last.y.squaredNorm();
      q *= gamma;
    }
    for (std::size_t i = 0; i < mem.size(); ++i) {
      double beta = mem[i].rho * mem[i].y.dot(q);
      q += (alpha[i] - beta) * mem[i].s;
    }
    Eigen::VectorXd dir = -q;
    double slope = g.dot(dir);
    if (slope >= 0) {  // not a descent direction: reset to steepest descent
      dir = -g;
      slope = g.dot(dir);
      mem.clear();
    }

    // Backtracking Armijo search.
    double step = 1.0;
    double f_new = f;
    Eigen::VectorXd x_new;
    bool ok = false;
    for (int ls = 0; ls < opts.max_line_search; ++ls) {
      x_new = x + step * dir;
      f_new = fn(x_new, g_new);
      if (std::isfinite(f_new) && f_new <= f + opts.armijo_c1 * step * slope) {
        ok = true;
        break;
      }
      step *= 0.5;
    }
    if (!ok) {
      res.status = "line_search_failed";
      res.x = x;
      res.f = f;
      res.iterations = it;
      return res;
    }

    Pair pr;
    pr.s = x_new - x;
    pr.y = g_new - g;
    double sy = pr.s.dot(pr.y);
    if (sy > 1e-12 * pr.s.norm() * pr.y.norm()) {
      pr.rho = 1.0 / sy;
      mem.push_back(std::move(pr));
      if (static_cast<int>(mem.size()) > opts.memory) mem.pop_front();
    }
    const double decrease = f - f_new;
    x = std::move(x_new);
    g = g_new;
    f = f_new;
    res.trace.push_back(f);
    if (decrease <= opts.f_tolerance * (1.0 + std::abs(f))) {
      res.status = "converged";
      res.x = x;
      res.f = f;
      res.iterations = it + 1;
      return res;
    }
  }
  res.status = "max_iterations";
  res.x = x;
  res.f = f;
  res.iterations = opts.max_iterations;
  return res;
}

}  // namespace mbvqe
