#pragma once

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <vector>

namespace mbvqe {

/// Limited-memory quasi-Newton minimizer with backtracking line search.
/// The objective callback fills the gradient and returns f(x).
struct LbfgsOptions {
  int max_iterations = 400;
  int memory = 8;
  double grad_tolerance = 1e-10;     // stop when ||g||_inf small
  double f_tolerance = 1e-14;        // relative decrease threshold
  int max_line_search = 50;
  double armijo_c1 = 1e-4;
};

struct LbfgsResult {
  Eigen::VectorXd x;
  double f = 0;
  int iterations = 0;
  std::vector<double> trace;  // accepted objective values, non-increasing
  std::string status;         // "converged", "max_iterations", "line_search_failed"
};

using ObjectiveFn = std::function<double(const Eigen::VectorXd& x, Eigen::VectorXd& grad)>;

LbfgsResult lbfgs_minimize(const ObjectiveFn& fn, Eigen::VectorXd x0,
                           const LbfgsOptions& opts = {});

}  // namespace mbvqe
