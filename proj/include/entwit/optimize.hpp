#pragma once

#include <cstddef>
#include <functional>

#include <Eigen/Dense>

/// Small local optimizers shared by the measure, witness and roof searches.
namespace entwit::optimize {

using Objective = std::function<double(const Eigen::VectorXd &)>;
using Gradient = std::function<Eigen::VectorXd(const Eigen::VectorXd &)>;
using Projection = std::function<void(Eigen::VectorXd &)>;

struct DescentOptions {
  int max_iterations = 2000;
  /// Stop once two consecutive accepted steps improve the objective by less
  /// than rel_tolerance * (|f| + 1e-12).
  double rel_tolerance = 1e-10;
  double fd_step = 1e-6;
  int memory = 8;
  int max_halvings = 60;
};

struct DescentResult {
  Eigen::VectorXd x;
  double value = 0.0;
  int iterations = 0;
};

/// Central finite-difference gradient.
Eigen::VectorXd fd_gradient(const Objective &f, const Eigen::VectorXd &x, double step);

/// Quasi-Newton (L-BFGS) descent with step halving; any strictly improving
/// step is accepted, which keeps it usable on kinked objectives. Falls back to
/// steepest descent whenever the quasi-Newton direction stalls. When no
/// gradient is supplied, central differences with options.fd_step are used.
/// The optional projection is applied to every trial point.
DescentResult minimize(const Objective &f, Eigen::VectorXd x0, const DescentOptions &options,
                       const Gradient &gradient = {}, const Projection &project = {});

/// Same as minimize() on -f; the returned value is f at the maximizer.
DescentResult maximize(const Objective &f, Eigen::VectorXd x0, const DescentOptions &options,
                       const Gradient &gradient = {}, const Projection &project = {});

struct ScalarResult {
  double x = 0.0;
  double value = 0.0;
};

/// Golden-section search for the maximum of a unimodal function on [lo, hi].
ScalarResult golden_section_maximize(const std::function<double(double)> &f, double lo,
                                     double hi, double x_tolerance);

/// Worker count used by parallel_for; 0 means std::thread::hardware_concurrency().
void set_thread_count(unsigned threads);
unsigned thread_count();

/// Runs body(i) for i in [0, n). Callers write into per-index slots so that
/// results do not depend on scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)> &body);

} // namespace entwit::optimize
