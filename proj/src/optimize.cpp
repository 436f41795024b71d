#include "entwit/optimize.hpp"

#include <atomic>
#include <cmath>
#include <deque>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace entwit::optimize {

Eigen::VectorXd fd_gradient(const Objective &f, const Eigen::VectorXd &x, double step) {
  Eigen::VectorXd g(x.size());
  Eigen::VectorXd probe = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double orig = probe[i];
    probe[i] = orig + step;
    const double up = f(probe);
    probe[i] = orig - step;
    const double down = f(probe);
    probe[i] = orig;
    g[i] = (up - down) / (2.0 * step);
  }
  return g;
}

namespace {

struct Pair {
  Eigen::VectorXd s;
  Eigen::VectorXd y;
  double rho;
};

Eigen::VectorXd two_loop(const std::deque<Pair> &memory, const Eigen::VectorXd &g) {
  Eigen::VectorXd q = g;
  std::vector<double> alpha(memory.size());
  for (std::size_t k = memory.size(); k-- > 0;) {
    alpha[k] = memory[k].rho * memory[k].s.dot(q);
    q -= alpha[k] * memory[k].y;
  }
  if (!memory.empty()) {
    const Pair &last = memory.back();
    q *= last.s.dot(last.y) / last.y.squaredNorm();
  }
  for (std::size_t k = 0; k < memory.size(); ++k) {
    const double beta = memory[k].rho * memory[k].y.dot(q);
    q += (alpha[k] - beta) * memory[k].s;
  }
  return -q;
}

} // namespace

DescentResult minimize(const Objective &f, Eigen::VectorXd x0, const DescentOptions &options,
                       const Gradient &gradient, const Projection &project) {
  auto grad = [&](const Eigen::VectorXd &x) {
    return gradient ? gradient(x) : fd_gradient(f, x, options.fd_step);
  };
  if (project) {
    project(x0);
  }
  DescentResult result{x0, f(x0), 0};
  Eigen::VectorXd g = grad(result.x);
  std::deque<Pair> memory;
  int small_steps = 0;
  double step_scale = 1.0;

  for (int it = 0; it < options.max_iterations; ++it) {
    result.iterations = it + 1;
    if (!g.allFinite() || g.squaredNorm() == 0.0) {
      break;
    }
    bool accepted = false;
    Eigen::VectorXd x_new;
    double f_new = result.value;
    for (int attempt = 0; attempt < 2 && !accepted; ++attempt) {
      const bool quasi_newton = attempt == 0;
      Eigen::VectorXd d;
      if (quasi_newton) {
        if (memory.empty()) {
          continue;
        }
        d = two_loop(memory, g);
        if (d.dot(g) >= 0.0) {
          memory.clear();
          continue;
        }
      } else {
        d = -g * (step_scale / g.norm());
      }
      double t = 1.0;
      for (int h = 0; h < options.max_halvings; ++h, t *= 0.5) {
        Eigen::VectorXd trial = result.x + t * d;
        if (project) {
          project(trial);
        }
        const double ft = f(trial);
        if (std::isfinite(ft) && ft < result.value) {
          x_new = std::move(trial);
          f_new = ft;
          accepted = true;
          break;
        }
      }
      if (accepted && !quasi_newton) {
        step_scale = std::min(1.0, 2.0 * t * step_scale);
      }
      if (!accepted && quasi_newton) {
        memory.clear();
      }
    }
    if (!accepted) {
      break;
    }
    const double improvement = result.value - f_new;
    Eigen::VectorXd g_new = grad(x_new);
    const Eigen::VectorXd s = x_new - result.x;
    const Eigen::VectorXd y = g_new - g;
    const double sy = s.dot(y);
    if (sy > 1e-16 * s.norm() * y.norm() && sy > 0.0) {
      memory.push_back({s, y, 1.0 / sy});
      if (static_cast<int>(memory.size()) > options.memory) {
        memory.pop_front();
      }
    }
    result.x = std::move(x_new);
    result.value = f_new;
    g = std::move(g_new);
    if (improvement <= options.rel_tolerance * (std::abs(result.value) + 1e-12)) {
      if (++small_steps >= 2) {
        break;
      }
    } else {
      small_steps = 0;
    }
  }
  return result;
}

DescentResult maximize(const Objective &f, Eigen::VectorXd x0, const DescentOptions &options,
                       const Gradient &gradient, const Projection &project) {
  Objective neg = [&](const Eigen::VectorXd &x) { return -f(x); };
  Gradient neg_grad;
  if (gradient) {
    neg_grad = [&](const Eigen::VectorXd &x) { return Eigen::VectorXd(-gradient(x)); };
  }
  DescentResult r = minimize(neg, std::move(x0), options, neg_grad, project);
  r.value = -r.value;
  return r;
}

ScalarResult golden_section_maximize(const std::function<double(double)> &f, double lo,
                                     double hi, double x_tolerance) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo;
  double b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  while (b - a > x_tolerance) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return fc >= fd ? ScalarResult{c, fc} : ScalarResult{d, fd};
}

namespace {
std::atomic<unsigned> g_threads{0};
}

void set_thread_count(unsigned threads) { g_threads.store(threads); }

unsigned thread_count() {
  const unsigned t = g_threads.load();
  if (t != 0) {
    return t;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)> &body) {
  const std::size_t workers = std::min<std::size_t>(thread_count(), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) {
      body(i);
    }
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) {
          failure = std::current_exception();
        }
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back(work);
  }
  for (auto &t : pool) {
    t.join();
  }
  if (failure) {
    std::rethrow_exception(failure);
  }
}

} // namespace entwit::optimize
