#include "entwit/nnls.hpp"

#include <cmath>
#include <vector>

namespace entwit {

namespace {

Eigen::VectorXd solve_passive(const Eigen::MatrixXd &a, const Eigen::VectorXd &b,
                              const std::vector<Eigen::Index> &passive) {
  Eigen::MatrixXd sub(a.rows(), static_cast<Eigen::Index>(passive.size()));
  for (std::size_t k = 0; k < passive.size(); ++k) {
    sub.col(static_cast<Eigen::Index>(k)) = a.col(passive[k]);
  }
  return sub.completeOrthogonalDecomposition().solve(b);
}

} // namespace

NnlsResult nnls(const Eigen::MatrixXd &a, const Eigen::VectorXd &b, int max_iterations) {
  const Eigen::Index n = a.cols();
  if (max_iterations <= 0) {
    max_iterations = static_cast<int>(3 * n + 30);
  }
  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  std::vector<bool> in_passive(static_cast<std::size_t>(n), false);
  std::vector<Eigen::Index> passive;
  Eigen::VectorXd w = a.transpose() * b;
  const double tol = 1e-13 * std::max(1.0, w.cwiseAbs().maxCoeff());
  int iterations = 0;

  while (iterations < max_iterations) {
    Eigen::Index best = -1;
    double best_w = tol;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (!in_passive[static_cast<std::size_t>(j)] && w[j] > best_w) {
        best_w = w[j];
        best = j;
      }
    }
    if (best < 0) {
      break;
    }
    in_passive[static_cast<std::size_t>(best)] = true;
    passive.push_back(best);

    while (iterations++ < max_iterations) {
      const Eigen::VectorXd s = solve_passive(a, b, passive);
      bool feasible = true;
      for (Eigen::Index k = 0; k < s.size(); ++k) {
        if (s[k] <= 0.0) {
          feasible = false;
          break;
        }
      }
      if (feasible) {
        for (std::size_t k = 0; k < passive.size(); ++k) {
          x[passive[k]] = s[static_cast<Eigen::Index>(k)];
        }
        break;
      }
      double alpha = 1.0;
      for (std::size_t k = 0; k < passive.size(); ++k) {
        const double sk = s[static_cast<Eigen::Index>(k)];
        const double xk = x[passive[k]];
        if (sk <= 0.0) {
          alpha = std::min(alpha, xk / (xk - sk));
        }
      }
      for (std::size_t k = 0; k < passive.size(); ++k) {
        const double sk = s[static_cast<Eigen::Index>(k)];
        x[passive[k]] += alpha * (sk - x[passive[k]]);
      }
      std::vector<Eigen::Index> kept;
      for (const Eigen::Index j : passive) {
        if (x[j] <= 1e-15) {
          x[j] = 0.0;
          in_passive[static_cast<std::size_t>(j)] = false;
        } else {
          kept.push_back(j);
        }
      }
      passive.swap(kept);
      if (passive.empty()) {
        break;
      }
    }
    w = a.transpose() * (b - a * x);
  }
  return {x, (a * x - b).norm(), iterations};
}

Eigen::VectorXd hermitian_coordinates(const CMatrix &h) {
  const Eigen::Index d = h.rows();
  Eigen::VectorXd v(d * d);
  Eigen::Index k = 0;
  for (Eigen::Index i = 0; i < d; ++i) {
    v[k++] = h(i, i).real();
  }
  const double root2 = std::sqrt(2.0);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = i + 1; j < d; ++j) {
      v[k++] = root2 * h(i, j).real();
      v[k++] = root2 * h(i, j).imag();
    }
  }
  return v;
}

} // namespace entwit
