#include "entwit/roof.hpp"

#include <cmath>
#include <optional>

#include "entwit/error.hpp"
#include "entwit/io.hpp"

namespace entwit {

CMatrix polar_isometry(const CMatrix &z) {
  Eigen::JacobiSVD<CMatrix> svd(z, Eigen::ComputeThinU | Eigen::ComputeThinV);
  return svd.matrixU() * svd.matrixV().adjoint();
}

namespace {

// columns sqrt(lambda_j) e_j
CMatrix scaled_range(const DensityMatrix &rho) {
  return rho.range_basis() * rho.range_eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal();
}

// Polynomial measures with the cusp at Q = 0 rounded off by eps:
// T3 -> 2 (|Q|^2 + eps^2)^(1/4), C -> 2 (|Q|^2 + eps^2)^(1/2).
double smoothed_measure(MeasureKind measure, const CVector &v, double eps,
                        const ProductOverlapOptions &overlap) {
  if (eps == 0.0 || measure == MeasureKind::GeometricMeasure) {
    return extensive_measure(measure, v, overlap);
  }
  if (measure == MeasureKind::ExtensiveThreeTangle) {
    return 2.0 * std::pow(std::norm(hyperdeterminant(v)) + eps * eps, 0.25);
  }
  return 2.0 * std::sqrt(std::norm(concurrence_polynomial(v)) + eps * eps);
}

double ensemble_cost(const CMatrix &states, MeasureKind measure, double eps,
                     const ProductOverlapOptions &overlap) {
  double total = 0.0;
  for (Eigen::Index i = 0; i < states.cols(); ++i) {
    total += smoothed_measure(measure, states.col(i), eps, overlap);
  }
  return total;
}

} // namespace

DecompositionEnsemble hjw_ensemble(const DensityMatrix &rho, const CMatrix &isometry,
                                   MeasureKind measure, const ProductOverlapOptions &overlap) {
  check_measure_qubits(measure, rho.n_qubits());
  const Eigen::Index r = rho.rank();
  if (isometry.cols() != r || isometry.rows() < r) {
    throw Error("isometry", "isometry must be m x rank(rho) with m >= rank");
  }
  const double err = (isometry.adjoint() * isometry - CMatrix::Identity(r, r)).cwiseAbs().maxCoeff();
  if (err > 1e-10) {
    throw Error("isometry", "columns are not orthonormal");
  }
  const CMatrix states = scaled_range(rho) * isometry.transpose();
  DecompositionEnsemble ens{{}, rho, 0.0};
  for (Eigen::Index i = 0; i < states.cols(); ++i) {
    const double w = states.col(i).squaredNorm();
    if (w > 1e-15) {
      ens.entries.push_back({w, PureState::normalized(states.col(i))});
      ens.roof_value += extensive_measure(measure, states.col(i), overlap);
    }
  }
  return ens;
}

double reconstruction_error(const DecompositionEnsemble &ensemble) {
  const Eigen::Index dim = ensemble.target.dimension();
  CMatrix m = CMatrix::Zero(dim, dim);
  for (const auto &e : ensemble.entries) {
    m += e.weight * e.state.amplitudes() * e.state.amplitudes().adjoint();
  }
  return (m - ensemble.target.matrix()).norm();
}

RoofResult convex_roof_minimize(const DensityMatrix &rho, MeasureKind measure,
                                const RoofOptions &options) {
  check_measure_qubits(measure, rho.n_qubits());
  const Eigen::Index r = rho.rank();
  const Eigen::Index m = options.ensemble_size > 0 ? options.ensemble_size : r + 2;
  if (m < r) {
    throw Error("ensemble_size", "ensemble size must be at least rank(rho)");
  }
  const CMatrix base = scaled_range(rho);
  const Eigen::Index np = 2 * m * r;

  auto to_z = [m, r](const Eigen::VectorXd &x) {
    CMatrix z(m, r);
    for (Eigen::Index i = 0; i < m * r; ++i) {
      z(i / r, i % r) = Complex(x[i], x[m * r + i]);
    }
    return z;
  };
  auto cost_at = [&](const Eigen::VectorXd &x, double eps) {
    const CMatrix z = to_z(x);
    Eigen::JacobiSVD<CMatrix> svd(z, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto &s = svd.singularValues();
    if (!(s[r - 1] > 1e-9 * s[0])) {
      return std::numeric_limits<double>::infinity();
    }
    const CMatrix u = svd.matrixU() * svd.matrixV().adjoint();
    return ensemble_cost(base * u.transpose(), measure, eps, options.overlap);
  };

  const int restarts = std::max(1, options.restarts);
  std::vector<std::optional<std::pair<double, Eigen::VectorXd>>> slots(
      static_cast<std::size_t>(restarts));
  optimize::parallel_for(slots.size(), [&](std::size_t idx) {
    Eigen::VectorXd x0 = Eigen::VectorXd::Zero(np);
    if (idx == 0) {
      for (Eigen::Index j = 0; j < r; ++j) {
        x0[j * r + j] = 1.0;
      }
    } else {
      auto rng = make_rng(options.seed, idx);
      std::normal_distribution<double> normal(0.0, 1.0);
      for (Eigen::Index i = 0; i < np; ++i) {
        x0[i] = normal(rng);
      }
    }
    // keep the parameters near the isometry so the FD step stays meaningful
    auto retract = [&](Eigen::VectorXd &x) {
      const CMatrix u = polar_isometry(to_z(x));
      for (Eigen::Index i = 0; i < m * r; ++i) {
        x[i] = u(i / r, i % r).real();
        x[m * r + i] = u(i / r, i % r).imag();
      }
    };
    double eps = 0.0;
    auto cost = [&](const Eigen::VectorXd &x) { return cost_at(x, eps); };
    Eigen::VectorXd x = x0;
    if (measure != MeasureKind::GeometricMeasure) {
      for (double e : options.smoothing) {
        eps = e;
        x = optimize::minimize(cost, x, options.descent, {}, retract).x;
      }
    }
    eps = 0.0;
    auto res = optimize::minimize(cost, x, options.descent, {}, retract);
    slots[idx] = std::make_pair(res.value, res.x);
  });

  std::size_t best = 0;
  for (std::size_t i = 1; i < slots.size(); ++i) {
    if (slots[i]->first < slots[best]->first) {
      best = i;
    }
  }
  const CMatrix u = polar_isometry(to_z(slots[best]->second));
  DecompositionEnsemble ens = hjw_ensemble(rho, u, measure, options.overlap);
  const double value = ens.roof_value;
  return RoofResult{value, std::move(ens), restarts, static_cast<int>(m)};
}

nlohmann::json ensemble_document(const DecompositionEnsemble &ensemble) {
  nlohmann::json entries = nlohmann::json::array();
  for (const auto &e : ensemble.entries) {
    entries.push_back({{"weight", e.weight}, {"state", io::state_document(e.state)}});
  }
  return {{"roof_value", ensemble.roof_value},
          {"reconstruction_error", reconstruction_error(ensemble)},
          {"entries", entries}};
}

} // namespace entwit
