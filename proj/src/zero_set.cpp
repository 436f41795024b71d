#include "entwit/zero_set.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <optional>

#include "entwit/error.hpp"

namespace entwit {

Complex measure_polynomial(MeasureKind kind, const CVector &psi) {
  switch (kind) {
  case MeasureKind::ExtensiveThreeTangle:
    return hyperdeterminant(psi);
  case MeasureKind::Concurrence:
    return concurrence_polynomial(psi);
  case MeasureKind::GeometricMeasure:
    break;
  }
  throw Error("measure_kind", "geometric measure has no defining polynomial");
}

CVector measure_polynomial_gradient(MeasureKind kind, const CVector &psi) {
  switch (kind) {
  case MeasureKind::ExtensiveThreeTangle:
    return hyperdeterminant_gradient(psi);
  case MeasureKind::Concurrence: {
    CVector g(4);
    g << psi[3], -psi[2], -psi[1], psi[0];
    return g;
  }
  case MeasureKind::GeometricMeasure:
    break;
  }
  throw Error("measure_kind", "geometric measure has no defining polynomial");
}

// ---------------------------------------------------------------------------
// SLOCC orbit of |W>

namespace {

using Factors = std::array<Eigen::Matrix2cd, 3>;

Factors orbit_factors(const Eigen::VectorXd &p) {
  Factors f;
  for (int k = 0; k < 3; ++k) {
    for (int e = 0; e < 4; ++e) {
      f[k](e / 2, e % 2) = Complex(p[4 * k + e], p[12 + 4 * k + e]);
    }
  }
  return f;
}

// |W> amplitudes by basis index
constexpr double kWAmp = 0.57735026918962576451; // 1/sqrt(3)

double w_amplitude(int j) { return (j == 1 || j == 2 || j == 4) ? kWAmp : 0.0; }

int bit(int index, int qubit) { return (index >> (2 - qubit)) & 1; }

CVector orbit_vector(const Factors &f) {
  CVector v = CVector::Zero(8);
  for (int i = 0; i < 8; ++i) {
    Complex s = 0.0;
    for (int j : {1, 2, 4}) {
      s += kWAmp * f[0](bit(i, 0), bit(j, 0)) * f[1](bit(i, 1), bit(j, 1)) *
           f[2](bit(i, 2), bit(j, 2));
    }
    v[i] = s;
  }
  return v;
}

} // namespace

CVector w_orbit_vector(const Eigen::VectorXd &params) {
  if (params.size() != 24) {
    throw Error("parameter_count", "W-orbit parametrization needs 24 reals");
  }
  return orbit_vector(orbit_factors(params));
}

double w_orbit_rayleigh(const CMatrix &h, const Eigen::VectorXd &params) {
  const CVector v = w_orbit_vector(params);
  const double n2 = v.squaredNorm();
  if (!(n2 > 1e-300)) {
    return -std::numeric_limits<double>::infinity();
  }
  return v.dot(h * v).real() / n2;
}

Eigen::VectorXd w_orbit_rayleigh_gradient(const CMatrix &h, const Eigen::VectorXd &params) {
  const Factors f = orbit_factors(params);
  const CVector v = orbit_vector(f);
  const double n2 = v.squaredNorm();
  Eigen::VectorXd grad = Eigen::VectorXd::Zero(24);
  if (!(n2 > 1e-300)) {
    return grad;
  }
  const CVector hv = h * v;
  const double r = v.dot(hv).real() / n2;
  // dR = Re(G^dagger dv) with G = 2 (H v - R v) / |v|^2
  const CVector g = 2.0 * (hv - r * v) / n2;
  for (int k = 0; k < 3; ++k) {
    Eigen::Matrix2cd z = Eigen::Matrix2cd::Zero();
    for (int i = 0; i < 8; ++i) {
      const Complex gi = std::conj(g[i]);
      for (int j : {1, 2, 4}) {
        Complex prod = gi * w_amplitude(j);
        for (int l = 0; l < 3; ++l) {
          if (l != k) {
            prod *= f[l](bit(i, l), bit(j, l));
          }
        }
        z(bit(i, k), bit(j, k)) += prod;
      }
    }
    for (int e = 0; e < 4; ++e) {
      const Complex ze = z(e / 2, e % 2);
      grad[4 * k + e] = ze.real();
      grad[12 + 4 * k + e] = -ze.imag();
    }
  }
  return grad;
}

std::vector<ZeroSetOptimum> maximize_on_w_orbit(const CMatrix &h, int restarts,
                                                std::uint64_t seed,
                                                const optimize::DescentOptions &descent,
                                                const std::vector<Eigen::VectorXd> &warm,
                                                std::vector<Eigen::VectorXd> *params_out) {
  if (h.rows() != 8) {
    throw Error("measure_qubits", "W-orbit search needs a three-qubit operator");
  }
  const std::size_t total = warm.size() + static_cast<std::size_t>(std::max(0, restarts));
  std::vector<std::optional<ZeroSetOptimum>> slots(total);
  std::vector<Eigen::VectorXd> params(total);
  optimize::parallel_for(total, [&](std::size_t idx) {
    Eigen::VectorXd x0(24);
    if (idx < warm.size()) {
      x0 = warm[idx];
    } else {
      auto rng = make_rng(seed, idx - warm.size());
      std::normal_distribution<double> normal(0.0, 1.0);
      for (int i = 0; i < 24; ++i) {
        x0[i] = normal(rng);
      }
    }
    auto f = [&](const Eigen::VectorXd &x) { return w_orbit_rayleigh(h, x); };
    auto g = [&](const Eigen::VectorXd &x) { return w_orbit_rayleigh_gradient(h, x); };
    // keep the factors well scaled; the Rayleigh quotient is invariant
    // under rescaling each factor
    auto rescale = [](Eigen::VectorXd &x) {
      for (int k = 0; k < 3; ++k) {
        double n2 = 0.0;
        for (int e = 0; e < 4; ++e) {
          n2 += x[4 * k + e] * x[4 * k + e] + x[12 + 4 * k + e] * x[12 + 4 * k + e];
        }
        const double s = 1.0 / std::sqrt(std::max(n2, 1e-300) / 2.0);
        for (int e = 0; e < 4; ++e) {
          x[4 * k + e] *= s;
          x[12 + 4 * k + e] *= s;
        }
      }
    };
    auto result = optimize::maximize(f, x0, descent, g);
    rescale(result.x);
    const CVector v = w_orbit_vector(result.x);
    if (v.norm() > 0.0 && std::isfinite(result.value)) {
      slots[idx] = ZeroSetOptimum{PureState::normalized(v), result.value};
    }
    params[idx] = result.x;
  });
  std::vector<ZeroSetOptimum> out;
  for (std::size_t i = 0; i < total; ++i) {
    if (slots[i]) {
      out.push_back(std::move(*slots[i]));
      if (params_out) {
        params_out->push_back(params[i]);
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Bipartite product search

std::vector<ZeroSetOptimum> maximize_across_cut(const CMatrix &h, int split, int restarts,
                                                std::uint64_t seed) {
  const int n = qubits_of(h.rows());
  if (split < 0 || split >= n) {
    throw Error("qubit_index", "cut qubit out of range");
  }
  const Eigen::Index dim = h.rows();
  const Eigen::Index rest_dim = dim / 2;
  const Eigen::Index mask = Eigen::Index{1} << (n - 1 - split);
  // full index of (bit of split qubit, index over remaining qubits)
  auto full_index = [&](int b, Eigen::Index r) {
    const Eigen::Index low = r & (mask - 1);
    const Eigen::Index high = (r & ~(mask - 1)) << 1;
    return high | (b ? mask : 0) | low;
  };
  std::vector<ZeroSetOptimum> out;
  for (int restart = 0; restart < std::max(1, restarts); ++restart) {
    auto rng = make_rng(seed, static_cast<std::uint64_t>(restart));
    CVector a = random_gaussian_vector(2, rng).normalized();
    CVector b = random_gaussian_vector(rest_dim, rng).normalized();
    double value = -std::numeric_limits<double>::infinity();
    for (int it = 0; it < 1000; ++it) {
      CMatrix hb = CMatrix::Zero(rest_dim, rest_dim);
      for (int p = 0; p < 2; ++p) {
        for (int q = 0; q < 2; ++q) {
          const Complex w = std::conj(a[p]) * a[q];
          for (Eigen::Index r = 0; r < rest_dim; ++r) {
            for (Eigen::Index s = 0; s < rest_dim; ++s) {
              hb(r, s) += w * h(full_index(p, r), full_index(q, s));
            }
          }
        }
      }
      Eigen::SelfAdjointEigenSolver<CMatrix> sb(0.5 * (hb + hb.adjoint()));
      b = sb.eigenvectors().col(rest_dim - 1);
      Eigen::Matrix2cd ha = Eigen::Matrix2cd::Zero();
      for (int p = 0; p < 2; ++p) {
        for (int q = 0; q < 2; ++q) {
          Complex s = 0.0;
          for (Eigen::Index r = 0; r < rest_dim; ++r) {
            for (Eigen::Index t = 0; t < rest_dim; ++t) {
              s += std::conj(b[r]) * h(full_index(p, r), full_index(q, t)) * b[t];
            }
          }
          ha(p, q) = s;
        }
      }
      Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> sa(0.5 * (ha + ha.adjoint()));
      a = sa.eigenvectors().col(1);
      const double next = sa.eigenvalues()[1];
      const bool done = next - value < 1e-15;
      value = std::max(value, next);
      if (done) {
        break;
      }
    }
    CVector psi(dim);
    for (int p = 0; p < 2; ++p) {
      for (Eigen::Index r = 0; r < rest_dim; ++r) {
        psi[full_index(p, r)] = a[p] * b[r];
      }
    }
    PureState state = PureState::normalized(psi);
    const double exact = state.amplitudes().dot(h * state.amplitudes()).real();
    out.push_back({std::move(state), exact});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Variety ascent

bool project_to_variety(MeasureKind kind, const CMatrix &basis, CVector &c) {
  for (int it = 0; it < 200; ++it) {
    c.normalize();
    const CVector psi = basis * c;
    const Complex q = measure_polynomial(kind, psi);
    if (std::abs(q) < 1e-16) {
      return true;
    }
    const CVector gq = basis.transpose() * measure_polynomial_gradient(kind, psi);
    const double n2 = gq.squaredNorm();
    if (!(n2 > 1e-24)) {
      return false;
    }
    c -= q * gq.conjugate() / n2;
  }
  c.normalize();
  return std::abs(measure_polynomial(kind, basis * c)) < 1e-14;
}

std::vector<ZeroSetOptimum> maximize_on_variety(const CMatrix &h, MeasureKind kind,
                                                const CMatrix &basis, int restarts,
                                                std::uint64_t seed, int max_iterations) {
  const CMatrix hr = basis.adjoint() * h * basis;
  const Eigen::Index r = basis.cols();
  std::vector<std::optional<ZeroSetOptimum>> slots(static_cast<std::size_t>(std::max(0, restarts)));
  optimize::parallel_for(slots.size(), [&](std::size_t idx) {
    auto rng = make_rng(seed, idx);
    CVector c = random_gaussian_vector(r, rng);
    if (!project_to_variety(kind, basis, c)) {
      return;
    }
    double value = c.dot(hr * c).real();
    double step = 0.5;
    for (int it = 0; it < max_iterations && step > 1e-14; ++it) {
      CVector g = hr * c - value * c;
      const CVector gq = basis.transpose() * measure_polynomial_gradient(kind, basis * c);
      const double n2 = gq.squaredNorm();
      if (n2 > 1e-24) {
        const Complex along = (gq.transpose() * g)(0);
        g -= along * gq.conjugate() / n2;
      }
      if (g.norm() < 1e-13) {
        break;
      }
      CVector trial = c + step * g;
      if (project_to_variety(kind, basis, trial)) {
        const double tv = trial.dot(hr * trial).real();
        if (tv > value) {
          const double gain = tv - value;
          c = trial;
          value = tv;
          step = std::min(step * 2.0, 4.0);
          if (gain < 1e-16) {
            break;
          }
          continue;
        }
      }
      step *= 0.5;
    }
    slots[idx] = ZeroSetOptimum{PureState::normalized(basis * c), value};
  });
  std::vector<ZeroSetOptimum> out;
  for (auto &s : slots) {
    if (s) {
      out.push_back(std::move(*s));
    }
  }
  return out;
}

std::vector<ZeroSetOptimum> maximize_on_zero_set(const CMatrix &h, MeasureKind kind,
                                                 const CMatrix &basis, int restarts,
                                                 std::uint64_t seed,
                                                 const optimize::DescentOptions &descent) {
  const bool full = basis.cols() == basis.rows();
  std::vector<ZeroSetOptimum> out;
  auto append = [&out](std::vector<ZeroSetOptimum> more) {
    for (auto &m : more) {
      out.push_back(std::move(m));
    }
  };
  if (full && kind == MeasureKind::ExtensiveThreeTangle) {
    append(maximize_on_w_orbit(h, restarts, seed, descent));
    for (int k = 0; k < 3; ++k) {
      append(maximize_across_cut(h, k, std::max(4, restarts / 16), seed + 101 + k));
    }
  } else if (full && kind == MeasureKind::Concurrence) {
    append(maximize_across_cut(h, 0, std::max(4, restarts / 4), seed + 101));
  }
  append(maximize_on_variety(h, kind, basis, full ? std::max(4, restarts / 4) : restarts,
                             seed + 211));
  return out;
}

} // namespace entwit
