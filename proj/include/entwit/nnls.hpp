#pragma once

#include <Eigen/Dense>

#include "entwit/qstate.hpp"

namespace entwit {

struct NnlsResult {
  Eigen::VectorXd x;
  double residual = 0.0; // |A x - b|
  int iterations = 0;
};

/// Lawson-Hanson active-set solver for min |A x - b| subject to x >= 0.
NnlsResult nnls(const Eigen::MatrixXd &a, const Eigen::VectorXd &b, int max_iterations = 0);

/// Real coordinates of a Hermitian matrix: diagonal entries, then sqrt(2) Re
/// and sqrt(2) Im of the strict upper triangle. The map is an isometry from
/// the Frobenius norm to the Euclidean norm.
Eigen::VectorXd hermitian_coordinates(const CMatrix &h);

} // namespace entwit
