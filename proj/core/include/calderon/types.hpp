#pragma once

#include <Eigen/Dense>
#include <complex>

namespace calderon {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

inline constexpr double kProjectorTol = 1e-9;   // idempotence default
inline constexpr double kEllipticityTol = 1e-7; // singular-value margin default

inline double rel_norm(const CMatrix& a, const CMatrix& b) {
  double scale = std::max(1.0, std::max(a.norm(), b.norm()));
  return (a - b).norm() / scale;
}

inline CMatrix identity_like(const CMatrix& m) {
  return CMatrix::Identity(m.rows(), m.cols());
}

}  // namespace calderon
