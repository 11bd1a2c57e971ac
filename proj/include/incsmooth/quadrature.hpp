#pragma once

#include <Eigen/Dense>
#include <cmath>

#include "incsmooth/errors.hpp"

namespace incsmooth {

// Gauss quadrature for the weight (1-x)^alpha (1+x)^beta on [-1, 1], built
// from the symmetric tridiagonal recurrence matrix; nodes are its
// eigenvalues, weights come from the first eigenvector components scaled by
// the total mass mu0 = 2^(alpha+beta+1) B(alpha+1, beta+1).
struct QuadratureRule {
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;
};

inline double jacobi_weight_mass(double alpha, double beta) {
  return std::exp((alpha + beta + 1.0) * std::log(2.0) + std::lgamma(alpha + 1.0) +
                  std::lgamma(beta + 1.0) - std::lgamma(alpha + beta + 2.0));
}

// Normalizing constant turning the weight into a probability density.
inline double jacobi_density_constant(double alpha, double beta) {
  return 1.0 / jacobi_weight_mass(alpha, beta);
}

inline QuadratureRule gauss_jacobi(int n, double alpha, double beta) {
  if (n < 1) throw DomainError("quadrature needs at least one node");
  if (!(alpha > -1.0) || !(beta > -1.0)) throw DomainError("quadrature needs alpha, beta > -1");
  const double s = alpha + beta;
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  J(0, 0) = (beta - alpha) / (s + 2.0);
  for (int k = 1; k < n; ++k) {
    const double kk = k;
    J(k, k) = (beta * beta - alpha * alpha) / ((2.0 * kk + s) * (2.0 * kk + s + 2.0));
    double b2;
    if (k == 1)
      b2 = 4.0 * (1.0 + alpha) * (1.0 + beta) / ((2.0 + s) * (2.0 + s) * (3.0 + s));
    else
      b2 = 4.0 * kk * (kk + alpha) * (kk + beta) * (kk + s) /
           ((2.0 * kk + s) * (2.0 * kk + s) * (2.0 * kk + s + 1.0) * (2.0 * kk + s - 1.0));
    J(k, k - 1) = J(k - 1, k) = std::sqrt(b2);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  QuadratureRule rule;
  rule.nodes = es.eigenvalues();
  const double mu0 = jacobi_weight_mass(alpha, beta);
  rule.weights = mu0 * es.eigenvectors().row(0).transpose().array().square();
  return rule;
}

}  // namespace incsmooth
