#pragma once

#include <Eigen/Core>

namespace fone {

using Eigen::Index;

// Covariance family of the p-1 non-intercept covariates.
enum class CovKind { Identity, Toeplitz, EquiCorr };

// Gaussian design: x = (1, Z), Z ~ N(0, Sigma0). p counts the intercept.
struct DesignSpec {
  Index p = 2;
  CovKind covariance = CovKind::Identity;
  double varsigma = 0.0;  // Toeplitz: Sigma0_ij = varsigma^|i-j|; EquiCorr: off-diagonal
};

// Throws std::invalid_argument unless p >= 2 and 0 <= varsigma < 1.
void validate(const DesignSpec& design);

// Sigma0, the (p-1) x (p-1) covariate covariance.
Eigen::MatrixXd covariance_matrix(const DesignSpec& design);

// E[x x'] = blockdiag(1, Sigma0); exact because Z has mean zero.
Eigen::MatrixXd second_moment_matrix(const DesignSpec& design);

// Lower Cholesky factor of Sigma0 (identity short-circuits).
Eigen::MatrixXd cholesky_factor(const DesignSpec& design);

}  // namespace fone
