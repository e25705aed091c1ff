#include "fone/design.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Cholesky>

namespace fone {

void validate(const DesignSpec& design) {
  if (design.p < 2) throw std::invalid_argument("design: p must be >= 2 (intercept + covariate)");
  if (!(design.varsigma >= 0.0 && design.varsigma < 1.0))
    throw std::invalid_argument("design: varsigma must lie in [0,1)");
}

Eigen::MatrixXd covariance_matrix(const DesignSpec& design) {
  validate(design);
  const Index q = design.p - 1;
  Eigen::MatrixXd s = Eigen::MatrixXd::Identity(q, q);
  switch (design.covariance) {
    case CovKind::Identity:
      break;
    case CovKind::Toeplitz:
      for (Index i = 0; i < q; ++i)
        for (Index j = 0; j < q; ++j)
          s(i, j) = std::pow(design.varsigma, static_cast<double>(std::abs(i - j)));
      break;
    case CovKind::EquiCorr:
      for (Index i = 0; i < q; ++i)
        for (Index j = 0; j < q; ++j)
          if (i != j) s(i, j) = design.varsigma;
      break;
  }
  return s;
}

Eigen::MatrixXd second_moment_matrix(const DesignSpec& design) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(design.p, design.p);
  m(0, 0) = 1.0;
  m.bottomRightCorner(design.p - 1, design.p - 1) = covariance_matrix(design);
  return m;
}

Eigen::MatrixXd cholesky_factor(const DesignSpec& design) {
  validate(design);
  const Index q = design.p - 1;
  if (design.covariance == CovKind::Identity || design.varsigma == 0.0)
    return Eigen::MatrixXd::Identity(q, q);
  const Eigen::MatrixXd s = covariance_matrix(design);
  Eigen::LLT<Eigen::MatrixXd> llt(s);
  // Valid varsigma in [0,1) keeps both families positive definite, but the
  // factorization outcome is checked anyway.
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("design: covariance is not positive definite");
  return llt.matrixL();
}

}  // namespace fone
