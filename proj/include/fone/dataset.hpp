#pragma once

#include <string>

#include <Eigen/Core>

namespace fone {

using Eigen::Index;
// Rows are samples; row-major so mini-batch row gathers stay contiguous.
using RowMatrixXd = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// One observation xi = (y, x); x[0] is the intercept and must equal 1.
struct Sample {
  double y = 0.0;
  Eigen::VectorXd x;
};

struct Dataset {
  RowMatrixXd x;      // n x p, column 0 all ones
  Eigen::VectorXd y;  // n

  Index n() const { return x.rows(); }
  Index dim() const { return x.cols(); }

  Sample sample(Index i) const { return Sample{y(i), x.row(i).transpose()}; }
};

// Throws if shapes disagree, any value is non-finite, or x(:,0) != 1.
void validate_dataset(const Dataset& data);

// Validating constructor used by everything that assembles a Dataset by hand.
Dataset make_dataset(RowMatrixXd x, Eigen::VectorXd y);

// CSV round trip: header "y,x0,x1,...", shortest round-trip decimal values.
void dump_csv(const Dataset& data, const std::string& path);
Dataset load_csv(const std::string& path);

}  // namespace fone
