#pragma once

#include <Eigen/Dense>

#include <optional>
#include <vector>

namespace mlfg {

/// Doolittle LU with partial (row) pivoting for the small dense systems the
/// solvers produce. A pivot smaller than pivot_tol times the largest initial
/// row infinity-norm marks the matrix as singular.
class LuFactorization {
 public:
  explicit LuFactorization(const Eigen::MatrixXd& M, double pivot_tol = 1e-12);

  bool singular() const { return singular_; }
  Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const;

 private:
  Eigen::MatrixXd lu_;
  std::vector<Eigen::Index> perm_;
  bool singular_ = false;
};

/// Solves M x = rhs; std::nullopt signals a singular (or numerically
/// singular) matrix rather than an error.
std::optional<Eigen::VectorXd> lu_solve(const Eigen::MatrixXd& M, const Eigen::VectorXd& rhs,
                                        double pivot_tol = 1e-12);

}  // namespace mlfg
