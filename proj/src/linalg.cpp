#include "mlfg/linalg.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace mlfg {

LuFactorization::LuFactorization(const Eigen::MatrixXd& M, double pivot_tol) : lu_(M) {
  if (M.rows() != M.cols()) throw std::invalid_argument("lu: matrix must be square");
  const Eigen::Index n = M.rows();
  perm_.resize(static_cast<std::size_t>(n));
  std::iota(perm_.begin(), perm_.end(), Eigen::Index{0});
  if (n == 0) return;

  const double row_scale = M.cwiseAbs().rowwise().sum().maxCoeff();
  if (!(row_scale > 0.0) || !std::isfinite(row_scale)) {
    singular_ = true;
    return;
  }
  const double threshold = pivot_tol * row_scale;

  for (Eigen::Index k = 0; k < n; ++k) {
    Eigen::Index pivot = k;
    lu_.col(k).tail(n - k).cwiseAbs().maxCoeff(&pivot);
    pivot += k;
    if (std::abs(lu_(pivot, k)) < threshold) {
      singular_ = true;
      return;
    }
    if (pivot != k) {
      lu_.row(k).swap(lu_.row(pivot));
      std::swap(perm_[static_cast<std::size_t>(k)], perm_[static_cast<std::size_t>(pivot)]);
    }
    const double diag = lu_(k, k);
    for (Eigen::Index i = k + 1; i < n; ++i) {
      const double l = lu_(i, k) / diag;
      lu_(i, k) = l;
      lu_.row(i).tail(n - k - 1) -= l * lu_.row(k).tail(n - k - 1);
    }
  }
}

Eigen::VectorXd LuFactorization::solve(const Eigen::VectorXd& rhs) const {
  if (singular_) throw std::logic_error("lu: solve called on a singular factorization");
  const Eigen::Index n = lu_.rows();
  if (rhs.size() != n) throw std::invalid_argument("lu: right-hand side has wrong size");

  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double sum = rhs(perm_[static_cast<std::size_t>(i)]);
    for (Eigen::Index j = 0; j < i; ++j) sum -= lu_(i, j) * y(j);
    y(i) = sum;
  }
  for (Eigen::Index i = n - 1; i >= 0; --i) {
    double sum = y(i);
    for (Eigen::Index j = i + 1; j < n; ++j) sum -= lu_(i, j) * y(j);
    y(i) = sum / lu_(i, i);
  }
  return y;
}

std::optional<Eigen::VectorXd> lu_solve(const Eigen::MatrixXd& M, const Eigen::VectorXd& rhs,
                                        double pivot_tol) {
  LuFactorization lu(M, pivot_tol);
  if (lu.singular()) return std::nullopt;
  return lu.solve(rhs);
}

}  // namespace mlfg
