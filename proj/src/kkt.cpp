#include "mlfg/kkt.hpp"

#include <stdexcept>

namespace mlfg {

namespace {

void check_point(const Game& game, const PrimalDualPoint& z) {
  if (z.x.size() != game.n() || z.lambda.size() != game.m_bar()) {
    throw std::invalid_argument("primal-dual point has wrong dimensions");
  }
}

}  // namespace

Vector KktResidual::stacked() const {
  Vector F(F1.size() + F2.size());
  F << F1, F2;
  return F;
}

Matrix GeneralizedJacobian::assembled() const {
  const Eigen::Index n = A.rows();
  const Eigen::Index k = D.rows();
  Matrix H(n + k, n + k);
  H << A, B, C, D;
  return H;
}

KktResidual kkt_residual(const Game& game, const PrimalDualPoint& z, const Smoothing& s) {
  check_point(game, z);
  KktResidual r;
  r.F1 = pseudo_gradient_smoothed(game, z.x, s) + game.G() * z.lambda;
  r.F2 = z.lambda.cwiseMin(-game.constraints(z.x));
  return r;
}

double merit(const Game& game, const PrimalDualPoint& z, const Smoothing& s) {
  return kkt_residual(game, z, s).merit();
}

GeneralizedJacobian generalized_jacobian(const Game& game, const PrimalDualPoint& z,
                                         const Smoothing& s) {
  check_point(game, z);
  s.check();
  const Eigen::Index n = game.n();
  const Eigen::Index k = game.m_bar();
  const Matrix& A_diff = game.maps().A_diff;

  // Linear constraints: the Hessian of lambda'g vanishes, so only the
  // smoothing curvature adds to Q.
  const Vector t = A_diff * z.x;
  const Vector curvature =
      game.a().cwiseProduct(t.unaryExpr([&](double v) { return phi_tilde_d2(v, s.eps, s.p); }));

  GeneralizedJacobian H;
  H.A = game.Q() + 0.5 * A_diff.transpose() * curvature.asDiagonal() * A_diff;
  H.B = game.G();
  H.C = Matrix::Zero(k, n);
  H.D = Matrix::Zero(k, k);
  H.branches.resize(static_cast<std::size_t>(k));

  const Vector minus_g = -game.constraints(z.x);
  for (Eigen::Index i = 0; i < k; ++i) {
    if (z.lambda(i) > minus_g(i)) {
      H.C.row(i) = -game.G().col(i).transpose();
      H.branches[static_cast<std::size_t>(i)] = MinBranch::Constraint;
    } else {
      H.D(i, i) = 1.0;
      H.branches[static_cast<std::size_t>(i)] = MinBranch::Multiplier;
    }
  }
  return H;
}

Vector merit_subgradient(const Game& game, const PrimalDualPoint& z, const Smoothing& s) {
  return generalized_jacobian(game, z, s).assembled().transpose() *
         kkt_residual(game, z, s).stacked();
}

}  // namespace mlfg
