#pragma once

#include "mlfg/smoothing.hpp"

#include <vector>

namespace mlfg {

/// Joint KKT residual of NEP(eps):
///   F1 = pseudo-gradient + G lambda          (stationarity, n entries)
///   F2 = min{lambda, -g(x)}                  (complementarity, m_bar entries)
struct KktResidual {
  Vector F1;
  Vector F2;

  Vector stacked() const;
  double merit() const { return 0.5 * (F1.squaredNorm() + F2.squaredNorm()); }
};

/// Which piece of min{lambda_i, -g_i} a Jacobian row was taken from.
enum class MinBranch { Multiplier, Constraint };

/// One element of the Clarke generalized Jacobian of F^eps:
///   H = [ A  B ]   A = Q + 0.5 A_diff' diag(a .* phi_tilde'') A_diff
///       [ C  D ]   B = diag(A_1..A_N); C, D select the active piece of the min.
struct GeneralizedJacobian {
  Matrix A;
  Matrix B;
  Matrix C;
  Matrix D;
  std::vector<MinBranch> branches;

  Matrix assembled() const;
};

KktResidual kkt_residual(const Game& game, const PrimalDualPoint& z, const Smoothing& s);

/// Psi_eps(z) = 0.5 ||F^eps(z)||^2.
double merit(const Game& game, const PrimalDualPoint& z, const Smoothing& s);

/// Ties lambda_i == -g_i select the multiplier branch (C row 0, D entry 1).
GeneralizedJacobian generalized_jacobian(const Game& game, const PrimalDualPoint& z,
                                         const Smoothing& s);

/// H'F for the selected H; the negation is a descent candidate for Psi_eps.
Vector merit_subgradient(const Game& game, const PrimalDualPoint& z, const Smoothing& s);

}  // namespace mlfg
