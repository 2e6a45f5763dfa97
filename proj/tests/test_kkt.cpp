#include "mlfg/kkt.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

using namespace mlfg;
using namespace mlfg::testing;

namespace {

Vector stacked_residual(const Game& game, const Vector& z, const Smoothing& s) {
  return kkt_residual(game, PrimalDualPoint::from_stacked(z, static_cast<std::size_t>(game.n())), s)
      .stacked();
}

// Random z away from the min{lambda, -g} switching surface.
PrimalDualPoint random_smooth_point(std::mt19937_64& rng, const Game& game) {
  for (;;) {
    PrimalDualPoint z{uniform_vector(rng, game.n(), -2, 2), uniform_vector(rng, game.m_bar(), -2, 8)};
    const Vector gap = z.lambda + game.constraints(z.x);
    if (gap.cwiseAbs().minCoeff() > 1e-3) return z;
  }
}

}  // namespace

TEST(KktResidual, DatasetOneComplementarityBlock) {
  const Game game(builtin_dataset(1));
  const PrimalDualPoint z{Vector::Ones(4), Vector::Zero(6)};
  const Vector g = game.constraints(z.x);
  // g_1 = A_1'(1, 1) + b_1 by hand.
  EXPECT_NEAR(g(0), 1.6 + 2.6 + 1.6, 1e-14);
  EXPECT_NEAR(g(1), 0.8 + 2.2 + 1.2, 1e-14);
  EXPECT_NEAR(g(2), 1.3 + 1.7 + 0.4, 1e-14);
  const KktResidual F = kkt_residual(game, z, Smoothing{0.5});
  EXPECT_NEAR(F.F2(0), -5.8, 1e-14);
  EXPECT_NEAR(F.F2(1), -4.2, 1e-14);
  EXPECT_NEAR(F.F2(2), -3.4, 1e-14);
}

TEST(KktResidual, StationarityBlockIsGradientPlusMultipliers) {
  std::mt19937_64 rng(1);
  const Game game(builtin_dataset(2));
  const PrimalDualPoint z{uniform_vector(rng, 6, -2, 2), uniform_vector(rng, 9, 0, 1)};
  const Smoothing s{0.3};
  const KktResidual F = kkt_residual(game, z, s);
  EXPECT_LE((F.F1 - pseudo_gradient_smoothed(game, z.x, s) - game.G() * z.lambda).norm(), 1e-12);
}

TEST(KktResidual, PureQuadraticRoot) {
  GameSpec spec = without_follower_weight(builtin_dataset(1));
  spec.leaders[0].c = (Vector(2) << 0.3, -0.2).finished();
  spec.leaders[1].c = (Vector(2) << -0.1, 0.4).finished();
  for (auto& l : spec.leaders) l.b.setConstant(-100.0);
  const Game game(spec);
  const Vector x = -game.Q().ldlt().solve(game.c());
  const KktResidual F = kkt_residual(game, {x, Vector::Zero(6)}, Smoothing{0.5});
  EXPECT_LE(F.F1.norm(), 1e-13);
  EXPECT_LE(F.F2.norm(), 0.0);
}

TEST(Merit, HalfSquaredNorm) {
  std::mt19937_64 rng(2);
  const Game game(builtin_dataset(1));
  for (int trial = 0; trial < 20; ++trial) {
    const PrimalDualPoint z{uniform_vector(rng, 4, -2, 2), uniform_vector(rng, 6, -1, 1)};
    const Smoothing s{0.7};
    const double psi = merit(game, z, s);
    EXPECT_NEAR(psi, 0.5 * kkt_residual(game, z, s).stacked().squaredNorm(), 1e-12 * (1 + psi));
    EXPECT_GT(psi, 0.0);
  }
}

TEST(Jacobian, InactivePointSelectsMultiplierBranch) {
  const Game game(builtin_dataset(1));
  const PrimalDualPoint z{Vector::Constant(4, -5.0), Vector::Zero(6)};
  ASSERT_LT(game.constraints(z.x).maxCoeff(), 0.0);
  const GeneralizedJacobian H = generalized_jacobian(game, z, Smoothing{0.5});
  EXPECT_TRUE(H.C.isZero());
  EXPECT_EQ(H.D, Matrix::Identity(6, 6));
  for (MinBranch b : H.branches) EXPECT_EQ(b, MinBranch::Multiplier);
}

TEST(Jacobian, ActiveConstraintRowsUseConstraintGradient) {
  const Game game(builtin_dataset(1));
  const PrimalDualPoint z{Vector::Constant(4, -5.0), Vector::Constant(6, 20.0)};
  const GeneralizedJacobian H = generalized_jacobian(game, z, Smoothing{0.5});
  EXPECT_EQ(H.C, -game.G().transpose());
  EXPECT_TRUE(H.D.isZero());
}

TEST(Jacobian, TieSelectsMultiplierBranch) {
  const Game game(builtin_dataset(1));
  PrimalDualPoint z{Vector::Constant(4, -5.0), Vector::Zero(6)};
  z.lambda = -game.constraints(z.x);
  const GeneralizedJacobian H = generalized_jacobian(game, z, Smoothing{0.5});
  EXPECT_TRUE(H.C.isZero());
  EXPECT_EQ(H.D, Matrix::Identity(6, 6));
}

TEST(Jacobian, NoFollowerWeightIsBlockTriangular) {
  const Game game(without_follower_weight(builtin_dataset(2)));
  const PrimalDualPoint z{Vector::Constant(6, -5.0), Vector::Zero(9)};
  const Matrix H = generalized_jacobian(game, z, Smoothing{0.5}).assembled();
  Matrix expected = Matrix::Zero(15, 15);
  expected.topLeftCorner(6, 6) = game.Q();
  expected.topRightCorner(6, 9) = game.G();
  expected.bottomRightCorner(9, 9).setIdentity();
  EXPECT_EQ(H, expected);
  EXPECT_GT(std::abs(H.determinant()), 0.0);
}

TEST(Jacobian, MatchesFiniteDifferencesAtSmoothPoints) {
  std::mt19937_64 rng(3);
  for (int k : {1, 2}) {
    const Game game(builtin_dataset(k));
    for (int trial = 0; trial < 500; ++trial) {
      const PrimalDualPoint z = random_smooth_point(rng, game);
      const Smoothing s{std::uniform_real_distribution<double>(0.05, 1.6)(rng)};
      const Matrix H = generalized_jacobian(game, z, s).assembled();
      const Matrix fd = central_jacobian(
          [&](const Vector& v) { return stacked_residual(game, v, s); }, z.stacked(), 1e-6);
      EXPECT_LE((H - fd).norm() / fd.norm(), 1e-5);
    }
  }
}

TEST(Jacobian, CurvatureBlockSymmetricPositiveDefinite) {
  std::mt19937_64 rng(4);
  for (int k : {1, 2}) {
    const Game game(builtin_dataset(k));
    const double mu = min_eigenvalue(game.Q());
    for (int trial = 0; trial < 100; ++trial) {
      const PrimalDualPoint z{uniform_vector(rng, game.n(), -3, 3), Vector::Zero(game.m_bar())};
      const Matrix A = generalized_jacobian(game, z, Smoothing{0.2}).A;
      EXPECT_LE((A - A.transpose()).cwiseAbs().maxCoeff(), 1e-12);
      const Vector v = uniform_vector(rng, game.n(), -1, 1);
      EXPECT_GE(v.dot(A * v), (mu - 1e-10) * v.squaredNorm());
    }
  }
}

TEST(Jacobian, EveryRowHasOneBranch) {
  std::mt19937_64 rng(5);
  const Game game(builtin_dataset(2));
  const PrimalDualPoint z{uniform_vector(rng, 6, -2, 2), uniform_vector(rng, 9, -2, 8)};
  const GeneralizedJacobian H = generalized_jacobian(game, z, Smoothing{0.4});
  ASSERT_EQ(H.branches.size(), 9u);
  for (std::size_t i = 0; i < 9; ++i) {
    const auto row = static_cast<Eigen::Index>(i);
    const bool constraint = H.branches[i] == MinBranch::Constraint;
    EXPECT_EQ(H.C.row(row).isZero(), !constraint);
    EXPECT_EQ(H.D(row, row), constraint ? 0.0 : 1.0);
  }
}

TEST(MeritSubgradient, ZeroAtRootAndGradientWhereSmooth) {
  GameSpec spec = without_follower_weight(builtin_dataset(1));
  for (auto& l : spec.leaders) l.b.setConstant(-1.0);
  const Game game(spec);
  const PrimalDualPoint root{Vector::Zero(4), Vector::Zero(6)};
  EXPECT_TRUE(merit_subgradient(game, root, Smoothing{0.5}).isZero());

  std::mt19937_64 rng(6);
  const Game full(builtin_dataset(1));
  for (int trial = 0; trial < 50; ++trial) {
    const PrimalDualPoint z = random_smooth_point(rng, full);
    const Smoothing s{0.6};
    const Vector fd = central_gradient(
        [&](const Vector& v) { return merit(full, PrimalDualPoint::from_stacked(v, 4), s); },
        z.stacked(), 1e-6);
    EXPECT_LE((merit_subgradient(full, z, s) - fd).norm() / std::max(1.0, fd.norm()), 1e-5);
  }
}

TEST(MeritSubgradient, IsHTransposeF) {
  std::mt19937_64 rng(7);
  const Game game(builtin_dataset(2));
  const PrimalDualPoint z{uniform_vector(rng, 6, -2, 2), uniform_vector(rng, 9, -2, 8)};
  const Smoothing s{0.9};
  const Vector expected = generalized_jacobian(game, z, s).assembled().transpose() *
                          kkt_residual(game, z, s).stacked();
  EXPECT_LE((merit_subgradient(game, z, s) - expected).norm(), 1e-12 * expected.norm());
}
