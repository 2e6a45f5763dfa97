#include "mlfg/homotopy.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace mlfg;
using namespace mlfg::testing;

namespace {

PrimalDualPoint zero_point(const Game& game) {
  return {Vector::Zero(game.n()), Vector::Zero(game.m_bar())};
}

Vector solve_at(const Game& game, double eps) {
  NewtonConfig cfg;
  cfg.tol = 1e-28;  // polish until the merit hits round-off
  cfg.max_iter = 50;
  InnerResult r = newton_solve(game, zero_point(game), Smoothing{eps}, cfg);
  return r.z.x;
}

}  // namespace

TEST(HomotopyConfig, RejectsOutOfRangeParameters) {
  HomotopyConfig cfg;
  cfg.eps0 = 2.0;
  EXPECT_THROW(cfg.check(), std::invalid_argument);
  cfg = {};
  cfg.gamma = 1.0;
  EXPECT_THROW(cfg.check(), std::invalid_argument);
  cfg = {};
  cfg.eps_min = 0.0;
  EXPECT_THROW(cfg.check(), std::invalid_argument);
  cfg = {};
  cfg.p = 3;
  EXPECT_THROW(cfg.check(), std::invalid_argument);
  EXPECT_THROW(parse_inner_method("bfgs"), std::invalid_argument);
}

TEST(EpsSchedule, ExactPowers) {
  HomotopyConfig cfg;
  const std::vector<double> eps = eps_schedule(cfg);
  ASSERT_EQ(eps.size(), 22u);
  double expected = 1.6;
  for (double e : eps) {
    EXPECT_EQ(e, expected);  // powers of 1/2 are exact
    expected *= 0.5;
  }
  EXPECT_LE(eps.back(), cfg.eps_min);
  EXPECT_GT(eps[eps.size() - 2], cfg.eps_min);

  cfg.eps0 = 1.3;
  cfg.gamma = 0.3;
  cfg.eps_min = 1e-4;
  const std::vector<double> other = eps_schedule(cfg);
  for (std::size_t i = 0; i < other.size(); ++i) {
    double ref = 1.3;
    for (std::size_t k = 0; k < i; ++k) ref *= 0.3;
    EXPECT_NEAR(other[i], ref, 4e-16 * ref * (i + 1));
  }
}

TEST(RandomInitialPoint, RangeAndDeterminism) {
  const Game game(builtin_dataset(2));
  const PrimalDualPoint z = random_initial_point(game, 5);
  EXPECT_EQ(z.x.size(), 6);
  EXPECT_EQ(z.lambda.size(), 9);
  EXPECT_LE(z.x.cwiseAbs().maxCoeff(), 1.0);
  EXPECT_GE(z.lambda.minCoeff(), 0.0);
  EXPECT_LE(z.lambda.maxCoeff(), 1.0);
  EXPECT_EQ(random_initial_point(game, 5).x, z.x);
  EXPECT_NE(random_initial_point(game, 6).x, z.x);
}

TEST(Homotopy, NoFollowerWeightIsConstant) {
  GameSpec spec = without_follower_weight(builtin_dataset(1));
  spec.leaders[0].c = (Vector(2) << 0.4, -0.7).finished();
  for (auto& l : spec.leaders) l.b.setConstant(-50.0);
  const Game game(spec);
  EXPECT_TRUE(taylor_direction(game, Vector::Ones(4), Smoothing{0.3}).isZero());
  const HomotopyTrace trace = homotopy_solve(game, zero_point(game));
  ASSERT_TRUE(trace.completed);
  const Vector& x0 = trace.stages.front().z_star.x;
  for (std::size_t i = 1; i < trace.stages.size(); ++i) {
    const StageRecord& st = trace.stages[i];
    EXPECT_EQ(st.predictor_norm, 0.0);
    EXPECT_EQ(st.inner.iterations, 1);
    EXPECT_LE((st.z_star.x - x0).norm(), 1e-12);
  }
}

TEST(Homotopy, DatasetOneTrace) {
  const Game game(builtin_dataset(1));
  const HomotopyTrace trace = homotopy_solve(game, zero_point(game));
  ASSERT_TRUE(trace.completed);
  ASSERT_EQ(trace.stages.size(), 22u);
  EXPECT_EQ(trace.stages[0].eps, 1.6);
  EXPECT_EQ(trace.stages[1].eps, 0.8);
  EXPECT_EQ(trace.stages[2].eps, 0.4);
  const Vector& x_ref = trace.final_point().x;
  double prev = INFINITY;
  for (std::size_t i = 0; i + 1 < trace.stages.size(); ++i) {
    const StageRecord& st = trace.stages[i];
    EXPECT_TRUE(st.inner.converged);
    EXPECT_LE(st.inner.merit, 1e-10);
    const double err = (st.z_star.x - x_ref).norm();
    EXPECT_LT(err, prev) << "stage " << i;
    prev = err;
  }
}

TEST(Homotopy, StopsAtFirstFailedStage) {
  const Game game(builtin_dataset(1));
  HomotopyConfig cfg;
  cfg.newton.max_iter = 1;
  const HomotopyTrace trace = homotopy_solve(game, {Vector::Constant(4, 10.0), Vector::Zero(6)}, cfg);
  EXPECT_FALSE(trace.completed);
  EXPECT_FALSE(trace.stages.back().inner.converged);
  EXPECT_FALSE(trace.message.empty());
}

TEST(TaylorDirection, MatchesFiniteDifferenceOfSolutions) {
  for (int k : {1, 2}) {
    const Game game(builtin_dataset(k));
    const double eps = 0.8, delta = 1e-3;
    const Vector fd = (solve_at(game, eps + delta) - solve_at(game, eps - delta)) / (2 * delta);
    const Vector d = taylor_direction(game, solve_at(game, eps), Smoothing{eps});
    EXPECT_LE((d - fd).norm() / fd.norm(), 1e-2) << "dataset " << k;
  }
}

TEST(TaylorDirection, EpsVariantDiffers) {
  const Game game(builtin_dataset(1));
  const Vector x = solve_at(game, 0.8);
  const Vector d = taylor_direction(game, x, Smoothing{0.8});
  const Vector v = taylor_direction_eps_variant(game, x, Smoothing{0.8});
  EXPECT_GT((d - v).norm(), 1e-3 * d.norm());
}

TEST(TaylorDirection, SystemMatrixIsPositiveDefinite) {
  std::mt19937_64 rng(11);
  for (int k : {1, 2}) {
    const Game game(builtin_dataset(k));
    const double mu = min_eigenvalue(game.Q());
    for (int trial = 0; trial < 50; ++trial) {
      const Vector x = uniform_vector(rng, game.n(), -3, 3);
      const Smoothing s{std::uniform_real_distribution<double>(1e-3, 1.6)(rng)};
      // E is the x-block of the generalized Jacobian.
      const Matrix E = generalized_jacobian(game, {x, Vector::Zero(game.m_bar())}, s).A;
      EXPECT_GE(min_eigenvalue(E), mu - 1e-10);
      const Vector d = taylor_direction(game, x, s);
      EXPECT_TRUE(d.allFinite());
    }
  }
}

TEST(Homotopy, SmoothedResponseWithinEpsAlongTrace) {
  for (int k : {1, 2}) {
    const Game game(builtin_dataset(k));
    const HomotopyTrace trace = homotopy_solve(game, zero_point(game));
    ASSERT_TRUE(trace.completed);
    for (const StageRecord& st : trace.stages) {
      const Vector gap = best_response_smoothed(game, st.z_star.x, Smoothing{st.eps}) -
                         best_response_exact(game, st.z_star.x);
      EXPECT_LE(gap.lpNorm<Eigen::Infinity>(), st.eps);
    }
  }
}

TEST(Homotopy, PredictorImprovesWarmStarts) {
  for (int k : {1, 2}) {
    const Game game(builtin_dataset(k));
    const HomotopyTrace trace = homotopy_solve(game, zero_point(game));
    ASSERT_TRUE(trace.completed);
    int better = 0;
    for (std::size_t i = 1; i < trace.stages.size(); ++i) {
      const StageRecord& st = trace.stages[i];
      if (st.warm_start_merit <= st.plain_start_merit) ++better;
    }
    EXPECT_GE(better, static_cast<int>(0.8 * static_cast<double>(trace.stages.size() - 1)));
  }
}

TEST(Homotopy, TaylorOffUsesPreviousSolution) {
  const Game game(builtin_dataset(2));
  HomotopyConfig cfg;
  cfg.taylor = false;
  cfg.eps_min = 0.05;
  const HomotopyTrace trace = homotopy_solve(game, zero_point(game), cfg);
  ASSERT_TRUE(trace.completed);
  for (std::size_t i = 1; i < trace.stages.size(); ++i) {
    EXPECT_EQ(trace.stages[i].warm_start.x, trace.stages[i - 1].z_star.x);
    EXPECT_EQ(trace.stages[i].warm_start_merit, trace.stages[i].plain_start_merit);
  }
}

TEST(Homotopy, SubgradientInnerSolverReachesSameLimit) {
  const Game game(builtin_dataset(1));
  HomotopyConfig cfg;
  cfg.eps_min = 0.1;
  const HomotopyTrace newton = homotopy_solve(game, zero_point(game), cfg);
  cfg.method = InnerMethod::Subgradient;
  const HomotopyTrace sub = homotopy_solve(game, zero_point(game), cfg);
  ASSERT_TRUE(newton.completed);
  ASSERT_TRUE(sub.completed);
  EXPECT_LE((newton.final_point().x - sub.final_point().x).norm(), 1e-4);
}
