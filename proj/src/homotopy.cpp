#include "mlfg/homotopy.hpp"

#include "mlfg/linalg.hpp"

#include <chrono>
#include <cmath>
#include <random>
#include <stdexcept>

namespace mlfg {

std::string to_string(InnerMethod method) {
  return method == InnerMethod::Newton ? "newton" : "subgradient";
}

InnerMethod parse_inner_method(const std::string& name) {
  if (name == "newton") return InnerMethod::Newton;
  if (name == "subgradient") return InnerMethod::Subgradient;
  throw std::invalid_argument("unknown inner method: " + name);
}

void HomotopyConfig::check() const {
  if (!(eps0 > 1.0 && eps0 < 2.0)) throw std::invalid_argument("homotopy: eps0 must be in (1, 2)");
  if (!(gamma > 0.0 && gamma < 1.0)) throw std::invalid_argument("homotopy: gamma must be in (0, 1)");
  if (!(eps_min > 0.0)) throw std::invalid_argument("homotopy: eps_min must be positive");
  Smoothing{eps0, p}.check();
  newton.check();
  subgradient.check();
}

PrimalDualPoint random_initial_point(const Game& game, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  Vector z(game.n() + game.m_bar());
  for (Eigen::Index i = 0; i < z.size(); ++i) z(i) = unif(rng);
  PrimalDualPoint point = PrimalDualPoint::from_stacked(z, static_cast<std::size_t>(game.n()));
  point.lambda = point.lambda.cwiseMax(0.0);
  return point;
}

namespace {

Matrix taylor_matrix(const Game& game, const Vector& t, const Smoothing& s) {
  const Matrix& A_diff = game.maps().A_diff;
  const Vector curvature =
      game.a().cwiseProduct(t.unaryExpr([&](double v) { return phi_tilde_d2(v, s.eps, s.p); }));
  return game.Q() + 0.5 * A_diff.transpose() * curvature.asDiagonal() * A_diff;
}

Vector solve_spd(const Matrix& E, const Vector& h) {
  // E = Q + PSD term, so it is never singular for a valid game.
  auto d = lu_solve(E, h);
  if (!d) throw std::runtime_error("taylor system unexpectedly singular");
  return *d;
}

}  // namespace

Vector taylor_direction(const Game& game, const Vector& x, const Smoothing& s) {
  s.check();
  const Vector t = game.maps().A_diff * x;
  const Vector mixed = game.a().cwiseProduct(
      t.unaryExpr([&](double v) { return phi_tilde_dt_deps(v, s.eps, s.p); }));
  const Vector h = -0.5 * game.maps().A_diff.transpose() * mixed;
  return solve_spd(taylor_matrix(game, t, s), h);
}

Vector taylor_direction_eps_variant(const Game& game, const Vector& x, const Smoothing& s) {
  s.check();
  const Vector t = game.maps().A_diff * x;
  const Vector first = game.a().cwiseProduct(
      t.unaryExpr([&](double v) { return phi_tilde_deps(v, s.eps, s.p); }));
  const Vector h = 0.5 * game.maps().A_diff.transpose() * first;
  return solve_spd(taylor_matrix(game, t, s), h);
}

std::vector<double> eps_schedule(const HomotopyConfig& cfg) {
  std::vector<double> schedule;
  for (int i = 0;; ++i) {
    const double eps = cfg.eps0 * std::pow(cfg.gamma, i);
    schedule.push_back(eps);
    if (eps <= cfg.eps_min) break;
  }
  return schedule;
}

HomotopyTrace homotopy_solve(const Game& game, const PrimalDualPoint& z0,
                             const HomotopyConfig& cfg) {
  cfg.check();
  using Clock = std::chrono::steady_clock;
  const std::vector<double> schedule = eps_schedule(cfg);

  HomotopyTrace trace;
  PrimalDualPoint warm = z0;
  double predictor_norm = 0.0;
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    const auto start = Clock::now();
    const Smoothing s{schedule[i], cfg.p};

    StageRecord stage;
    stage.index = static_cast<int>(i);
    stage.eps = s.eps;
    stage.warm_start = warm;
    stage.predictor_norm = predictor_norm;
    stage.warm_start_merit = merit(game, warm, s);
    stage.plain_start_merit =
        i == 0 ? stage.warm_start_merit : merit(game, trace.stages.back().z_star, s);

    stage.inner = cfg.method == InnerMethod::Newton ? newton_solve(game, warm, s, cfg.newton)
                                                    : subgradient_solve(game, warm, s, cfg.subgradient);
    stage.z_star = stage.inner.z;
    stage.wall_ms = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
    const bool ok = stage.inner.converged;
    trace.stages.push_back(std::move(stage));
    if (!ok) {
      trace.message = "inner solve at eps=" + std::to_string(s.eps) +
                      " did not converge (" + to_string(trace.stages.back().inner.status) + ")";
      return trace;
    }

    if (i + 1 < schedule.size()) {
      const PrimalDualPoint& z_star = trace.stages.back().z_star;
      warm = z_star;
      predictor_norm = 0.0;
      if (cfg.taylor) {
        // Forward evaluation: derivative taken at the next smoothing parameter.
        const double eps_next = schedule[i + 1];
        const Vector d = taylor_direction(game, z_star.x, Smoothing{eps_next, cfg.p});
        warm.x = z_star.x - (s.eps - eps_next) * d;
        predictor_norm = d.norm();
      }
    }
  }
  trace.completed = true;
  return trace;
}

}  // namespace mlfg
