#include "mlfg/solvers.hpp"

#include "mlfg/linalg.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

namespace mlfg {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

}  // namespace

void NewtonConfig::check() const {
  if (!(beta > 0.0 && beta < 1.0)) throw std::invalid_argument("newton: beta must be in (0, 1)");
  if (!(sigma > 0.0 && sigma < 0.5)) throw std::invalid_argument("newton: sigma must be in (0, 0.5)");
  if (!(tol > 0.0)) throw std::invalid_argument("newton: tol must be positive");
  if (max_iter < 1) throw std::invalid_argument("newton: max_iter must be >= 1");
  if (!(pivot_tol > 0.0)) throw std::invalid_argument("newton: pivot_tol must be positive");
}

void SubgradConfig::check() const {
  if (!(delta0 > 0.0)) throw std::invalid_argument("subgradient: delta0 must be positive");
  if (!(gamma > 0.0 && gamma < 1.0)) throw std::invalid_argument("subgradient: gamma must be in (0, 1)");
  if (!(c2 > 0.0 && c2 <= c1 && c1 <= 1.0)) {
    throw std::invalid_argument("subgradient: need 0 < c2 <= c1 <= 1");
  }
  if (max_outer < 1 || max_inner < 1) throw std::invalid_argument("subgradient: caps must be >= 1");
  if (!(tol > 0.0)) throw std::invalid_argument("subgradient: tol must be positive");
}

std::string to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::Converged: return "converged";
    case SolveStatus::MaxIterations: return "max_iterations";
    case SolveStatus::NoDescent: return "no_descent";
    case SolveStatus::NonFinite: return "non_finite";
  }
  return "unknown";
}

MeritFunction game_merit(const Game& game, const Smoothing& s) {
  s.check();
  const auto n = static_cast<std::size_t>(game.n());
  return {
      [&game, s, n](const Vector& z) {
        return merit(game, PrimalDualPoint::from_stacked(z, n), s);
      },
      [&game, s, n](const Vector& z) {
        return merit_subgradient(game, PrimalDualPoint::from_stacked(z, n), s);
      },
  };
}

ArmijoResult armijo_search(const MeritFunction& merit, const Vector& z, const Vector& direction,
                           double beta, double sigma, int max_trials) {
  const double psi0 = merit.value(z);
  const double slope = sigma * direction.squaredNorm();
  ArmijoResult result;
  double t = 1.0;
  for (int l = 0; l <= max_trials; ++l) {
    ++result.trials;
    const double psi = merit.value(z + t * direction);
    // The strict test rejects steps too short to change Psi in floating point.
    if (std::isfinite(psi) && psi <= psi0 - t * slope && psi < psi0) {
      result.step = t;
      result.descent = true;
      return result;
    }
    t *= beta;
  }
  return result;
}

ArmijoResult armijo_search(const Game& game, const PrimalDualPoint& z, const Vector& direction,
                           const Smoothing& s, const NewtonConfig& cfg) {
  return armijo_search(game_merit(game, s), z.stacked(), direction, cfg.beta, cfg.sigma);
}

InnerResult newton_solve(const Game& game, const PrimalDualPoint& z0, const Smoothing& s,
                         const NewtonConfig& cfg) {
  cfg.check();
  s.check();
  const auto start = Clock::now();
  const auto n = static_cast<std::size_t>(game.n());
  const MeritFunction merit_fn = game_merit(game, s);

  InnerResult result;
  PrimalDualPoint z = z0;
  KktResidual F = kkt_residual(game, z, s);
  double psi = F.merit();
  result.initial_merit = psi;

  for (int k = 0; k < cfg.max_iter; ++k) {
    if (!std::isfinite(psi)) {
      result.status = SolveStatus::NonFinite;
      break;
    }
    if (psi <= cfg.tol && k > 0) break;

    const Matrix H = generalized_jacobian(game, z, s).assembled();
    const Vector Fz = F.stacked();
    const Vector zk = z.stacked();

    Vector z_next;
    double psi_next = psi;
    bool fallback = true;
    if (auto step = lu_solve(H, -Fz, cfg.pivot_tol)) {
      z_next = zk + *step;
      psi_next = merit_fn.value(z_next);
      fallback = !(std::isfinite(psi_next) && psi_next <= psi);
    }
    if (fallback) {
      // Singular H or a Newton step that does not decrease Psi: one
      // subgradient step, then Newton again.
      const Vector direction = -H.transpose() * Fz;
      const ArmijoResult search = armijo_search(merit_fn, zk, direction, cfg.beta, cfg.sigma);
      if (!search.descent) {
        result.status = SolveStatus::NoDescent;
        break;
      }
      z_next = zk + search.step * direction;
      psi_next = merit_fn.value(z_next);
      ++result.fallback_steps;
    }

    const double step_norm = (z_next - zk).norm();
    z = PrimalDualPoint::from_stacked(z_next, n);
    F = kkt_residual(game, z, s);
    psi = F.merit();
    ++result.iterations;
    result.history.push_back({psi, step_norm, elapsed_ms(start), fallback});
  }

  result.z = z;
  result.merit = psi;
  result.converged = std::isfinite(psi) && psi <= cfg.tol;
  if (result.converged) {
    result.status = SolveStatus::Converged;
  } else if (!std::isfinite(psi)) {
    result.status = SolveStatus::NonFinite;
  }
  return result;
}

SubgradientOutcome subgradient_minimize(const MeritFunction& merit, const Vector& z0,
                                        const SubgradConfig& cfg) {
  cfg.check();
  // Quasisecants are replaced by subgradients at the current point, i.e. the
  // quasisecant length is zero.
  constexpr double h = 0.0;
  constexpr int max_aggregation = 100;
  constexpr double sigma_min = 1e-12;
  constexpr double sigma_max = 1e12;

  const auto start = Clock::now();
  SubgradientOutcome out;
  Vector z = z0;
  double psi = merit.value(z);
  double delta = cfg.delta0;

  const auto sufficient = [&](double sigma, const Vector& d, double v_norm) {
    const double trial = merit.value(z + sigma * d);
    return std::isfinite(trial) && trial - psi <= -cfg.c2 * sigma * v_norm;
  };

  bool done = false;
  for (int k = 0; k < cfg.max_outer && !done; ++k) {
    for (int j = 0; j < cfg.max_inner; ++j) {
      if (!std::isfinite(psi)) {
        out.status = SolveStatus::NonFinite;
        done = true;
        break;
      }
      if (psi <= cfg.tol) {
        done = true;
        break;
      }

      // Descent direction by aggregating subgradients.
      Vector v = merit.subgradient(z);
      Vector v_tilde = v;
      Vector v_j = v;
      for (int i = 0; i < max_aggregation; ++i) {
        const Vector diff = v - v_tilde;
        const double denom = diff.squaredNorm();
        const double c = denom > 0.0 ? std::clamp(v_tilde.dot(-diff) / denom, 0.0, 1.0) : 1.0;
        const Vector v_bar = c * v + (1.0 - c) * v_tilde;
        v_j = v_bar;
        const double v_bar_norm = v_bar.norm();
        if (v_bar_norm <= delta) break;
        const Vector d = -v_bar / v_bar_norm;
        if (merit.value(z + h * d) - psi <= -cfg.c1 * h * v_bar_norm) break;
        v = merit.subgradient(z + h * d);
        v_tilde = v_bar;
      }

      const double v_norm = v_j.norm();
      if (v_norm <= delta) break;  // delta-stationary: tighten delta
      const Vector d = -v_j / v_norm;

      double sigma = 1.0;
      if (sufficient(sigma, d, v_norm)) {
        while (sigma < sigma_max && sufficient(2.0 * sigma, d, v_norm)) sigma *= 2.0;
      } else {
        while (sigma > sigma_min && !sufficient(sigma, d, v_norm)) sigma *= 0.5;
        if (!sufficient(sigma, d, v_norm)) break;  // no decrease along d at this delta
      }

      z += sigma * d;
      psi = merit.value(z);
      ++out.iterations;
      out.history.push_back({psi, sigma, elapsed_ms(start), false});
    }
    if (!done) delta *= cfg.gamma;
  }

  out.z = z;
  out.merit = psi;
  out.final_delta = delta;
  out.converged = std::isfinite(psi) && psi <= cfg.tol;
  if (out.converged) {
    out.status = SolveStatus::Converged;
  } else if (out.status != SolveStatus::NonFinite) {
    out.status = SolveStatus::MaxIterations;
  }
  return out;
}

InnerResult subgradient_solve(const Game& game, const PrimalDualPoint& z0, const Smoothing& s,
                              const SubgradConfig& cfg) {
  const MeritFunction merit_fn = game_merit(game, s);
  const SubgradientOutcome out = subgradient_minimize(merit_fn, z0.stacked(), cfg);
  InnerResult result;
  result.z = PrimalDualPoint::from_stacked(out.z, static_cast<std::size_t>(game.n()));
  result.merit = out.merit;
  result.iterations = out.iterations;
  result.converged = out.converged;
  result.status = out.status;
  result.initial_merit = merit_fn.value(z0.stacked());
  result.history = out.history;
  return result;
}

}  // namespace mlfg
