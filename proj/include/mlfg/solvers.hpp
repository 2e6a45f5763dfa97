#pragma once

#include "mlfg/kkt.hpp"

#include <functional>
#include <string>
#include <vector>

namespace mlfg {

struct NewtonConfig {
  double beta = 0.5;        // backtracking factor in (0, 1)
  double sigma = 1e-4;      // Armijo constant in (0, 0.5)
  double tol = 1e-10;       // stop once Psi_eps <= tol
  int max_iter = 200;
  double pivot_tol = 1e-12;  // relative to the largest row norm of H

  void check() const;
};

struct SubgradConfig {
  double delta0 = 1.0;  // initial stationarity tolerance
  double gamma = 0.5;   // delta_{k+1} = gamma * delta_k
  double c1 = 0.2;      // 0 < c2 <= c1 <= 1
  double c2 = 0.05;
  int max_outer = 50;
  int max_inner = 500;  // descent steps per outer iteration
  double tol = 1e-10;   // stop once Psi_eps <= tol

  void check() const;
};

enum class SolveStatus { Converged, MaxIterations, NoDescent, NonFinite };

std::string to_string(SolveStatus status);

/// One accepted step of an inner solver.
struct IterationRecord {
  double merit;      // Psi after the step
  double step_norm;  // ||z_{k+1} - z_k||
  double wall_ms;    // elapsed since the solve started
  bool fallback;     // subgradient step taken inside Newton
};

struct InnerResult {
  PrimalDualPoint z;
  double merit = 0.0;
  int iterations = 0;
  int fallback_steps = 0;
  bool converged = false;
  SolveStatus status = SolveStatus::MaxIterations;
  double initial_merit = 0.0;
  std::vector<IterationRecord> history;
};

/// A merit function over stacked points with one subgradient selection.
/// The game-free form lets the globalization pieces run on any merit.
struct MeritFunction {
  std::function<double(const Vector&)> value;
  std::function<Vector(const Vector&)> subgradient;
};

MeritFunction game_merit(const Game& game, const Smoothing& s);

struct ArmijoResult {
  double step = 0.0;
  bool descent = false;
  int trials = 0;
};

/// Largest t in {1, beta, beta^2, ...} (at most max_trials) with
/// Psi(z + t s) <= Psi(z) - t sigma ||s||^2.
ArmijoResult armijo_search(const MeritFunction& merit, const Vector& z, const Vector& direction,
                           double beta, double sigma, int max_trials = 60);
ArmijoResult armijo_search(const Game& game, const PrimalDualPoint& z, const Vector& direction,
                           const Smoothing& s, const NewtonConfig& cfg);

/// Globalized nonsmooth Newton method on F^eps(z) = 0. Every call takes at
/// least one step, so a warm start that already meets tol is still corrected.
InnerResult newton_solve(const Game& game, const PrimalDualPoint& z0, const Smoothing& s,
                         const NewtonConfig& cfg = {});

/// Subgradient method (quasisecant length h = 0) on a generic merit function.
struct SubgradientOutcome {
  Vector z;
  double merit = 0.0;
  int iterations = 0;
  bool converged = false;
  SolveStatus status = SolveStatus::MaxIterations;
  double final_delta = 0.0;
  std::vector<IterationRecord> history;
};

SubgradientOutcome subgradient_minimize(const MeritFunction& merit, const Vector& z0,
                                        const SubgradConfig& cfg);

InnerResult subgradient_solve(const Game& game, const PrimalDualPoint& z0, const Smoothing& s,
                              const SubgradConfig& cfg = {});

}  // namespace mlfg
