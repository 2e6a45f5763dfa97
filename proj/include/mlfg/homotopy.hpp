#pragma once

#include "mlfg/solvers.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace mlfg {

enum class InnerMethod { Newton, Subgradient };

std::string to_string(InnerMethod method);
InnerMethod parse_inner_method(const std::string& name);

struct HomotopyConfig {
  double eps0 = 1.6;      // in (1, 2)
  double gamma = 0.5;     // eps_{i+1} = gamma * eps_i
  double eps_min = 1e-6;  // last stage is the first eps_i <= eps_min
  bool taylor = true;
  int p = 2;
  InnerMethod method = InnerMethod::Newton;
  NewtonConfig newton;
  SubgradConfig subgradient;

  void check() const;
};

struct StageRecord {
  int index = 0;
  double eps = 0.0;
  PrimalDualPoint warm_start;
  PrimalDualPoint z_star;
  InnerResult inner;
  double predictor_norm = 0.0;     // ||d^i|| used to build this stage's warm start
  double warm_start_merit = 0.0;   // Psi_eps at the warm start actually used
  double plain_start_merit = 0.0;  // Psi_eps at the previous solution, unpredicted
  double wall_ms = 0.0;
};

struct HomotopyTrace {
  std::vector<StageRecord> stages;
  bool completed = false;  // false when an inner solve failed and continuation stopped
  std::string message;

  const PrimalDualPoint& final_point() const { return stages.back().z_star; }
  double final_eps() const { return stages.back().eps; }
};

/// Start point with every entry of (x, lambda) uniform in [-1, 1], then
/// lambda clamped to be nonnegative. Deterministic for a given seed.
PrimalDualPoint random_initial_point(const Game& game, std::uint64_t seed);

/// Solves E d = h with E = Q + 0.5 A_diff' diag(a .* Phi_tt) A_diff and
/// h = -0.5 A_diff' (a .* Phi_t,eps), both evaluated at (x, eps). d estimates dx*/d eps.
Vector taylor_direction(const Game& game, const Vector& x, const Smoothing& s);

/// Same system with the right-hand side built from d Phi/d eps instead of the
/// mixed partial; kept for comparison only.
Vector taylor_direction_eps_variant(const Game& game, const Vector& x, const Smoothing& s);

/// The schedule eps_i = eps0 * gamma^i for i = 0..K with K the first index
/// such that eps_K <= eps_min.
std::vector<double> eps_schedule(const HomotopyConfig& cfg);

/// Continuation over the eps schedule with (optional) first-order Taylor
/// warm starts: x0(eps_{i+1}) = x*(eps_i) - (eps_i - eps_{i+1}) d^i.
HomotopyTrace homotopy_solve(const Game& game, const PrimalDualPoint& z0,
                             const HomotopyConfig& cfg = {});

}  // namespace mlfg
