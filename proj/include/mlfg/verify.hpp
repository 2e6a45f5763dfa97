#pragma once

#include "mlfg/smoothing.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace mlfg {

/// Result of minimizing leader nu's nonsmooth objective with rivals fixed.
struct OracleResult {
  bool feasible = false;
  Vector x_nu;
  Vector s;          // epigraph variables, s = max{Qy^{-1}B'x, L'x} at the optimum
  double objective = 0.0;  // theta_nu(x_nu*, x_{-nu})
  int candidates = 0;      // KKT-consistent active sets found
};

/// Global best response of leader nu (0-based) against the rivals in x (the
/// nu block of x is ignored). The epigraph QP
///   min 0.5 x_nu'Q_nu x_nu + c_nu'x_nu + a's
///   s.t. s >= Qy^{-1}B'x, s >= L'x, A_nu'x_nu + b_nu <= 0
/// is solved exactly by enumerating active sets.
OracleResult best_response_qp_oracle(const Game& game, std::size_t nu, const Vector& x);

struct NashCheck {
  std::vector<double> gaps;        // theta_nu(x) - oracle optimum, per leader
  std::vector<OracleResult> responses;
  double max_gap = 0.0;
  double tol = 0.0;
  bool certified = false;
};

NashCheck verify_nash(const Game& game, const Vector& x, double tol);

enum class GammaAssignment {
  BranchConsistent,  // Gamma1 = a/2 (1 - xi), Gamma2 = a/2 (1 + xi)
  AsPrinted,         // Gamma1 = a/2 (1 + xi), Gamma2 = a/2 (1 - xi)
};

/// Maximum violation of each condition group of the S-stationarity system.
struct SStationarityResiduals {
  double stationarity = 0.0;          // (a), x and y blocks, all leaders
  double feasibility = 0.0;           // (b) max g_+
  double multiplier_sign = 0.0;       // (c) max (-lambda)_+
  double complementary_slack = 0.0;   // (d) max |g_i lambda_i|
  double complementarity = 0.0;       // (e) max |min{G1, G2}|
  double gamma1_slack = 0.0;          // (f) max |G1_i Gamma1_i|
  double gamma2_slack = 0.0;          // (g) max |G2_i Gamma2_i|
  double biactive_sign = 0.0;         // (h) max (-Gamma)_+ over biactive i

  double max() const;
};

struct SStationarityCertificate {
  Vector xi_bar;
  Vector gamma1;
  Vector gamma2;
  std::vector<bool> biactive;
  SStationarityResiduals residuals;
  double tol = 0.0;
  bool certified = false;
};

/// Builds (xi_bar, Gamma1, Gamma2) at the limit candidate (x, lambda) from the
/// smoothed derivative phi_tilde'_eps at eps = eps_final: components with
/// |phi_tilde'| >= 1 - 10 eps_final are snapped to +-1, the rest keep their
/// value (zero exactly at a kink). Then evaluates every condition group.
SStationarityCertificate s_stationarity_certificate(
    const Game& game, const Vector& x, const Vector& lambda, double eps_final, double tol,
    int p = 2, GammaAssignment assignment = GammaAssignment::BranchConsistent);

/// Multipliers for a bare candidate x: least squares on the stationarity
/// block over the constraints active within active_tol, zero elsewhere.
Vector estimate_multipliers(const Game& game, const Vector& x, double eps_final, int p = 2,
                            double active_tol = 1e-8);

struct Certificate {
  NashCheck nash;
  SStationarityCertificate s_stationarity;

  bool certified() const { return nash.certified && s_stationarity.certified; }
};

/// Tolerances a candidate z from a solve stopped at eps_final with
/// Psi <= inner_tol can be held to. Each is its floor unless the smoothing and
/// solver errors at z are larger:
///   nash:   ||a||_1 eps_final + inner_tol / mu
///   s-stat: r + ||0.5 A_diff' (a .* (xi_bar - phi_tilde'))||_inf,
///           r = ||F^eps_final(z)||_inf max{1, ||g||_inf, ||lambda||_inf}
struct CertificationTolerance {
  double nash;
  double s_stationarity;
};

CertificationTolerance certification_tolerance(const Game& game, const PrimalDualPoint& z,
                                               double eps_final, double inner_tol,
                                               double nash_floor = 1e-5,
                                               double s_stationarity_floor = 1e-6, int p = 2);

Certificate certify(const Game& game, const PrimalDualPoint& z, double eps_final,
                    const CertificationTolerance& tol, int p = 2);

/// Minimum of (x - xh)'(T(x) - T(xh)) / ||x - xh||^2 over random distinct
/// pairs in [-5, 5]^n, T the stacked smoothed leader gradients.
double monotonicity_probe(const Game& game, const Smoothing& s, int trials, std::uint64_t seed);

/// Max |(theta_nu(x) - theta_nu(xh_nu, x_-nu)) - (Theta(x) - Theta(xh_nu, x_-nu))|
/// over random (x, xh_nu, nu) triples.
double potential_identity_probe(const Game& game, int trials, std::uint64_t seed);

}  // namespace mlfg
