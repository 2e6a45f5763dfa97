#pragma once

#include "mlfg/game.hpp"

namespace mlfg {

/// Smoothed absolute value phi_tilde_eps(t) = (t^p + (2 eps)^p)^(1/p), p even.
/// It majorizes |t|, is convex in t and tends to |t| as eps -> 0. The NCP
/// function built from it is phi_eps(a, b) = a + b - phi_tilde_eps(a - b).
double phi_tilde(double t, double eps, int p = 2);
double phi_tilde_d1(double t, double eps, int p = 2);     // d/dt
double phi_tilde_d2(double t, double eps, int p = 2);     // d^2/dt^2
double phi_tilde_deps(double t, double eps, int p = 2);   // d/d eps
double phi_tilde_dt_deps(double t, double eps, int p = 2);  // d^2/(dt d eps)

/// The smooth NCP function phi_eps(alpha, beta).
double ncp_smooth(double alpha, double beta, double eps, int p = 2);

/// Smoothing parameter together with the family exponent.
struct Smoothing {
  double eps;
  int p = 2;

  /// Throws std::invalid_argument unless eps > 0 and p is even and >= 2.
  void check() const;
};

/// max{Qy^{-1}B'x, L'x}, the follower's exact best response.
Vector best_response_exact(const Game& game, const Vector& x);

/// 0.5 * (S x + phi_tilde(A_diff x)). For p = 2 this lies in [y*, y* + eps].
Vector best_response_smoothed(const Game& game, const Vector& x, const Smoothing& s);

/// Nonsmooth leader objective theta_nu(x) (nu is 0-based).
double leader_objective(const Game& game, std::size_t nu, const Vector& x);

/// theta_nu^eps(x): the leader objective with the smoothed follower response.
double leader_objective_smoothed(const Game& game, std::size_t nu, const Vector& x,
                                 const Smoothing& s);

/// Gradient of theta_nu^eps with respect to x_nu.
Vector leader_gradient_smoothed(const Game& game, std::size_t nu, const Vector& x,
                                const Smoothing& s);

/// All leader gradients stacked: Qx + c + 0.5 S'a + 0.5 A_diff' (a .* phi_tilde'(A_diff x)).
Vector pseudo_gradient_smoothed(const Game& game, const Vector& x, const Smoothing& s);

/// phi(x) = sum_i a_i max{(Qy^{-1}B'x)_i, (L'x)_i}.
double phi_value(const Game& game, const Vector& x);

/// Generalized potential Theta(x) = sum_nu (0.5 x_nu'Q_nu x_nu + c_nu'x_nu) + phi(x).
double potential_value(const Game& game, const Vector& x);

}  // namespace mlfg
