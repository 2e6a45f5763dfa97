#include "mlfg/smoothing.hpp"

#include <cmath>
#include <stdexcept>

namespace mlfg {

namespace {

double ipow(double base, int exponent) {
  double result = 1.0;
  for (int k = 0; k < exponent; ++k) result *= base;
  return result;
}

}  // namespace

// All derivatives are written in terms of the ratios t/phi and 2 eps/phi,
// which lie in [-1, 1], so nothing overflows for large |t|.

double phi_tilde(double t, double eps, int p) {
  const double two_eps = 2.0 * eps;
  if (p == 2) return std::hypot(t, two_eps);
  const double scale = std::max(std::abs(t), two_eps);
  const double sum = ipow(t / scale, p) + ipow(two_eps / scale, p);
  return scale * std::pow(sum, 1.0 / p);
}

double phi_tilde_d1(double t, double eps, int p) {
  return ipow(t / phi_tilde(t, eps, p), p - 1);
}

double phi_tilde_d2(double t, double eps, int p) {
  const double phi = phi_tilde(t, eps, p);
  const double u = t / phi;
  const double w = 2.0 * eps / phi;
  return (p - 1) * ipow(u, p - 2) * ipow(w, p) / phi;
}

double phi_tilde_deps(double t, double eps, int p) {
  const double phi = phi_tilde(t, eps, p);
  return 2.0 * ipow(2.0 * eps / phi, p - 1);
}

double phi_tilde_dt_deps(double t, double eps, int p) {
  const double phi = phi_tilde(t, eps, p);
  const double u = t / phi;
  const double w = 2.0 * eps / phi;
  return -2.0 * (p - 1) * ipow(u, p - 1) * ipow(w, p - 1) / phi;
}

double ncp_smooth(double alpha, double beta, double eps, int p) {
  return alpha + beta - phi_tilde(alpha - beta, eps, p);
}

void Smoothing::check() const {
  if (!(eps > 0.0) || !std::isfinite(eps)) {
    throw std::invalid_argument("smoothing parameter eps must be positive and finite");
  }
  if (p < 2 || p % 2 != 0) throw std::invalid_argument("smoothing exponent p must be even and >= 2");
}

Vector best_response_exact(const Game& game, const Vector& x) {
  const AffineMaps& maps = game.maps();
  return (maps.Qy_inv_Bt * x).cwiseMax(maps.Lt * x);
}

Vector best_response_smoothed(const Game& game, const Vector& x, const Smoothing& s) {
  s.check();
  const AffineMaps& maps = game.maps();
  const Vector t = maps.A_diff * x;
  return 0.5 * (maps.S * x + t.unaryExpr([&](double v) { return phi_tilde(v, s.eps, s.p); }));
}

namespace {

double own_quadratic(const Game& game, std::size_t nu, const Vector& x) {
  const LeaderSpec& leader = game.spec().leaders.at(nu);
  const Vector x_nu = x.segment(game.var_offset(nu), game.var_count(nu));
  return 0.5 * x_nu.dot(leader.Q * x_nu) + leader.c.dot(x_nu);
}

}  // namespace

double leader_objective(const Game& game, std::size_t nu, const Vector& x) {
  return own_quadratic(game, nu, x) + phi_value(game, x);
}

double leader_objective_smoothed(const Game& game, std::size_t nu, const Vector& x,
                                 const Smoothing& s) {
  return own_quadratic(game, nu, x) + game.a().dot(best_response_smoothed(game, x, s));
}

Vector pseudo_gradient_smoothed(const Game& game, const Vector& x, const Smoothing& s) {
  s.check();
  const AffineMaps& maps = game.maps();
  const Vector t = maps.A_diff * x;
  const Vector weights =
      game.a().cwiseProduct(t.unaryExpr([&](double v) { return phi_tilde_d1(v, s.eps, s.p); }));
  return game.Q() * x + game.c() + 0.5 * maps.S.transpose() * game.a() +
         0.5 * maps.A_diff.transpose() * weights;
}

Vector leader_gradient_smoothed(const Game& game, std::size_t nu, const Vector& x,
                                const Smoothing& s) {
  return pseudo_gradient_smoothed(game, x, s).segment(game.var_offset(nu), game.var_count(nu));
}

double phi_value(const Game& game, const Vector& x) {
  return game.a().dot(best_response_exact(game, x));
}

double potential_value(const Game& game, const Vector& x) {
  return 0.5 * x.dot(game.Q() * x) + game.c().dot(x) + phi_value(game, x);
}

}  // namespace mlfg
