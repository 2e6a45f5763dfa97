#pragma once

#include "mlfg/game.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>

namespace mlfg::testing {

inline Vector central_gradient(const std::function<double(const Vector&)>& f, const Vector& x,
                               double h) {
  Vector g(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    Vector xp = x, xm = x;
    xp(i) += h;
    xm(i) -= h;
    g(i) = (f(xp) - f(xm)) / (2.0 * h);
  }
  return g;
}

inline Matrix central_jacobian(const std::function<Vector(const Vector&)>& f, const Vector& x,
                               double h) {
  const Vector f0 = f(x);
  Matrix J(f0.size(), x.size());
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    Vector xp = x, xm = x;
    xp(j) += h;
    xm(j) -= h;
    J.col(j) = (f(xp) - f(xm)) / (2.0 * h);
  }
  return J;
}

inline Vector uniform_vector(std::mt19937_64& rng, Eigen::Index n, double lo, double hi) {
  std::uniform_real_distribution<double> unif(lo, hi);
  return Vector::NullaryExpr(n, [&] { return unif(rng); });
}

/// Smallest eigenvalue by a dense symmetric eigensolver, independent of the
/// factorization the library uses.
inline double min_eigenvalue(const Matrix& Q) {
  return Eigen::SelfAdjointEigenSolver<Matrix>(Q).eigenvalues().minCoeff();
}

/// Random SPD matrix R'R + shift I.
inline Matrix random_spd(std::mt19937_64& rng, Eigen::Index n, double shift) {
  const Matrix R = Matrix::NullaryExpr(n, n, [&] {
    return std::uniform_real_distribution<double>(-1.0, 1.0)(rng);
  });
  return R.transpose() * R + shift * Matrix::Identity(n, n);
}

/// Game with the given leader blocks and a follower of matching size.
inline GameSpec make_game(std::vector<LeaderSpec> leaders, const Vector& qy, const Matrix& B,
                          const Matrix& L, const Vector& a) {
  GameSpec spec;
  spec.leaders = std::move(leaders);
  spec.follower.qy_diag = qy;
  spec.follower.B = B;
  spec.follower.L = L;
  spec.follower.a = a;
  return spec;
}

inline LeaderSpec unconstrained_leader(const Matrix& Q, const Vector& c) {
  return {Q, c, Matrix(Q.rows(), 0), Vector(0)};
}

/// Random game with n_nu in {1, 2}, m follower variables, a >= 0 and box
/// constraints |x_i| <= box on every leader variable.
inline GameSpec random_box_game(std::mt19937_64& rng, int leaders, Eigen::Index m, double box) {
  std::uniform_int_distribution<int> size(1, 2);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  std::vector<LeaderSpec> specs;
  Eigen::Index n = 0;
  for (int nu = 0; nu < leaders; ++nu) {
    const Eigen::Index k = size(rng);
    LeaderSpec l;
    l.Q = random_spd(rng, k, 0.5);
    l.c = uniform_vector(rng, k, -1.0, 1.0);
    l.A.resize(k, 2 * k);
    l.A << Matrix::Identity(k, k), -Matrix::Identity(k, k);
    l.b = Vector::Constant(2 * k, -box);
    specs.push_back(l);
    n += k;
  }
  const Vector qy = uniform_vector(rng, m, 0.5, 2.0);
  const Matrix B = Matrix::NullaryExpr(n, m, [&] { return unif(rng); });
  const Matrix L = Matrix::NullaryExpr(n, m, [&] { return unif(rng); });
  const Vector a = uniform_vector(rng, m, 0.0, 1.0);
  return make_game(std::move(specs), qy, B, L, a);
}

/// Minimum of theta_nu over a grid of step h on the box lo <= x_nu <= hi
/// (n_nu <= 2), rivals fixed at x and points violating A_nu'x_nu + b_nu <= 0
/// skipped. Evaluated directly from the spec matrices.
inline double grid_best_response(const GameSpec& spec, std::size_t nu, const Vector& x,
                                 const Vector& lo, const Vector& hi, double h) {
  const LeaderSpec& l = spec.leaders[nu];
  const Eigen::Index k = l.Q.rows();
  Eigen::Index off = 0;
  for (std::size_t j = 0; j < nu; ++j) off += spec.leaders[j].Q.rows();
  const Eigen::Index m = spec.follower.a.size();
  const Matrix qb = (spec.follower.B * spec.follower.qy_diag.cwiseInverse().asDiagonal()).transpose();
  const Matrix lt = spec.follower.L.transpose();
  Vector rivals = x;
  rivals.segment(off, k).setZero();
  const Vector u = qb * rivals, v = lt * rivals;
  const Matrix U = qb.middleCols(off, k), V = lt.middleCols(off, k);

  const auto steps = [&](Eigen::Index i) {
    return static_cast<long>(std::floor((hi(i) - lo(i)) / h + 0.5));
  };
  const long n0 = steps(0), n1 = k > 1 ? steps(1) : 0;
  double best = std::numeric_limits<double>::infinity();
  Vector p(k);
  for (long i = 0; i <= n0; ++i) {
    p(0) = lo(0) + static_cast<double>(i) * h;
    for (long j = 0; j <= n1; ++j) {
      if (k > 1) p(1) = lo(1) + static_cast<double>(j) * h;
      if (l.A.cols() > 0 && (l.A.transpose() * p + l.b).maxCoeff() > 0.0) continue;
      double value = 0.5 * p.dot(l.Q * p) + l.c.dot(p);
      for (Eigen::Index r = 0; r < m; ++r) {
        value += spec.follower.a(r) * std::max(u(r) + U.row(r).dot(p), v(r) + V.row(r).dot(p));
      }
      best = std::min(best, value);
    }
  }
  return best;
}

/// Dataset 1 with the follower weights removed.
inline GameSpec without_follower_weight(GameSpec spec) {
  spec.follower.a.setZero();
  return spec;
}

}  // namespace mlfg::testing
