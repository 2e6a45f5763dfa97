#pragma once

#include "mlfg/model.hpp"

namespace mlfg {

/// S = L' + Qy^{-1}B' and A_diff = L' - Qy^{-1}B' (both m x n).
/// The smoothed follower response is 0.5 * (S x + phi_tilde(A_diff x)).
struct AffineMaps {
  Matrix S;
  Matrix A_diff;
  Matrix Qy_inv_Bt;  // Qy^{-1} B'
  Matrix Lt;         // L'

  static AffineMaps from(const FollowerSpec& follower);
};

/// Validated game with the stacked quantities used throughout the solvers:
/// Q = diag(Q_1..Q_N), c = (c_1..c_N), G = diag(A_1..A_N), g(x) = G'x + b.
/// Immutable after construction.
class Game {
 public:
  /// Throws GameError if the spec fails validation.
  explicit Game(GameSpec spec);

  const GameSpec& spec() const { return spec_; }
  std::size_t num_leaders() const { return spec_.num_leaders(); }
  Eigen::Index n() const { return n_; }
  Eigen::Index m() const { return m_; }
  Eigen::Index m_bar() const { return m_bar_; }

  const Matrix& Q() const { return Q_; }
  const Vector& c() const { return c_; }
  const Matrix& G() const { return G_; }
  const Vector& b() const { return b_; }
  const Vector& a() const { return spec_.follower.a; }
  const Vector& qy_diag() const { return spec_.follower.qy_diag; }
  const AffineMaps& maps() const { return maps_; }

  /// Smallest eigenvalue of the block-diagonal Q.
  double mu() const { return mu_; }

  Eigen::Index var_offset(std::size_t nu) const { return var_offsets_.at(nu); }
  Eigen::Index var_count(std::size_t nu) const;
  Eigen::Index con_offset(std::size_t nu) const { return con_offsets_.at(nu); }
  Eigen::Index con_count(std::size_t nu) const;

  /// Stacked leader constraint values g(x) = G'x + b (feasible iff <= 0).
  Vector constraints(const Vector& x) const { return G_.transpose() * x + b_; }

 private:
  GameSpec spec_;
  Eigen::Index n_ = 0, m_ = 0, m_bar_ = 0;
  Matrix Q_;
  Vector c_;
  Matrix G_;
  Vector b_;
  AffineMaps maps_;
  double mu_ = 0.0;
  std::vector<Eigen::Index> var_offsets_;  // N + 1 entries
  std::vector<Eigen::Index> con_offsets_;  // N + 1 entries
};

}  // namespace mlfg
