#include "mlfg/game.hpp"

#include <Eigen/Eigenvalues>

namespace mlfg {

AffineMaps AffineMaps::from(const FollowerSpec& follower) {
  AffineMaps maps;
  maps.Lt = follower.L.transpose();
  maps.Qy_inv_Bt = follower.qy_diag.cwiseInverse().asDiagonal() * follower.B.transpose();
  maps.S = maps.Lt + maps.Qy_inv_Bt;
  maps.A_diff = maps.Lt - maps.Qy_inv_Bt;
  return maps;
}

Game::Game(GameSpec spec) : spec_(std::move(spec)) {
  const auto findings = validate_game(spec_);
  if (!findings.empty()) {
    const auto kind = findings.front().category == Finding::Category::Dimension
                          ? GameError::Kind::Dimension
                          : GameError::Kind::Validation;
    throw GameError(kind, findings.front().field + ": " + findings.front().message);
  }

  n_ = static_cast<Eigen::Index>(spec_.n());
  m_ = static_cast<Eigen::Index>(spec_.m());
  m_bar_ = static_cast<Eigen::Index>(spec_.m_bar());

  Q_ = Matrix::Zero(n_, n_);
  c_ = Vector::Zero(n_);
  G_ = Matrix::Zero(n_, m_bar_);
  b_ = Vector::Zero(m_bar_);
  var_offsets_.push_back(0);
  con_offsets_.push_back(0);
  for (const auto& leader : spec_.leaders) {
    const Eigen::Index r = var_offsets_.back();
    const Eigen::Index k = con_offsets_.back();
    const auto n_nu = static_cast<Eigen::Index>(leader.num_vars());
    const auto m_nu = static_cast<Eigen::Index>(leader.num_constraints());
    Q_.block(r, r, n_nu, n_nu) = leader.Q;
    c_.segment(r, n_nu) = leader.c;
    if (m_nu > 0) G_.block(r, k, n_nu, m_nu) = leader.A;
    b_.segment(k, m_nu) = leader.b;
    var_offsets_.push_back(r + n_nu);
    con_offsets_.push_back(k + m_nu);
  }

  maps_ = AffineMaps::from(spec_.follower);
  mu_ = Eigen::SelfAdjointEigenSolver<Matrix>(Q_, Eigen::EigenvaluesOnly).eigenvalues().minCoeff();
}

Eigen::Index Game::var_count(std::size_t nu) const {
  return var_offsets_.at(nu + 1) - var_offsets_.at(nu);
}

Eigen::Index Game::con_count(std::size_t nu) const {
  return con_offsets_.at(nu + 1) - con_offsets_.at(nu);
}

}  // namespace mlfg
