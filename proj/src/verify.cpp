#include "mlfg/verify.hpp"

#include "mlfg/kkt.hpp"
#include "mlfg/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace mlfg {

namespace {

// Linear inequality system C w <= d over w = (x_nu, s).
struct EpigraphQP {
  Matrix P;  // diag(Q_nu, 0)
  Vector q;  // (c_nu, a)
  Matrix C;
  Vector d;
};

EpigraphQP build_epigraph(const Game& game, std::size_t nu, const Vector& x) {
  const LeaderSpec& leader = game.spec().leaders.at(nu);
  const Eigen::Index off = game.var_offset(nu);
  const Eigen::Index n_nu = game.var_count(nu);
  const Eigen::Index m = game.m();
  const Eigen::Index m_nu = game.con_count(nu);
  const AffineMaps& maps = game.maps();

  Vector rivals = x;
  rivals.segment(off, n_nu).setZero();
  const Vector qb_rivals = maps.Qy_inv_Bt * rivals;
  const Vector l_rivals = maps.Lt * rivals;

  EpigraphQP qp;
  const Eigen::Index dim = n_nu + m;
  qp.P = Matrix::Zero(dim, dim);
  qp.P.topLeftCorner(n_nu, n_nu) = leader.Q;
  qp.q.resize(dim);
  qp.q << leader.c, game.a();

  const Eigen::Index rows = 2 * m + m_nu;
  qp.C = Matrix::Zero(rows, dim);
  qp.d.resize(rows);
  for (Eigen::Index i = 0; i < m; ++i) {
    // (Qy^{-1}B'x)_i - s_i <= 0 and (L'x)_i - s_i <= 0
    qp.C.row(i).head(n_nu) = maps.Qy_inv_Bt.row(i).segment(off, n_nu);
    qp.C(i, n_nu + i) = -1.0;
    qp.d(i) = -qb_rivals(i);
    qp.C.row(m + i).head(n_nu) = maps.Lt.row(i).segment(off, n_nu);
    qp.C(m + i, n_nu + i) = -1.0;
    qp.d(m + i) = -l_rivals(i);
  }
  for (Eigen::Index j = 0; j < m_nu; ++j) {
    qp.C.row(2 * m + j).head(n_nu) = leader.A.col(j).transpose();
    qp.d(2 * m + j) = -leader.b(j);
  }
  return qp;
}

}  // namespace

OracleResult best_response_qp_oracle(const Game& game, std::size_t nu, const Vector& x) {
  if (nu >= game.num_leaders()) throw std::out_of_range("oracle: leader index out of range");
  if (x.size() != game.n()) throw std::invalid_argument("oracle: x has wrong dimension");
  if ((game.a().array() < 0.0).any()) throw std::invalid_argument("oracle: requires a >= 0");

  const EpigraphQP qp = build_epigraph(game, nu, x);
  const Eigen::Index dim = qp.P.rows();
  const Eigen::Index rows = qp.C.rows();
  if (rows > 24) throw std::invalid_argument("oracle: too many constraints to enumerate");

  const double scale = 1.0 + qp.C.cwiseAbs().maxCoeff() + qp.d.cwiseAbs().maxCoeff();
  const double feas_tol = 1e-9 * scale;
  const double mult_tol = 1e-9 * (1.0 + qp.q.cwiseAbs().maxCoeff());

  OracleResult best;
  double best_value = std::numeric_limits<double>::infinity();
  const std::uint64_t subsets = std::uint64_t{1} << rows;
  std::vector<Eigen::Index> active;
  for (std::uint64_t mask = 0; mask < subsets; ++mask) {
    active.clear();
    for (Eigen::Index r = 0; r < rows; ++r) {
      if (mask & (std::uint64_t{1} << r)) active.push_back(r);
    }
    const auto k = static_cast<Eigen::Index>(active.size());
    if (k > dim) continue;  // more active rows than unknowns: degenerate

    // [P  C_W'] [w ]   [-q ]
    // [C_W  0 ] [mu] = [d_W]
    Matrix K = Matrix::Zero(dim + k, dim + k);
    Vector rhs(dim + k);
    K.topLeftCorner(dim, dim) = qp.P;
    rhs.head(dim) = -qp.q;
    for (Eigen::Index a = 0; a < k; ++a) {
      K.block(dim + a, 0, 1, dim) = qp.C.row(active[static_cast<std::size_t>(a)]);
      K.block(0, dim + a, dim, 1) = qp.C.row(active[static_cast<std::size_t>(a)]).transpose();
      rhs(dim + a) = qp.d(active[static_cast<std::size_t>(a)]);
    }
    const auto sol = lu_solve(K, rhs);
    if (!sol) continue;
    const Vector w = sol->head(dim);
    const Vector mu = sol->tail(k);
    if (k > 0 && mu.minCoeff() < -mult_tol) continue;
    if (((qp.C * w - qp.d).array() > feas_tol).any()) continue;

    ++best.candidates;
    const double value = 0.5 * w.dot(qp.P * w) + qp.q.dot(w);
    if (value < best_value) {
      best_value = value;
      best.feasible = true;
      best.x_nu = w.head(game.var_count(nu));
      best.s = w.tail(game.m());
    }
  }

  if (best.feasible) {
    Vector x_star = x;
    x_star.segment(game.var_offset(nu), game.var_count(nu)) = best.x_nu;
    best.objective = leader_objective(game, nu, x_star);
  }
  return best;
}

NashCheck verify_nash(const Game& game, const Vector& x, double tol) {
  NashCheck check;
  check.tol = tol;
  check.certified = true;
  for (std::size_t nu = 0; nu < game.num_leaders(); ++nu) {
    OracleResult response = best_response_qp_oracle(game, nu, x);
    double gap = std::numeric_limits<double>::infinity();
    if (response.feasible) gap = leader_objective(game, nu, x) - response.objective;
    check.gaps.push_back(gap);
    check.max_gap = nu == 0 ? gap : std::max(check.max_gap, gap);
    check.certified = check.certified && response.feasible && gap <= tol;
    check.responses.push_back(std::move(response));
  }
  // An infeasible candidate cannot be an equilibrium.
  if ((game.constraints(x).array() > tol).any()) check.certified = false;
  return check;
}

double SStationarityResiduals::max() const {
  return std::max({stationarity, feasibility, multiplier_sign, complementary_slack,
                   complementarity, gamma1_slack, gamma2_slack, biactive_sign});
}

namespace {

struct LimitDerivative {
  Vector xi;
  std::vector<bool> biactive;
};

LimitDerivative limit_derivative(const Game& game, const Vector& x, double eps_final, int p) {
  Smoothing{eps_final, p}.check();
  const Vector t = game.maps().A_diff * x;
  const double threshold = 1.0 - 10.0 * eps_final;
  LimitDerivative out;
  out.xi.resize(t.size());
  out.biactive.resize(static_cast<std::size_t>(t.size()));
  for (Eigen::Index i = 0; i < t.size(); ++i) {
    const double d1 = phi_tilde_d1(t(i), eps_final, p);
    const bool strict = d1 != 0.0 && std::abs(d1) >= threshold;
    out.xi(i) = strict ? std::copysign(1.0, d1) : d1;
    out.biactive[static_cast<std::size_t>(i)] = !strict;
  }
  return out;
}

// Qx + c + Qy^{-1}B Gamma1 + L Gamma2 with the Gammas of the consistent assignment.
Vector limit_gradient(const Game& game, const Vector& x, const Vector& xi) {
  const Vector gamma1 = 0.5 * game.a().cwiseProduct(Vector::Ones(xi.size()) - xi);
  const Vector gamma2 = 0.5 * game.a().cwiseProduct(Vector::Ones(xi.size()) + xi);
  return game.Q() * x + game.c() + game.maps().Qy_inv_Bt.transpose() * gamma1 +
         game.maps().Lt.transpose() * gamma2;
}

}  // namespace

SStationarityCertificate s_stationarity_certificate(const Game& game, const Vector& x,
                                                    const Vector& lambda, double eps_final,
                                                    double tol, int p,
                                                    GammaAssignment assignment) {
  if (x.size() != game.n() || lambda.size() != game.m_bar()) {
    throw std::invalid_argument("s-stationarity: candidate has wrong dimensions");
  }
  const LimitDerivative limit = limit_derivative(game, x, eps_final, p);
  const Vector ones = Vector::Ones(game.m());

  SStationarityCertificate cert;
  cert.tol = tol;
  cert.xi_bar = limit.xi;
  cert.biactive = limit.biactive;
  const Vector minus_part = 0.5 * game.a().cwiseProduct(ones - limit.xi);
  const Vector plus_part = 0.5 * game.a().cwiseProduct(ones + limit.xi);
  if (assignment == GammaAssignment::BranchConsistent) {
    cert.gamma1 = minus_part;
    cert.gamma2 = plus_part;
  } else {
    cert.gamma1 = plus_part;
    cert.gamma2 = minus_part;
  }

  const AffineMaps& maps = game.maps();
  const Vector y = best_response_exact(game, x);
  const Vector G1 = y - maps.Qy_inv_Bt * x;
  const Vector G2 = y - maps.Lt * x;
  const Vector g = game.constraints(x);

  SStationarityResiduals& r = cert.residuals;
  const Vector stat_x = game.Q() * x + game.c() + game.G() * lambda +
                        maps.Qy_inv_Bt.transpose() * cert.gamma1 + maps.Lt.transpose() * cert.gamma2;
  const Vector stat_y = game.a() - cert.gamma1 - cert.gamma2;
  r.stationarity = std::max(stat_x.size() ? stat_x.cwiseAbs().maxCoeff() : 0.0,
                            stat_y.size() ? stat_y.cwiseAbs().maxCoeff() : 0.0);
  if (g.size() > 0) {
    r.feasibility = std::max(0.0, g.maxCoeff());
    r.multiplier_sign = std::max(0.0, -lambda.minCoeff());
    r.complementary_slack = g.cwiseProduct(lambda).cwiseAbs().maxCoeff();
  }
  if (y.size() > 0) {
    r.complementarity = G1.cwiseMin(G2).cwiseAbs().maxCoeff();
    r.gamma1_slack = G1.cwiseProduct(cert.gamma1).cwiseAbs().maxCoeff();
    r.gamma2_slack = G2.cwiseProduct(cert.gamma2).cwiseAbs().maxCoeff();
  }
  for (Eigen::Index i = 0; i < game.m(); ++i) {
    if (!cert.biactive[static_cast<std::size_t>(i)]) continue;
    r.biactive_sign = std::max({r.biactive_sign, -cert.gamma1(i), -cert.gamma2(i)});
  }
  cert.certified = r.max() <= tol;
  return cert;
}

Vector estimate_multipliers(const Game& game, const Vector& x, double eps_final, int p,
                            double active_tol) {
  const LimitDerivative limit = limit_derivative(game, x, eps_final, p);
  const Vector grad = limit_gradient(game, x, limit.xi);
  const Vector g = game.constraints(x);
  Vector lambda = Vector::Zero(game.m_bar());
  for (std::size_t nu = 0; nu < game.num_leaders(); ++nu) {
    const Eigen::Index voff = game.var_offset(nu);
    const Eigen::Index coff = game.con_offset(nu);
    std::vector<Eigen::Index> active;
    for (Eigen::Index j = 0; j < game.con_count(nu); ++j) {
      if (g(coff + j) >= -active_tol) active.push_back(j);
    }
    if (active.empty()) continue;
    const LeaderSpec& leader = game.spec().leaders[nu];
    Matrix A_act(leader.A.rows(), static_cast<Eigen::Index>(active.size()));
    for (std::size_t k = 0; k < active.size(); ++k) {
      A_act.col(static_cast<Eigen::Index>(k)) = leader.A.col(active[k]);
    }
    const Vector rhs = -grad.segment(voff, game.var_count(nu));
    const Vector lam = A_act.colPivHouseholderQr().solve(rhs);
    for (std::size_t k = 0; k < active.size(); ++k) {
      lambda(coff + active[k]) = lam(static_cast<Eigen::Index>(k));
    }
  }
  return lambda;
}

CertificationTolerance certification_tolerance(const Game& game, const PrimalDualPoint& z,
                                               double eps_final, double inner_tol,
                                               double nash_floor, double s_stationarity_floor,
                                               int p) {
  const double smoothing_gap = game.a().lpNorm<1>() * eps_final;
  const double solver_gap = inner_tol / game.mu();

  const LimitDerivative limit = limit_derivative(game, z.x, eps_final, p);
  const Vector t = game.maps().A_diff * z.x;
  const Vector d1 = t.unaryExpr([&](double v) { return phi_tilde_d1(v, eps_final, p); });
  const Vector snap =
      0.5 * game.maps().A_diff.transpose() * game.a().cwiseProduct(limit.xi - d1);
  double scale = 1.0;
  if (game.m_bar() > 0) {
    scale = std::max({scale, game.constraints(z.x).lpNorm<Eigen::Infinity>(),
                      z.lambda.lpNorm<Eigen::Infinity>()});
  }
  const double residual =
      kkt_residual(game, z, Smoothing{eps_final, p}).stacked().lpNorm<Eigen::Infinity>() * scale;
  return {std::max(nash_floor, smoothing_gap + solver_gap),
          std::max(s_stationarity_floor, residual + snap.lpNorm<Eigen::Infinity>())};
}

Certificate certify(const Game& game, const PrimalDualPoint& z, double eps_final,
                    const CertificationTolerance& tol, int p) {
  Certificate cert;
  cert.nash = verify_nash(game, z.x, tol.nash);
  cert.s_stationarity = s_stationarity_certificate(game, z.x, z.lambda, eps_final,
                                                   tol.s_stationarity, p);
  return cert;
}

double monotonicity_probe(const Game& game, const Smoothing& s, int trials, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-5.0, 5.0);
  const auto draw = [&] { return Vector(Vector::NullaryExpr(game.n(), [&] { return unif(rng); })); };
  double ratio = std::numeric_limits<double>::infinity();
  for (int k = 0; k < trials; ++k) {
    const Vector x = draw();
    const Vector xh = draw();
    const Vector dx = x - xh;
    if (dx.squaredNorm() == 0.0) continue;
    const Vector dg = pseudo_gradient_smoothed(game, x, s) - pseudo_gradient_smoothed(game, xh, s);
    ratio = std::min(ratio, dx.dot(dg) / dx.squaredNorm());
  }
  return ratio;
}

double potential_identity_probe(const Game& game, int trials, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-5.0, 5.0);
  std::uniform_int_distribution<std::size_t> pick(0, game.num_leaders() - 1);
  double worst = 0.0;
  for (int k = 0; k < trials; ++k) {
    const Vector x = Vector::NullaryExpr(game.n(), [&] { return unif(rng); });
    const std::size_t nu = pick(rng);
    Vector xh = x;
    for (Eigen::Index i = 0; i < game.var_count(nu); ++i) xh(game.var_offset(nu) + i) = unif(rng);
    const double leader_diff = leader_objective(game, nu, x) - leader_objective(game, nu, xh);
    const double potential_diff = potential_value(game, x) - potential_value(game, xh);
    worst = std::max(worst, std::abs(leader_diff - potential_diff));
  }
  return worst;
}

}  // namespace mlfg
