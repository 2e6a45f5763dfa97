#include "mlfg/model.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace mlfg {

using nlohmann::json;

std::size_t GameSpec::n() const {
  std::size_t total = 0;
  for (const auto& leader : leaders) total += leader.num_vars();
  return total;
}

std::size_t GameSpec::m_bar() const {
  std::size_t total = 0;
  for (const auto& leader : leaders) total += leader.num_constraints();
  return total;
}

std::size_t GameSpec::var_offset(std::size_t nu) const {
  if (nu > leaders.size()) throw std::out_of_range("leader index out of range");
  std::size_t offset = 0;
  for (std::size_t k = 0; k < nu; ++k) offset += leaders[k].num_vars();
  return offset;
}

std::size_t GameSpec::constraint_offset(std::size_t nu) const {
  if (nu > leaders.size()) throw std::out_of_range("leader index out of range");
  std::size_t offset = 0;
  for (std::size_t k = 0; k < nu; ++k) offset += leaders[k].num_constraints();
  return offset;
}

Vector PrimalDualPoint::stacked() const {
  Vector z(x.size() + lambda.size());
  z << x, lambda;
  return z;
}

PrimalDualPoint PrimalDualPoint::from_stacked(const Vector& z, std::size_t n) {
  const auto nn = static_cast<Eigen::Index>(n);
  return {z.head(nn), z.tail(z.size() - nn)};
}

bool is_symmetric_positive_definite(const Matrix& Q) {
  if (Q.rows() != Q.cols() || Q.rows() == 0) return false;
  if (!Q.allFinite()) return false;
  const double scale = Q.cwiseAbs().maxCoeff();
  if (scale == 0.0) return false;
  if ((Q - Q.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) return false;

  // Diagonal-pivoted LDL'. A symmetric matrix is positive definite iff every
  // pivot chosen this way stays positive.
  Matrix work = 0.5 * (Q + Q.transpose());
  const Eigen::Index n = work.rows();
  const double threshold = 1e-12 * scale;
  for (Eigen::Index k = 0; k < n; ++k) {
    Eigen::Index pivot = k;
    for (Eigen::Index i = k + 1; i < n; ++i) {
      if (work(i, i) > work(pivot, pivot)) pivot = i;
    }
    if (work(pivot, pivot) <= threshold) return false;
    if (pivot != k) {
      work.row(k).swap(work.row(pivot));
      work.col(k).swap(work.col(pivot));
    }
    const double d = work(k, k);
    for (Eigen::Index i = k + 1; i < n; ++i) {
      const double l = work(i, k) / d;
      for (Eigen::Index j = k + 1; j < n; ++j) work(i, j) -= l * work(k, j);
    }
  }
  return true;
}

namespace {

void add(std::vector<Finding>& out, Finding::Category category, std::string field,
         std::string message) {
  out.push_back({category, std::move(field), std::move(message)});
}

std::string leader_field(std::size_t nu, const char* name) {
  return "leaders[" + std::to_string(nu) + "]." + name;
}

}  // namespace

std::vector<Finding> validate_game(const GameSpec& game) {
  using Category = Finding::Category;
  std::vector<Finding> findings;
  if (game.leaders.empty()) {
    add(findings, Category::Dimension, "leaders", "at least one leader is required");
  }

  for (std::size_t nu = 0; nu < game.leaders.size(); ++nu) {
    const LeaderSpec& leader = game.leaders[nu];
    const auto n_nu = leader.Q.rows();
    if (n_nu == 0) {
      add(findings, Category::Dimension, leader_field(nu, "Q"), "leader has no variables");
      continue;
    }
    if (leader.Q.cols() != n_nu) {
      add(findings, Category::Dimension, leader_field(nu, "Q"), "Q must be square");
      continue;
    }
    if (leader.c.size() != n_nu) {
      add(findings, Category::Dimension, leader_field(nu, "c"), "c must have n_nu entries");
    }
    if (leader.A.rows() != n_nu && !(leader.A.size() == 0 && leader.b.size() == 0)) {
      add(findings, Category::Dimension, leader_field(nu, "A"), "A must have n_nu rows");
    }
    if (leader.A.cols() != leader.b.size()) {
      add(findings, Category::Dimension, leader_field(nu, "b"),
          "b must have one entry per column of A");
    }
    if (!leader.Q.allFinite() || !leader.c.allFinite() || !leader.A.allFinite() ||
        !leader.b.allFinite()) {
      add(findings, Category::Value, leader_field(nu, "Q"), "leader data must be finite");
    } else if (!is_symmetric_positive_definite(leader.Q)) {
      add(findings, Category::Value, leader_field(nu, "Q"), "Q not positive definite");
    }
  }

  const FollowerSpec& f = game.follower;
  const auto n = static_cast<Eigen::Index>(game.n());
  const auto m = f.qy_diag.size();
  if (f.B.rows() != n || f.B.cols() != m) {
    add(findings, Category::Dimension, "follower.B", "B must be n x m");
  }
  if (f.L.rows() != n || f.L.cols() != m) {
    add(findings, Category::Dimension, "follower.L", "L must be n x m");
  }
  if (f.a.size() != m) {
    add(findings, Category::Dimension, "follower.a", "a must have m entries");
  }
  if (!f.qy_diag.allFinite() || !f.B.allFinite() || !f.L.allFinite() || !f.a.allFinite()) {
    add(findings, Category::Value, "follower", "follower data must be finite");
  }
  if ((f.qy_diag.array() <= 0.0).any()) {
    add(findings, Category::Value, "follower.Qy_diag", "Qy_diag entries must be positive");
  }
  if ((f.a.array() < 0.0).any()) {
    add(findings, Category::Value, "follower.a", "a must be nonnegative");
  }
  return findings;
}

Matrix slice_rows(const GameSpec& game, const Matrix& M, std::size_t nu) {
  if (nu >= game.leaders.size()) {
    throw std::out_of_range("slice_rows: leader index " + std::to_string(nu) +
                            " out of range for " + std::to_string(game.leaders.size()) +
                            " leaders");
  }
  if (M.rows() != static_cast<Eigen::Index>(game.n())) {
    throw std::invalid_argument("slice_rows: matrix must have n rows");
  }
  const auto offset = static_cast<Eigen::Index>(game.var_offset(nu));
  const auto rows = static_cast<Eigen::Index>(game.leaders[nu].num_vars());
  return M.middleRows(offset, rows);
}

// ---------------------------------------------------------------------------
// JSON

namespace {

[[noreturn]] void dimension_error(const std::string& field, const std::string& message) {
  throw GameError(GameError::Kind::Dimension, field + ": " + message);
}

Vector to_vector(const json& j, const std::string& field) {
  if (!j.is_array()) dimension_error(field, "expected an array of numbers");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) dimension_error(field, "expected an array of numbers");
    v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
  }
  return v;
}

Matrix to_matrix(const json& j, const std::string& field) {
  if (!j.is_array()) dimension_error(field, "expected an array of rows");
  const std::size_t rows = j.size();
  std::size_t cols = 0;
  if (rows > 0) {
    if (!j[0].is_array()) dimension_error(field, "expected an array of rows");
    cols = j[0].size();
  }
  Matrix M(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < rows; ++r) {
    if (!j[r].is_array() || j[r].size() != cols) dimension_error(field, "ragged rows");
    for (std::size_t c = 0; c < cols; ++c) {
      if (!j[r][c].is_number()) dimension_error(field, "expected numeric entries");
      M(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = j[r][c].get<double>();
    }
  }
  return M;
}

const json& member(const json& j, const char* key, const std::string& where) {
  auto it = j.find(key);
  if (it == j.end()) {
    throw GameError(GameError::Kind::Parse, where + ": missing field \"" + key + "\"");
  }
  return *it;
}

json from_vector(const Vector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

json from_matrix(const Matrix& M) {
  json out = json::array();
  for (Eigen::Index r = 0; r < M.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < M.cols(); ++c) row.push_back(M(r, c));
    out.push_back(std::move(row));
  }
  return out;
}

}  // namespace

GameSpec parse_game(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw GameError(GameError::Kind::Parse, std::string("malformed game document: ") + e.what());
  }
  if (!doc.is_object()) throw GameError(GameError::Kind::Parse, "game document must be an object");

  GameSpec game;
  const json& leaders = member(doc, "leaders", "game");
  if (!leaders.is_array()) throw GameError(GameError::Kind::Parse, "leaders must be an array");
  for (std::size_t nu = 0; nu < leaders.size(); ++nu) {
    const std::string where = "leaders[" + std::to_string(nu) + "]";
    const json& l = leaders[nu];
    if (!l.is_object()) throw GameError(GameError::Kind::Parse, where + " must be an object");
    LeaderSpec leader;
    leader.Q = to_matrix(member(l, "Q", where), where + ".Q");
    leader.c = to_vector(member(l, "c", where), where + ".c");
    leader.A = to_matrix(member(l, "A", where), where + ".A");
    leader.b = to_vector(member(l, "b", where), where + ".b");
    // "A": [] is accepted as "no constraints".
    if (leader.A.rows() == 0 && leader.b.size() == 0) leader.A.resize(leader.Q.rows(), 0);
    game.leaders.push_back(std::move(leader));
  }

  const json& f = member(doc, "follower", "game");
  if (!f.is_object()) throw GameError(GameError::Kind::Parse, "follower must be an object");
  game.follower.qy_diag = to_vector(member(f, "Qy_diag", "follower"), "follower.Qy_diag");
  game.follower.B = to_matrix(member(f, "B", "follower"), "follower.B");
  game.follower.L = to_matrix(member(f, "L", "follower"), "follower.L");
  game.follower.a = to_vector(member(f, "a", "follower"), "follower.a");
  const auto m = game.follower.qy_diag.size();
  if (game.follower.B.size() == 0) game.follower.B.resize(game.follower.B.rows(), m);
  if (game.follower.L.size() == 0) game.follower.L.resize(game.follower.L.rows(), m);

  const auto findings = validate_game(game);
  for (const auto& finding : findings) {
    if (finding.category == Finding::Category::Dimension) {
      dimension_error(finding.field, finding.message);
    }
  }
  if (!findings.empty()) {
    throw GameError(GameError::Kind::Validation,
                    findings.front().field + ": " + findings.front().message);
  }
  return game;
}

GameSpec load_game(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw GameError(GameError::Kind::Io, "cannot open game file " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_game(buffer.str());
}

std::string game_to_json(const GameSpec& game) {
  json doc;
  doc["leaders"] = json::array();
  for (const auto& leader : game.leaders) {
    doc["leaders"].push_back({{"Q", from_matrix(leader.Q)},
                              {"c", from_vector(leader.c)},
                              {"A", from_matrix(leader.A)},
                              {"b", from_vector(leader.b)}});
  }
  doc["follower"] = {{"Qy_diag", from_vector(game.follower.qy_diag)},
                     {"B", from_matrix(game.follower.B)},
                     {"L", from_matrix(game.follower.L)},
                     {"a", from_vector(game.follower.a)}};
  return doc.dump(2);
}

void write_game(const GameSpec& game, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw GameError(GameError::Kind::Io, "cannot write game file " + path.string());
  out << game_to_json(game) << '\n';
}

}  // namespace mlfg
