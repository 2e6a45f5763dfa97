#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

namespace mlfg {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Leader nu: min 0.5 x'Qx + c'x + a'y(x)  s.t.  A'x + b <= 0.
struct LeaderSpec {
  Matrix Q;  // n_nu x n_nu, symmetric positive definite
  Vector c;  // n_nu
  Matrix A;  // n_nu x m_nu, one column per constraint
  Vector b;  // m_nu

  std::size_t num_vars() const { return static_cast<std::size_t>(Q.rows()); }
  std::size_t num_constraints() const { return static_cast<std::size_t>(b.size()); }
};

/// Follower: min 0.5 y'diag(qy)y - (B'x)'y  s.t.  y >= L'x.
struct FollowerSpec {
  Vector qy_diag;  // m, strictly positive
  Matrix B;        // n x m
  Matrix L;        // n x m
  Vector a;        // m, nonnegative weights of y in the leader objectives

  std::size_t num_vars() const { return static_cast<std::size_t>(qy_diag.size()); }
};

/// Raw problem data. Leaders are ordered; x is the concatenation x_1 | ... | x_N.
struct GameSpec {
  std::vector<LeaderSpec> leaders;
  FollowerSpec follower;

  std::size_t num_leaders() const { return leaders.size(); }
  std::size_t n() const;      // total leader variables
  std::size_t m() const { return follower.num_vars(); }
  std::size_t m_bar() const;  // total leader constraints

  std::size_t var_offset(std::size_t nu) const;
  std::size_t constraint_offset(std::size_t nu) const;
};

/// Joint strategy x together with the stacked leader multipliers lambda.
/// lambda >= 0 is not enforced; iterates may leave the orthant.
struct PrimalDualPoint {
  Vector x;
  Vector lambda;

  Vector stacked() const;
  static PrimalDualPoint from_stacked(const Vector& z, std::size_t n);
};

class GameError : public std::runtime_error {
 public:
  enum class Kind { Parse, Dimension, Validation, Io };

  GameError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

struct Finding {
  enum class Category { Dimension, Value };

  Category category;
  std::string field;    // e.g. "leaders[0].Q", "follower.a"
  std::string message;  // e.g. "Q not positive definite"
};

/// Every data-checkable requirement on the game. Empty result means valid.
std::vector<Finding> validate_game(const GameSpec& game);

/// Symmetric pivoted LDL' test with pivot threshold 1e-12 * max|Q_ij|.
bool is_symmetric_positive_definite(const Matrix& Q);

GameSpec parse_game(const std::string& json_text);
GameSpec load_game(const std::filesystem::path& path);
std::string game_to_json(const GameSpec& game);
void write_game(const GameSpec& game, const std::filesystem::path& path);

/// Row block of an n x m matrix (B or L) belonging to leader nu (0-based).
Matrix slice_rows(const GameSpec& game, const Matrix& M, std::size_t nu);

/// The two data sets shipped with the library (index 1 or 2).
GameSpec builtin_dataset(int index);

}  // namespace mlfg
