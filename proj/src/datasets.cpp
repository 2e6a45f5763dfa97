#include "mlfg/model.hpp"

namespace mlfg {

namespace {

Matrix mat(Eigen::Index rows, Eigen::Index cols, std::initializer_list<double> values) {
  Matrix M(rows, cols);
  auto it = values.begin();
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c) M(r, c) = *it++;
  return M;
}

Vector vec(std::initializer_list<double> values) {
  Vector v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double x : values) v(i++) = x;
  return v;
}

LeaderSpec leader(Matrix Q, Matrix A, Vector b) {
  return {std::move(Q), Vector::Zero(2), std::move(A), std::move(b)};
}

GameSpec dataset1() {
  GameSpec g;
  g.leaders.push_back(leader(mat(2, 2, {1.7, 1.6, 1.6, 2.8}),
                             mat(2, 3, {1.6, 0.8, 1.3, 2.6, 2.2, 1.7}), vec({1.6, 1.2, 0.4})));
  g.leaders.push_back(leader(mat(2, 2, {2.7, 1.3, 1.3, 3.6}),
                             mat(2, 3, {1.8, 1.6, 1.4, 1.3, 1.2, 2.7}), vec({1.6, 1.5, 2.6})));
  g.follower.qy_diag = vec({2.5, 3.6, 4.6});
  g.follower.B = mat(4, 3, {2.3, 1.4, 2.6,
                            1.3, 2.1, 1.7,
                            2.5, 1.9, 1.4,
                            1.3, 2.4, 1.6});
  g.follower.L = mat(4, 3, {1.3, 2.4, 1.8,
                            1.3, 2.4, 1.8,
                            1.3, 2.4, 1.8,
                            1.3, 2.4, 1.8});
  g.follower.a = vec({1.4, 2.6, 2.1});
  return g;
}

GameSpec dataset2() {
  GameSpec g;
  g.leaders.push_back(leader(mat(2, 2, {2.5, 1.6, 1.6, 3.8}),
                             mat(2, 3, {1.6, 0.8, 1.3, 2.6, 2.2, 1.7}), vec({1.6, 1.2, 0.4})));
  g.leaders.push_back(leader(mat(2, 2, {2.9, 1.3, 1.3, 1.8}),
                             mat(2, 3, {1.8, 1.6, 1.4, 1.3, 1.2, 2.7}), vec({1.6, 1.5, 2.6})));
  g.leaders.push_back(leader(mat(2, 2, {3.2, 2.3, 2.3, 2.6}),
                             mat(2, 3, {2.3, 1.9, 1.6, 1.3, 1.7, 2.7}), vec({1.5, 0.3, 1.8})));
  g.follower.qy_diag = vec({3.7, 2.6, 0.7});
  g.follower.B = mat(6, 3, {0.8, 2.1, 1.3,
                            1.5, 2.3, 0.7,
                            1.5, 0.9, 2.4,
                            1.8, 2.3, 3.6,
                            1.3, 1.7, 1.7,
                            1.1, 2.6, 1.6});
  g.follower.L = mat(6, 3, {0.8, 2.1, 1.3,
                            1.5, 2.3, 0.7,
                            1.5, 0.9, 2.4,
                            1.8, 2.3, 3.6,
                            0.5, 1.1, 2.1,
                            1.2, 1.5, 1.8});
  g.follower.a = vec({0.4, 1.6, 2.6});
  return g;
}

}  // namespace

GameSpec builtin_dataset(int index) {
  switch (index) {
    case 1: return dataset1();
    case 2: return dataset2();
    default: throw std::out_of_range("unknown dataset " + std::to_string(index));
  }
}

}  // namespace mlfg
