#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <random>

#include "pge/matrix.hpp"

namespace testing_support {

inline pge::Matrix random_matrix(std::size_t rows, std::size_t cols, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  pge::Matrix m(rows, cols);
  for (double& x : m.data()) x = normal(rng);
  return m;
}

inline pge::Matrix random_symmetric(std::size_t n, std::mt19937_64& rng) {
  const pge::Matrix a = random_matrix(n, n, rng);
  return 0.5 * (a + pge::transpose(a));
}

inline Eigen::MatrixXd to_eigen(const pge::Matrix& m) {
  Eigen::MatrixXd out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = m(i, j);
  return out;
}

inline pge::Matrix from_eigen(const Eigen::MatrixXd& m) {
  pge::Matrix out(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) out(i, j) = m(i, j);
  return out;
}

// Q factor of a Gaussian matrix, drawn through Eigen so that it does not
// depend on the library under test.
inline pge::Matrix random_orthogonal(std::size_t d, std::mt19937_64& rng) {
  const Eigen::MatrixXd a = to_eigen(random_matrix(d, d, rng));
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(d, d);
  // Fix column signs so Q is Haar distributed.
  const Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (std::size_t j = 0; j < d; ++j)
    if (r(j, j) < 0) q.col(j) *= -1.0;
  return from_eigen(q);
}

}  // namespace testing_support
