#include "doctest.h"

#include <limits>
#include <vector>

#include "netmirror/embedding.hpp"

#include "oracles.hpp"

using namespace netmirror;

namespace {

MatrixXd random_psd_adjacency(Index n, Index d, std::mt19937_64& rng) {
  const MatrixXd x = testing::random_gaussian(n, d, rng).cwiseAbs() * 0.7;
  MatrixXd a = x * x.transpose();
  a.diagonal().setZero();
  return a;
}

}  // namespace

TEST_CASE("property: dmv_hat is symmetric in its arguments") {
  std::mt19937_64 rng(401);
  for (Index d : {1, 2, 3}) {
    for (int trial = 0; trial < 15; ++trial) {
      const MatrixXd x = testing::random_gaussian(30, d, rng);
      const MatrixXd y = testing::random_gaussian(30, d, rng);
      CHECK(std::abs(dmv_hat(x, y) - dmv_hat(y, x)) <= 1e-10);
    }
  }
}

TEST_CASE("property: dmv_hat is invariant under orthogonal gauge on either argument") {
  std::mt19937_64 rng(402);
  for (Index d : {1, 2, 3}) {
    for (int trial = 0; trial < 15; ++trial) {
      const MatrixXd x = testing::random_gaussian(25, d, rng);
      const MatrixXd y = testing::random_gaussian(25, d, rng);
      const MatrixXd w1 = testing::random_orthogonal(d, rng);
      const MatrixXd w2 = testing::random_orthogonal(d, rng);
      const double base = dmv_hat(x, y);
      CHECK(std::abs(dmv_hat(x * w1, y) - base) <= 1e-10);
      CHECK(std::abs(dmv_hat(x, y * w2) - base) <= 1e-10);
      CHECK(std::abs(dmv_hat(x * w1, y * w2) - base) <= 1e-10);
    }
  }
}

TEST_CASE("property: dmv_hat is non-negative and vanishes exactly on aligned clouds") {
  std::mt19937_64 rng(403);
  for (Index d : {1, 2, 3}) {
    for (int trial = 0; trial < 15; ++trial) {
      const MatrixXd x = testing::random_gaussian(20, d, rng);
      const MatrixXd w = testing::random_orthogonal(d, rng);
      CHECK(dmv_hat(x, x * w) < 1e-8);  // orthogonally aligned: distance is zero

      const MatrixXd y = x + testing::random_gaussian(20, d, rng);
      const double apart = dmv_hat(x, y);
      CHECK(apart >= 0.0);
      CHECK(apart > 1e-6);  // generic perturbation separates the clouds
    }
  }
}

TEST_CASE("property: ase picks the eigenpair subset with the smallest reconstruction error") {
  std::mt19937_64 rng(404);
  for (int trial = 0; trial < 15; ++trial) {
    const Index n = 7;
    const Index d = 2;

    // Zeroing the diagonal can leave fewer positive eigenpairs than d;
    // resample until the subset choice is non-trivial.
    MatrixXd a;
    Eigen::SelfAdjointEigenSolver<MatrixXd> eig;
    std::vector<Index> positive;
    do {
      a = random_psd_adjacency(n, 3, rng);
      eig.compute(a);
      positive.clear();
      for (Index i = 0; i < n; ++i)
        if (eig.eigenvalues()(i) > 0.0) positive.push_back(i);
    } while (positive.size() <= static_cast<std::size_t>(d));

    const LatentPositions emb = ase(testing::undirected(a), d);
    const double chosen = (a - emb.matrix * emb.matrix.transpose()).norm();

    // Enumerate every size-d subset of positive eigenpairs.
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < positive.size(); ++i)
      for (std::size_t j = i + 1; j < positive.size(); ++j) {
        MatrixXd x(n, d);
        x.col(0) = eig.eigenvectors().col(positive[i]) * std::sqrt(eig.eigenvalues()(positive[i]));
        x.col(1) = eig.eigenvectors().col(positive[j]) * std::sqrt(eig.eigenvalues()(positive[j]));
        best = std::min(best, (a - x * x.transpose()).norm());
      }
    CHECK(chosen <= best + 1e-9);
  }
}
