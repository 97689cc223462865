#include "doctest.h"

#include <Eigen/Eigenvalues>

#include "netmirror/embedding.hpp"
#include "netmirror/errors.hpp"

#include "oracles.hpp"

using namespace netmirror;

TEST_CASE("ase of a single edge is the hand eigendecomposition") {
  MatrixXd a(2, 2);
  a << 0, 1, 1, 0;
  const LatentPositions x = ase(testing::undirected(a), 1);
  REQUIRE(x.matrix.rows() == 2);
  REQUIRE(x.matrix.cols() == 1);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  CHECK(x.matrix(0, 0) == doctest::Approx(inv_sqrt2).epsilon(1e-12));
  CHECK(x.matrix(1, 0) == doctest::Approx(inv_sqrt2).epsilon(1e-12));
  const MatrixXd recon = x.matrix * x.matrix.transpose();
  CHECK(recon(0, 0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(recon(0, 1) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("ase of K4 at d=1 gives entries sqrt(3)/2") {
  MatrixXd k4 = MatrixXd::Constant(4, 4, 1.0);
  k4.diagonal().setZero();
  const LatentPositions x = ase(testing::undirected(k4), 1);
  for (Index i = 0; i < 4; ++i)
    CHECK(x.matrix(i, 0) == doctest::Approx(std::sqrt(3.0) / 2.0).epsilon(1e-12));
}

TEST_CASE("ase reconstruction residual matches a dense eigensolver oracle") {
  std::mt19937_64 rng(17);
  const Index n = 20;
  const Index d = 2;
  MatrixXd x0 = testing::random_gaussian(n, d, rng);
  MatrixXd a = x0 * x0.transpose();
  a.diagonal().setZero();

  const LatentPositions x = ase(testing::undirected(a), d);
  const double resid = (x.matrix * x.matrix.transpose() - a).norm();

  // Oracle: independent full eigendecomposition, top-d positive pairs.
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(a);
  MatrixXd xo(n, d);
  for (Index k = 0; k < d; ++k) {
    const Index src = n - 1 - k;
    REQUIRE(es.eigenvalues()(src) > 0.0);
    xo.col(k) = es.eigenvectors().col(src) * std::sqrt(es.eigenvalues()(src));
  }
  const double resid_oracle = (xo * xo.transpose() - a).norm();
  CHECK(resid == doctest::Approx(resid_oracle).epsilon(1e-8));

  // Column order follows descending eigenvalues.
  CHECK(x.matrix.col(0).squaredNorm() >= x.matrix.col(1).squaredNorm());
}

TEST_CASE("ase reports the available positive-eigenvalue count") {
  MatrixXd edge(2, 2);
  edge << 0, 1, 1, 0;
  try {
    ase(testing::undirected(edge), 2);
    FAIL("expected RankDeficiencyError");
  } catch (const RankDeficiencyError& e) {
    CHECK(e.available == 1);
  }

  try {
    ase(testing::undirected(MatrixXd::Zero(3, 3)), 1);
    FAIL("expected RankDeficiencyError");
  } catch (const RankDeficiencyError& e) {
    CHECK(e.available == 0);
  }

  CHECK_THROWS_AS(ase(testing::undirected(edge), 0), DomainError);
}

TEST_CASE("adjacency_spectrum is the descending eigenvalue list") {
  MatrixXd k4 = MatrixXd::Constant(4, 4, 1.0);
  k4.diagonal().setZero();
  const VectorXd spectrum = adjacency_spectrum(testing::undirected(k4));
  REQUIRE(spectrum.size() == 4);
  CHECK(spectrum(0) == doctest::Approx(3.0).epsilon(1e-12));
  for (Index i = 1; i < 4; ++i) CHECK(spectrum(i) == doctest::Approx(-1.0).epsilon(1e-12));
  for (Index i = 1; i < 4; ++i) CHECK(spectrum(i - 1) >= spectrum(i));
}

TEST_CASE("procrustes_align solves the alignment exactly for rigid inputs") {
  std::mt19937_64 rng(29);
  const MatrixXd x = testing::random_gaussian(12, 3, rng);

  const MatrixXd w_same = procrustes_align(x, x);
  CHECK((w_same - MatrixXd::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-10);

  const MatrixXd r = testing::random_orthogonal(3, rng);
  const MatrixXd y = x * r;
  const MatrixXd w = procrustes_align(x, y);
  CHECK((w.transpose() * w - MatrixXd::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-10);
  CHECK((x - y * w).norm() < 1e-10);
}

TEST_CASE("procrustes_align beats a fine O(2) grid") {
  std::mt19937_64 rng(37);
  const MatrixXd x = testing::random_gaussian(50, 2, rng);
  const MatrixXd y = testing::random_gaussian(50, 2, rng);
  const MatrixXd w = procrustes_align(x, y);
  const double best = (x - y * w).norm();
  constexpr int kSteps = 5000;
  for (int g = 0; g < kSteps; ++g) {
    const double angle = 2.0 * 3.14159265358979323846 * g / kSteps;
    MatrixXd rot(2, 2);
    rot << std::cos(angle), -std::sin(angle), std::sin(angle), std::cos(angle);
    MatrixXd ref(2, 2);
    ref << std::cos(angle), std::sin(angle), std::sin(angle), -std::cos(angle);
    CHECK(best <= (x - y * rot).norm() + 1e-9);
    CHECK(best <= (x - y * ref).norm() + 1e-9);
  }
}

TEST_CASE("dmv_hat vanishes on aligned inputs and is exactly 1 on the hand example") {
  std::mt19937_64 rng(41);
  const MatrixXd x = testing::random_gaussian(30, 2, rng);
  CHECK(dmv_hat(x, x) < 1e-12);

  const MatrixXd w0 = testing::random_orthogonal(2, rng);
  CHECK(dmv_hat(x, x * w0) < 1e-10);

  const MatrixXd ones = MatrixXd::Constant(4, 1, 1.0);
  const MatrixXd zeros = MatrixXd::Zero(4, 1);
  CHECK(dmv_hat(ones, zeros) == 1.0);
}

TEST_CASE("dmv_hat is symmetric and gauge invariant") {
  std::mt19937_64 rng(43);
  for (Index d : {1, 2, 3}) {
    const MatrixXd x = testing::random_gaussian(25, d, rng);
    const MatrixXd y = testing::random_gaussian(25, d, rng);
    const double base = dmv_hat(x, y);
    CHECK(std::abs(base - dmv_hat(y, x)) <= 1e-10);
    const MatrixXd q1 = testing::random_orthogonal(d, rng);
    const MatrixXd q2 = testing::random_orthogonal(d, rng);
    CHECK(std::abs(base - dmv_hat(x * q1, y * q2)) <= 1e-10);
    CHECK(base >= 0.0);
  }
}

TEST_CASE("dmv_hat rejects shape mismatches") {
  const MatrixXd a = MatrixXd::Zero(4, 2);
  const MatrixXd b = MatrixXd::Zero(4, 3);
  const MatrixXd c = MatrixXd::Zero(5, 2);
  CHECK_THROWS_AS(dmv_hat(a, b), DomainError);
  CHECK_THROWS_AS(dmv_hat(a, c), DomainError);
  CHECK_THROWS_AS(dmv_hat(MatrixXd(), MatrixXd()), DomainError);
}

TEST_CASE("dmv_hat on LatentPositions delegates to the matrices") {
  std::mt19937_64 rng(47);
  LatentPositions x{testing::random_gaussian(10, 2, rng), 1};
  LatentPositions y{testing::random_gaussian(10, 2, rng), 2};
  CHECK(dmv_hat(x, y) == dmv_hat(x.matrix, y.matrix));
}
