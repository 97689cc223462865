#include "netmirror/embedding.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

namespace netmirror {

namespace {

void require_symmetric(const MatrixXd& a, const char* who) {
  if (a.rows() != a.cols()) throw DomainError(std::string(who) + ": matrix must be square");
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  if ((a - a.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw DomainError(std::string(who) + ": matrix must be symmetric");
}

}  // namespace

LatentPositions ase(const WeightedGraph& g, Index d) {
  if (d < 1) throw DomainError("ase: d must be >= 1");
  require_symmetric(g.adjacency, "ase");
  const Index n = g.order();

  Eigen::SelfAdjointEigenSolver<MatrixXd> solver(g.adjacency);
  if (solver.info() != Eigen::Success) throw Error("ase: eigendecomposition failed");
  const VectorXd& values = solver.eigenvalues();  // ascending

  Index positive = 0;
  for (Index i = 0; i < n; ++i)
    if (values(i) > 0.0) ++positive;
  if (positive < d)
    throw RankDeficiencyError("ase: requested d=" + std::to_string(d) + " but only " +
                                  std::to_string(positive) +
                                  " positive eigenvalues are available",
                              positive);

  LatentPositions out;
  out.matrix.resize(n, d);
  for (Index k = 0; k < d; ++k) {
    const Index src = n - 1 - k;  // descending order
    out.matrix.col(k) = solver.eigenvectors().col(src) * std::sqrt(values(src));
  }
  canonicalize_column_signs(out.matrix);
  return out;
}

VectorXd adjacency_spectrum(const WeightedGraph& g) {
  require_symmetric(g.adjacency, "adjacency_spectrum");
  Eigen::SelfAdjointEigenSolver<MatrixXd> solver(g.adjacency, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    throw Error("adjacency_spectrum: eigendecomposition failed");
  return solver.eigenvalues().reverse();
}

Index scree_dimension(const WeightedGraph& g, Index cap) {
  if (cap < 1) throw DomainError("scree_dimension: cap must be >= 1");
  const VectorXd spectrum = adjacency_spectrum(g);
  Index positive = 0;
  while (positive < spectrum.size() && spectrum(positive) > 0.0) ++positive;
  if (positive <= 1) return 1;

  // A zero or negative successor is an infinite gap: substitute a floor so
  // the ratio still singles out the rank boundary.
  const double floor = 1e-12 * spectrum(0);
  Index best = 1;
  double best_ratio = 0.0;
  for (Index k = 1; k <= std::min(cap, positive); ++k) {
    const double next = k < spectrum.size() ? std::max(spectrum(k), floor) : floor;
    const double ratio = spectrum(k - 1) / next;
    if (ratio > best_ratio) {
      best = k;
      best_ratio = ratio;
    }
  }
  return best;
}

double dmv_hat(const MatrixXd& x, const MatrixXd& y) {
  if (x.rows() != y.rows() || x.cols() != y.cols())
    throw DomainError("dmv_hat: embeddings must share n and d");
  if (x.rows() == 0) throw DomainError("dmv_hat: empty embedding");
  const MatrixXd w = procrustes_align(x, y);
  return spectral_norm((x - y * w).eval()) / std::sqrt(static_cast<double>(x.rows()));
}

double dmv_hat(const LatentPositions& x, const LatentPositions& y) {
  return dmv_hat(x.matrix, y.matrix);
}

}  // namespace netmirror
