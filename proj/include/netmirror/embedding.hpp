#pragma once

#include <Eigen/SVD>

#include "netmirror/errors.hpp"
#include "netmirror/graph.hpp"
#include "netmirror/types.hpp"

namespace netmirror {

/// Per-vertex embedding coordinates for one snapshot; columns are ordered
/// by descending eigenvalue.
struct LatentPositions {
  MatrixXd matrix;  // n x d
  int day = 0;
};

/// Flips each column so its first coordinate of meaningful magnitude is
/// positive. Fixes the eigenvector sign ambiguity for reproducible output.
template <typename Derived>
void canonicalize_column_signs(Eigen::MatrixBase<Derived>& m) {
  for (Index c = 0; c < m.cols(); ++c) {
    for (Index r = 0; r < m.rows(); ++r) {
      const auto v = m(r, c);
      if (v > 1e-9 || v < -1e-9) {
        if (v < 0) m.col(c) = -m.col(c);
        break;
      }
    }
  }
}

/// Adjacency spectral embedding: U_d diag(sqrt(lambda_d)) from the d largest
/// positive eigenpairs. Throws RankDeficiencyError (carrying the available
/// count) when A has fewer than d positive eigenvalues.
LatentPositions ase(const WeightedGraph& g, Index d);

/// All adjacency eigenvalues, descending. Scree diagnostic for choosing d.
VectorXd adjacency_spectrum(const WeightedGraph& g);

/// Data-driven embedding dimension: the k <= cap maximizing the eigengap
/// ratio lambda_k / lambda_{k+1} over the descending positive spectrum
/// (ties toward the smallest k; 1 if at most one eigenvalue is positive).
/// Dimensions past the true signal rank sit in the noise bulk, where
/// consecutive ratios are near 1, so the argmax lands on the rank boundary.
Index scree_dimension(const WeightedGraph& g, Index cap = 8);

/// Orthogonal W minimizing ||X - Y W||_F, via the SVD of Y^T X.
template <typename DerivedX, typename DerivedY>
Matrix<typename DerivedX::Scalar> procrustes_align(const Eigen::MatrixBase<DerivedX>& x,
                                                   const Eigen::MatrixBase<DerivedY>& y) {
  if (x.rows() != y.rows() || x.cols() != y.cols())
    throw DomainError("procrustes_align: shapes must match");
  using Scalar = typename DerivedX::Scalar;
  const Matrix<Scalar> cross = y.transpose() * x;
  Eigen::JacobiSVD<Matrix<Scalar>> svd(cross, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().transpose();
}

/// Largest singular value (spectral norm).
template <typename Derived>
typename Derived::Scalar spectral_norm(const Eigen::MatrixBase<Derived>& m) {
  using Scalar = typename Derived::Scalar;
  if (m.rows() == 0 || m.cols() == 0) return Scalar(0);
  Eigen::JacobiSVD<Matrix<Scalar>> svd(m);
  return svd.singularValues()(0);
}

/// Estimated maximum-directional-variation distance between two embeddings:
/// (1/sqrt(n)) * sigma_max(X - Y W) with W the Procrustes alignment of Y to X.
double dmv_hat(const MatrixXd& x, const MatrixXd& y);
double dmv_hat(const LatentPositions& x, const LatentPositions& y);

}  // namespace netmirror
