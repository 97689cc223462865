#pragma once

#include <vector>

#include "netmirror/embedding.hpp"
#include "netmirror/graph.hpp"
#include "netmirror/types.hpp"

namespace netmirror {

/// Symmetric, hollow, non-negative T x T matrix of pairwise snapshot
/// distances, with the matching day labels.
struct DistanceMatrix {
  MatrixXd matrix;
  std::vector<int> days;

  void validate() const;
};

/// Low-dimensional Euclidean representation of the snapshots over time.
/// Columns are mean-centered; eigenvalues (one per retained column) are
/// positive and non-increasing. `reduced` flags that fewer than the
/// requested number of positive components existed.
struct MirrorCurve {
  MatrixXd coordinates;  // T x m
  std::vector<int> days;
  VectorXd eigenvalues;
  bool reduced = false;
};

/// One-dimensional geodesic re-parametrization of the mirror. Mean zero;
/// oriented so the best-fit line over days has non-negative slope.
struct IsoMirror {
  VectorXd values;
  std::vector<int> days;
};

/// Pairwise dmv_hat of the rank-d spectral embeddings of all snapshots.
/// The T(T-1)/2 pairs are evaluated as a parallel map. Rank deficiency in
/// any snapshot is reported with its day label.
DistanceMatrix distance_matrix(const TemporalGraphSet& s, Index d);

/// Classical MDS: eigendecompose -J D^2 J / 2 and keep the top m positive
/// components. With fewer than m positive eigenvalues the result has the
/// available columns and `reduced` set; with none it is a single zero column.
MirrorCurve cmds(const DistanceMatrix& dist, Index m);

/// Pass k = kAutoNeighbors to use the smallest k >= 2 whose mutual k-NN
/// graph is connected.
inline constexpr Index kAutoNeighbors = 0;

/// ISOMAP: geodesic distances along the mutual k-nearest-neighbor graph of
/// the mirror points, re-embedded by cmds in dimension m. Throws
/// ConnectivityError (listing the components) if the neighbor graph is
/// disconnected for an explicit k.
MirrorCurve isomap(const MirrorCurve& curve, Index k, Index m);

/// isomap with m = 1 plus the sign convention.
IsoMirror iso_mirror(const MirrorCurve& curve, Index k);

struct MirrorPipelineResult {
  DistanceMatrix distances;
  MirrorCurve mirror;
  IsoMirror iso;
};

/// distance_matrix -> cmds(m) -> iso_mirror(k), day labels preserved.
MirrorPipelineResult mirror_pipeline(const TemporalGraphSet& s, Index d, Index m, Index k);

}  // namespace netmirror
