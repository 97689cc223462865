#pragma once

#include <string>
#include <vector>

#include "netmirror/types.hpp"

namespace netmirror {

/// Weighted hollow graph on vertices {0, ..., n-1}. Weights are
/// non-negative reals; the diagonal is identically zero. When
/// directed == false the adjacency is exactly symmetric.
struct WeightedGraph {
  MatrixXd adjacency;
  bool directed = true;

  Index order() const { return adjacency.rows(); }

  /// Throws DomainError if an invariant is violated.
  void validate() const;
};

struct Snapshot {
  int day = 0;
  WeightedGraph graph;
};

/// Ordered sequence of snapshots sharing one vertex set. Days are
/// strictly increasing; every adjacency is |vertices| x |vertices|.
struct TemporalGraphSet {
  std::vector<std::string> vertices;
  std::vector<Snapshot> snapshots;

  Index order() const { return static_cast<Index>(vertices.size()); }
  std::size_t size() const { return snapshots.size(); }

  void validate() const;
};

/// (A + A^T) / 2; the result is undirected and keeps a zero diagonal.
WeightedGraph symmetrize(const WeightedGraph& g);

/// Replaces the m nonzero upper-triangular weights with rank(w)/(m+1),
/// averaging ranks over ties; zeros stay zero. Input must be undirected.
WeightedGraph rank_transform(const WeightedGraph& g);

/// Restriction of every snapshot to the largest vertex subset on which
/// each snapshot's induced subgraph is connected. Starts from the
/// intersection of the non-isolated vertex sets and iteratively peels
/// vertices outside each snapshot's largest connected component until a
/// fixed point. Throws DegenerateInputError if fewer than 2 vertices
/// survive. Snapshots must be undirected.
TemporalGraphSet largest_common_connected_component(const TemporalGraphSet& s);

/// Keeps snapshots with lo <= day <= hi, order preserved. Throws
/// DegenerateInputError on an empty selection.
TemporalGraphSet window_filter(const TemporalGraphSet& s, int lo, int hi);

/// Keeps snapshots whose day appears in `days` (order preserved). Days
/// absent from the series are ignored; an empty selection throws
/// DegenerateInputError.
TemporalGraphSet select_days(const TemporalGraphSet& s, const std::vector<int>& days);

struct ActivityRow {
  int day = 0;
  Index non_isolated = 0;
  long edges = 0;
};

/// Per-snapshot counts of non-isolated vertices (degree >= 1) and of
/// unordered pairs with positive weight. Snapshots must be undirected.
std::vector<ActivityRow> activity_stats(const TemporalGraphSet& s);

}  // namespace netmirror
