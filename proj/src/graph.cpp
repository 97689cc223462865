#include "netmirror/graph.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <unordered_set>

#include "netmirror/errors.hpp"

namespace netmirror {

void WeightedGraph::validate() const {
  if (adjacency.rows() != adjacency.cols())
    throw DomainError("adjacency must be square");
  if ((adjacency.array() < 0.0).any())
    throw DomainError("edge weights must be non-negative");
  if (adjacency.diagonal().cwiseAbs().sum() != 0.0)
    throw DomainError("graph must be hollow (zero diagonal)");
  if (!directed && adjacency != adjacency.transpose().eval())
    throw DomainError("undirected graph must have a symmetric adjacency");
}

void TemporalGraphSet::validate() const {
  const Index n = order();
  for (std::size_t i = 0; i < snapshots.size(); ++i) {
    const auto& snap = snapshots[i];
    if (snap.graph.order() != n)
      throw DomainError("snapshot day " + std::to_string(snap.day) +
                        ": adjacency order does not match vertex count");
    snap.graph.validate();
    if (i > 0 && snapshots[i - 1].day >= snap.day)
      throw DomainError("snapshot days must be strictly increasing");
  }
}

WeightedGraph symmetrize(const WeightedGraph& g) {
  WeightedGraph out;
  out.adjacency = (g.adjacency + g.adjacency.transpose()) / 2.0;
  out.adjacency.diagonal().setZero();
  // Make symmetry bit-exact; the averaged halves can differ in the last ulp.
  for (Index i = 0; i < out.adjacency.rows(); ++i)
    for (Index j = 0; j < i; ++j) out.adjacency(i, j) = out.adjacency(j, i);
  out.directed = false;
  return out;
}

WeightedGraph rank_transform(const WeightedGraph& g) {
  if (g.directed) throw DomainError("rank_transform expects an undirected graph");
  const Index n = g.order();

  struct Entry {
    double weight;
    Index i, j;
  };
  std::vector<Entry> entries;
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j)
      if (g.adjacency(i, j) != 0.0) entries.push_back({g.adjacency(i, j), i, j});

  WeightedGraph out;
  out.adjacency = MatrixXd::Zero(n, n);
  out.directed = false;
  if (entries.empty()) return out;

  std::sort(entries.begin(), entries.end(),
            [](const Entry& a, const Entry& b) { return a.weight < b.weight; });

  const double m = static_cast<double>(entries.size());
  std::size_t lo = 0;
  while (lo < entries.size()) {
    std::size_t hi = lo;
    while (hi + 1 < entries.size() && entries[hi + 1].weight == entries[lo].weight) ++hi;
    // Average rank of the tie block [lo, hi], ranks counted from 1.
    const double rank = (static_cast<double>(lo + 1) + static_cast<double>(hi + 1)) / 2.0;
    const double value = rank / (m + 1.0);
    for (std::size_t k = lo; k <= hi; ++k) {
      out.adjacency(entries[k].i, entries[k].j) = value;
      out.adjacency(entries[k].j, entries[k].i) = value;
    }
    lo = hi + 1;
  }
  return out;
}

namespace {

// Connected components of the subgraph induced on `keep` (positive weights
// as edges). Returns components as lists of original vertex indices.
std::vector<std::vector<Index>> induced_components(const MatrixXd& adjacency,
                                                   const std::vector<Index>& keep) {
  const Index k = static_cast<Index>(keep.size());
  std::vector<std::vector<Index>> components;
  std::vector<char> visited(k, 0);
  for (Index start = 0; start < k; ++start) {
    if (visited[start]) continue;
    std::vector<Index> stack{start};
    std::vector<Index> component;
    visited[start] = 1;
    while (!stack.empty()) {
      const Index u = stack.back();
      stack.pop_back();
      component.push_back(keep[u]);
      for (Index v = 0; v < k; ++v) {
        if (!visited[v] && adjacency(keep[u], keep[v]) > 0.0) {
          visited[v] = 1;
          stack.push_back(v);
        }
      }
    }
    std::sort(component.begin(), component.end());
    components.push_back(std::move(component));
  }
  return components;
}

TemporalGraphSet restrict_to(const TemporalGraphSet& s, const std::vector<Index>& keep) {
  TemporalGraphSet out;
  out.vertices.reserve(keep.size());
  for (Index v : keep) out.vertices.push_back(s.vertices[static_cast<std::size_t>(v)]);
  const Index k = static_cast<Index>(keep.size());
  for (const auto& snap : s.snapshots) {
    Snapshot r;
    r.day = snap.day;
    r.graph.directed = snap.graph.directed;
    r.graph.adjacency = MatrixXd::Zero(k, k);
    for (Index a = 0; a < k; ++a)
      for (Index b = 0; b < k; ++b)
        r.graph.adjacency(a, b) = snap.graph.adjacency(keep[a], keep[b]);
    out.snapshots.push_back(std::move(r));
  }
  return out;
}

}  // namespace

TemporalGraphSet largest_common_connected_component(const TemporalGraphSet& s) {
  if (s.snapshots.empty())
    throw DegenerateInputError("largest_common_connected_component: no snapshots");
  for (const auto& snap : s.snapshots)
    if (snap.graph.directed)
      throw DomainError("largest_common_connected_component expects undirected snapshots");

  const Index n = s.order();

  // Intersection of the non-isolated vertex sets.
  std::vector<Index> keep;
  for (Index v = 0; v < n; ++v) {
    bool active_everywhere = true;
    for (const auto& snap : s.snapshots) {
      if (snap.graph.adjacency.row(v).sum() <= 0.0) {
        active_everywhere = false;
        break;
      }
    }
    if (active_everywhere) keep.push_back(v);
  }

  // Peel: restrict to the largest connected component of each snapshot in
  // turn until every induced snapshot is connected.
  bool changed = true;
  while (changed && keep.size() >= 2) {
    changed = false;
    for (const auto& snap : s.snapshots) {
      auto components = induced_components(snap.graph.adjacency, keep);
      if (components.size() <= 1) continue;
      // Largest component; ties go to the one with the smallest vertex.
      std::size_t best = 0;
      for (std::size_t c = 1; c < components.size(); ++c) {
        if (components[c].size() > components[best].size() ||
            (components[c].size() == components[best].size() &&
             components[c].front() < components[best].front()))
          best = c;
      }
      keep = components[best];
      changed = true;
    }
  }

  if (keep.size() < 2) {
    std::ostringstream msg;
    msg << "no common connected component of size >= 2 (surviving vertices:";
    for (Index v : keep) msg << ' ' << s.vertices[static_cast<std::size_t>(v)];
    msg << ")";
    throw DegenerateInputError(msg.str());
  }
  return restrict_to(s, keep);
}

TemporalGraphSet window_filter(const TemporalGraphSet& s, int lo, int hi) {
  if (lo > hi) throw DomainError("window_filter: lo must not exceed hi");
  TemporalGraphSet out;
  out.vertices = s.vertices;
  for (const auto& snap : s.snapshots)
    if (snap.day >= lo && snap.day <= hi) out.snapshots.push_back(snap);
  if (out.snapshots.empty())
    throw DegenerateInputError("window_filter: no snapshots in [" + std::to_string(lo) +
                               ", " + std::to_string(hi) + "]");
  return out;
}

TemporalGraphSet select_days(const TemporalGraphSet& s, const std::vector<int>& days) {
  std::unordered_set<int> wanted(days.begin(), days.end());
  TemporalGraphSet out;
  out.vertices = s.vertices;
  for (const auto& snap : s.snapshots)
    if (wanted.count(snap.day)) out.snapshots.push_back(snap);
  if (out.snapshots.empty())
    throw DegenerateInputError("select_days: none of the requested days are present");
  return out;
}

std::vector<ActivityRow> activity_stats(const TemporalGraphSet& s) {
  std::vector<ActivityRow> rows;
  rows.reserve(s.snapshots.size());
  for (const auto& snap : s.snapshots) {
    if (snap.graph.directed)
      throw DomainError("activity_stats expects undirected snapshots");
    ActivityRow row;
    row.day = snap.day;
    const Index n = snap.graph.order();
    for (Index v = 0; v < n; ++v)
      if (snap.graph.adjacency.row(v).sum() > 0.0) ++row.non_isolated;
    for (Index i = 0; i < n; ++i)
      for (Index j = i + 1; j < n; ++j)
        if (snap.graph.adjacency(i, j) > 0.0) ++row.edges;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace netmirror
