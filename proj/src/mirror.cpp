#include "netmirror/mirror.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Eigenvalues>

#include "netmirror/errors.hpp"
#include "netmirror/parallel.hpp"

namespace netmirror {

void DistanceMatrix::validate() const {
  const Index t = matrix.rows();
  if (matrix.cols() != t) throw DomainError("distance matrix must be square");
  if (static_cast<Index>(days.size()) != t)
    throw DomainError("distance matrix needs one day label per row");
  if (!matrix.allFinite()) throw DomainError("distance matrix entries must be finite");
  if (t == 0) return;
  const double scale = std::max(1.0, matrix.cwiseAbs().maxCoeff());
  if ((matrix - matrix.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw DomainError("distance matrix must be symmetric");
  if (matrix.diagonal().cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw DomainError("distance matrix must have a zero diagonal");
  if (matrix.minCoeff() < 0.0) throw DomainError("distances must be non-negative");
}

DistanceMatrix distance_matrix(const TemporalGraphSet& s, Index d) {
  s.validate();
  const Index t = s.size();
  if (t == 0) throw DegenerateInputError("distance_matrix needs at least one snapshot");

  std::vector<MatrixXd> embeddings(static_cast<std::size_t>(t));
  std::vector<std::exception_ptr> failures(static_cast<std::size_t>(t));
  parallel_for(static_cast<std::size_t>(t), [&](std::size_t i) {
    try {
      embeddings[i] = ase(s.snapshots[i].graph, d).matrix;
    } catch (...) {
      failures[i] = std::current_exception();
    }
  });
  for (std::size_t i = 0; i < failures.size(); ++i) {
    if (!failures[i]) continue;
    const std::string label = "day " + std::to_string(s.snapshots[i].day) + ": ";
    try {
      std::rethrow_exception(failures[i]);
    } catch (const RankDeficiencyError& e) {
      throw RankDeficiencyError(label + e.what(), e.available);
    } catch (const Error& e) {
      throw DomainError(label + e.what());
    }
  }

  DistanceMatrix out;
  out.matrix = MatrixXd::Zero(t, t);
  out.days.resize(static_cast<std::size_t>(t));
  for (Index i = 0; i < t; ++i) out.days[static_cast<std::size_t>(i)] = s.snapshots[i].day;

  std::vector<std::pair<Index, Index>> pairs;
  pairs.reserve(static_cast<std::size_t>(t * (t - 1) / 2));
  for (Index i = 0; i < t; ++i)
    for (Index j = i + 1; j < t; ++j) pairs.emplace_back(i, j);
  parallel_for(pairs.size(), [&](std::size_t p) {
    const auto [i, j] = pairs[p];
    const double v = dmv_hat(embeddings[static_cast<std::size_t>(i)],
                             embeddings[static_cast<std::size_t>(j)]);
    out.matrix(i, j) = v;
    out.matrix(j, i) = v;
  });
  return out;
}

MirrorCurve cmds(const DistanceMatrix& dist, Index m) {
  if (m < 1) throw DomainError("cmds dimension must be >= 1");
  dist.validate();
  const Index t = dist.matrix.rows();
  if (t == 0) throw DegenerateInputError("cmds needs at least one point");

  // B = -1/2 J (D.^2) J expressed through row/column/grand means.
  const MatrixXd d2 = dist.matrix.array().square();
  const VectorXd row_mean = d2.rowwise().mean();
  const double grand_mean = d2.mean();
  MatrixXd b(t, t);
  for (Index j = 0; j < t; ++j)
    for (Index i = 0; i < t; ++i)
      b(i, j) = -0.5 * (d2(i, j) - row_mean(i) - row_mean(j) + grand_mean);

  Eigen::SelfAdjointEigenSolver<MatrixXd> es(b);
  if (es.info() != Eigen::Success) throw DomainError("cmds eigendecomposition failed");
  const VectorXd evals = es.eigenvalues();  // ascending

  // "Positive" up to a relative rounding cushion, so that rank-deficient
  // configurations report reduced dimension instead of noise columns.
  const double threshold = std::max(0.0, evals(t - 1)) * 1e-12;
  Index available = 0;
  while (available < t && evals(t - 1 - available) > threshold &&
         evals(t - 1 - available) > 0.0)
    ++available;

  MirrorCurve out;
  out.days = dist.days;
  const Index retained = std::min(m, available);
  out.reduced = retained < m;
  if (retained == 0) {
    // Fully degenerate (e.g. zero distances): one flat coordinate so the
    // curve still has a usable column, with no eigenvalues retained.
    out.coordinates = MatrixXd::Zero(t, 1);
    out.eigenvalues = VectorXd(0);
    return out;
  }
  out.coordinates.resize(t, retained);
  out.eigenvalues.resize(retained);
  for (Index c = 0; c < retained; ++c) {
    const Index src = t - 1 - c;
    out.eigenvalues(c) = evals(src);
    out.coordinates.col(c) = es.eigenvectors().col(src) * std::sqrt(evals(src));
  }
  canonicalize_column_signs(out.coordinates);
  return out;
}

namespace {

// Neighbor radius = k-th smallest distance from i; ties inside the radius
// are kept, so coincident points form a complete neighborhood.
std::vector<std::vector<bool>> mutual_knn(const MatrixXd& euclid, Index k) {
  const Index t = euclid.rows();
  const Index effective = std::min(k, t - 1);
  std::vector<std::vector<bool>> within(static_cast<std::size_t>(t),
                                        std::vector<bool>(static_cast<std::size_t>(t), false));
  std::vector<double> others;
  for (Index i = 0; i < t; ++i) {
    others.clear();
    for (Index j = 0; j < t; ++j)
      if (j != i) others.push_back(euclid(i, j));
    std::nth_element(others.begin(), others.begin() + (effective - 1), others.end());
    const double radius = others[static_cast<std::size_t>(effective - 1)];
    for (Index j = 0; j < t; ++j)
      if (j != i && euclid(i, j) <= radius) within[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = true;
  }
  std::vector<std::vector<bool>> adjacency(static_cast<std::size_t>(t),
                                           std::vector<bool>(static_cast<std::size_t>(t), false));
  for (Index i = 0; i < t; ++i)
    for (Index j = 0; j < t; ++j)
      adjacency[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
          within[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] &&
          within[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)];
  return adjacency;
}

std::vector<std::vector<Index>> connected_components(const std::vector<std::vector<bool>>& adjacency) {
  const Index t = static_cast<Index>(adjacency.size());
  std::vector<bool> seen(static_cast<std::size_t>(t), false);
  std::vector<std::vector<Index>> components;
  for (Index start = 0; start < t; ++start) {
    if (seen[static_cast<std::size_t>(start)]) continue;
    std::vector<Index> component;
    std::vector<Index> stack{start};
    seen[static_cast<std::size_t>(start)] = true;
    while (!stack.empty()) {
      const Index v = stack.back();
      stack.pop_back();
      component.push_back(v);
      for (Index w = 0; w < t; ++w) {
        if (adjacency[static_cast<std::size_t>(v)][static_cast<std::size_t>(w)] &&
            !seen[static_cast<std::size_t>(w)]) {
          seen[static_cast<std::size_t>(w)] = true;
          stack.push_back(w);
        }
      }
    }
    std::sort(component.begin(), component.end());
    components.push_back(std::move(component));
  }
  return components;
}

}  // namespace

MirrorCurve isomap(const MirrorCurve& curve, Index k, Index m) {
  const Index t = curve.coordinates.rows();
  if (t < 3) throw DomainError("isomap needs at least 3 points");
  if (static_cast<Index>(curve.days.size()) != t)
    throw DomainError("isomap needs one day label per point");
  if (k != kAutoNeighbors && k < 1)
    throw DomainError("isomap neighborhood size must be >= 1");

  MatrixXd euclid(t, t);
  for (Index i = 0; i < t; ++i) {
    euclid(i, i) = 0.0;
    for (Index j = i + 1; j < t; ++j) {
      const double v = (curve.coordinates.row(i) - curve.coordinates.row(j)).norm();
      euclid(i, j) = v;
      euclid(j, i) = v;
    }
  }

  std::vector<std::vector<bool>> adjacency;
  if (k == kAutoNeighbors) {
    for (Index trial = 2; trial < t; ++trial) {
      adjacency = mutual_knn(euclid, trial);
      if (connected_components(adjacency).size() == 1) break;
    }
    if (adjacency.empty() || connected_components(adjacency).size() != 1)
      adjacency = mutual_knn(euclid, t - 1);  // complete graph, always connected
  } else {
    adjacency = mutual_knn(euclid, k);
    auto components = connected_components(adjacency);
    if (components.size() != 1) {
      std::string msg = "isomap neighbor graph is disconnected (k=" + std::to_string(k) +
                        ", " + std::to_string(components.size()) + " components)";
      throw ConnectivityError(msg, std::move(components));
    }
  }

  // Floyd-Warshall geodesics along the neighbor graph.
  const double inf = std::numeric_limits<double>::infinity();
  MatrixXd geo = MatrixXd::Constant(t, t, inf);
  for (Index i = 0; i < t; ++i) {
    geo(i, i) = 0.0;
    for (Index j = 0; j < t; ++j)
      if (adjacency[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)])
        geo(i, j) = euclid(i, j);
  }
  for (Index mid = 0; mid < t; ++mid)
    for (Index i = 0; i < t; ++i)
      for (Index j = 0; j < t; ++j)
        geo(i, j) = std::min(geo(i, j), geo(i, mid) + geo(mid, j));

  DistanceMatrix geodesic;
  geodesic.matrix = std::move(geo);
  geodesic.days = curve.days;
  return cmds(geodesic, m);
}

IsoMirror iso_mirror(const MirrorCurve& curve, Index k) {
  const MirrorCurve one = isomap(curve, k, 1);
  IsoMirror out;
  out.days = one.days;
  out.values = one.coordinates.col(0);

  // Orientation: non-negative best-fit slope against days. The slope sign
  // is the sign of the day/value covariance.
  const Index t = out.values.size();
  double day_mean = 0.0;
  for (int day : out.days) day_mean += day;
  day_mean /= static_cast<double>(t);
  const double value_mean = out.values.mean();
  double covariance = 0.0;
  for (Index i = 0; i < t; ++i)
    covariance += (static_cast<double>(out.days[static_cast<std::size_t>(i)]) - day_mean) *
                  (out.values(i) - value_mean);
  if (covariance < 0.0) out.values = -out.values;
  return out;
}

MirrorPipelineResult mirror_pipeline(const TemporalGraphSet& s, Index d, Index m, Index k) {
  MirrorPipelineResult result;
  result.distances = distance_matrix(s, d);
  result.mirror = cmds(result.distances, m);
  result.iso = iso_mirror(result.mirror, k);
  return result;
}

}  // namespace netmirror
