#include "netmirror/matching.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "netmirror/errors.hpp"
#include "netmirror/lap.hpp"
#include "netmirror/parallel.hpp"

namespace netmirror {

Permutation Permutation::identity(Index n) {
  Permutation p;
  p.mapping.resize(static_cast<std::size_t>(n));
  std::iota(p.mapping.begin(), p.mapping.end(), Index(0));
  return p;
}

Permutation Permutation::inverse() const {
  Permutation inv;
  inv.mapping.assign(mapping.size(), Index(-1));
  for (std::size_t i = 0; i < mapping.size(); ++i)
    inv.mapping[static_cast<std::size_t>(mapping[i])] = static_cast<Index>(i);
  return inv;
}

MatrixXd Permutation::to_matrix() const {
  const Index n = size();
  MatrixXd p = MatrixXd::Zero(n, n);
  for (Index i = 0; i < n; ++i) p(i, mapping[static_cast<std::size_t>(i)]) = 1.0;
  return p;
}

bool Permutation::is_valid() const {
  const Index n = size();
  std::vector<char> hit(static_cast<std::size_t>(n), 0);
  for (Index v : mapping) {
    if (v < 0 || v >= n || hit[static_cast<std::size_t>(v)]) return false;
    hit[static_cast<std::size_t>(v)] = 1;
  }
  return true;
}

double ofv(const WeightedGraph& a, const WeightedGraph& b, const Permutation& p) {
  const Index n = a.order();
  if (b.order() != n) throw DomainError("ofv: graphs must have the same order");
  if (p.size() != n) throw DomainError("ofv: permutation order mismatch");
  double total = 0.0;
  for (Index i = 0; i < n; ++i) {
    const Index si = p(i);
    for (Index j = 0; j < n; ++j)
      total += a.adjacency(i, j) * b.adjacency(si, p(j));
  }
  return total;
}

Permutation solve_lap(const MatrixXd& cost, bool maximize) {
  Permutation p;
  p.mapping = lap_solve(cost, maximize);
  return p;
}

MatrixXd barycenter(Index n) {
  if (n < 1) throw DomainError("barycenter: n must be >= 1");
  return MatrixXd::Constant(n, n, 1.0 / static_cast<double>(n));
}

void require_doubly_stochastic(const MatrixXd& m, double tol) {
  if (m.rows() != m.cols()) throw DomainError("doubly stochastic matrix must be square");
  if ((m.array() < -1e-12).any())
    throw DomainError("doubly stochastic matrix has a negative entry");
  for (Index i = 0; i < m.rows(); ++i) {
    if (std::abs(m.row(i).sum() - 1.0) > tol)
      throw DomainError("row " + std::to_string(i) + " of doubly stochastic matrix sums to " +
                        std::to_string(m.row(i).sum()));
    if (std::abs(m.col(i).sum() - 1.0) > tol)
      throw DomainError("column " + std::to_string(i) +
                        " of doubly stochastic matrix sums to " + std::to_string(m.col(i).sum()));
  }
}

namespace {

void require_symmetric(const WeightedGraph& g, const char* who) {
  const double scale = std::max(1.0, g.adjacency.cwiseAbs().maxCoeff());
  if ((g.adjacency - g.adjacency.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw DomainError(std::string(who) + ": adjacency must be symmetric (symmetrize first)");
}

// trace(A M B^T N^T) = sum_ij (A M B^T)(i,j) * N(i,j)
double quad_form(const MatrixXd& amb, const MatrixXd& n) {
  return amb.cwiseProduct(n).sum();
}

}  // namespace

MatchResult faq_match(const WeightedGraph& a, const WeightedGraph& b, const MatrixXd& init,
                      const MatchOptions& opts) {
  const Index n = a.order();
  if (b.order() != n) throw DomainError("faq_match: graphs must have the same order");
  if (init.rows() != n || init.cols() != n)
    throw DomainError("faq_match: init must be n x n");
  if (opts.max_iter < 1) throw DomainError("faq_match: max_iter must be >= 1");
  if (!(opts.tol > 0.0)) throw DomainError("faq_match: tol must be positive");
  require_symmetric(a, "faq_match");
  require_symmetric(b, "faq_match");
  require_doubly_stochastic(init);

  const MatrixXd& A = a.adjacency;
  const MatrixXd& B = b.adjacency;

  MatrixXd d = init.cwiseMax(0.0);  // clamp the tolerated -1e-12 dust
  MatrixXd adb = A * d * B.transpose();
  double objective = quad_form(adb, d);

  MatchResult result;
  result.relaxed_objective_trace.push_back(objective);

  Index iter = 0;
  for (; iter < opts.max_iter; ++iter) {
    const MatrixXd gradient = adb + A.transpose() * d * B;
    const MatrixXd q = solve_lap(gradient, /*maximize=*/true).to_matrix();
    const MatrixXd delta = q - d;

    // Objective along d + alpha*delta is quadratic: objective + b_lin*alpha + c_quad*alpha^2.
    const MatrixXd a_delta_bt = A * delta * B.transpose();
    const double b_lin = quad_form(a_delta_bt, d) + quad_form(adb, delta);
    const double c_quad = quad_form(a_delta_bt, delta);

    double alpha;
    if (c_quad < 0.0) {
      alpha = std::clamp(-b_lin / (2.0 * c_quad), 0.0, 1.0);
    } else {
      alpha = (b_lin + c_quad > 0.0) ? 1.0 : 0.0;
    }
    if (alpha <= 0.0) break;

    d += alpha * delta;
    d = d.cwiseMax(0.0);
    require_doubly_stochastic(d);

    adb = A * d * B.transpose();
    const double next = quad_form(adb, d);
    result.relaxed_objective_trace.push_back(next);
    const double change = std::abs(next - objective) / std::max(1.0, std::abs(objective));
    objective = next;
    if (change < opts.tol) {
      ++iter;
      break;
    }
  }
  result.iterations = iter;

  // Project the final iterate, then guard with the projected init: report
  // whichever permutation scores higher.
  Permutation projected = solve_lap(d, /*maximize=*/true);
  Permutation init_projected = solve_lap(init, /*maximize=*/true);
  const double f_projected = ofv(a, b, projected);
  const double f_init = ofv(a, b, init_projected);
  if (f_init > f_projected) {
    result.permutation = std::move(init_projected);
    result.ofv = f_init;
  } else {
    result.permutation = std::move(projected);
    result.ofv = f_projected;
  }
  return result;
}

std::vector<double> random_permutation_baseline(const WeightedGraph& a,
                                                const WeightedGraph& b, std::size_t k,
                                                std::uint64_t seed) {
  if (k < 1) throw DomainError("random_permutation_baseline: k must be >= 1");
  const Index n = a.order();
  if (b.order() != n)
    throw DomainError("random_permutation_baseline: graphs must have the same order");
  std::mt19937_64 rng(seed);
  Permutation p = Permutation::identity(n);
  std::vector<double> values;
  values.reserve(k);
  for (std::size_t r = 0; r < k; ++r) {
    for (Index i = n - 1; i > 0; --i) {
      std::uniform_int_distribution<Index> pick(0, i);
      std::swap(p.mapping[static_cast<std::size_t>(i)],
                p.mapping[static_cast<std::size_t>(pick(rng))]);
    }
    values.push_back(ofv(a, b, p));
  }
  return values;
}

std::vector<AssessmentRow> correspondence_assessment(const TemporalGraphSet& s,
                                                     InitPolicy policy, std::uint64_t seed,
                                                     const MatchOptions& opts) {
  if (s.size() < 2)
    throw DegenerateInputError("correspondence_assessment: need at least 2 snapshots");
  const Index n = s.order();
  const std::size_t pairs = s.size() - 1;
  std::vector<AssessmentRow> rows(pairs);

  parallel_for(pairs, [&](std::size_t i) {
    const WeightedGraph& a = s.snapshots[i].graph;
    const WeightedGraph& b = s.snapshots[i + 1].graph;
    MatrixXd init;
    switch (policy) {
      case InitPolicy::Barycenter:
        init = barycenter(n);
        break;
      case InitPolicy::Identity:
        init = MatrixXd::Identity(n, n);
        break;
      case InitPolicy::Random: {
        std::mt19937_64 rng(seed + i);
        Permutation p = Permutation::identity(n);
        for (Index v = n - 1; v > 0; --v) {
          std::uniform_int_distribution<Index> pick(0, v);
          std::swap(p.mapping[static_cast<std::size_t>(v)],
                    p.mapping[static_cast<std::size_t>(pick(rng))]);
        }
        init = p.to_matrix();
        break;
      }
    }
    const Permutation id = Permutation::identity(n);
    AssessmentRow row;
    row.pair_index = i;
    row.f_identity = ofv(a, b, id);
    row.f_faq = faq_match(a, b, init, opts).ofv;
    row.ratio = row.f_identity != 0.0 ? row.f_faq / row.f_identity
                                      : std::numeric_limits<double>::quiet_NaN();
    rows[i] = row;
  });
  return rows;
}

}  // namespace netmirror
