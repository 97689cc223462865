#pragma once

#include <cstdint>
#include <vector>

#include "netmirror/graph.hpp"
#include "netmirror/types.hpp"

namespace netmirror {

/// Vertex correspondence: vertex i of the first graph maps to mapping[i]
/// of the second. As a 0/1 matrix, P(i, mapping[i]) = 1.
struct Permutation {
  std::vector<Index> mapping;

  Index size() const { return static_cast<Index>(mapping.size()); }
  Index operator()(Index i) const { return mapping[static_cast<std::size_t>(i)]; }

  static Permutation identity(Index n);
  Permutation inverse() const;
  MatrixXd to_matrix() const;

  /// True iff mapping is a bijection on {0, ..., n-1}.
  bool is_valid() const;
};

/// Matching objective trace(A P B^T P^T) = sum_ij A(i,j) B(sigma(i), sigma(j)).
double ofv(const WeightedGraph& a, const WeightedGraph& b, const Permutation& p);

/// Permutation optimizing sum_i cost(i, sigma(i)); exact, deterministic.
Permutation solve_lap(const MatrixXd& cost, bool maximize);

/// Doubly stochastic matrix with every entry 1/n (the flat correspondence).
MatrixXd barycenter(Index n);

/// Throws DomainError unless m is doubly stochastic: row and column sums
/// within `tol` of 1 and entries >= -1e-12.
void require_doubly_stochastic(const MatrixXd& m, double tol = 1e-9);

struct MatchOptions {
  Index max_iter = 30;
  double tol = 1e-6;
};

struct MatchResult {
  Permutation permutation;
  double ofv = 0.0;
  Index iterations = 0;
  /// Relaxed objective at the initial point and after each accepted step;
  /// non-decreasing by exact line search.
  std::vector<double> relaxed_objective_trace;
};

/// Frank-Wolfe ascent of trace(A D B^T D^T) over the doubly stochastic
/// polytope, started at `init` (any doubly stochastic matrix; a permutation
/// matrix works). The final iterate is projected to a permutation by a LAP,
/// and the reported solution is whichever of {projected iterate, projected
/// init} scores higher, so seeding with a permutation can never lose to it.
MatchResult faq_match(const WeightedGraph& a, const WeightedGraph& b, const MatrixXd& init,
                      const MatchOptions& opts = {});

/// OFVs of k uniformly random permutations (Fisher-Yates under the seeded
/// generator). Deterministic given the seed.
std::vector<double> random_permutation_baseline(const WeightedGraph& a,
                                                const WeightedGraph& b, std::size_t k,
                                                std::uint64_t seed);

enum class InitPolicy { Barycenter, Identity, Random };

struct AssessmentRow {
  std::size_t pair_index = 0;  // matches A_{i}, A_{i+1}, 0-based
  double f_identity = 0.0;
  double f_faq = 0.0;
  double ratio = 0.0;
};

/// For each consecutive snapshot pair, the identity-correspondence OFV, the
/// FAQ OFV under the chosen init, and their ratio. Pairs are evaluated as a
/// parallel map. `seed` only matters for InitPolicy::Random (pair i uses
/// seed + i).
std::vector<AssessmentRow> correspondence_assessment(const TemporalGraphSet& s,
                                                     InitPolicy policy,
                                                     std::uint64_t seed = 0,
                                                     const MatchOptions& opts = {});

}  // namespace netmirror
