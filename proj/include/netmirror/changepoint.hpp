#pragma once

#include <cstdint>

#include "netmirror/types.hpp"

namespace netmirror {

/// Continuous piecewise-linear model psi(t) = beta0 + beta1*t + beta*(t-t_star)+.
/// Post-break slope is beta1 + beta. `line_rss` is the RSS of the plain
/// straight-line fit to the same data (always >= rss up to roundoff, since
/// the line is the beta = 0 special case).
struct PiecewiseLinearFit {
  double beta0 = 0.0;
  double beta1 = 0.0;
  double beta = 0.0;
  double t_star = 0.0;
  double rss = 0.0;
  VectorXd fitted;
  double line_rss = 0.0;
  bool from_grid_fallback = false;  // segmented iteration degenerated, grid answer returned
  bool clamped = false;             // iteration finished pinned at the breakpoint bound
};

/// Exhaustive breakpoint search: candidates are every interior day and every
/// midpoint of consecutive days, restricted to the open interval
/// (days[1], days[T-2]) so both segments keep at least two observations.
/// For each candidate, OLS on {1, t, (t-t*)+}; the minimum-RSS candidate
/// wins, ties toward the smallest t*. Candidates with a rank-deficient
/// design are skipped.
PiecewiseLinearFit grid_breakpoint(const VectorXd& days, const VectorXd& psi);

/// Iterative segmented regression (linearized breakpoint refinement):
/// at the current t*, regress psi on {1, t, U, V} with U = (t-t*)+ and
/// V = -1(t > t*), then move t* by gamma/beta (V's over U's coefficient)
/// until the movement drops below tol or max_iter is hit. t* is kept inside
/// the same candidate span as grid_breakpoint; a degenerate iteration falls
/// back to the grid answer.
PiecewiseLinearFit segmented_fit(const VectorXd& days, const VectorXd& psi, double t_init,
                                 int max_iter = 30, double tol = 1e-8);

/// Outcome of the permutation-calibrated CUSUM test on per-interval slopes.
struct SlopeTestResult {
  double statistic = 0.0;
  double threshold = 0.0;
  bool detected = false;
  Index estimated_index = 0;    // argmax interval k
  double estimated_day = 0.0;   // right endpoint of interval k
  bool no_signal = false;       // slope sequence had zero variance
};

/// CUSUM of normalized slope deviations: statistic =
/// max_k |sum_{i<=k}(s_i - s_bar)| / (sd(s) * sqrt(T-1)), calibrated by
/// n_perm seeded random permutations of the slope sequence; detected iff
/// statistic exceeds the conservative (1-level) permutation quantile.
SlopeTestResult cusum_slope_detect(const VectorXd& days, const VectorXd& psi, int n_perm,
                                   double level, std::uint64_t seed);

}  // namespace netmirror
