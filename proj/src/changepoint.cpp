#include "netmirror/changepoint.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include <Eigen/QR>

#include "netmirror/errors.hpp"
#include "netmirror/parallel.hpp"

namespace netmirror {

namespace {

void require_time_series(const VectorXd& days, const VectorXd& psi) {
  if (days.size() != psi.size()) throw DomainError("days and psi must have equal length");
  if (days.size() < 5) throw InsufficientDataError("need at least 5 observations");
  if (!days.allFinite() || !psi.allFinite()) throw DomainError("days and psi must be finite");
  for (Index i = 1; i < days.size(); ++i)
    if (days(i) <= days(i - 1)) throw DomainError("days must be strictly increasing");
}

double hinge(double t, double t_star) { return t > t_star ? t - t_star : 0.0; }

struct OlsFit {
  VectorXd beta;
  VectorXd fitted;
  double rss = 0.0;
  bool full_rank = false;
};

OlsFit ols(const MatrixXd& x, const VectorXd& y) {
  OlsFit fit;
  Eigen::ColPivHouseholderQR<MatrixXd> qr(x);
  fit.full_rank = qr.rank() == x.cols();
  if (!fit.full_rank) return fit;
  fit.beta = qr.solve(y);
  fit.fitted = x * fit.beta;
  fit.rss = (y - fit.fitted).squaredNorm();
  return fit;
}

MatrixXd segment_design(const VectorXd& days, double t_star) {
  MatrixXd x(days.size(), 3);
  for (Index i = 0; i < days.size(); ++i) {
    x(i, 0) = 1.0;
    x(i, 1) = days(i);
    x(i, 2) = hinge(days(i), t_star);
  }
  return x;
}

double straight_line_rss(const VectorXd& days, const VectorXd& psi) {
  MatrixXd x(days.size(), 2);
  x.col(0).setOnes();
  x.col(1) = days;
  return ols(x, psi).rss;
}

// Candidate span shared by the grid search and the segmented clamp: both
// segments keep at least two observations strictly on their side.
std::vector<double> grid_candidates(const VectorXd& days) {
  const Index t = days.size();
  const double lo = days(1);
  const double hi = days(t - 2);
  std::vector<double> candidates;
  for (Index i = 1; i < t - 1; ++i)
    if (days(i) > lo && days(i) < hi) candidates.push_back(days(i));
  for (Index i = 0; i + 1 < t; ++i) {
    const double mid = 0.5 * (days(i) + days(i + 1));
    if (mid > lo && mid < hi) candidates.push_back(mid);
  }
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
  return candidates;
}

PiecewiseLinearFit refit_at(const VectorXd& days, const VectorXd& psi, double t_star) {
  PiecewiseLinearFit out;
  const OlsFit fit = ols(segment_design(days, t_star), psi);
  if (!fit.full_rank) throw DegenerateInputError("segmented design is rank-deficient");
  out.beta0 = fit.beta(0);
  out.beta1 = fit.beta(1);
  out.beta = fit.beta(2);
  out.t_star = t_star;
  out.rss = fit.rss;
  out.fitted = fit.fitted;
  out.line_rss = straight_line_rss(days, psi);
  return out;
}

}  // namespace

PiecewiseLinearFit grid_breakpoint(const VectorXd& days, const VectorXd& psi) {
  require_time_series(days, psi);
  const std::vector<double> candidates = grid_candidates(days);
  if (candidates.empty()) throw InsufficientDataError("no admissible breakpoint candidates");

  std::vector<double> rss(candidates.size(), std::numeric_limits<double>::infinity());
  parallel_for(candidates.size(), [&](std::size_t c) {
    const OlsFit fit = ols(segment_design(days, candidates[c]), psi);
    if (fit.full_rank) rss[c] = fit.rss;  // rank-deficient candidates are skipped
  });

  std::size_t best = candidates.size();
  for (std::size_t c = 0; c < candidates.size(); ++c) {
    if (!std::isfinite(rss[c])) continue;
    if (best == candidates.size() || rss[c] < rss[best]) best = c;  // ties keep smallest t*
  }
  if (best == candidates.size())
    throw DegenerateInputError("every breakpoint candidate had a rank-deficient design");
  return refit_at(days, psi, candidates[best]);
}

PiecewiseLinearFit segmented_fit(const VectorXd& days, const VectorXd& psi, double t_init,
                                 int max_iter, double tol) {
  require_time_series(days, psi);
  const Index t = days.size();
  if (t_init <= days(0) || t_init >= days(t - 1))
    throw DomainError("t_init must lie strictly inside the day range");
  if (max_iter < 1) throw DomainError("max_iter must be >= 1");
  if (!(tol > 0.0)) throw DomainError("tol must be positive");

  // Keep two observations strictly on each side so the 4-column working
  // design stays full rank.
  const double lo = 0.5 * (days(1) + days(2));
  const double hi = 0.5 * (days(t - 3) + days(t - 2));
  const auto clamp = [lo, hi](double v) { return std::min(hi, std::max(lo, v)); };

  double t_star = clamp(t_init);
  bool degenerate = false;
  for (int iter = 0; iter < max_iter; ++iter) {
    MatrixXd x(t, 4);
    for (Index i = 0; i < t; ++i) {
      x(i, 0) = 1.0;
      x(i, 1) = days(i);
      x(i, 2) = hinge(days(i), t_star);
      x(i, 3) = days(i) > t_star ? -1.0 : 0.0;
    }
    const OlsFit fit = ols(x, psi);
    if (!fit.full_rank) {
      degenerate = true;
      break;
    }
    const double beta_u = fit.beta(2);
    const double update = fit.beta(3) / beta_u;
    if (beta_u == 0.0 || !std::isfinite(update)) {
      degenerate = true;
      break;
    }
    const double next = clamp(t_star + update);
    const bool converged = std::abs(next - t_star) < tol;
    t_star = next;
    if (converged) break;
  }

  if (degenerate) {
    PiecewiseLinearFit fallback = grid_breakpoint(days, psi);
    fallback.from_grid_fallback = true;
    return fallback;
  }
  PiecewiseLinearFit out = refit_at(days, psi, t_star);
  out.clamped = t_star == lo || t_star == hi;
  return out;
}

namespace {

double cusum_statistic(const std::vector<double>& deviations, double scale, Index* argmax) {
  double running = 0.0;
  double best = -1.0;
  Index best_k = 0;
  for (std::size_t k = 0; k < deviations.size(); ++k) {
    running += deviations[k];
    const double value = std::abs(running);
    if (value > best) {
      best = value;
      best_k = static_cast<Index>(k);
    }
  }
  if (argmax != nullptr) *argmax = best_k;
  return best / scale;
}

}  // namespace

SlopeTestResult cusum_slope_detect(const VectorXd& days, const VectorXd& psi, int n_perm,
                                   double level, std::uint64_t seed) {
  require_time_series(days, psi);
  if (n_perm < 1) throw DomainError("n_perm must be >= 1");
  if (!(level > 0.0 && level < 1.0)) throw DomainError("level must be in (0, 1)");

  const Index t = days.size();
  const Index m = t - 1;  // interval count
  std::vector<double> slope(static_cast<std::size_t>(m));
  for (Index i = 0; i < m; ++i)
    slope[static_cast<std::size_t>(i)] = (psi(i + 1) - psi(i)) / (days(i + 1) - days(i));

  double mean = 0.0;
  for (double s : slope) mean += s;
  mean /= static_cast<double>(m);
  double var = 0.0;
  for (double s : slope) var += (s - mean) * (s - mean);
  var /= static_cast<double>(m - 1);
  const double sd = std::sqrt(var);

  SlopeTestResult result;
  if (sd == 0.0) {
    result.no_signal = true;
    result.estimated_day = days(1);
    return result;
  }
  const double scale = sd * std::sqrt(static_cast<double>(m));

  std::vector<double> deviations(slope.size());
  for (std::size_t i = 0; i < slope.size(); ++i) deviations[i] = slope[i] - mean;
  Index argmax = 0;
  result.statistic = cusum_statistic(deviations, scale, &argmax);
  result.estimated_index = argmax;
  result.estimated_day = days(argmax + 1);

  // Permutation null: the statistic only depends on the deviations'
  // ordering, so permute those directly. Per-replicate generators keep the
  // result independent of scheduling.
  std::vector<double> null_stats(static_cast<std::size_t>(n_perm));
  parallel_for(null_stats.size(), [&](std::size_t r) {
    std::mt19937_64 rng(seed * 0x9E3779B97F4A7C15ULL + static_cast<std::uint64_t>(r) + 1ULL);
    std::vector<double> shuffled = deviations;
    for (std::size_t i = shuffled.size() - 1; i > 0; --i) {
      const std::size_t j = static_cast<std::size_t>(rng() % (i + 1));
      std::swap(shuffled[i], shuffled[j]);
    }
    null_stats[r] = cusum_statistic(shuffled, scale, nullptr);
  });
  std::sort(null_stats.begin(), null_stats.end());

  // Conservative finite-sample quantile: the ceil((1-level)(n_perm+1))-th
  // order statistic of the null sample.
  const double target = (1.0 - level) * static_cast<double>(n_perm + 1);
  std::size_t order = static_cast<std::size_t>(std::ceil(target));
  if (order < 1) order = 1;
  if (order > null_stats.size()) order = null_stats.size();
  result.threshold = null_stats[order - 1];
  result.detected = result.statistic > result.threshold;
  return result;
}

}  // namespace netmirror
