#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "netmirror/embedding.hpp"
#include "netmirror/graph.hpp"
#include "netmirror/types.hpp"

namespace netmirror {

/// Latent position process with a planted slope change: the day-t center is
/// base_point + drift_pre*min(t, break_day) + drift_post*(t - break_day)+,
/// and each vertex keeps one i.i.d. uniform offset in
/// [-dispersion, dispersion]^d across all days.
struct LppSpec {
  Index n = 0;
  Index d = 0;
  std::vector<int> days;
  VectorXd base_point;
  VectorXd drift_pre;
  VectorXd drift_post;
  double break_day = 0.0;
  double dispersion = 0.0;
  std::uint64_t seed = 0;

  void validate() const;
};

struct LppSample {
  TemporalGraphSet graphs;
  std::vector<LatentPositions> latents;  // ground truth, one per day
};

/// Day-t latent center implied by the spec.
VectorXd lpp_center(const LppSpec& spec, double day);

/// One Bernoulli graph from fixed latent positions: edge (i,j), i<j, appears
/// with probability clamp(<x_i, x_j>, 0, 1); symmetric and hollow. Throws
/// SpecValidationError if a pre-clamp product leaves [-0.05, 1.05].
MatrixXd rdpg_sample(const MatrixXd& latents, std::mt19937_64& rng);

/// Sample the whole series. Deterministic given spec.seed: offsets first,
/// then snapshots in day order with a fixed edge draw order.
LppSample sample_lpp(const LppSpec& spec);

/// Analytic population d_MV between days t and t_prime for the spec's
/// process (closed form; dispersion > 0 supported for d <= 2).
double true_dmv(const LppSpec& spec, int t, int t_prime);

struct BenchmarkRow {
  std::uint64_t seed = 0;
  bool failed = false;
  std::string error;
  double estimated_break_day = 0.0;
  double break_error = 0.0;  // estimated - planted
  bool detected = false;
};

struct BenchmarkSummary {
  std::vector<BenchmarkRow> rows;
  double median_abs_error = 0.0;  // over non-failed rows
  double detection_rate = 0.0;    // over non-failed rows
};

/// Per seed: sample_lpp -> mirror_pipeline(scree-selected d, m=1, auto-k) ->
/// grid_breakpoint + cusum_slope_detect. Failures become failed rows, not
/// aborts.
BenchmarkSummary pipeline_benchmark(const LppSpec& spec, int n_seeds);

}  // namespace netmirror
