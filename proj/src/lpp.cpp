#include "netmirror/lpp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "netmirror/changepoint.hpp"
#include "netmirror/errors.hpp"
#include "netmirror/mirror.hpp"
#include "netmirror/parallel.hpp"

namespace netmirror {

void LppSpec::validate() const {
  if (n < 2) throw SpecValidationError("lpp spec needs n >= 2 vertices");
  if (d < 1) throw SpecValidationError("lpp spec needs d >= 1");
  if (base_point.size() != d || drift_pre.size() != d || drift_post.size() != d)
    throw SpecValidationError("base_point, drift_pre, drift_post must all be d-vectors");
  if (!base_point.allFinite() || !drift_pre.allFinite() || !drift_post.allFinite())
    throw SpecValidationError("lpp spec vectors must be finite");
  if (days.size() < 2) throw SpecValidationError("lpp spec needs at least 2 days");
  for (std::size_t i = 1; i < days.size(); ++i)
    if (days[i] <= days[i - 1]) throw SpecValidationError("lpp spec days must be strictly increasing");
  if (!(break_day > days.front() && break_day < days.back()))
    throw SpecValidationError("break_day must lie strictly inside the day range");
  if (!(dispersion >= 0.0) || !std::isfinite(dispersion))
    throw SpecValidationError("dispersion must be a finite non-negative real");
}

VectorXd lpp_center(const LppSpec& spec, double day) {
  const double pre = std::min(day, spec.break_day);
  const double post = std::max(0.0, day - spec.break_day);
  return spec.base_point + spec.drift_pre * pre + spec.drift_post * post;
}

namespace {

// Uniform in [0,1) from the top 53 bits; avoids the implementation-defined
// std::uniform_real_distribution so identical seeds give identical graphs
// everywhere.
double unit_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

MatrixXd rdpg_sample(const MatrixXd& latents, std::mt19937_64& rng) {
  const Index n = latents.rows();
  MatrixXd a = MatrixXd::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      const double raw = latents.row(i).dot(latents.row(j));
      if (raw < -0.05 || raw > 1.05)
        throw SpecValidationError("latent inner product " + std::to_string(raw) +
                                  " leaves [-0.05, 1.05]; adjust the spec");
      const double p = std::min(1.0, std::max(0.0, raw));
      const double value = unit_uniform(rng) < p ? 1.0 : 0.0;
      a(i, j) = value;
      a(j, i) = value;
    }
  }
  return a;
}

LppSample sample_lpp(const LppSpec& spec) {
  spec.validate();
  std::mt19937_64 rng(spec.seed);

  // One offset per vertex, fixed over time: vertex-major, coordinate-minor
  // draw order, then snapshots in day order.
  MatrixXd offsets(spec.n, spec.d);
  for (Index i = 0; i < spec.n; ++i)
    for (Index c = 0; c < spec.d; ++c)
      offsets(i, c) = spec.dispersion * (2.0 * unit_uniform(rng) - 1.0);

  LppSample out;
  const std::size_t width = std::to_string(spec.n - 1).size();
  out.graphs.vertices.reserve(static_cast<std::size_t>(spec.n));
  for (Index i = 0; i < spec.n; ++i) {
    std::string name = std::to_string(i);
    out.graphs.vertices.push_back("v" + std::string(width - name.size(), '0') + name);
  }

  for (int day : spec.days) {
    MatrixXd latents = offsets;
    latents.rowwise() += lpp_center(spec, day).transpose();

    Snapshot snap;
    snap.day = day;
    snap.graph.directed = false;
    try {
      snap.graph.adjacency = rdpg_sample(latents, rng);
    } catch (const SpecValidationError& e) {
      throw SpecValidationError("day " + std::to_string(day) + ": " + e.what());
    }
    out.graphs.snapshots.push_back(std::move(snap));

    LatentPositions truth;
    truth.day = day;
    truth.matrix = std::move(latents);
    out.latents.push_back(std::move(truth));
  }
  out.graphs.validate();
  return out;
}

namespace {

// lambda_max of a a^T + 4 sigma2 q q^T for the reflection with symmetry axis
// at angle phi/2 (H = [[cos phi, sin phi], [sin phi, -cos phi]]).
double reflection_lambda(const VectorXd& c, const VectorXd& cp, double sigma2, double phi) {
  const double ch = std::cos(phi);
  const double sh = std::sin(phi);
  const double a0 = c(0) - (ch * cp(0) + sh * cp(1));
  const double a1 = c(1) - (sh * cp(0) - ch * cp(1));
  const double q0 = -std::sin(0.5 * phi);
  const double q1 = std::cos(0.5 * phi);
  const double trace = a0 * a0 + a1 * a1 + 4.0 * sigma2;
  const double cross = a0 * q1 - a1 * q0;
  const double det = 4.0 * sigma2 * cross * cross;
  const double disc = std::max(0.0, trace * trace - 4.0 * det);
  return 0.5 * (trace + std::sqrt(disc));
}

}  // namespace

double true_dmv(const LppSpec& spec, int t, int t_prime) {
  spec.validate();
  const auto known = [&](int day) {
    return std::find(spec.days.begin(), spec.days.end(), day) != spec.days.end();
  };
  if (!known(t) || !known(t_prime)) throw DomainError("true_dmv day is not in spec.days");
  if (t == t_prime) return 0.0;

  const VectorXd c = lpp_center(spec, t);
  const VectorXd cp = lpp_center(spec, t_prime);
  const double sigma2 = spec.dispersion * spec.dispersion / 3.0;

  // Zero dispersion: rank-one second moment, minimized by rotating one
  // center onto the other's direction.
  if (sigma2 == 0.0) return std::abs(c.norm() - cp.norm());

  if (spec.d == 1) {
    const double direct = std::abs(c(0) - cp(0));
    const double sum = c(0) + cp(0);
    return std::min(direct, std::sqrt(sum * sum + 4.0 * sigma2));
  }
  if (spec.d == 2) {
    // Rotations: lambda_max(theta) = C - 2(cos theta (c.cp + sigma2) +
    // sin theta cross); the minimum over theta is closed-form.
    const double big_c = c.squaredNorm() + cp.squaredNorm() + 2.0 * sigma2;
    const double cross = c(1) * cp(0) - c(0) * cp(1);
    const double rotation = std::max(0.0, big_c - 2.0 * std::hypot(c.dot(cp) + sigma2, cross));

    // Reflections: 1-D minimization over the axis angle.
    constexpr int kGrid = 4096;
    constexpr double kTau = 6.283185307179586476925286766559;
    double best = std::numeric_limits<double>::infinity();
    double best_phi = 0.0;
    for (int g = 0; g < kGrid; ++g) {
      const double phi = kTau * static_cast<double>(g) / kGrid;
      const double value = reflection_lambda(c, cp, sigma2, phi);
      if (value < best) {
        best = value;
        best_phi = phi;
      }
    }
    double lo = best_phi - kTau / kGrid;
    double hi = best_phi + kTau / kGrid;
    for (int step = 0; step < 200; ++step) {
      const double m1 = lo + (hi - lo) / 3.0;
      const double m2 = hi - (hi - lo) / 3.0;
      if (reflection_lambda(c, cp, sigma2, m1) <= reflection_lambda(c, cp, sigma2, m2))
        hi = m2;
      else
        lo = m1;
    }
    const double reflection = reflection_lambda(c, cp, sigma2, 0.5 * (lo + hi));
    return std::sqrt(std::min(rotation, std::min(best, reflection)));
  }
  throw DomainError("true_dmv with positive dispersion is implemented for d <= 2 only");
}

BenchmarkSummary pipeline_benchmark(const LppSpec& spec, int n_seeds) {
  spec.validate();
  if (n_seeds < 1) throw DomainError("n_seeds must be >= 1");

  BenchmarkSummary summary;
  summary.rows.resize(static_cast<std::size_t>(n_seeds));
  parallel_for(summary.rows.size(), [&](std::size_t r) {
    BenchmarkRow row;
    LppSpec replicate = spec;
    replicate.seed = spec.seed + r;
    row.seed = replicate.seed;
    try {
      const LppSample sample = sample_lpp(replicate);
      // Embed at the scree-selected dimension (median across snapshots), not
      // at the generator's latent d: dimensions whose population eigenvalue
      // sits below the noise bulk would only inject a constant distance
      // inflation that masks the drift signal.
      std::vector<Index> choices;
      choices.reserve(sample.graphs.size());
      for (const Snapshot& snap : sample.graphs.snapshots)
        choices.push_back(scree_dimension(snap.graph));
      std::sort(choices.begin(), choices.end());
      const Index embed_d = choices[(choices.size() - 1) / 2];
      // m = 1: the benchmarked analysis is the 1-D iso-mirror, and extra
      // mirror dimensions only feed embedding noise into the geodesics.
      const MirrorPipelineResult pipeline =
          mirror_pipeline(sample.graphs, embed_d, 1, kAutoNeighbors);
      VectorXd days(static_cast<Index>(replicate.days.size()));
      for (Index i = 0; i < days.size(); ++i)
        days(i) = static_cast<double>(replicate.days[static_cast<std::size_t>(i)]);
      const PiecewiseLinearFit fit = grid_breakpoint(days, pipeline.iso.values);
      row.estimated_break_day = fit.t_star;
      row.break_error = fit.t_star - replicate.break_day;
      row.detected =
          cusum_slope_detect(days, pipeline.iso.values, 999, 0.05, replicate.seed).detected;
    } catch (const std::exception& e) {
      row.failed = true;
      row.error = e.what();
    }
    summary.rows[r] = std::move(row);
  });

  std::vector<double> abs_errors;
  int detected = 0;
  for (const BenchmarkRow& row : summary.rows) {
    if (row.failed) continue;
    abs_errors.push_back(std::abs(row.break_error));
    if (row.detected) ++detected;
  }
  if (!abs_errors.empty()) {
    std::sort(abs_errors.begin(), abs_errors.end());
    const std::size_t half = abs_errors.size() / 2;
    summary.median_abs_error = abs_errors.size() % 2 == 1
                                   ? abs_errors[half]
                                   : 0.5 * (abs_errors[half - 1] + abs_errors[half]);
    summary.detection_rate = static_cast<double>(detected) / static_cast<double>(abs_errors.size());
  }
  return summary;
}

}  // namespace netmirror
