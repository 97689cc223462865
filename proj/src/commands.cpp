#include "netmirror/commands.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <random>
#include <string>
#include <system_error>
#include <utility>
#include <vector>

#include "netmirror/changepoint.hpp"
#include "netmirror/embedding.hpp"
#include "netmirror/errors.hpp"
#include "netmirror/graph_io.hpp"
#include "netmirror/lpp.hpp"
#include "netmirror/matching.hpp"
#include "netmirror/mirror.hpp"
#include "netmirror/svg.hpp"

namespace netmirror {

namespace fs = std::filesystem;

namespace {

/// All-or-nothing output: every file is written atomically, and files
/// already renamed into place are removed if a later one fails.
void write_outputs(const std::vector<std::pair<fs::path, std::string>>& files) {
  std::vector<fs::path> written;
  try {
    for (const auto& [path, contents] : files) {
      atomic_write_file(path, contents);
      written.push_back(path);
    }
  } catch (...) {
    std::error_code ec;
    for (const fs::path& path : written) fs::remove(path, ec);
    throw;
  }
}

TemporalGraphSet load_input(const PipelineConfig& config, const char* command) {
  if (config.data_dir.empty())
    throw DomainError(std::string(command) + " needs data.data_dir in the config");
  return load_time_series(config.data_dir);
}

TemporalGraphSet symmetrize_rank(const TemporalGraphSet& s) {
  TemporalGraphSet out = s;
  for (Snapshot& snap : out.snapshots) snap.graph = rank_transform(symmetrize(snap.graph));
  return out;
}

double median_day(const VectorXd& days) {
  std::vector<double> v(days.data(), days.data() + days.size());
  std::sort(v.begin(), v.end());
  const std::size_t half = v.size() / 2;
  return v.size() % 2 == 1 ? v[half] : 0.5 * (v[half - 1] + v[half]);
}

std::string flag(bool b) { return b ? "1" : "0"; }

std::string sanitize_field(std::string s) {
  for (char& c : s)
    if (c == ',' || c == '\n' || c == '\r') c = ';';
  return s;
}

std::string curve_csv(const std::vector<int>& days, const MatrixXd& coordinates) {
  std::string out = "day";
  for (Index c = 0; c < coordinates.cols(); ++c) out += ",c" + std::to_string(c + 1);
  out += "\n";
  for (Index i = 0; i < coordinates.rows(); ++i) {
    out += std::to_string(days[static_cast<std::size_t>(i)]);
    for (Index c = 0; c < coordinates.cols(); ++c)
      out += "," + format_double(coordinates(i, c));
    out += "\n";
  }
  return out;
}

std::string fit_report(const PiecewiseLinearFit& fit, const VectorXd& days, const VectorXd& psi) {
  std::string out;
  out += "beta0," + format_double(fit.beta0) + "\n";
  out += "beta1," + format_double(fit.beta1) + "\n";
  out += "beta," + format_double(fit.beta) + "\n";
  out += "t_star," + format_double(fit.t_star) + "\n";
  out += "rss," + format_double(fit.rss) + "\n";
  out += "line_rss," + format_double(fit.line_rss) + "\n";
  out += "from_grid_fallback," + flag(fit.from_grid_fallback) + "\n";
  out += "clamped," + flag(fit.clamped) + "\n";
  out += "\nday,psi,fitted\n";
  for (Index i = 0; i < days.size(); ++i)
    out += format_double(days(i)) + "," + format_double(psi(i)) + "," +
           format_double(fit.fitted(i)) + "\n";
  return out;
}

}  // namespace

std::pair<VectorXd, VectorXd> read_curve_csv(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open curve file " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw ParseError(path.string() + ": empty file");
  if (line.rfind("day", 0) != 0)
    throw ParseError(path.string() + ": expected a day,c1[,...] header");

  std::vector<double> days;
  std::vector<double> values;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    const std::string where = path.string() + ":" + std::to_string(line_no);
    const std::size_t comma = line.find(',');
    if (comma == std::string::npos) throw ParseError(where + ": expected day,value");
    std::size_t end = line.find(',', comma + 1);
    if (end == std::string::npos) end = line.size();
    const auto parse = [&](const char* first, const char* last) {
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(first, last, v);
      if (ec != std::errc() || ptr != last) throw ParseError(where + ": malformed number");
      return v;
    };
    days.push_back(parse(line.data(), line.data() + comma));
    values.push_back(parse(line.data() + comma + 1, line.data() + end));
  }
  if (days.empty()) throw ParseError(path.string() + ": no data rows");

  VectorXd d(static_cast<Index>(days.size()));
  VectorXd v(static_cast<Index>(values.size()));
  for (Index i = 0; i < d.size(); ++i) {
    d(i) = days[static_cast<std::size_t>(i)];
    v(i) = values[static_cast<std::size_t>(i)];
  }
  return {std::move(d), std::move(v)};
}

TemporalGraphSet preprocess_for_mirror(const TemporalGraphSet& s, const PipelineConfig& config) {
  TemporalGraphSet out = symmetrize_rank(s);
  const auto window_select = [&config](TemporalGraphSet g) {
    if (config.has_window) g = window_filter(g, config.window_lo, config.window_hi);
    if (!config.selected_days.empty()) g = select_days(g, config.selected_days);
    return g;
  };
  if (config.component_before_select) {
    if (config.common_component) out = largest_common_connected_component(out);
    out = window_select(std::move(out));
  } else {
    out = window_select(std::move(out));
    if (config.common_component) out = largest_common_connected_component(out);
  }
  return out;
}

void cmd_stats(const PipelineConfig& config) {
  TemporalGraphSet s = load_input(config, "stats");
  for (Snapshot& snap : s.snapshots) snap.graph = symmetrize(snap.graph);
  const std::vector<ActivityRow> rows = activity_stats(s);

  std::string csv = "day,non_isolated,edges\n";
  SvgSeries vertices{"non-isolated vertices", {}, true, true};
  SvgSeries edges{"edges", {}, true, true};
  for (const ActivityRow& row : rows) {
    csv += std::to_string(row.day) + "," + std::to_string(row.non_isolated) + "," +
           std::to_string(row.edges) + "\n";
    vertices.points.emplace_back(row.day, static_cast<double>(row.non_isolated));
    edges.points.emplace_back(row.day, static_cast<double>(row.edges));
  }

  fs::create_directories(config.output_dir);
  const fs::path out_dir(config.output_dir);
  write_outputs({{out_dir / "stats.csv", csv},
                 {out_dir / "stats.svg",
                  svg_line_chart("Snapshot activity", "day", "count", {vertices, edges})}});
}

void cmd_match(const PipelineConfig& config) {
  TemporalGraphSet s = symmetrize_rank(load_input(config, "match"));
  if (s.size() < 2) throw DegenerateInputError("match needs at least 2 snapshots");

  const std::vector<AssessmentRow> rows =
      correspondence_assessment(s, config.match_init, config.seed);

  std::string match_csv = "pair,f_identity,f_faq,ratio\n";
  SvgSeries ratio_series{"f(P)/f(I)", {}, true, true};
  SvgSeries unit{"ratio = 1", {}, true, false};
  for (const AssessmentRow& row : rows) {
    const double pair_no = static_cast<double>(row.pair_index + 1);
    match_csv += std::to_string(row.pair_index + 1) + "," + format_double(row.f_identity) + "," +
                 format_double(row.f_faq) + "," + format_double(row.ratio) + "\n";
    ratio_series.points.emplace_back(pair_no, row.ratio);
    unit.points.emplace_back(pair_no, 1.0);
  }

  // The histogram experiment runs on one chosen pair of days.
  Index ia = 0;
  Index ib = 1;
  if (config.baseline_day_a >= 0) {
    ia = -1;
    ib = -1;
    for (Index i = 0; i < static_cast<Index>(s.size()); ++i) {
      if (s.snapshots[static_cast<std::size_t>(i)].day == config.baseline_day_a) ia = i;
      if (s.snapshots[static_cast<std::size_t>(i)].day == config.baseline_day_b) ib = i;
    }
    if (ia < 0 || ib < 0) throw DomainError("baseline pair days are not in the series");
    if (ia == ib) throw DomainError("baseline pair must name two distinct days");
  }
  const WeightedGraph& a = s.snapshots[static_cast<std::size_t>(ia)].graph;
  const WeightedGraph& b = s.snapshots[static_cast<std::size_t>(ib)].graph;
  const Index n = a.order();

  const double f_identity = ofv(a, b, Permutation::identity(n));
  const double f_bary = faq_match(a, b, barycenter(n)).ofv;
  const double f_ident_init = faq_match(a, b, Permutation::identity(n).to_matrix()).ofv;
  Permutation random_init = Permutation::identity(n);
  std::mt19937_64 rng(config.seed);
  for (Index i = n - 1; i > 0; --i) {
    const Index j = static_cast<Index>(rng() % static_cast<std::uint64_t>(i + 1));
    std::swap(random_init.mapping[static_cast<std::size_t>(i)],
              random_init.mapping[static_cast<std::size_t>(j)]);
  }
  const double f_rand_init = faq_match(a, b, random_init.to_matrix()).ofv;

  const std::vector<double> baseline = random_permutation_baseline(
      a, b, static_cast<std::size_t>(config.baseline_draws), config.seed);
  double lo = baseline.front();
  double hi = baseline.front();
  double mean = 0.0;
  for (double v : baseline) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
    mean += v;
  }
  mean /= static_cast<double>(baseline.size());
  std::string baseline_csv = "ofv\n";
  for (double v : baseline) baseline_csv += format_double(v) + "\n";
  baseline_csv += "# min=" + format_double(lo) + ",max=" + format_double(hi) +
                  ",mean=" + format_double(mean) + "\n";

  const std::string pair_label = "days " + std::to_string(s.snapshots[static_cast<std::size_t>(ia)].day) +
                                 "-" + std::to_string(s.snapshots[static_cast<std::size_t>(ib)].day);
  const std::vector<SvgMarker> markers = {{"f(I)", f_identity},
                                          {"f(P;b)", f_bary},
                                          {"f(P;I)", f_ident_init},
                                          {"f(P;R)", f_rand_init}};

  fs::create_directories(config.output_dir);
  const fs::path out_dir(config.output_dir);
  write_outputs(
      {{out_dir / "match.csv", match_csv},
       {out_dir / "baseline.csv", baseline_csv},
       {out_dir / "match_ratio.svg",
        svg_line_chart("FAQ vs identity correspondence", "pair", "OFV ratio",
                       {ratio_series, unit})},
       {out_dir / "baseline_hist.svg",
        svg_histogram("Random-permutation OFV, " + pair_label, "OFV", baseline, 40, markers)}});
}

void cmd_mirror(const PipelineConfig& config) {
  const TemporalGraphSet s = preprocess_for_mirror(load_input(config, "mirror"), config);
  const MirrorPipelineResult pipeline =
      mirror_pipeline(s, config.ase_d, config.mirror_m, config.isomap_k);

  std::string dist_csv = "day";
  for (int day : pipeline.distances.days) dist_csv += "," + std::to_string(day);
  dist_csv += "\n";
  for (Index i = 0; i < pipeline.distances.matrix.rows(); ++i) {
    dist_csv += std::to_string(pipeline.distances.days[static_cast<std::size_t>(i)]);
    for (Index j = 0; j < pipeline.distances.matrix.cols(); ++j)
      dist_csv += "," + format_double(pipeline.distances.matrix(i, j));
    dist_csv += "\n";
  }

  std::string scree_csv = "day";
  for (Index c = 0; c < s.order(); ++c) scree_csv += ",l" + std::to_string(c + 1);
  scree_csv += "\n";
  for (const Snapshot& snap : s.snapshots) {
    const VectorXd spectrum = adjacency_spectrum(snap.graph);
    scree_csv += std::to_string(snap.day);
    for (Index c = 0; c < spectrum.size(); ++c) scree_csv += "," + format_double(spectrum(c));
    scree_csv += "\n";
  }

  VectorXd days(static_cast<Index>(pipeline.iso.days.size()));
  for (Index i = 0; i < days.size(); ++i)
    days(i) = static_cast<double>(pipeline.iso.days[static_cast<std::size_t>(i)]);
  const VectorXd& psi = pipeline.iso.values;

  SvgSeries iso_series{"iso-mirror", {}, true, true};
  for (Index i = 0; i < days.size(); ++i) iso_series.points.emplace_back(days(i), psi(i));
  std::vector<SvgSeries> series{iso_series};
  std::vector<SvgMarker> markers;
  bool have_fit = false;
  PiecewiseLinearFit fit;
  try {
    if (config.changepoint_mode == ChangepointMode::Grid) {
      fit = grid_breakpoint(days, psi);
    } else {
      const double t0 = config.has_t_init ? config.t_init : median_day(days);
      fit = segmented_fit(days, psi, t0);
    }
    have_fit = true;
  } catch (const InsufficientDataError&) {
    // Too few stamps for a breakpoint fit; plot the curve alone.
  }
  if (have_fit) {
    SvgSeries fitted{"segmented fit", {}, true, false};
    for (Index i = 0; i < days.size(); ++i) fitted.points.emplace_back(days(i), fit.fitted(i));
    fitted.points.emplace_back(fit.t_star, fit.beta0 + fit.beta1 * fit.t_star);
    std::sort(fitted.points.begin(), fitted.points.end());
    series.push_back(std::move(fitted));
    markers.push_back({"t*=" + format_double(fit.t_star), fit.t_star});
  }

  fs::create_directories(config.output_dir);
  const fs::path out_dir(config.output_dir);
  write_outputs({{out_dir / "distance_matrix.csv", dist_csv},
                 {out_dir / "mirror.csv", curve_csv(pipeline.mirror.days, pipeline.mirror.coordinates)},
                 {out_dir / "iso_mirror.csv", curve_csv(pipeline.iso.days, pipeline.iso.values)},
                 {out_dir / "scree.csv", scree_csv},
                 {out_dir / "iso_mirror.svg",
                  svg_line_chart("Iso-mirror", "day", "psi", series, markers)}});
}

void cmd_changepoint(const PipelineConfig& config) {
  const fs::path input = !config.iso_csv.empty()
                             ? fs::path(config.iso_csv)
                             : fs::path(config.output_dir) / "iso_mirror.csv";
  const auto [days, psi] = read_curve_csv(input);

  std::vector<std::pair<fs::path, std::string>> files;
  const fs::path out_dir(config.output_dir);
  if (config.changepoint_mode != ChangepointMode::Segmented)
    files.emplace_back(out_dir / "fit_grid.csv", fit_report(grid_breakpoint(days, psi), days, psi));
  if (config.changepoint_mode != ChangepointMode::Grid) {
    const double t0 = config.has_t_init ? config.t_init : median_day(days);
    files.emplace_back(out_dir / "fit_segmented.csv",
                       fit_report(segmented_fit(days, psi, t0), days, psi));
  }

  const SlopeTestResult test =
      cusum_slope_detect(days, psi, config.detector_perms, config.detector_level, config.seed);
  std::string detector;
  detector += "statistic," + format_double(test.statistic) + "\n";
  detector += "threshold," + format_double(test.threshold) + "\n";
  detector += "level," + format_double(config.detector_level) + "\n";
  detector += "n_perm," + std::to_string(config.detector_perms) + "\n";
  detector += "seed," + std::to_string(config.seed) + "\n";
  detector += "detected," + flag(test.detected) + "\n";
  detector += "estimated_index," + std::to_string(test.estimated_index) + "\n";
  detector += "estimated_day," + format_double(test.estimated_day) + "\n";
  detector += "no_signal," + flag(test.no_signal) + "\n";
  files.emplace_back(out_dir / "detector.csv", detector);

  fs::create_directories(config.output_dir);
  write_outputs(files);
}

void cmd_synth(const PipelineConfig& config) {
  if (config.lpp_spec_path.empty()) throw DomainError("synth needs synth.spec in the config");
  LppSpec spec = load_lpp_spec(config.lpp_spec_path);
  if (config.seed_override) spec.seed = config.seed;

  const LppSample sample = sample_lpp(spec);

  std::string latents_csv = "day,vertex";
  for (Index c = 0; c < spec.d; ++c) latents_csv += ",x" + std::to_string(c + 1);
  latents_csv += "\n";
  for (const LatentPositions& truth : sample.latents) {
    for (Index i = 0; i < truth.matrix.rows(); ++i) {
      latents_csv += std::to_string(truth.day) + "," +
                     sample.graphs.vertices[static_cast<std::size_t>(i)];
      for (Index c = 0; c < truth.matrix.cols(); ++c)
        latents_csv += "," + format_double(truth.matrix(i, c));
      latents_csv += "\n";
    }
  }

  std::vector<std::pair<fs::path, std::string>> files;
  const fs::path out_dir(config.output_dir);
  files.emplace_back(out_dir / "latents.csv", latents_csv);

  if (config.synth_benchmark) {
    const BenchmarkSummary bench = pipeline_benchmark(spec, config.benchmark_seeds);
    std::string csv = "seed,estimated_break_day,error,detected,failed,message\n";
    for (const BenchmarkRow& row : bench.rows) {
      csv += std::to_string(row.seed) + ",";
      csv += (row.failed ? "" : format_double(row.estimated_break_day)) + ",";
      csv += (row.failed ? "" : format_double(row.break_error)) + ",";
      csv += flag(row.detected) + "," + flag(row.failed) + "," + sanitize_field(row.error) + "\n";
    }
    csv += "# median_abs_error=" + format_double(bench.median_abs_error) +
           ",detection_rate=" + format_double(bench.detection_rate) + "\n";
    files.emplace_back(out_dir / "benchmark.csv", csv);
  }

  fs::create_directories(config.output_dir);
  save_time_series(sample.graphs, out_dir / "data");
  write_outputs(files);
}

}  // namespace netmirror
