#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "netmirror/commands.hpp"
#include "netmirror/errors.hpp"
#include "netmirror/graph_io.hpp"
#include "netmirror/pipeline_config.hpp"

using namespace netmirror;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& tag) {
    path = fs::temp_directory_path() / ("netmirror_cli_" + tag);
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

void write_file(const fs::path& p, const std::string& contents) {
  std::ofstream out(p, std::ios::binary);
  out << contents;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

// A small drifting series every command can digest.
void write_toy_dataset(const fs::path& dir) {
  LppSpec spec;
  spec.n = 40;
  spec.d = 1;
  spec.days = {1, 2, 3, 4, 5, 6, 7, 8};
  spec.base_point = VectorXd::Constant(1, 0.35);
  spec.drift_pre = VectorXd::Constant(1, 0.01);
  spec.drift_post = VectorXd::Constant(1, 0.05);
  spec.break_day = 4.5;
  spec.dispersion = 0.02;
  spec.seed = 5;
  save_time_series(sample_lpp(spec).graphs, dir);
}

std::string lpp_spec_text(int n, std::uint64_t seed) {
  std::string s;
  s += "[lpp]\n";
  s += "n = " + std::to_string(n) + "\n";
  s += "d = 1\n";
  s += "days = 1,2,3,4,5,6,7,8,9,10\n";
  s += "base_point = 0.3\n";
  s += "drift_pre = 0.012\n";
  s += "drift_post = 0.05\n";
  s += "break_day = 5.5\n";
  s += "dispersion = 0.02\n";
  s += "seed = " + std::to_string(seed) + "\n";
  return s;
}

}  // namespace

TEST_CASE("KeyValueFile parses sections, comments, and typed values") {
  const std::string text =
      "# top comment\n"
      "[data]\n"
      "data_dir = /tmp/x\n"
      "; alt comment\n"
      "[run]\n"
      "seed = 42\n"
      "[embedding]\n"
      "ase_d = 3\n"
      "flag = TRUE\n"
      "rate = 0.25\n"
      "days = 1, 2,9\n";
  KeyValueFile kv = KeyValueFile::parse_text(text, "inline");
  CHECK(kv.has("data.data_dir"));
  CHECK(!kv.has("data.output_dir"));
  CHECK(kv.get_string("data.data_dir", "") == "/tmp/x");
  CHECK(kv.get_uint("run.seed", 0) == 42);
  CHECK(kv.get_int("embedding.ase_d", 2) == 3);
  CHECK(kv.get_bool("embedding.flag", false) == true);
  CHECK(kv.get_real("embedding.rate", 0.0) == 0.25);
  CHECK(kv.get_int_list("embedding.days") == std::vector<int>{1, 2, 9});
  CHECK_NOTHROW(kv.finish());
}

TEST_CASE("KeyValueFile rejects malformed text and unconsumed keys") {
  CHECK_THROWS_AS(KeyValueFile::parse_text("a = 1\na = 2\n", "dup"), ParseError);
  CHECK_THROWS_AS(KeyValueFile::parse_text("[open\n", "sec"), ParseError);
  CHECK_THROWS_AS(KeyValueFile::parse_text("novalue\n", "kv"), ParseError);

  KeyValueFile kv = KeyValueFile::parse_text("[a]\nx = 1\ny = 2\n", "unused");
  kv.get_int("a.x", 0);
  try {
    kv.finish();
    FAIL("expected ParseError for unconsumed key");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("a.y") != std::string::npos);
  }

  KeyValueFile typed = KeyValueFile::parse_text("[a]\nx = notanumber\n", "typed");
  CHECK_THROWS_AS(typed.get_int("a.x", 0), ParseError);
  KeyValueFile boolish = KeyValueFile::parse_text("[a]\nx = maybe\n", "boolish");
  CHECK_THROWS_AS(boolish.get_bool("a.x", false), ParseError);
  KeyValueFile missing = KeyValueFile::parse_text("", "missing");
  CHECK_THROWS_AS(missing.require_string("a.b"), ParseError);
}

TEST_CASE("load_pipeline_config reads every section and rejects unknown keys") {
  TempDir dir("config");
  const fs::path cfg = dir.path / "pipeline.ini";
  write_file(cfg,
             "[data]\n"
             "data_dir = data\n"
             "output_dir = results\n"
             "[preprocess]\n"
             "window_lo = 100\n"
             "window_hi = 250\n"
             "selected_days = 150, 188\n"
             "common_component = false\n"
             "[embedding]\n"
             "ase_d = 3\n"
             "mirror_m = 1\n"
             "isomap_k = 4\n"
             "[changepoint]\n"
             "mode = grid\n"
             "detector_level = 0.1\n"
             "detector_perms = 499\n"
             "t_init = 170\n"
             "[match]\n"
             "init = identity\n"
             "baseline_day_a = 150\n"
             "baseline_day_b = 188\n"
             "baseline_draws = 200\n"
             "[run]\n"
             "seed = 9\n");
  const PipelineConfig config = load_pipeline_config(cfg.string());
  CHECK(config.data_dir == "data");
  CHECK(config.output_dir == "results");
  CHECK(config.has_window);
  CHECK(config.window_lo == 100);
  CHECK(config.window_hi == 250);
  CHECK(config.selected_days == std::vector<int>{150, 188});
  CHECK(!config.common_component);
  CHECK(config.ase_d == 3);
  CHECK(config.mirror_m == 1);
  CHECK(config.isomap_k == 4);
  CHECK(config.changepoint_mode == ChangepointMode::Grid);
  CHECK(config.detector_level == 0.1);
  CHECK(config.detector_perms == 499);
  CHECK(config.has_t_init);
  CHECK(config.t_init == 170.0);
  CHECK(config.match_init == InitPolicy::Identity);
  CHECK(config.baseline_day_a == 150);
  CHECK(config.baseline_day_b == 188);
  CHECK(config.baseline_draws == 200);
  CHECK(config.seed == 9);
  CHECK(!config.seed_override);

  const fs::path bad = dir.path / "bad.ini";
  write_file(bad, "[data]\ndata_dir = x\n[embedding]\nase_dim = 2\n");
  CHECK_THROWS_AS(load_pipeline_config(bad.string()), ParseError);

  const fs::path half_window = dir.path / "half.ini";
  write_file(half_window, "[preprocess]\nwindow_lo = 5\n");
  CHECK_THROWS_AS(load_pipeline_config(half_window.string()), ParseError);

  const fs::path defaults = dir.path / "defaults.ini";
  write_file(defaults, "[data]\ndata_dir = somewhere\n");
  const PipelineConfig d = load_pipeline_config(defaults.string());
  CHECK(d.output_dir == "out");
  CHECK(d.ase_d == 2);
  CHECK(d.mirror_m == 2);
  CHECK(d.isomap_k == kAutoNeighbors);
  CHECK(d.changepoint_mode == ChangepointMode::Both);
  CHECK(d.common_component);
  CHECK(!d.has_t_init);
}

TEST_CASE("load_lpp_spec builds a validated spec") {
  TempDir dir("lppspec");
  const fs::path spec_path = dir.path / "lpp.ini";
  write_file(spec_path, lpp_spec_text(30, 77));
  const LppSpec spec = load_lpp_spec(spec_path.string());
  CHECK(spec.n == 30);
  CHECK(spec.d == 1);
  CHECK(spec.days.size() == 10);
  CHECK(spec.base_point(0) == 0.3);
  CHECK(spec.break_day == 5.5);
  CHECK(spec.seed == 77);

  write_file(spec_path, "[lpp]\nn = 1\nd = 1\ndays = 1,2\nbase_point = 0.3\n"
                        "drift_pre = 0\ndrift_post = 0\nbreak_day = 1.5\n");
  CHECK_THROWS_AS(load_lpp_spec(spec_path.string()), SpecValidationError);
}

TEST_CASE("stats, mirror, and changepoint commands produce consistent files") {
  TempDir dir("pipeline");
  const fs::path data = dir.path / "data";
  write_toy_dataset(data);

  PipelineConfig config;
  config.data_dir = data.string();
  config.output_dir = (dir.path / "out").string();
  config.ase_d = 2;
  config.detector_perms = 199;
  config.seed = 3;

  cmd_stats(config);
  const fs::path out(config.output_dir);
  REQUIRE(fs::exists(out / "stats.csv"));
  REQUIRE(fs::exists(out / "stats.svg"));
  const std::string stats = read_file(out / "stats.csv");
  CHECK(stats.rfind("day,non_isolated,edges\n", 0) == 0);
  // 8 snapshots -> header + 8 rows.
  CHECK(std::count(stats.begin(), stats.end(), '\n') == 9);

  cmd_mirror(config);
  for (const char* name :
       {"distance_matrix.csv", "mirror.csv", "iso_mirror.csv", "scree.csv", "iso_mirror.svg"})
    REQUIRE(fs::exists(out / name));

  const auto [days, psi] = read_curve_csv(out / "iso_mirror.csv");
  REQUIRE(days.size() == 8);
  CHECK(days(0) == 1.0);
  CHECK(days(7) == 8.0);
  CHECK(std::abs(psi.sum()) < 1e-9);  // centered
  const std::string svg = read_file(out / "iso_mirror.svg");
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find("t*=") != std::string::npos);

  cmd_changepoint(config);
  REQUIRE(fs::exists(out / "fit_grid.csv"));
  REQUIRE(fs::exists(out / "fit_segmented.csv"));
  REQUIRE(fs::exists(out / "detector.csv"));
  const std::string detector = read_file(out / "detector.csv");
  CHECK(detector.find("statistic,") != std::string::npos);
  CHECK(detector.find("no_signal,") != std::string::npos);
  const std::string fit = read_file(out / "fit_grid.csv");
  CHECK(fit.find("t_star,") != std::string::npos);
  CHECK(fit.find("day,psi,fitted") != std::string::npos);

  // Re-running into a second directory reproduces every file byte for byte.
  PipelineConfig again = config;
  again.output_dir = (dir.path / "out2").string();
  cmd_stats(again);
  cmd_mirror(again);
  cmd_changepoint(again);
  for (const char* name : {"stats.csv", "distance_matrix.csv", "mirror.csv", "iso_mirror.csv",
                           "scree.csv", "iso_mirror.svg", "fit_grid.csv", "fit_segmented.csv",
                           "detector.csv", "stats.svg"})
    CHECK(read_file(out / name) == read_file(fs::path(again.output_dir) / name));
}

TEST_CASE("match command writes the assessment and baseline files") {
  TempDir dir("match");
  const fs::path data = dir.path / "data";
  write_toy_dataset(data);

  PipelineConfig config;
  config.data_dir = data.string();
  config.output_dir = (dir.path / "out").string();
  config.baseline_draws = 100;
  config.seed = 11;

  cmd_match(config);
  const fs::path out(config.output_dir);
  for (const char* name : {"match.csv", "baseline.csv", "match_ratio.svg", "baseline_hist.svg"})
    REQUIRE(fs::exists(out / name));

  const std::string match = read_file(out / "match.csv");
  CHECK(match.rfind("pair,f_identity,f_faq,ratio\n", 0) == 0);
  CHECK(std::count(match.begin(), match.end(), '\n') == 8);  // header + 7 pairs
  CHECK(match.find("\n1,") != std::string::npos);            // pairs numbered from 1

  const std::string baseline = read_file(out / "baseline.csv");
  CHECK(baseline.rfind("ofv\n", 0) == 0);
  CHECK(baseline.find("# min=") != std::string::npos);
  // header + 100 draws + summary comment
  CHECK(std::count(baseline.begin(), baseline.end(), '\n') == 102);
}

TEST_CASE("synth command samples a loadable series and benchmark table") {
  TempDir dir("synth");
  const fs::path spec_path = dir.path / "lpp.ini";
  write_file(spec_path, lpp_spec_text(50, 13));

  PipelineConfig config;
  config.output_dir = (dir.path / "out").string();
  config.lpp_spec_path = spec_path.string();
  config.synth_benchmark = true;
  config.benchmark_seeds = 2;

  cmd_synth(config);
  const fs::path out(config.output_dir);
  REQUIRE(fs::exists(out / "latents.csv"));
  REQUIRE(fs::exists(out / "benchmark.csv"));
  REQUIRE(fs::exists(out / "data" / "vertices.txt"));

  const TemporalGraphSet series = load_time_series(out / "data");
  CHECK(series.order() == 50);
  CHECK(series.size() == 10);
  CHECK(series.vertices.front() == "v00");

  const std::string latents = read_file(out / "latents.csv");
  CHECK(latents.rfind("day,vertex,x1\n", 0) == 0);
  CHECK(std::count(latents.begin(), latents.end(), '\n') == 1 + 10 * 50);

  const std::string bench = read_file(out / "benchmark.csv");
  CHECK(bench.rfind("seed,estimated_break_day,error,detected,failed,message\n", 0) == 0);
  CHECK(bench.find("# median_abs_error=") != std::string::npos);

  // The CLI --seed override replaces the spec seed; a different seed
  // changes the sampled series.
  PipelineConfig reseeded = config;
  reseeded.output_dir = (dir.path / "out2").string();
  reseeded.synth_benchmark = false;
  reseeded.seed = 999;
  reseeded.seed_override = true;
  cmd_synth(reseeded);
  CHECK(read_file(out / "data" / "t1.tsv") !=
        read_file(fs::path(reseeded.output_dir) / "data" / "t1.tsv"));
}

TEST_CASE("changepoint reads an explicit curve file") {
  TempDir dir("curve");
  const fs::path curve = dir.path / "psi.csv";
  std::string text = "day,c1\n";
  for (int t = 1; t <= 12; ++t) {
    const double v = 0.1 * t + (t > 6 ? 0.4 * (t - 6) : 0.0);
    text += std::to_string(t) + "," + format_double(v) + "\n";
  }
  write_file(curve, text);

  PipelineConfig config;
  config.output_dir = (dir.path / "out").string();
  config.iso_csv = curve.string();
  config.detector_perms = 199;
  cmd_changepoint(config);

  const std::string fit = read_file(dir.path / "out" / "fit_segmented.csv");
  const std::size_t pos = fit.find("t_star,");
  REQUIRE(pos != std::string::npos);
  const double t_star = std::stod(fit.substr(pos + 7));
  CHECK(t_star > 5.0);
  CHECK(t_star < 7.0);

  // Round-trip: read_curve_csv inverts the writer.
  const auto [days, psi] = read_curve_csv(curve);
  REQUIRE(days.size() == 12);
  CHECK(days(3) == 4.0);
  CHECK(psi(3) == doctest::Approx(0.4));
  CHECK_THROWS_AS(read_curve_csv(dir.path / "does_not_exist.csv"), ParseError);

  const fs::path headerless = dir.path / "broken.csv";
  write_file(headerless, "1,2\n");
  CHECK_THROWS_AS(read_curve_csv(headerless), ParseError);
}

#ifdef NETMIRROR_CLI
TEST_CASE("the installed binary wires arguments to commands") {
  const std::string exe = NETMIRROR_CLI;
  TempDir dir("binary");
  const fs::path data = dir.path / "data";
  write_toy_dataset(data);
  const fs::path cfg = dir.path / "run.ini";
  write_file(cfg, "[data]\ndata_dir = " + data.string() + "\noutput_dir = " +
                      (dir.path / "out").string() + "\n");

  const auto run = [](const std::string& cmd) {
    return std::system((cmd + " > /dev/null 2>&1").c_str());
  };
  CHECK(run(exe + " --help") == 0);
  CHECK(run(exe) != 0);                                      // subcommand required
  CHECK(run(exe + " stats") != 0);                           // --config required
  CHECK(run(exe + " stats --config /nonexistent.ini") != 0); // load failure -> exit 1
  CHECK(run(exe + " stats --config " + cfg.string()) == 0);
  CHECK(fs::exists(dir.path / "out" / "stats.csv"));

  // --out overrides the configured output directory.
  CHECK(run(exe + " stats --config " + cfg.string() + " --out " +
            (dir.path / "elsewhere").string()) == 0);
  CHECK(fs::exists(dir.path / "elsewhere" / "stats.csv"));
}
#endif
