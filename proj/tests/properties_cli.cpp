#include "doctest.h"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "netmirror/commands.hpp"
#include "netmirror/errors.hpp"
#include "netmirror/graph_io.hpp"
#include "netmirror/lpp.hpp"

namespace fs = std::filesystem;
using namespace netmirror;

namespace {

struct Workspace {
  fs::path root;

  Workspace() : root(fs::temp_directory_path() / "netmirror_prop_cli") {
    fs::remove_all(root);
    fs::create_directories(root);
  }
  ~Workspace() { fs::remove_all(root); }
};

fs::path make_dataset(const fs::path& dir) {
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
  return dir;
}

std::vector<std::string> file_listing(const fs::path& dir) {
  std::vector<std::string> names;
  if (fs::exists(dir))
    for (const auto& entry : fs::recursive_directory_iterator(dir))
      if (entry.is_regular_file())
        names.push_back(fs::relative(entry.path(), dir).generic_string());
  std::sort(names.begin(), names.end());
  return names;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

PipelineConfig analysis_config(const fs::path& data, const fs::path& out) {
  PipelineConfig cfg;
  cfg.data_dir = data.string();
  cfg.output_dir = out.string();
  cfg.ase_d = 2;
  cfg.mirror_m = 2;
  cfg.detector_perms = 199;
  cfg.seed = 3;
  return cfg;
}

void run_analysis(const PipelineConfig& cfg) {
  cmd_stats(cfg);
  cmd_mirror(cfg);
  cmd_changepoint(cfg);
}

}  // namespace

TEST_CASE("property: commands are idempotent, outputs byte-identical across reruns") {
  Workspace ws;
  const fs::path data = make_dataset(ws.root / "data");

  const PipelineConfig first = analysis_config(data, ws.root / "out_a");
  const PipelineConfig second = analysis_config(data, ws.root / "out_b");
  run_analysis(first);
  run_analysis(second);
  run_analysis(second);  // rerun in place must also be clean

  const std::vector<std::string> names = file_listing(ws.root / "out_a");
  REQUIRE(!names.empty());
  CHECK(names == file_listing(ws.root / "out_b"));
  for (const std::string& name : names) {
    CHECK(slurp(ws.root / "out_a" / name) == slurp(ws.root / "out_b" / name));
    CHECK(name.find(".tmp") == std::string::npos);
  }
}

TEST_CASE("property: a failing command leaves no half-written output files") {
  Workspace ws;

  // Four observations are below the changepoint minimum, so the command
  // must fail after reading its input and stage nothing.
  std::ofstream curve(ws.root / "short.csv");
  curve << "day,c1\n1,0.1\n2,0.2\n3,0.1\n4,0.3\n";
  curve.close();

  PipelineConfig cfg;
  cfg.output_dir = (ws.root / "out").string();
  cfg.iso_csv = (ws.root / "short.csv").string();
  cfg.detector_perms = 99;

  CHECK_THROWS_AS(cmd_changepoint(cfg), InsufficientDataError);
  CHECK(file_listing(ws.root / "out").empty());
}
