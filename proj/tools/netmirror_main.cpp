#include <cstdint>
#include <cstdio>
#include <exception>
#include <string>

#include "CLI11.hpp"
#include "netmirror/commands.hpp"
#include "netmirror/pipeline_config.hpp"

int main(int argc, char** argv) {
  CLI::App app{"netmirror: iso-mirror pipeline for time series of networks"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_override;
  std::uint64_t seed_value = 0;

  const std::pair<const char*, const char*> commands[] = {
      {"stats", "activity statistics per snapshot (non-isolated vertices, edges)"},
      {"match", "seeded graph-matching assessment of the vertex correspondence"},
      {"mirror", "distance matrix, mirror, and iso-mirror of the series"},
      {"changepoint", "breakpoint fits and slope-change detector on an iso-mirror"},
      {"synth", "sample a synthetic LPP series; optional pipeline benchmark"},
  };
  for (const auto& [name, description] : commands) {
    CLI::App* sub = app.add_subcommand(name, description);
    sub->add_option("--config", config_path, "configuration file")->required();
    sub->add_option("--out", out_override, "override the configured output directory");
    sub->add_option("--seed", seed_value, "override the configured seed");
  }

  CLI11_PARSE(app, argc, argv);

  try {
    netmirror::PipelineConfig config = netmirror::load_pipeline_config(config_path);
    CLI::App* active = app.get_subcommands().front();
    if (!out_override.empty()) config.output_dir = out_override;
    if (active->count("--seed") > 0) {
      config.seed = seed_value;
      config.seed_override = true;
    }

    const std::string name = active->get_name();
    if (name == "stats")
      netmirror::cmd_stats(config);
    else if (name == "match")
      netmirror::cmd_match(config);
    else if (name == "mirror")
      netmirror::cmd_mirror(config);
    else if (name == "changepoint")
      netmirror::cmd_changepoint(config);
    else
      netmirror::cmd_synth(config);
    return 0;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
