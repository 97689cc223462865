#pragma once

#include <filesystem>
#include <utility>

#include "netmirror/graph.hpp"
#include "netmirror/pipeline_config.hpp"
#include "netmirror/types.hpp"

namespace netmirror {

/// Each command reads per its config, computes, and writes its output files
/// atomically; on failure nothing half-written remains and files already
/// staged by the failing command are removed. Errors propagate as
/// exceptions; the CLI maps them to a nonzero exit code.
void cmd_stats(const PipelineConfig& config);
void cmd_match(const PipelineConfig& config);
void cmd_mirror(const PipelineConfig& config);
void cmd_changepoint(const PipelineConfig& config);
void cmd_synth(const PipelineConfig& config);

/// The fixed preprocessing chain for mirror analyses: symmetrize,
/// rank-transform, window/select, largest common connected component
/// (the last two stages swap when config.component_before_select is set).
TemporalGraphSet preprocess_for_mirror(const TemporalGraphSet& s, const PipelineConfig& config);

/// Reads a `day,c1[,...]` CSV back as (days, first coordinate).
std::pair<VectorXd, VectorXd> read_curve_csv(const std::filesystem::path& path);

}  // namespace netmirror
