#pragma once

#include <filesystem>
#include <string>

#include "netmirror/graph.hpp"

namespace netmirror {

/// Loads a time series from a directory of edge-list files. Each snapshot
/// lives in `t<DAY>.tsv` with tab-separated lines `day source target weight`;
/// `#`-prefixed lines are comments. An optional `vertices.txt` (one id per
/// line) fixes the vertex set and its order; otherwise the vertex list is
/// the lexicographically sorted union of all endpoint ids. A snapshot whose
/// assembled weights are exactly symmetric loads as undirected.
TemporalGraphSet load_time_series(const std::filesystem::path& dir);

/// Writes `vertices.txt` plus one `t<DAY>.tsv` per snapshot (both edge
/// directions are written for undirected graphs). Weights are formatted so
/// that load_time_series(save_time_series(s)) reproduces s exactly.
void save_time_series(const TemporalGraphSet& s, const std::filesystem::path& dir);

/// Shortest decimal representation that round-trips the double exactly.
std::string format_double(double value);

/// Writes `contents` to `path` via a temp file + rename, so a failure never
/// leaves a half-written file behind.
void atomic_write_file(const std::filesystem::path& path, const std::string& contents);

}  // namespace netmirror
