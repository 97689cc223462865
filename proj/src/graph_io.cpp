#include "netmirror/graph_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <system_error>
#include <unordered_map>
#include <vector>

#include "netmirror/errors.hpp"

namespace netmirror {

namespace fs = std::filesystem;

std::string format_double(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc()) throw Error("format_double: conversion failed");
  return std::string(buf, ptr);
}

void atomic_write_file(const fs::path& path, const std::string& contents) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open for writing: " + tmp.string());
    out << contents;
    if (!out.flush()) throw Error("write failed: " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp);
    throw Error("rename failed for " + path.string() + ": " + ec.message());
  }
}

namespace {

struct EdgeRecord {
  std::string source, target;
  double weight;
  std::size_t line;
};

struct SnapshotFile {
  int day;
  fs::path path;
  std::vector<EdgeRecord> edges;
};

[[noreturn]] void parse_fail(const fs::path& file, std::size_t line, const std::string& what) {
  throw ParseError(file.string() + ":" + std::to_string(line) + ": " + what);
}

bool parse_day_from_name(const std::string& name, int& day) {
  // t<DAY>.tsv
  if (name.size() < 6 || name.front() != 't' || name.substr(name.size() - 4) != ".tsv")
    return false;
  const std::string digits = name.substr(1, name.size() - 5);
  if (digits.empty()) return false;
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), day);
  return ec == std::errc() && ptr == digits.data() + digits.size();
}

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  for (;;) {
    const std::size_t tab = line.find('\t', start);
    if (tab == std::string::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
}

SnapshotFile read_snapshot_file(const fs::path& path, int day) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  SnapshotFile snap{day, path, {}};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    auto fields = split_tabs(line);
    if (fields.size() != 4)
      parse_fail(path, lineno, "expected 4 tab-separated fields, got " +
                                   std::to_string(fields.size()));
    int line_day = 0;
    {
      const auto& f = fields[0];
      auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), line_day);
      if (ec != std::errc() || ptr != f.data() + f.size())
        parse_fail(path, lineno, "bad day field '" + f + "'");
    }
    if (line_day != day)
      parse_fail(path, lineno, "day " + std::to_string(line_day) +
                                   " does not match file day " + std::to_string(day));
    if (fields[1].empty() || fields[2].empty())
      parse_fail(path, lineno, "empty vertex id");
    double weight = 0.0;
    {
      const auto& f = fields[3];
      auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), weight);
      if (ec != std::errc() || ptr != f.data() + f.size())
        parse_fail(path, lineno, "bad weight '" + f + "'");
    }
    if (!std::isfinite(weight))
      parse_fail(path, lineno, "weight must be finite");
    if (weight < 0.0)
      throw DomainError(path.string() + ":" + std::to_string(lineno) +
                        ": negative weight " + fields[3]);
    if (fields[1] == fields[2])
      throw DomainError(path.string() + ":" + std::to_string(lineno) +
                        ": self-loop on '" + fields[1] + "' (graphs are hollow)");
    snap.edges.push_back({fields[1], fields[2], weight, lineno});
  }
  return snap;
}

}  // namespace

TemporalGraphSet load_time_series(const fs::path& dir) {
  if (!fs::is_directory(dir))
    throw ParseError("not a directory: " + dir.string());

  std::vector<std::pair<int, fs::path>> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    int day = 0;
    if (parse_day_from_name(entry.path().filename().string(), day))
      files.emplace_back(day, entry.path());
  }
  if (files.empty())
    throw ParseError("no t<DAY>.tsv snapshot files in " + dir.string());
  std::sort(files.begin(), files.end());
  for (std::size_t i = 1; i < files.size(); ++i)
    if (files[i].first == files[i - 1].first)
      throw ParseError("duplicate day " + std::to_string(files[i].first) + " in " +
                       dir.string());

  std::vector<SnapshotFile> parsed;
  parsed.reserve(files.size());
  for (const auto& [day, path] : files) parsed.push_back(read_snapshot_file(path, day));

  TemporalGraphSet out;
  const fs::path vertex_file = dir / "vertices.txt";
  if (fs::exists(vertex_file)) {
    std::ifstream in(vertex_file);
    if (!in) throw ParseError("cannot open " + vertex_file.string());
    std::string line;
    std::size_t lineno = 0;
    std::set<std::string> seen;
    while (std::getline(in, line)) {
      ++lineno;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty()) continue;
      if (!seen.insert(line).second)
        parse_fail(vertex_file, lineno, "duplicate vertex id '" + line + "'");
      out.vertices.push_back(line);
    }
    if (out.vertices.empty()) parse_fail(vertex_file, 1, "no vertex ids");
  } else {
    std::set<std::string> ids;
    for (const auto& snap : parsed)
      for (const auto& e : snap.edges) {
        ids.insert(e.source);
        ids.insert(e.target);
      }
    out.vertices.assign(ids.begin(), ids.end());
  }

  std::unordered_map<std::string, Index> index;
  for (std::size_t i = 0; i < out.vertices.size(); ++i)
    index[out.vertices[i]] = static_cast<Index>(i);
  const Index n = out.order();

  for (const auto& snap : parsed) {
    Snapshot result;
    result.day = snap.day;
    result.graph.adjacency = MatrixXd::Zero(n, n);
    std::set<std::pair<Index, Index>> seen;
    for (const auto& e : snap.edges) {
      const auto src = index.find(e.source);
      if (src == index.end())
        parse_fail(snap.path, e.line, "vertex '" + e.source + "' not in vertices.txt");
      const auto tgt = index.find(e.target);
      if (tgt == index.end())
        parse_fail(snap.path, e.line, "vertex '" + e.target + "' not in vertices.txt");
      if (!seen.insert({src->second, tgt->second}).second)
        throw DuplicateEdgeError(snap.path.string() + ":" + std::to_string(e.line) +
                                 ": duplicate edge (" + std::to_string(snap.day) + ", " +
                                 e.source + ", " + e.target + ")");
      result.graph.adjacency(src->second, tgt->second) = e.weight;
    }
    result.graph.directed =
        result.graph.adjacency != result.graph.adjacency.transpose().eval();
    out.snapshots.push_back(std::move(result));
  }

  out.validate();
  return out;
}

void save_time_series(const TemporalGraphSet& s, const fs::path& dir) {
  fs::create_directories(dir);
  {
    std::string contents;
    for (const auto& v : s.vertices) {
      contents += v;
      contents += '\n';
    }
    atomic_write_file(dir / "vertices.txt", contents);
  }
  for (const auto& snap : s.snapshots) {
    std::string contents;
    const Index n = snap.graph.order();
    const std::string day = std::to_string(snap.day);
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < n; ++j) {
        const double w = snap.graph.adjacency(i, j);
        if (w == 0.0) continue;
        contents += day;
        contents += '\t';
        contents += s.vertices[static_cast<std::size_t>(i)];
        contents += '\t';
        contents += s.vertices[static_cast<std::size_t>(j)];
        contents += '\t';
        contents += format_double(w);
        contents += '\n';
      }
    atomic_write_file(dir / ("t" + day + ".tsv"), contents);
  }
}

}  // namespace netmirror
