#include "netmirror/pipeline_config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include "netmirror/errors.hpp"

namespace netmirror {

namespace {

std::string trim(const std::string& s) {
  std::size_t begin = 0;
  std::size_t end = s.size();
  while (begin < end && std::isspace(static_cast<unsigned char>(s[begin]))) ++begin;
  while (end > begin && std::isspace(static_cast<unsigned char>(s[end - 1]))) --end;
  return s.substr(begin, end - begin);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> parts;
  std::string current;
  for (char c : s) {
    if (c == ',' || std::isspace(static_cast<unsigned char>(c))) {
      if (!current.empty()) parts.push_back(std::move(current));
      current.clear();
    } else {
      current += c;
    }
  }
  if (!current.empty()) parts.push_back(std::move(current));
  return parts;
}

long long parse_int(const std::string& text, const std::string& where) {
  long long value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size())
    throw ParseError(where + ": expected an integer, got \"" + text + "\"");
  return value;
}

double parse_real(const std::string& text, const std::string& where) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size())
    throw ParseError(where + ": expected a real number, got \"" + text + "\"");
  return value;
}

}  // namespace

KeyValueFile KeyValueFile::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open config file " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_text(buffer.str(), path);
}

KeyValueFile KeyValueFile::parse_text(const std::string& text, const std::string& context) {
  KeyValueFile kv;
  kv.context_ = context;
  std::istringstream in(text);
  std::string line;
  std::string section;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#' || t[0] == ';') continue;
    const std::string where = context + ":" + std::to_string(line_no);
    if (t.front() == '[') {
      if (t.back() != ']') throw ParseError(where + ": unterminated section header");
      section = trim(t.substr(1, t.size() - 2));
      if (section.empty()) throw ParseError(where + ": empty section name");
      continue;
    }
    const std::size_t eq = t.find('=');
    if (eq == std::string::npos) throw ParseError(where + ": expected key = value");
    const std::string key = trim(t.substr(0, eq));
    if (key.empty()) throw ParseError(where + ": empty key");
    const std::string full = section.empty() ? key : section + "." + key;
    if (kv.values_.count(full)) throw ParseError(where + ": duplicate key " + full);
    kv.values_[full] = trim(t.substr(eq + 1));
  }
  return kv;
}

bool KeyValueFile::has(const std::string& key) const { return values_.count(key) != 0; }

std::string KeyValueFile::get_string(const std::string& key, const std::string& fallback) {
  consumed_.insert(key);
  const auto it = values_.find(key);
  return it == values_.end() ? fallback : it->second;
}

std::string KeyValueFile::require_string(const std::string& key) {
  consumed_.insert(key);
  const auto it = values_.find(key);
  if (it == values_.end()) throw ParseError(context_ + ": missing required key " + key);
  return it->second;
}

long long KeyValueFile::get_int(const std::string& key, long long fallback) {
  if (!has(key)) {
    consumed_.insert(key);
    return fallback;
  }
  return parse_int(require_string(key), context_ + ": " + key);
}

long long KeyValueFile::require_int(const std::string& key) {
  return parse_int(require_string(key), context_ + ": " + key);
}

double KeyValueFile::get_real(const std::string& key, double fallback) {
  if (!has(key)) {
    consumed_.insert(key);
    return fallback;
  }
  return parse_real(require_string(key), context_ + ": " + key);
}

double KeyValueFile::require_real(const std::string& key) {
  return parse_real(require_string(key), context_ + ": " + key);
}

bool KeyValueFile::get_bool(const std::string& key, bool fallback) {
  if (!has(key)) {
    consumed_.insert(key);
    return fallback;
  }
  std::string v = require_string(key);
  std::transform(v.begin(), v.end(), v.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (v == "true" || v == "yes" || v == "1") return true;
  if (v == "false" || v == "no" || v == "0") return false;
  throw ParseError(context_ + ": " + key + ": expected a boolean, got \"" + v + "\"");
}

std::uint64_t KeyValueFile::get_uint(const std::string& key, std::uint64_t fallback) {
  if (!has(key)) {
    consumed_.insert(key);
    return fallback;
  }
  const std::string text = require_string(key);
  std::uint64_t value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size())
    throw ParseError(context_ + ": " + key + ": expected a non-negative integer, got \"" + text +
                     "\"");
  return value;
}

std::vector<int> KeyValueFile::get_int_list(const std::string& key) {
  if (!has(key)) {
    consumed_.insert(key);
    return {};
  }
  const std::string where = context_ + ": " + key;
  std::vector<int> out;
  for (const std::string& part : split_list(require_string(key)))
    out.push_back(static_cast<int>(parse_int(part, where)));
  return out;
}

std::vector<double> KeyValueFile::require_real_list(const std::string& key) {
  const std::string where = context_ + ": " + key;
  std::vector<double> out;
  for (const std::string& part : split_list(require_string(key)))
    out.push_back(parse_real(part, where));
  return out;
}

void KeyValueFile::finish() const {
  std::string unknown;
  for (const auto& [key, value] : values_) {
    if (consumed_.count(key)) continue;
    if (!unknown.empty()) unknown += ", ";
    unknown += key;
  }
  if (!unknown.empty()) throw ParseError(context_ + ": unknown keys: " + unknown);
}

void PipelineConfig::validate() const {
  if (ase_d < 1) throw DomainError("ase_d must be >= 1");
  if (mirror_m < 1) throw DomainError("mirror_m must be >= 1");
  if (isomap_k != kAutoNeighbors && isomap_k < 1)
    throw DomainError("isomap_k must be >= 1 or \"auto\"");
  if (!(detector_level > 0.0 && detector_level < 1.0))
    throw DomainError("detector_level must be in (0, 1)");
  if (detector_perms < 1) throw DomainError("detector_perms must be >= 1");
  if (has_window && window_lo > window_hi) throw DomainError("window_lo must be <= window_hi");
  if (baseline_draws < 1) throw DomainError("baseline_draws must be >= 1");
  if (benchmark_seeds < 1) throw DomainError("seeds must be >= 1");
  if ((baseline_day_a < 0) != (baseline_day_b < 0))
    throw DomainError("baseline pair needs both baseline_day_a and baseline_day_b");
}

PipelineConfig load_pipeline_config(const std::string& path) {
  KeyValueFile kv = KeyValueFile::parse_file(path);
  PipelineConfig cfg;

  cfg.data_dir = kv.get_string("data.data_dir", "");
  cfg.output_dir = kv.get_string("data.output_dir", "out");

  cfg.has_window = kv.has("preprocess.window_lo") || kv.has("preprocess.window_hi");
  if (kv.has("preprocess.window_lo") != kv.has("preprocess.window_hi"))
    throw ParseError(path + ": window needs both window_lo and window_hi");
  cfg.window_lo = static_cast<int>(kv.get_int("preprocess.window_lo", 0));
  cfg.window_hi = static_cast<int>(kv.get_int("preprocess.window_hi", 0));
  cfg.selected_days = kv.get_int_list("preprocess.selected_days");
  cfg.common_component = kv.get_bool("preprocess.common_component", true);
  cfg.component_before_select = kv.get_bool("preprocess.component_before_select", false);

  cfg.ase_d = kv.get_int("embedding.ase_d", 2);
  cfg.mirror_m = kv.get_int("embedding.mirror_m", 2);
  const std::string k = kv.get_string("embedding.isomap_k", "auto");
  cfg.isomap_k = k == "auto" ? kAutoNeighbors
                             : static_cast<Index>(parse_int(k, path + ": embedding.isomap_k"));

  const std::string mode = kv.get_string("changepoint.mode", "both");
  if (mode == "grid")
    cfg.changepoint_mode = ChangepointMode::Grid;
  else if (mode == "segmented")
    cfg.changepoint_mode = ChangepointMode::Segmented;
  else if (mode == "both")
    cfg.changepoint_mode = ChangepointMode::Both;
  else
    throw ParseError(path + ": changepoint.mode must be grid, segmented, or both");
  cfg.detector_level = kv.get_real("changepoint.detector_level", 0.05);
  cfg.detector_perms = static_cast<int>(kv.get_int("changepoint.detector_perms", 999));
  cfg.iso_csv = kv.get_string("changepoint.iso_csv", "");
  cfg.has_t_init = kv.has("changepoint.t_init");
  cfg.t_init = kv.get_real("changepoint.t_init", 0.0);

  const std::string init = kv.get_string("match.init", "barycenter");
  if (init == "barycenter")
    cfg.match_init = InitPolicy::Barycenter;
  else if (init == "identity")
    cfg.match_init = InitPolicy::Identity;
  else if (init == "random")
    cfg.match_init = InitPolicy::Random;
  else
    throw ParseError(path + ": match.init must be barycenter, identity, or random");
  cfg.baseline_day_a = static_cast<int>(kv.get_int("match.baseline_day_a", -1));
  cfg.baseline_day_b = static_cast<int>(kv.get_int("match.baseline_day_b", -1));
  cfg.baseline_draws = static_cast<int>(kv.get_int("match.baseline_draws", 1000));

  cfg.lpp_spec_path = kv.get_string("synth.spec", "");
  cfg.synth_benchmark = kv.get_bool("synth.benchmark", false);
  cfg.benchmark_seeds = static_cast<int>(kv.get_int("synth.seeds", 1));

  cfg.seed = kv.get_uint("run.seed", 0);

  kv.finish();
  cfg.validate();
  return cfg;
}

LppSpec load_lpp_spec(const std::string& path) {
  KeyValueFile kv = KeyValueFile::parse_file(path);
  LppSpec spec;
  spec.n = kv.require_int("lpp.n");
  spec.d = kv.require_int("lpp.d");
  spec.days = kv.get_int_list("lpp.days");
  const auto to_vector = [](const std::vector<double>& v) {
    VectorXd out(static_cast<Index>(v.size()));
    for (Index i = 0; i < out.size(); ++i) out(i) = v[static_cast<std::size_t>(i)];
    return out;
  };
  spec.base_point = to_vector(kv.require_real_list("lpp.base_point"));
  spec.drift_pre = to_vector(kv.require_real_list("lpp.drift_pre"));
  spec.drift_post = to_vector(kv.require_real_list("lpp.drift_post"));
  spec.break_day = kv.require_real("lpp.break_day");
  spec.dispersion = kv.get_real("lpp.dispersion", 0.0);
  spec.seed = kv.get_uint("lpp.seed", 0);
  kv.finish();
  spec.validate();
  return spec;
}

}  // namespace netmirror
