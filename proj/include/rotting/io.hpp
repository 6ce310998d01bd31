#ifndef ROTTING_IO_HPP
#define ROTTING_IO_HPP

// CSV and JSON artifacts. Numbers use the C locale and 17 significant digits
// so that values survive a text round trip bit for bit.

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <system_error>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "rotting/harness.hpp"

namespace rotting {

inline std::string format_real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// Replaces characters that do not belong in a file name.
inline std::string file_safe(const std::string& label) {
  std::string out = label;
  for (auto& c : out) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_' ||
                    c == '-' || c == '.' || c == '=';
    if (!ok) c = '_';
  }
  return out;
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  os << text;
  if (!os) throw std::runtime_error("write failed for " + path.string());
}

inline std::string read_text(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

inline std::string mean_regret_csv(const PolicySummary& s) {
  std::string out = "t,mean,std\n";
  for (std::size_t t = 0; t < s.mean_curve.size(); ++t)
    out += std::to_string(t + 1) + "," + format_real(s.mean_curve[t]) + "," + format_real(s.std_curve[t]) + "\n";
  return out;
}

inline std::string end_regret_csv(const ExperimentResult& result) {
  std::string out = "seed,policy,end_regret\n";
  for (const auto& p : result.policies)
    for (std::size_t r = 0; r < p.end_regret.size(); ++r)
      out += std::to_string(r) + "," + p.label + "," + format_real(p.end_regret[r]) + "\n";
  return out;
}

/// Parses an end-regret CSV back into (label, samples ordered by seed),
/// keeping the policy order of first appearance.
inline std::vector<std::pair<std::string, std::vector<double>>> parse_end_regret_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line.rfind("seed,policy,end_regret", 0) != 0)
    throw std::runtime_error("end-regret CSV must start with 'seed,policy,end_regret'");
  std::vector<std::pair<std::string, std::vector<std::pair<std::uint64_t, double>>>> rows;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto c1 = line.find(',');
    const auto c2 = line.rfind(',');
    if (c1 == std::string::npos || c1 == c2)
      throw std::runtime_error("end-regret CSV line " + std::to_string(lineno) + " is malformed");
    std::uint64_t seed = 0;
    double value = 0.0;
    const char* s = line.data();
    const auto r1 = std::from_chars(s, s + c1, seed);
    const auto r2 = std::from_chars(s + c2 + 1, s + line.size(), value);
    if (r1.ec != std::errc() || r1.ptr != s + c1 || r2.ec != std::errc() || r2.ptr != s + line.size())
      throw std::runtime_error("end-regret CSV line " + std::to_string(lineno) + " is malformed");
    const auto label = line.substr(c1 + 1, c2 - c1 - 1);
    auto it = std::find_if(rows.begin(), rows.end(), [&](const auto& r) { return r.first == label; });
    if (it == rows.end()) it = rows.insert(rows.end(), {label, {}});
    it->second.emplace_back(seed, value);
  }
  std::vector<std::pair<std::string, std::vector<double>>> out;
  for (auto& [label, pairs] : rows) {
    std::sort(pairs.begin(), pairs.end());
    std::vector<double> values;
    for (const auto& [seed, v] : pairs) values.push_back(v);
    out.emplace_back(label, std::move(values));
  }
  return out;
}

inline std::string grid_csv(const GridResult& grid) {
  std::string out = "candidate,mean_end_regret,std_end_regret,best\n";
  for (std::size_t i = 0; i < grid.rows.size(); ++i) {
    const auto& r = grid.rows[i];
    out += r.label + "," + format_real(r.mean_end_regret) + "," + format_real(r.std_end_regret) + "," +
           (i == grid.best ? "1" : "0") + "\n";
  }
  return out;
}

inline nlohmann::ordered_json comparison_json(const ComparisonReport& rep) {
  nlohmann::ordered_json j;
  j["policies"] = rep.policies;
  j["repetitions"] = rep.repetitions;
  j["wins"] = rep.wins;
  j["ties"] = rep.ties;
  auto p = nlohmann::ordered_json::array();
  for (const auto& row : rep.p_values) {
    auto jr = nlohmann::ordered_json::array();
    for (const auto& v : row) jr.push_back(v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr));
    p.push_back(std::move(jr));
  }
  j["p_values"] = std::move(p);
  return j;
}

inline nlohmann::ordered_json summary_json(const ExperimentResult& result) {
  nlohmann::ordered_json j;
  j["horizon"] = result.horizon;
  j["repetitions"] = result.repetitions;
  j["seed"] = result.master_seed;
  auto policies = nlohmann::ordered_json::array();
  for (const auto& p : result.policies) {
    nlohmann::ordered_json e;
    e["label"] = p.label;
    e["mean_end_regret"] = sample_mean(p.end_regret);
    e["std_end_regret"] = sample_stddev(p.end_regret);
    e["regret_csv"] = "mean_regret_" + file_safe(p.label) + ".csv";
    policies.push_back(std::move(e));
  }
  j["policies"] = std::move(policies);
  j["comparison"] = comparison_json(compare(result));
  return j;
}

/// Writes mean_regret_<label>.csv per policy, end_regret.csv and summary.json.
inline std::vector<std::filesystem::path> write_experiment(const ExperimentResult& result,
                                                           const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> written;
  for (const auto& p : result.policies) {
    written.push_back(dir / ("mean_regret_" + file_safe(p.label) + ".csv"));
    write_text(written.back(), mean_regret_csv(p));
  }
  written.push_back(dir / "end_regret.csv");
  write_text(written.back(), end_regret_csv(result));
  written.push_back(dir / "summary.json");
  write_text(written.back(), summary_json(result).dump(2) + "\n");
  return written;
}

}  // namespace rotting

#endif  // ROTTING_IO_HPP
