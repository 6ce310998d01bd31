#ifndef ROTTING_CONFIG_HPP
#define ROTTING_CONFIG_HPP

// Declarative experiment configuration.
//
//   # comment
//   [experiment]            horizon, repetitions, seed, output
//   [profile]               sigma2, mode = fixed|resampled, arms, family, theta,
//                           constant_min, constant_max
//   [arm]       (repeated)  kind = tabulated: steps = COUNT:VALUE, ...; tail
//                           kind = parametric: theta, constant
//   [policy]    (repeated)  type, label, and type-specific parameters
//   [grid]      (repeated)  policy (a label), parameter, values
//
// Lists are comma separated. Unknown sections and keys are rejected.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <utility>
#include <vector>

#include "rotting/baselines.hpp"
#include "rotting/cto.hpp"
#include "rotting/env.hpp"
#include "rotting/harness.hpp"
#include "rotting/model_family.hpp"
#include "rotting/swa.hpp"
#include "rotting/theory.hpp"

namespace rotting {

struct ArmConfig {
  std::string kind;  // "tabulated" | "parametric"
  std::vector<Segment> steps;
  double tail = 0.0;
  double theta = 0.0;
  double constant = 0.0;
  bool operator==(const ArmConfig&) const = default;
};

struct ProfileConfig {
  double sigma2 = 0.0;
  std::string mode = "fixed";  // "fixed" | "resampled"
  std::int64_t arms = 0;
  std::string family;  // empty for purely tabulated profiles
  std::vector<double> thetas;
  double constant_min = 0.0;
  double constant_max = 0.0;
  std::vector<ArmConfig> arm_list;
  bool operator==(const ProfileConfig&) const = default;
};

struct PolicySpec {
  std::string label;
  std::string type;
  std::map<std::string, double> params;
  bool operator==(const PolicySpec&) const = default;
};

struct GridSpec {
  std::string policy;
  std::string parameter;
  std::vector<double> values;
  bool operator==(const GridSpec&) const = default;
};

struct ExperimentConfig {
  std::int64_t horizon = 0;
  std::int64_t repetitions = 0;
  std::uint64_t seed = 0;
  std::string output;
  ProfileConfig profile;
  std::vector<PolicySpec> policies;
  std::vector<GridSpec> grids;
  bool operator==(const ExperimentConfig&) const = default;
};

/// Every problem found while parsing, in file order.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> errors)
      : std::runtime_error(join(errors)), errors_(std::move(errors)) {}
  const std::vector<std::string>& errors() const noexcept { return errors_; }

 private:
  static std::string join(const std::vector<std::string>& errors) {
    std::string s;
    for (const auto& e : errors) s += (s.empty() ? "" : "\n") + e;
    return s;
  }
  std::vector<std::string> errors_;
};

struct PolicyParamInfo {
  std::vector<std::string> allowed;
  std::vector<std::string> required;
};

/// Parameters accepted by each policy type.
inline const std::map<std::string, PolicyParamInfo>& policy_types() {
  static const std::map<std::string, PolicyParamInfo> types{
      {"oracle", {{}, {}}},
      {"swa", {{"alpha", "horizon"}, {}}},
      {"wswa", {{"alpha"}, {}}},
      {"cto_sim", {{}, {}}},
      {"dcto_ucb", {{"delta", "budget"}, {}}},
      {"dcto_sim_ucb", {{}, {}}},
      {"ucb1", {{}, {}}},
      {"ducb", {{"gamma", "xi", "B"}, {"gamma"}}},
      {"swucb", {{"tau", "xi", "B"}, {"tau"}}},
  };
  return types;
}

inline bool needs_family(const std::string& type) {
  return type == "cto_sim" || type == "dcto_ucb" || type == "dcto_sim_ucb";
}

namespace config_detail {

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

inline std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  if (trim(s).empty()) return out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

inline std::optional<double> to_double(const std::string& s) {
  double v = 0.0;
  const auto* end = s.data() + s.size();
  const auto [p, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || p != end || !std::isfinite(v)) return std::nullopt;
  return v;
}

template <class Int>
std::optional<Int> to_int(const std::string& s) {
  Int v = 0;
  const auto* end = s.data() + s.size();
  const auto [p, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || p != end) return std::nullopt;
  return v;
}

inline std::string fmt(double v) {
  char buf[64];
  const auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p);
}

struct Entry {
  std::string value;
  int line = 0;
};

struct Section {
  std::string name;
  int line = 0;
  std::map<std::string, Entry> entries;
};

/// Typed accessors over one section that record errors instead of throwing.
class Reader {
 public:
  Reader(Section& section, std::vector<std::string>& errors) : s_(section), errors_(errors) {}

  bool has(const std::string& key) const { return s_.entries.count(key) != 0; }

  std::optional<std::string> str(const std::string& key, bool required = false) {
    used_.insert(key);
    const auto it = s_.entries.find(key);
    if (it == s_.entries.end()) {
      if (required) error(s_.line, "missing key '" + key + "'");
      return std::nullopt;
    }
    return it->second.value;
  }

  std::optional<double> real(const std::string& key, bool required = false) {
    const auto raw = str(key, required);
    if (!raw) return std::nullopt;
    const auto v = to_double(*raw);
    if (!v) error(line(key), "'" + key + "' must be a number, got '" + *raw + "'");
    return v;
  }

  template <class Int>
  std::optional<Int> integer(const std::string& key, bool required = false) {
    const auto raw = str(key, required);
    if (!raw) return std::nullopt;
    const auto v = to_int<Int>(*raw);
    if (!v) error(line(key), "'" + key + "' must be an integer, got '" + *raw + "'");
    return v;
  }

  std::optional<std::vector<double>> reals(const std::string& key, bool required = false) {
    const auto raw = str(key, required);
    if (!raw) return std::nullopt;
    std::vector<double> out;
    for (const auto& item : split(*raw, ',')) {
      const auto v = to_double(item);
      if (!v) {
        error(line(key), "'" + key + "' has a non-numeric element '" + item + "'");
        return std::nullopt;
      }
      out.push_back(*v);
    }
    return out;
  }

  std::optional<std::vector<Segment>> segments(const std::string& key) {
    const auto raw = str(key);
    if (!raw) return std::nullopt;
    std::vector<Segment> out;
    for (const auto& item : split(*raw, ',')) {
      const auto parts = split(item, ':');
      std::optional<std::int64_t> count;
      std::optional<double> value;
      if (parts.size() == 2) {
        count = to_int<std::int64_t>(parts[0]);
        value = to_double(parts[1]);
      }
      if (!count || !value) {
        error(line(key), "'" + key + "' entries must look like COUNT:VALUE, got '" + item + "'");
        return std::nullopt;
      }
      out.push_back({*count, *value});
    }
    return out;
  }

  int line(const std::string& key) const {
    const auto it = s_.entries.find(key);
    return it == s_.entries.end() ? s_.line : it->second.line;
  }
  int section_line() const { return s_.line; }

  void error(int line, const std::string& msg) {
    errors_.push_back("line " + std::to_string(line) + ": [" + s_.name + "] " + msg);
  }

  /// Flags keys that were never read.
  void reject_unknown() {
    for (const auto& [key, entry] : s_.entries)
      if (!used_.count(key)) error(entry.line, "unknown key '" + key + "'");
  }

 private:
  Section& s_;
  std::vector<std::string>& errors_;
  std::set<std::string> used_;
};

}  // namespace config_detail

inline ExperimentConfig parse_config(std::string_view text) {
  using namespace config_detail;
  std::vector<std::string> errors;
  std::vector<Section> sections;

  static const std::set<std::string> known{"experiment", "profile", "arm", "policy", "grid"};
  static const std::set<std::string> repeatable{"arm", "policy", "grid"};

  int lineno = 0;
  std::istringstream in{std::string(text)};
  for (std::string raw; std::getline(in, raw);) {
    ++lineno;
    if (const auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    const auto line = trim(raw);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        errors.push_back("line " + std::to_string(lineno) + ": malformed section header '" + line + "'");
        continue;
      }
      const auto name = trim(std::string_view(line).substr(1, line.size() - 2));
      if (!known.count(name)) {
        errors.push_back("line " + std::to_string(lineno) + ": unknown section '" + name + "'");
      } else if (!repeatable.count(name) &&
                 std::any_of(sections.begin(), sections.end(), [&](const auto& s) { return s.name == name; })) {
        errors.push_back("line " + std::to_string(lineno) + ": section [" + name + "] appears more than once");
      }
      sections.push_back({name, lineno, {}});
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      errors.push_back("line " + std::to_string(lineno) + ": expected 'key = value', got '" + line + "'");
      continue;
    }
    if (sections.empty()) {
      errors.push_back("line " + std::to_string(lineno) + ": key outside of any section");
      continue;
    }
    const auto key = trim(std::string_view(line).substr(0, eq));
    const auto value = trim(std::string_view(line).substr(eq + 1));
    if (key.empty()) {
      errors.push_back("line " + std::to_string(lineno) + ": empty key");
      continue;
    }
    auto& entries = sections.back().entries;
    if (entries.count(key)) {
      errors.push_back("line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
      continue;
    }
    entries.emplace(key, Entry{value, lineno});
  }

  ExperimentConfig cfg;
  bool have_experiment = false;
  bool have_profile = false;

  for (auto& sec : sections) {
    Reader r(sec, errors);
    if (sec.name == "experiment") {
      have_experiment = true;
      if (auto v = r.integer<std::int64_t>("horizon", true)) {
        cfg.horizon = *v;
        if (*v < 1) r.error(r.line("horizon"), "'horizon' must be >= 1");
      }
      if (auto v = r.integer<std::int64_t>("repetitions", true)) {
        cfg.repetitions = *v;
        if (*v < 1) r.error(r.line("repetitions"), "'repetitions' must be >= 1");
      }
      if (auto v = r.integer<std::uint64_t>("seed")) cfg.seed = *v;
      if (auto v = r.str("output")) cfg.output = *v;
    } else if (sec.name == "profile") {
      have_profile = true;
      auto& p = cfg.profile;
      if (auto v = r.real("sigma2", true)) {
        p.sigma2 = *v;
        if (*v < 0.0) r.error(r.line("sigma2"), "'sigma2' must be >= 0, got " + fmt(*v));
      }
      if (auto v = r.str("mode")) {
        p.mode = *v;
        if (*v != "fixed" && *v != "resampled")
          r.error(r.line("mode"), "'mode' must be 'fixed' or 'resampled', got '" + *v + "'");
      }
      if (auto v = r.integer<std::int64_t>("arms")) {
        p.arms = *v;
        if (*v < 1) r.error(r.line("arms"), "'arms' must be >= 1");
      }
      if (auto v = r.str("family")) {
        p.family = *v;
        const auto& names = known_family_names();
        if (std::find(names.begin(), names.end(), *v) == names.end())
          r.error(r.line("family"), "unknown family '" + *v + "'");
      }
      if (auto v = r.reals("theta")) p.thetas = *v;
      if (auto v = r.real("constant_min")) p.constant_min = *v;
      if (auto v = r.real("constant_max")) p.constant_max = *v;
      if (!p.family.empty() && p.thetas.empty()) r.error(r.section_line(), "'family' requires a nonempty 'theta' list");
      if (p.family.empty() && !p.thetas.empty()) r.error(r.line("theta"), "'theta' requires 'family'");
      if (p.mode == "resampled") {
        if (p.family.empty()) r.error(r.section_line(), "resampled mode requires 'family' and 'theta'");
        if (p.arms < 1) r.error(r.section_line(), "resampled mode requires 'arms'");
        if (p.constant_min < 0.0 || p.constant_max < p.constant_min)
          r.error(r.line("constant_min"), "constant range must satisfy 0 <= constant_min <= constant_max");
      } else if (r.has("constant_min") || r.has("constant_max")) {
        r.error(r.line("constant_min"), "constant_min/constant_max only apply to resampled mode");
      }
    } else if (sec.name == "arm") {
      ArmConfig a;
      if (auto v = r.str("kind", true)) a.kind = *v;
      if (a.kind == "tabulated") {
        if (auto v = r.segments("steps")) a.steps = *v;
        if (auto v = r.real("tail", true)) a.tail = *v;
        double prev = std::numeric_limits<double>::infinity();
        for (const auto& s : a.steps) {
          if (s.count < 1) r.error(r.line("steps"), "step counts must be >= 1");
          if (!(s.value > 0.0)) r.error(r.line("steps"), "means must be positive");
          if (s.value > prev) r.error(r.line("steps"), "means must be non-increasing");
          prev = s.value;
        }
        if (!(a.tail > 0.0)) r.error(r.line("tail"), "'tail' must be positive");
        if (a.tail > prev) r.error(r.line("tail"), "'tail' must not exceed the last step mean");
      } else if (a.kind == "parametric") {
        if (auto v = r.real("theta", true)) a.theta = *v;
        if (auto v = r.real("constant")) a.constant = *v;
        if (a.constant < 0.0) r.error(r.line("constant"), "'constant' must be >= 0");
      } else if (!a.kind.empty()) {
        r.error(r.line("kind"), "'kind' must be 'tabulated' or 'parametric', got '" + a.kind + "'");
      }
      cfg.profile.arm_list.push_back(std::move(a));
    } else if (sec.name == "policy") {
      PolicySpec ps;
      if (auto v = r.str("type", true)) ps.type = *v;
      ps.label = r.str("label").value_or(ps.type);
      const auto it = policy_types().find(ps.type);
      if (it == policy_types().end()) {
        if (!ps.type.empty()) r.error(r.line("type"), "unknown policy type '" + ps.type + "'");
      } else {
        for (const auto& key : it->second.allowed)
          if (auto v = r.real(key)) ps.params[key] = *v;
        for (const auto& key : it->second.required)
          if (!ps.params.count(key)) r.error(r.section_line(), "policy '" + ps.type + "' requires '" + key + "'");
        const auto bad = [&](const std::string& key, const std::string& range) {
          r.error(r.line(key), "'" + key + "' = " + fmt(ps.params.at(key)) + " is outside its valid range " + range);
        };
        const auto integral = [&](const std::string& key, double lo) {
          if (!ps.params.count(key)) return;
          const double v = ps.params.at(key);
          if (v != std::floor(v) || v < lo) bad(key, "(integer >= " + fmt(lo) + ")");
        };
        if (ps.params.count("alpha") && !(ps.params["alpha"] > 0.0)) bad("alpha", "(0, inf)");
        if (ps.params.count("gamma") && !(ps.params["gamma"] > 0.0 && ps.params["gamma"] <= 1.0))
          bad("gamma", "(0, 1]");
        if (ps.params.count("delta") && !(ps.params["delta"] > 0.0 && ps.params["delta"] < 1.0))
          bad("delta", "(0, 1)");
        if (ps.params.count("xi") && !(ps.params["xi"] > 0.0)) bad("xi", "(0, inf)");
        if (ps.params.count("B") && !(ps.params["B"] > 0.0)) bad("B", "(0, inf)");
        integral("tau", 1);
        integral("horizon", 1);
        integral("budget", 2);
        if (ps.params.count("budget") && static_cast<std::int64_t>(ps.params["budget"]) % 2 != 0)
          bad("budget", "(even integer >= 2)");
      }
      cfg.policies.push_back(std::move(ps));
    } else if (sec.name == "grid") {
      GridSpec g;
      if (auto v = r.str("policy", true)) g.policy = *v;
      if (auto v = r.str("parameter", true)) g.parameter = *v;
      if (auto v = r.reals("values", true)) g.values = *v;
      if (r.has("values") && g.values.empty()) r.error(r.line("values"), "'values' must not be empty");
      cfg.grids.push_back(std::move(g));
    }
    r.reject_unknown();
  }

  if (!have_profile) errors.push_back("missing profile section");
  if (!have_experiment) errors.push_back("missing experiment section");

  // Cross-section checks.
  auto& p = cfg.profile;
  if (have_profile) {
    if (p.mode == "fixed") {
      if (p.arm_list.empty()) errors.push_back("fixed mode requires at least one [arm] section");
      if (p.arms != 0 && p.arms != static_cast<std::int64_t>(p.arm_list.size()))
        errors.push_back("profile declares " + std::to_string(p.arms) + " arms but " +
                         std::to_string(p.arm_list.size()) + " [arm] sections are given");
      for (std::size_t i = 0; i < p.arm_list.size(); ++i) {
        const auto& a = p.arm_list[i];
        if (a.kind != "parametric") continue;
        if (p.family.empty())
          errors.push_back("arm " + std::to_string(i + 1) + ": parametric arms require a profile family");
        else if (std::find(p.thetas.begin(), p.thetas.end(), a.theta) == p.thetas.end())
          errors.push_back("arm " + std::to_string(i + 1) + ": theta " + config_detail::fmt(a.theta) +
                           " is not in the profile theta list");
      }
    } else if (!p.arm_list.empty()) {
      errors.push_back("[arm] sections are not allowed in resampled mode");
    }
  }
  std::set<std::string> labels;
  for (const auto& ps : cfg.policies) {
    if (!labels.insert(ps.label).second) errors.push_back("duplicate policy label '" + ps.label + "'");
    if (needs_family(ps.type) && have_profile && p.family.empty())
      errors.push_back("policy '" + ps.label + "' needs a parametric profile with a family");
  }
  for (const auto& g : cfg.grids) {
    const auto it = std::find_if(cfg.policies.begin(), cfg.policies.end(),
                                 [&](const auto& ps) { return ps.label == g.policy; });
    if (it == cfg.policies.end()) {
      errors.push_back("grid refers to unknown policy label '" + g.policy + "'");
      continue;
    }
    const auto t = policy_types().find(it->type);
    if (t != policy_types().end() &&
        std::find(t->second.allowed.begin(), t->second.allowed.end(), g.parameter) == t->second.allowed.end())
      errors.push_back("grid parameter '" + g.parameter + "' is not a parameter of policy type '" + it->type + "'");
  }

  if (!errors.empty()) throw ConfigError(std::move(errors));
  return cfg;
}

/// Canonical text form; parse_config(emit_config(c)) == c for valid configs.
inline std::string emit_config(const ExperimentConfig& cfg) {
  using config_detail::fmt;
  const auto list = [](const std::vector<double>& xs) {
    std::string s;
    for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? ", " : "") + fmt(xs[i]);
    return s;
  };
  std::ostringstream os;
  os << "[experiment]\n";
  os << "horizon = " << cfg.horizon << "\n";
  os << "repetitions = " << cfg.repetitions << "\n";
  os << "seed = " << cfg.seed << "\n";
  if (!cfg.output.empty()) os << "output = " << cfg.output << "\n";
  const auto& p = cfg.profile;
  os << "\n[profile]\n";
  os << "sigma2 = " << fmt(p.sigma2) << "\n";
  os << "mode = " << p.mode << "\n";
  if (p.arms != 0) os << "arms = " << p.arms << "\n";
  if (!p.family.empty()) os << "family = " << p.family << "\n";
  if (!p.thetas.empty()) os << "theta = " << list(p.thetas) << "\n";
  if (p.mode == "resampled") {
    os << "constant_min = " << fmt(p.constant_min) << "\n";
    os << "constant_max = " << fmt(p.constant_max) << "\n";
  }
  for (const auto& a : p.arm_list) {
    os << "\n[arm]\nkind = " << a.kind << "\n";
    if (a.kind == "tabulated") {
      if (!a.steps.empty()) {
        os << "steps = ";
        for (std::size_t i = 0; i < a.steps.size(); ++i)
          os << (i ? ", " : "") << a.steps[i].count << ":" << fmt(a.steps[i].value);
        os << "\n";
      }
      os << "tail = " << fmt(a.tail) << "\n";
    } else {
      os << "theta = " << fmt(a.theta) << "\n";
      os << "constant = " << fmt(a.constant) << "\n";
    }
  }
  for (const auto& ps : cfg.policies) {
    os << "\n[policy]\ntype = " << ps.type << "\nlabel = " << ps.label << "\n";
    for (const auto& [k, v] : ps.params) os << k << " = " << fmt(v) << "\n";
  }
  for (const auto& g : cfg.grids) {
    os << "\n[grid]\npolicy = " << g.policy << "\nparameter = " << g.parameter << "\nvalues = " << list(g.values)
       << "\n";
  }
  return os.str();
}

inline FamilyRef make_family_ref(const ProfileConfig& p) {
  if (p.family.empty()) return nullptr;
  return std::make_shared<const ModelFamily>(make_family(p.family, p.thetas));
}

inline ProfileSource make_profile_source(const ProfileConfig& p) {
  auto family = make_family_ref(p);
  if (p.mode == "resampled")
    return ProfileSource::resampled(family, static_cast<std::size_t>(p.arms), p.sigma2, p.constant_min,
                                    p.constant_max);
  RottingProfile profile;
  profile.noise_variance = p.sigma2;
  for (const auto& a : p.arm_list) {
    if (a.kind == "tabulated")
      profile.arms.emplace_back(TabulatedArm{a.steps, a.tail});
    else
      profile.arms.emplace_back(ParametricArm{a.constant, a.theta, family});
  }
  return ProfileSource::fixed(std::move(profile));
}

/// Policy factory for `spec` on profiles described by `p`. The D-CTO_UCB
/// exploration budget is computed once here unless given explicitly.
inline PolicyEntry make_policy_entry(const PolicySpec& spec, const ProfileConfig& p, std::int64_t horizon) {
  const auto k = static_cast<std::size_t>(p.mode == "resampled" ? p.arms : static_cast<std::int64_t>(p.arm_list.size()));
  const double sigma2 = p.sigma2;
  const auto param = [&](const std::string& key, double fallback) {
    const auto it = spec.params.find(key);
    return it == spec.params.end() ? fallback : it->second;
  };
  const auto family = make_family_ref(p);
  if (needs_family(spec.type) && !family)
    throw std::invalid_argument("policy '" + spec.label + "' needs a parametric profile");
  PolicyFactory make;
  const auto& t = spec.type;
  if (t == "oracle") {
    make = [](const RottingProfile& prof) { return std::make_unique<OraclePolicy>(prof); };
  } else if (t == "swa") {
    const double alpha = param("alpha", 0.2);
    const auto h = static_cast<std::int64_t>(param("horizon", static_cast<double>(horizon)));
    make = [=](const RottingProfile&) { return std::make_unique<SwaPolicy>(SwaPolicy::with_horizon(k, h, alpha, sigma2)); };
  } else if (t == "wswa") {
    const double alpha = param("alpha", 0.2);
    make = [=](const RottingProfile&) { return std::make_unique<WrappedSwaPolicy>(k, alpha, sigma2); };
  } else if (t == "cto_sim") {
    make = [=](const RottingProfile&) { return std::make_unique<CtoSimPolicy>(family, k); };
  } else if (t == "dcto_ucb") {
    std::int64_t budget = 0;
    if (spec.params.count("budget"))
      budget = static_cast<std::int64_t>(spec.params.at("budget"));
    else
      budget = m_diff_upper_bound(*family, param("delta", 0.1), static_cast<std::int64_t>(k), sigma2).budget;
    make = [=](const RottingProfile&) {
      return std::make_unique<DctoUcbPolicy>(DctoUcbPolicy::one_shot(family, k, sigma2, budget));
    };
  } else if (t == "dcto_sim_ucb") {
    make = [=](const RottingProfile&) {
      return std::make_unique<DctoUcbPolicy>(DctoUcbPolicy::simultaneous(family, k, sigma2));
    };
  } else if (t == "ucb1") {
    make = [=](const RottingProfile&) { return std::make_unique<Ucb1Policy>(k, sigma2); };
  } else if (t == "ducb") {
    const double gamma = param("gamma", 1.0), xi = param("xi", 0.5), b = param("B", 1.0);
    make = [=](const RottingProfile&) { return std::make_unique<DiscountedUcbPolicy>(k, gamma, xi, b); };
  } else if (t == "swucb") {
    const auto tau = static_cast<std::int64_t>(param("tau", 1.0));
    const double xi = param("xi", 0.5), b = param("B", 1.0);
    make = [=](const RottingProfile&) { return std::make_unique<SlidingWindowUcbPolicy>(k, tau, xi, b); };
  } else {
    throw std::invalid_argument("unknown policy type '" + t + "'");
  }
  return {spec.label, std::move(make)};
}

inline ExperimentPlan make_plan(const ExperimentConfig& cfg, unsigned threads = 0) {
  ExperimentPlan plan{make_profile_source(cfg.profile), {}, cfg.horizon, cfg.repetitions, cfg.seed, threads};
  for (const auto& ps : cfg.policies) plan.policies.push_back(make_policy_entry(ps, cfg.profile, cfg.horizon));
  return plan;
}

/// One candidate per grid value, labelled "<label>[<parameter>=<value>]".
inline std::vector<PolicyEntry> grid_candidates(const ExperimentConfig& cfg, const GridSpec& grid) {
  const auto it = std::find_if(cfg.policies.begin(), cfg.policies.end(),
                               [&](const auto& ps) { return ps.label == grid.policy; });
  if (it == cfg.policies.end()) throw std::invalid_argument("grid refers to unknown policy '" + grid.policy + "'");
  std::vector<PolicyEntry> out;
  for (double v : grid.values) {
    PolicySpec spec = *it;
    spec.params[grid.parameter] = v;
    spec.label = it->label + "[" + grid.parameter + "=" + config_detail::fmt(v) + "]";
    out.push_back(make_policy_entry(spec, cfg.profile, cfg.horizon));
  }
  return out;
}

}  // namespace rotting

#endif  // ROTTING_CONFIG_HPP
