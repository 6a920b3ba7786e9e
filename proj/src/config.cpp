// Copyright 2026 The qpi Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qpi/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "qpi/errors.hpp"

namespace qpi {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::string where(int line) { return "line " + std::to_string(line); }

bool bare_key(std::string_view k) {
  return !k.empty() && std::all_of(k.begin(), k.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.';
  });
}

// Drops a trailing comment, leaving `#` inside quoted strings alone.
std::string strip_comment(std::string_view line) {
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"' && (i == 0 || line[i - 1] != '\\')) quoted = !quoted;
    if (line[i] == '#' && !quoted) return std::string(line.substr(0, i));
  }
  return std::string(line);
}

std::optional<double> parse_number(std::string text) {
  text.erase(std::remove(text.begin(), text.end(), '_'), text.end());
  if (text.empty()) return std::nullopt;
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    return std::nullopt;
  }
  if (used != text.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

ConfigValue parse_toml_value(const std::string& text, const std::string& key, int line) {
  auto fail = [&](const std::string& why) -> ConfigError {
    return ConfigError(key, where(line) + ": key '" + key + "': " + why);
  };
  if (text.empty()) throw fail("missing value");
  if (text == "true") return true;
  if (text == "false") return false;
  if (text.front() == '"') {
    if (text.size() < 2 || text.back() != '"') throw fail("unterminated string");
    std::string out;
    for (std::size_t i = 1; i + 1 < text.size(); ++i) {
      char c = text[i];
      if (c == '\\' && i + 2 < text.size()) {
        const char n = text[++i];
        c = n == 'n' ? '\n' : n == 't' ? '\t' : n;
      }
      out.push_back(c);
    }
    return out;
  }
  if (text.front() == '[') {
    if (text.back() != ']') throw fail("unterminated array");
    std::vector<double> out;
    std::stringstream items(text.substr(1, text.size() - 2));
    std::string item;
    std::vector<std::string> parts;
    while (std::getline(items, item, ',')) parts.push_back(trim(item));
    if (!parts.empty() && parts.back().empty()) parts.pop_back();  // trailing comma
    for (const auto& p : parts) {
      const auto v = parse_number(p);
      if (!v) throw fail("array element '" + p + "' is not a number");
      out.push_back(*v);
    }
    return out;
  }
  const auto v = parse_number(text);
  if (!v) throw fail("cannot parse '" + text + "'");
  return *v;
}

void flatten_json(const nlohmann::json& j, const std::string& prefix, ConfigTable& out) {
  for (const auto& [name, value] : j.items()) {
    const std::string key = prefix.empty() ? name : prefix + "." + name;
    if (value.is_object()) {
      flatten_json(value, key, out);
    } else if (value.is_boolean()) {
      out.values[key] = value.get<bool>();
    } else if (value.is_number()) {
      out.values[key] = value.get<double>();
    } else if (value.is_string()) {
      out.values[key] = value.get<std::string>();
    } else if (value.is_array()) {
      std::vector<double> arr;
      for (const auto& e : value) {
        if (!e.is_number()) throw ConfigError(key, "key '" + key + "': array must hold numbers");
        arr.push_back(e.get<double>());
      }
      out.values[key] = std::move(arr);
    } else {
      throw ConfigError(key, "key '" + key + "': unsupported value type");
    }
  }
}

std::string located(const ConfigTable& t, const std::string& key) {
  const auto it = t.lines.find(key);
  return (it != t.lines.end() ? where(it->second) + ": " : std::string{}) + "key '" + key + "'";
}

template <class T>
const T& typed(const ConfigTable& t, const std::string& key, const char* what) {
  const auto it = t.values.find(key);
  if (it == t.values.end()) throw ConfigError(key, "missing required key '" + key + "'");
  const T* v = std::get_if<T>(&it->second);
  if (v == nullptr) throw ConfigError(key, located(t, key) + ": expected " + what);
  return *v;
}

}  // namespace

double ConfigTable::number(const std::string& key) const {
  return typed<double>(*this, key, "a number");
}

long long ConfigTable::integer(const std::string& key) const {
  const double v = number(key);
  if (v != std::floor(v) || std::abs(v) > 9.0e15) {
    throw ConfigError(key, located(*this, key) + ": expected an integer");
  }
  return static_cast<long long>(v);
}

std::vector<double> ConfigTable::array(const std::string& key) const {
  return typed<std::vector<double>>(*this, key, "an array of numbers");
}

std::string ConfigTable::string(const std::string& key) const {
  return typed<std::string>(*this, key, "a string");
}

ConfigTable parse_toml(std::string_view text) {
  ConfigTable out;
  std::string prefix;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string s = trim(strip_comment(raw));
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']') throw ConfigError(where(line), where(line) + ": malformed table header");
      const std::string name = trim(std::string_view(s).substr(1, s.size() - 2));
      if (!bare_key(name)) throw ConfigError(where(line), where(line) + ": bad table name");
      prefix = name + ".";
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(where(line), where(line) + ": expected 'key = value'");
    }
    const std::string name = trim(std::string_view(s).substr(0, eq));
    if (!bare_key(name)) {
      throw ConfigError(name.empty() ? where(line) : name,
                        where(line) + ": invalid key '" + name + "'");
    }
    const std::string key = prefix + name;
    std::string value = trim(std::string_view(s).substr(eq + 1));
    const int start = line;
    auto depth = [](const std::string& v) {
      return std::count(v.begin(), v.end(), '[') - std::count(v.begin(), v.end(), ']');
    };
    while (!value.empty() && value.front() == '[' && depth(value) > 0 && std::getline(in, raw)) {
      ++line;
      value += ' ' + trim(strip_comment(raw));
    }
    if (out.values.count(key) != 0) {
      throw ConfigError(key, where(start) + ": duplicate key '" + key + "'");
    }
    out.values[key] = parse_toml_value(value, key, start);
    out.lines[key] = start;
  }
  return out;
}

ConfigTable parse_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("json", std::string("malformed JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("json", "top-level JSON value must be an object");
  ConfigTable out;
  flatten_json(j, "", out);
  return out;
}

ConfigTable load_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string(), "cannot open config file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  const auto ext = path.extension().string();
  if (ext == ".json") return parse_json(text);
  if (ext == ".toml") return parse_toml(text);
  const auto first = text.find_first_not_of(" \t\r\n");
  return first != std::string::npos && text[first] == '{' ? parse_json(text) : parse_toml(text);
}

InstanceConfig instance_from_table(const ConfigTable& t) {
  static const std::set<std::string> known = {
      "name", "holding_cost", "lost_sales_cost", "unit_order_cost", "gamma",
      "max_inventory", "max_order", "demand_pmf", "seed",
      "solver.evaluator", "solver.max_iters", "hhl.n_clock", "vqls.layers", "vqls.terms",
      "vqls.learning_rate", "vqls.max_iters", "vqls.trajectories", "vqls.noise"};
  for (const auto& [key, value] : t.values) {
    if (known.count(key) == 0) throw ConfigError(key, located(t, key) + ": unknown key");
  }
  auto int_in = [&](const std::string& key, long long lo, long long hi) {
    const long long v = t.integer(key);
    if (v < lo || v > hi) {
      throw ConfigError(key, located(t, key) + ": value " + std::to_string(v) + " out of range");
    }
    return v;
  };

  InstanceConfig cfg;
  cfg.params.holding_cost = t.number("holding_cost");
  cfg.params.lost_sales_cost = t.number("lost_sales_cost");
  if (t.contains("unit_order_cost")) cfg.params.unit_order_cost = t.number("unit_order_cost");
  if (t.contains("gamma")) cfg.params.gamma = t.number("gamma");
  cfg.params.max_inventory = static_cast<int>(int_in("max_inventory", 1, 1 << 20));
  cfg.params.max_order = static_cast<int>(int_in("max_order", 1, 1 << 20));
  try {
    cfg.params.validate();
  } catch (const InvalidArgument& e) {
    throw ConfigError("instance", e.what());
  }
  try {
    cfg.demand = DemandDistribution(t.array("demand_pmf"));
  } catch (const InvalidArgument& e) {
    throw ConfigError("demand_pmf", located(t, "demand_pmf") + ": " + e.what());
  }
  if (t.contains("seed")) cfg.seed = static_cast<std::uint64_t>(int_in("seed", 0, 1LL << 53));

  auto& s = cfg.solver;
  if (t.contains("solver.evaluator")) {
    s.evaluator = t.string("solver.evaluator");
    if (*s.evaluator != "exact" && *s.evaluator != "hhl" && *s.evaluator != "vqls") {
      throw ConfigError("solver.evaluator",
                        located(t, "solver.evaluator") + ": expected exact, hhl or vqls");
    }
  }
  if (t.contains("solver.max_iters")) s.max_iters = static_cast<int>(int_in("solver.max_iters", 1, 1 << 20));
  if (t.contains("hhl.n_clock")) s.hhl_n_clock = static_cast<int>(int_in("hhl.n_clock", 1, 14));
  if (t.contains("vqls.layers")) s.vqls_layers = static_cast<int>(int_in("vqls.layers", 0, 64));
  if (t.contains("vqls.terms")) s.vqls_terms = static_cast<std::size_t>(int_in("vqls.terms", 1, 1LL << 32));
  if (t.contains("vqls.learning_rate")) s.vqls_learning_rate = t.number("vqls.learning_rate");
  if (t.contains("vqls.max_iters")) s.vqls_max_iters = static_cast<int>(int_in("vqls.max_iters", 1, 1 << 24));
  if (t.contains("vqls.trajectories")) s.vqls_trajectories = static_cast<int>(int_in("vqls.trajectories", 1, 1 << 20));
  if (t.contains("vqls.noise")) s.vqls_noise = t.number("vqls.noise");
  return cfg;
}

InstanceConfig load_instance(const std::filesystem::path& path) {
  return instance_from_table(load_config_file(path));
}

}  // namespace qpi
