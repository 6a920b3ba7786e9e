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

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "qpi/mdp.hpp"

namespace qpi {

/// Integers are held as doubles and checked for integrality on access.
using ConfigValue = std::variant<bool, double, std::string, std::vector<double>>;

/// Flat key -> value map. Nested JSON objects and TOML tables flatten to
/// dotted keys (`vqls.layers`).
struct ConfigTable {
  std::map<std::string, ConfigValue> values;
  std::map<std::string, int> lines;  // source line per key (TOML only)

  bool contains(const std::string& key) const { return values.count(key) != 0; }
  double number(const std::string& key) const;
  long long integer(const std::string& key) const;
  std::vector<double> array(const std::string& key) const;
  std::string string(const std::string& key) const;
};

/// The subset of TOML used by instance files: `key = value` pairs with
/// numbers, booleans, basic strings and (possibly multi-line) numeric arrays,
/// `[table]` headers, and `#` comments. Errors name the key or line.
ConfigTable parse_toml(std::string_view text);
ConfigTable parse_json(std::string_view text);
/// Dispatches on the extension (.json / .toml); otherwise sniffs for `{`.
ConfigTable load_config_file(const std::filesystem::path& path);

/// Optional solver settings that may ride along in an instance file.
struct SolverOptions {
  std::optional<std::string> evaluator;
  std::optional<int> max_iters;
  std::optional<int> hhl_n_clock;
  std::optional<int> vqls_layers;
  std::optional<std::size_t> vqls_terms;
  std::optional<double> vqls_learning_rate;
  std::optional<int> vqls_max_iters;
  std::optional<int> vqls_trajectories;
  std::optional<double> vqls_noise;
};

struct InstanceConfig {
  InventoryParams params;
  DemandDistribution demand{std::vector<double>{1.0}};
  std::optional<std::uint64_t> seed;
  SolverOptions solver;
};

/// Validates keys and values; unknown keys are rejected.
InstanceConfig instance_from_table(const ConfigTable& table);
InstanceConfig load_instance(const std::filesystem::path& path);

}  // namespace qpi
