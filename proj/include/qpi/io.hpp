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

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>

#include "qpi/mdp.hpp"
#include "qpi/policy_iteration.hpp"

namespace qpi {

/// {"converged", "gamma", "iterations", "n_actions", "n_states", "policy"},
/// keys sorted.
std::string policy_json(const Policy& pi, const MdpInstance& mdp, double gamma,
                        const PiResult& result);

/// Two-column `state  order` table.
void print_policy_table(std::ostream& os, const Policy& pi);

/// `k  changed  residual  policy` per iteration.
void print_convergence_table(std::ostream& os, const PiTrace& trace);

/// Writes through a temporary stream; throws Error if the file cannot be
/// opened. Parent directories are created.
void write_file(const std::filesystem::path& path,
                const std::function<void(std::ostream&)>& body);

}  // namespace qpi
