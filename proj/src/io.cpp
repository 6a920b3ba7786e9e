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

#include "qpi/io.hpp"

#include <fstream>
#include <iomanip>
#include <ostream>

#include <nlohmann/json.hpp>

#include "qpi/errors.hpp"

namespace qpi {

std::string policy_json(const Policy& pi, const MdpInstance& mdp, double gamma,
                        const PiResult& result) {
  nlohmann::json j;
  j["converged"] = result.converged;
  j["gamma"] = gamma;
  j["iterations"] = result.trace.records.size();
  j["n_actions"] = mdp.n_actions();
  j["n_states"] = mdp.n_states();
  j["policy"] = pi.action_of;
  return j.dump(2) + "\n";
}

void print_policy_table(std::ostream& os, const Policy& pi) {
  os << "state  order\n";
  for (std::size_t i = 0; i < pi.size(); ++i) {
    os << std::setw(5) << i << "  " << std::setw(5) << pi.action_of[i] << '\n';
  }
}

void print_convergence_table(std::ostream& os, const PiTrace& trace) {
  os << "   k  changed      residual  policy\n";
  for (const auto& r : trace.records) {
    os << std::setw(4) << r.k << "  " << std::setw(7) << r.changed_states << "  "
       << std::setw(12) << std::scientific << std::setprecision(3) << r.residual
       << std::defaultfloat << "  ";
    for (std::size_t i = 0; i < r.policy.size(); ++i) {
      os << (i ? " " : "") << r.policy.action_of[i];
    }
    os << '\n';
  }
}

void write_file(const std::filesystem::path& path,
                const std::function<void(std::ostream&)>& body) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  body(out);
  if (!out) throw Error("failed writing " + path.string());
}

}  // namespace qpi
