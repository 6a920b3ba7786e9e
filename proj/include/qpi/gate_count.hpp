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

#include <map>
#include <string>

#include "qpi/qsim.hpp"

namespace qpi {

/// Fundamental-gate tally over {arbitrary single-qubit rotation, CX}.
struct GateCounts {
  long long single_qubit = 0;
  long long cx = 0;

  long long total() const noexcept { return single_qubit + cx; }
  GateCounts& operator+=(const GateCounts& o) {
    single_qubit += o.single_qubit;
    cx += o.cx;
    return *this;
  }
  friend GateCounts operator+(GateCounts a, const GateCounts& b) { return a += b; }
  friend GateCounts operator*(long long k, GateCounts a) {
    a.single_qubit *= k;
    a.cx *= k;
    return a;
  }
  std::map<std::string, long long> to_map() const;
};

// Decomposition rules for composite gates. A k-controlled single-qubit gate
// uses the two-CX ABC construction for k = 1 and the Barenco et al.
// recursion above that; dense m-qubit unitaries use the quantum Shannon
// decomposition recursion; an r-control multiplexed rotation costs 2^r
// rotations and 2^r CX.
GateCounts controlled_single_qubit_cost(int n_controls);
GateCounts shannon_cost(int n_qubits);
GateCounts multiplexed_rotation_cost(int n_controls);

GateCounts count_gates(const GateOp& op);
GateCounts count_gates(const Circuit& c);

}  // namespace qpi
