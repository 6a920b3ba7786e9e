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

#include "qpi/gate_count.hpp"

#include <algorithm>

#include "qpi/errors.hpp"

namespace qpi {

std::map<std::string, long long> GateCounts::to_map() const {
  return {{"cx", cx}, {"single_qubit", single_qubit}, {"total", total()}};
}

GateCounts controlled_single_qubit_cost(int n_controls) {
  if (n_controls < 0) throw InvalidArgument("negative control count");
  if (n_controls == 0) return {1, 0};
  if (n_controls == 1) return {4, 2};
  // C^k U = C(V) C^{k-1}X C(V^dag) C^{k-1}X C^{k-1}(V), V^2 = U.
  const GateCounts c1 = controlled_single_qubit_cost(1);
  const GateCounts cx_k = n_controls - 1 == 1 ? GateCounts{0, 1}
                                              : controlled_single_qubit_cost(n_controls - 1);
  return 2 * c1 + 2 * cx_k + controlled_single_qubit_cost(n_controls - 1);
}

GateCounts multiplexed_rotation_cost(int n_controls) {
  if (n_controls == 0) return {1, 0};
  const long long k = 1LL << n_controls;
  return {k, k};
}

GateCounts shannon_cost(int n_qubits) {
  if (n_qubits < 1) throw InvalidArgument("Shannon decomposition needs >= 1 qubit");
  if (n_qubits == 1) return {1, 0};
  return 4 * shannon_cost(n_qubits - 1) + 3 * multiplexed_rotation_cost(n_qubits - 1);
}

GateCounts count_gates(const GateOp& op) {
  const int k = static_cast<int>(op.controls.size());
  switch (op.kind) {
    case GateKind::CX:
      return k == 1 ? GateCounts{0, 1} : controlled_single_qubit_cost(k);
    case GateKind::CZ:
      return k == 0 ? GateCounts{2, 1} : controlled_single_qubit_cost(k + 1);
    case GateKind::SWAP:
      return k == 0 ? GateCounts{0, 3} : GateCounts{0, 2} + controlled_single_qubit_cost(k + 1);
    case GateKind::Unitary:
      return shannon_cost(static_cast<int>(op.targets.size()) + k);
    case GateKind::PauliString: {
      const int w = op.pauli.weight();
      return static_cast<long long>(w) * controlled_single_qubit_cost(k);
    }
    case GateKind::PauliRotation: {
      const int w = op.pauli.weight();
      if (w == 0) {
        // Global phase; under control it becomes a phase gate on a control.
        return k == 0 ? GateCounts{} : controlled_single_qubit_cost(k - 1);
      }
      int basis = 0;
      for (int q = 0; q < op.pauli.n_qubits(); ++q) {
        if (op.pauli[q] == Pauli::X) basis += 2;        // H ... H
        else if (op.pauli[q] == Pauli::Y) basis += 2;   // Rx(pi/2) ... Rx(-pi/2)
      }
      return GateCounts{basis, 2LL * (w - 1)} + controlled_single_qubit_cost(k);
    }
    case GateKind::MultiplexedRy:
      return multiplexed_rotation_cost(k);
    default:
      return controlled_single_qubit_cost(k);
  }
}

GateCounts count_gates(const Circuit& c) {
  GateCounts total;
  for (const auto& op : c.ops()) total += count_gates(op);
  return total;
}

}  // namespace qpi
