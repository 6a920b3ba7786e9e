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
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qpi/gate_count.hpp"
#include "qpi/pauli.hpp"
#include "qpi/qsim.hpp"
#include "qpi/sparse.hpp"

namespace qpi {

struct HhlConfig {
  int n_clock = 6;
  /// Defaults to 2 pi (2^(n-1) - 1) / (2^n lambda_max): the largest
  /// eigenvalue lands on the top positive two's-complement clock value.
  std::optional<double> evolution_time;
  /// Defaults to min |lambda| of the system (the lambda_min of the rotation).
  std::optional<double> rotation_constant;
  /// If positive, the ancilla is also sampled this many times.
  int shots = 0;
  /// When false, starvation of the post-selected branch is not an error.
  bool post_select = true;
  std::uint64_t seed = 0;

  void validate() const;
};

struct HhlReport {
  double success_probability = 0.0;
  std::optional<double> sampled_success_probability;
  double solution_fidelity = 0.0;
  double residual = 0.0;
  GateCounts gate_counts;
  int n_qubits_total = 0;
  int n_clock = 0;
  double evolution_time = 0.0;
  double rotation_constant = 0.0;
  bool aliasing_warning = false;

  /// `fidelity`, `success_prob`, `residual`, `counts` plus run metadata.
  std::string to_json() const;
};

struct HhlResult {
  std::vector<double> solution;  // q, with the norm restored classically
  Eigen::VectorXd embedded_solution;
  HhlReport report;
};

/// Minimum post-selection probability before a solve counts as starved.
inline constexpr double kMinSuccessProbability = 1e-6;

/// |r> = r / ||r|| written directly into the amplitudes.
StateVector prepare_rhs_state(std::span<const double> r);

/// Ry-multiplexor cascade taking |0...0> to r / ||r|| (real amplitudes).
Circuit state_preparation_circuit(std::span<const double> r);

/// exp(i H t) by exact eigendecomposition.
Eigen::MatrixXcd evolution_unitary(const Eigen::MatrixXcd& h, double t);

/// QFT on `qubits` (qubits[0] least significant):
/// |m> -> 2^{-n/2} sum_y exp(2 pi i m y / 2^n) |y>.
Circuit qft_circuit(int n_register, std::span<const int> qubits);

double default_evolution_time(double lambda_max, int n_clock);

/// Two's-complement clock readout -> eigenvalue estimate.
double clock_eigenvalue(std::uint64_t clock_value, int n_clock, double t);

/// Qubit layout: data [0, N), clock [N, N + n_clock), ancilla N + n_clock.
struct HhlLayout {
  int n_data;
  int n_clock;
  int total() const noexcept { return n_data + n_clock + 1; }
  int clock(int k) const noexcept { return n_data + k; }
  int ancilla() const noexcept { return n_data + n_clock; }
  std::vector<int> clock_qubits() const;
};

/// Eigenvalue-inversion rotation angles per clock value: amplitude C / lambda.
std::vector<double> inversion_angles(int n_clock, double t, double c);

/// Phase estimation with dense controlled powers of exp(iHt), the inversion
/// rotation, and the uncompute.
Circuit hhl_core_circuit(const Eigen::MatrixXcd& h, int n_clock, double t, double c);

/// Same structure with each controlled power written as one first-order
/// product of controlled Pauli rotations over the LCU terms.
Circuit hhl_lcu_circuit(const LcuDecomposition& lcu, std::span<const double> rhs,
                        int n_clock, double t, double c);

HhlResult hhl_solve(const EmbeddedSystem& sys, const HhlConfig& cfg = {});

/// True when the N-qubit register can hold L independent LCU terms: L <= 4^N,
/// and a single qubit carries only the one-term embedding b X.
bool gate_count_allowed(int n_qubits, std::size_t n_terms);

/// Gate count of the LCU-form HHL circuit on the leading 2^(N-1) block of
/// `b` (embedded to N qubits), truncated to L terms. Throws DisallowedError
/// for cells the register cannot hold.
HhlReport gate_count_report(int n_qubits, std::size_t n_terms, const SparseMatrix& b,
                            std::span<const double> r, const HhlConfig& cfg = {});

struct GateGridCell {
  int n_qubits;
  std::size_t n_terms;
  std::optional<long long> gates;  // nullopt = disallowed
};

std::vector<GateGridCell> gate_count_grid(int n_max, std::span<const std::size_t> l_list,
                                          const SparseMatrix& b, std::span<const double> r,
                                          const HhlConfig& cfg = {});

/// CSV `N,L,gates`; disallowed cells carry the literal `disallowed`.
void write_gate_grid_csv(std::ostream& os, std::span<const GateGridCell> grid);

}  // namespace qpi
