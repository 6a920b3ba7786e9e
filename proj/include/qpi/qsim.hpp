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

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qpi/pauli.hpp"

namespace qpi {

using Complex = std::complex<double>;

/// Dense simulation is capped at this many qubits.
inline constexpr int kMaxSimQubits = 16;

/// Amplitude vector over n qubits; qubit 0 is the least-significant bit of
/// the basis index.
class StateVector {
 public:
  explicit StateVector(int n_qubits);  // |0...0>
  static StateVector basis(int n_qubits, std::uint64_t index);
  /// Normalizes the given amplitudes; throws on a zero vector.
  static StateVector from_amplitudes(std::vector<Complex> amplitudes);
  static StateVector from_real(std::span<const double> amplitudes);

  int n_qubits() const noexcept { return n_qubits_; }
  std::size_t dim() const noexcept { return amps_.size(); }
  std::span<const Complex> amplitudes() const noexcept { return amps_; }
  std::span<Complex> amplitudes() noexcept { return amps_; }
  Complex operator[](std::size_t k) const { return amps_[k]; }

  double norm() const noexcept;
  Complex inner(const StateVector& other) const;  // <this|other>
  std::vector<double> probabilities() const;

  // In-place primitives used by the circuit engine. Controls must all be |1>.
  void apply_1q(int target, const Eigen::Matrix2cd& u, std::uint64_t control_mask = 0);
  void apply_dense(std::span<const int> targets, const Eigen::MatrixXcd& u,
                   std::uint64_t control_mask = 0);
  /// Multiplies by phase(k) of P and permutes |k> -> |k ^ x>.
  void apply_pauli(const PauliString& p, std::uint64_t control_mask = 0);
  /// exp(-i theta/2 P).
  void apply_pauli_rotation(const PauliString& p, double theta,
                            std::uint64_t control_mask = 0);
  void apply_multiplexed_ry(int target, std::span<const int> controls,
                            std::span<const double> angles);

 private:
  explicit StateVector(std::vector<Complex> amps, int n_qubits);

  int n_qubits_;
  std::vector<Complex> amps_;
};

enum class GateKind {
  H, X, Y, Z, S, Sdg, T, Tdg,
  Rx, Ry, Rz, Phase,
  CZ, CX, SWAP,
  Unitary,         // dense matrix on `targets`, optional controls
  PauliString,     // Pauli string on the full register
  PauliRotation,   // exp(-i angle/2 P)
  MultiplexedRy,   // Ry(angles[c]) on targets[0], c = control bits (controls[0] lowest)
};

struct GateOp {
  GateKind kind = GateKind::H;
  std::vector<int> targets;
  std::vector<int> controls;
  double angle = 0.0;
  std::vector<double> angles;
  Eigen::MatrixXcd matrix;
  qpi::PauliString pauli;

  /// Qubits the gate acts on (targets, controls, and Pauli support).
  std::vector<int> touched() const;
  GateOp inverse() const;
};

class Circuit {
 public:
  explicit Circuit(int n_qubits);

  int n_qubits() const noexcept { return n_qubits_; }
  const std::vector<GateOp>& ops() const noexcept { return ops_; }
  std::size_t size() const noexcept { return ops_.size(); }

  Circuit& add(GateOp op);
  Circuit& append(const Circuit& other);

  Circuit& h(int q) { return single(GateKind::H, q); }
  Circuit& x(int q) { return single(GateKind::X, q); }
  Circuit& y(int q) { return single(GateKind::Y, q); }
  Circuit& z(int q) { return single(GateKind::Z, q); }
  Circuit& s(int q) { return single(GateKind::S, q); }
  Circuit& sdg(int q) { return single(GateKind::Sdg, q); }
  Circuit& t(int q) { return single(GateKind::T, q); }
  Circuit& tdg(int q) { return single(GateKind::Tdg, q); }
  Circuit& rx(int q, double theta) { return single(GateKind::Rx, q, theta); }
  Circuit& ry(int q, double theta) { return single(GateKind::Ry, q, theta); }
  Circuit& rz(int q, double theta) { return single(GateKind::Rz, q, theta); }
  Circuit& phase(int q, double theta) { return single(GateKind::Phase, q, theta); }
  Circuit& cphase(int control, int target, double theta);
  Circuit& cz(int a, int b);
  Circuit& cx(int control, int target);
  Circuit& swap(int a, int b);
  Circuit& unitary(std::vector<int> targets, Eigen::MatrixXcd u,
                   std::vector<int> controls = {});
  Circuit& pauli(const qpi::PauliString& p);
  Circuit& pauli_rotation(const qpi::PauliString& p, double theta,
                          std::vector<int> controls = {});
  Circuit& multiplexed_ry(int target, std::vector<int> controls,
                          std::vector<double> angles);

  Circuit inverse() const;

  /// Line-per-gate text, e.g. `CZ 0 1` or `RY(0.5) 2`.
  void dump(std::ostream& os) const;
  std::string dump() const;

 private:
  Circuit& single(GateKind kind, int q, double angle = 0.0);

  int n_qubits_;
  std::vector<GateOp> ops_;
};

/// Per-gate depolarizing noise: after each gate every touched qubit
/// independently suffers a uniformly random X, Y or Z with probability p1
/// (single-qubit gates) or p2 (multi-qubit gates).
struct NoiseModel {
  double p1 = 0.0;
  double p2 = 0.0;
  std::uint64_t seed = 0;

  void validate() const;
  bool is_noiseless() const noexcept { return p1 == 0.0 && p2 == 0.0; }
};

Eigen::Matrix2cd gate_matrix(GateKind kind, double angle = 0.0);

/// In-place application; with noise, draws error locations from `rng`.
void apply_circuit_inplace(StateVector& psi, const Circuit& c,
                           const NoiseModel* noise = nullptr,
                           std::mt19937_64* rng = nullptr);

/// Runs one trajectory; the noise model's seed drives the error sampling.
StateVector apply_circuit(StateVector psi, const Circuit& c,
                          const std::optional<NoiseModel>& noise = std::nullopt);

/// <psi|P|psi>.
double expectation_pauli(const StateVector& psi, const PauliString& p);

/// Outcome bitstrings list the requested qubits in the given order, first
/// qubit leftmost.
std::map<std::string, int> sample_measurement(const StateVector& psi,
                                              std::span<const int> qubits,
                                              int shots, std::uint64_t seed);

/// |<psi|phi>|^2.
double fidelity(const StateVector& psi, const StateVector& phi);

/// Independent stream for trajectory `index` of a run seeded with `seed`.
std::mt19937_64 trajectory_rng(std::uint64_t seed, std::uint64_t index);

}  // namespace qpi
