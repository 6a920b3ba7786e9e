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
#include <optional>
#include <span>
#include <vector>

#include "qpi/pauli.hpp"
#include "qpi/qsim.hpp"

namespace qpi {

/// Hardware-efficient ansatz: an Ry layer, then `n_layers` repetitions of
/// (linear-chain CZ, Ry layer). Parameter k of layer l sits at l*n + k.
struct AnsatzConfig {
  int n_qubits = 1;
  int n_layers = 0;

  std::size_t parameter_count() const noexcept {
    return static_cast<std::size_t>(n_qubits) * static_cast<std::size_t>(n_layers + 1);
  }
  void validate() const;
};

Circuit ansatz_circuit(const AnsatzConfig& cfg, std::span<const double> theta);
StateVector ansatz_state(const AnsatzConfig& cfg, std::span<const double> theta);

enum class GradientMethod { ParameterShift, FiniteDifference };

struct VqlsConfig {
  double learning_rate = 0.1;
  int max_iters = 500;
  GradientMethod gradient = GradientMethod::ParameterShift;
  double fd_step = 1e-4;
  /// Descent stops once the cost reaches this value.
  double target_cost = 1e-8;
  std::uint64_t seed = 0;
  std::optional<NoiseModel> noise;
  /// Trajectories averaged per expectation when `noise` is set.
  int trajectories = 20;
  /// Overrides the seeded uniform [-pi, pi) start.
  std::optional<std::vector<double>> initial_params;
  /// Consecutive cost increases tolerated before DivergenceError.
  int divergence_patience = 50;

  void validate() const;
};

struct TrainRecord {
  int iter;
  double cost;
  double grad_norm;
};

struct TrainTrace {
  std::vector<TrainRecord> records;
  double wall_seconds = 0.0;
  std::vector<double> final_params;

  /// `iter,cost,grad_norm`.
  void write_csv(std::ostream& os) const;
};

/// Linear system B x ∝ r with B given by its (possibly truncated) LCU.
class VqlsProblem {
 public:
  VqlsProblem(LcuDecomposition lcu, std::span<const double> rhs);

  int n_qubits() const noexcept { return lcu_.n_qubits; }
  const LcuDecomposition& lcu() const noexcept { return lcu_; }
  const StateVector& rhs_state() const noexcept { return rhs_; }
  double rhs_norm() const noexcept { return rhs_norm_; }

  /// Numerator |<r|B|x>|^2 and denominator <x|B^dag B|x>, each expanded over
  /// the Pauli terms of B.
  struct Terms {
    double overlap_sq;
    double norm_sq;
  };
  Terms terms(const StateVector& x) const;
  /// B|x> = sum_i a_i P_i |x>.
  std::vector<Complex> apply(const StateVector& x) const;

 private:
  static StateVector prepare_state(std::span<const double> rhs);

  LcuDecomposition lcu_;
  StateVector rhs_;
  double rhs_norm_;
};

/// Global cost 1 - |<r|B|x>|^2 / <x|B^dag B|x>. Throws InvalidArgument when
/// B|x> vanishes.
double vqls_cost(std::span<const double> theta, const VqlsProblem& problem,
                 const AnsatzConfig& ansatz);

/// Cost with expectations averaged over noisy trajectories; trajectory k
/// draws from trajectory_rng(stream, k).
double vqls_cost_noisy(std::span<const double> theta, const VqlsProblem& problem,
                       const AnsatzConfig& ansatz, const NoiseModel& noise,
                       int trajectories, std::uint64_t stream);

std::vector<double> vqls_gradient(std::span<const double> theta, const VqlsProblem& problem,
                                  const AnsatzConfig& ansatz, const VqlsConfig& cfg,
                                  std::uint64_t stream = 0);

struct VqlsResult {
  /// Rescaled so that s B x best matches r in least squares.
  std::vector<double> solution;
  TrainTrace trace;
  double final_cost = 0.0;
};

VqlsResult vqls_solve(const VqlsProblem& problem, const AnsatzConfig& ansatz,
                      const VqlsConfig& cfg);

std::vector<double> random_parameters(std::size_t count, std::uint64_t seed);

}  // namespace qpi
