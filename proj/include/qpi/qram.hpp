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

#include <iosfwd>
#include <numbers>
#include <span>
#include <string_view>
#include <vector>

namespace qpi {

/// Base of the "log N" query depth. Base 2 counts address qubits.
enum class LogBase { Two, Natural };

double query_log(double n, LogBase base = LogBase::Two);

struct QramHardwareParams {
  double g_d = 2.0 * std::numbers::pi * 1e3;  // rad/s
  double nu = 2.0 * std::numbers::pi * 1e7;   // rad/s
  double c_d = 4.5;
  double kappa_plus_gamma = 0.0;              // rad/s

  void validate() const;
};

/// 1 - F = eps log^2 N / 4.
double infidelity(double epsilon, double n, LogBase base = LogBase::Two);
/// Per-operation error rate that meets 1 - F at size N.
double epsilon_bound(double one_minus_f, double n, LogBase base = LogBase::Two);
/// eps = (kappa + gamma) c_d pi / (2 g_d) + (g_d / nu)^2.
double epsilon_from_hardware(const QramHardwareParams& hw);
/// (g_d / nu)^2, the error left with perfect coherence.
double coupling_floor(const QramHardwareParams& hw);
/// Largest kappa + gamma meeting eps_target; hw.kappa_plus_gamma is ignored.
/// Throws InfeasibleError when the coupling floor already exceeds the target.
double decoherence_budget(double epsilon_target, const QramHardwareParams& hw);

struct FeasibilityCell {
  double n;
  double one_minus_f;
  double epsilon;
  double kappa_plus_gamma;  // budget; 0 when infeasible
  bool feasible;            // the budget covers hw.kappa_plus_gamma
  bool highlighted;         // the N ~ 1e3, 1 - F ~ 1e-3 regime
};

/// Rate in rad/s from `5.2`, `1kHz*2pi`, `2pi*10MHz` or `3e3Hz`. A bare
/// number is taken as rad/s; a unit suffix without 2pi is cycles/s.
double parse_angular_rate(std::string_view text);

/// `count` log-spaced points from lo to hi inclusive.
std::vector<double> log_space(double lo, double hi, int count);

/// Every (N, 1 - F) pair; N = 1e3 and 1 - F = 1e-3 are added if absent so
/// the highlighted regime always appears.
std::vector<FeasibilityCell> feasibility_grid(std::span<const double> n_values,
                                              std::span<const double> one_minus_f_values,
                                              const QramHardwareParams& hw,
                                              LogBase base = LogBase::Two);

/// `N,one_minus_F,epsilon,kappa_plus_gamma,feasible,highlight`.
void write_feasibility_csv(std::ostream& os, std::span<const FeasibilityCell> grid);

}  // namespace qpi
