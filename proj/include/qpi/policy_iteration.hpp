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

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <variant>
#include <vector>

#include "qpi/hhl.hpp"
#include "qpi/mdp.hpp"
#include "qpi/sparse.hpp"
#include "qpi/vqls.hpp"

namespace qpi {

/// Q-values on state-action pairs, state-major.
using QVector = std::vector<double>;

struct ExactEvaluator {};

struct HhlEvaluator {
  HhlConfig config;
};

struct VqlsEvaluator {
  int n_layers = 2;
  VqlsConfig config;
  /// Number of LCU terms kept; all of them when unset.
  std::optional<std::size_t> n_terms;
};

using EvaluatorKind = std::variant<ExactEvaluator, HhlEvaluator, VqlsEvaluator>;

/// Solves B q = r by partial-pivot LU. Throws SingularMatrixError on a pivot
/// below 1e-13.
QVector policy_evaluation_exact(const SparseMatrix& b, const QVector& r);

/// Evaluates with the chosen backend; quantum backends go through the
/// Hermitian embedding.
QVector policy_evaluation(const SparseMatrix& b, const QVector& r,
                          const EvaluatorKind& evaluator);

/// Greedy policy; ties go to the smallest order.
Policy policy_improvement(const QVector& q, const MdpInstance& mdp);

struct PiRecord {
  int k;
  Policy policy;  // the policy evaluated at iteration k
  QVector q;
  double residual;  // ||B q - r||_inf
  int changed_states;  // states whose action the improvement step changed
};

struct PiTrace {
  std::vector<PiRecord> records;

  /// One JSON object per line: k, policy, residual, changed_states.
  void write_jsonl(std::ostream& os) const;
};

struct PiResult {
  Policy policy;
  PiTrace trace;
  bool converged = false;
};

/// Starts from order-0 everywhere and stops early once the improved policy
/// repeats. Evaluator failures surface as EvaluatorError with the iteration.
PiResult policy_iteration(const MdpInstance& mdp, double gamma, int max_iters = 20,
                          const EvaluatorKind& evaluator = ExactEvaluator{});

struct ValueIterationResult {
  QVector q;
  Policy policy;
  long sweeps = 0;
};

/// Bellman-optimality sweeps on Q until the sup-norm change drops below
/// tol (1 - gamma) / (2 gamma).
ValueIterationResult value_iteration_oracle(const MdpInstance& mdp, double gamma,
                                            double tol = 1e-10);

/// State values V(i) = q(i, pi(i)).
std::vector<double> state_values(const QVector& q, const MdpInstance& mdp, const Policy& pi);

double residual_inf(const SparseMatrix& b, const QVector& q, const QVector& r);

}  // namespace qpi
