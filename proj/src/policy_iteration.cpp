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

#include "qpi/policy_iteration.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <type_traits>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "qpi/errors.hpp"
#include "qpi/pauli.hpp"

namespace qpi {

namespace {

constexpr double kPivotFloor = 1e-13;
// Q-values closer than this (relative) count as tied.
constexpr double kTieTolerance = 1e-9;

QVector solve_hhl(const SparseMatrix& b, const QVector& r, const HhlEvaluator& e) {
  const auto sys = hermitian_embed(b, r);
  return hhl_solve(sys, e.config).solution;
}

QVector solve_vqls(const SparseMatrix& b, const QVector& r, const VqlsEvaluator& e) {
  const auto sys = hermitian_embed(b, r);
  auto lcu = lcu_decompose(sys);
  if (e.n_terms) lcu = lcu_truncate(lcu, *e.n_terms);
  const std::vector<double> rhs(sys.rhs.data(), sys.rhs.data() + sys.rhs.size());
  const VqlsProblem problem(std::move(lcu), rhs);
  const AnsatzConfig ansatz{sys.n_qubits, e.n_layers};
  const auto result = vqls_solve(problem, ansatz, e.config);
  return sys.extract_solution(
      Eigen::Map<const Eigen::VectorXd>(result.solution.data(),
                                        static_cast<Eigen::Index>(result.solution.size())));
}

}  // namespace

double residual_inf(const SparseMatrix& b, const QVector& q, const QVector& r) {
  const auto bq = b.multiply(q);
  double worst = 0.0;
  for (std::size_t i = 0; i < bq.size(); ++i) worst = std::max(worst, std::abs(bq[i] - r[i]));
  return worst;
}

QVector policy_evaluation_exact(const SparseMatrix& b, const QVector& r) {
  if (b.rows() != b.cols()) throw InvalidArgument("system matrix must be square");
  if (r.size() != b.rows()) throw InvalidArgument("rhs length does not match the system");
  const Eigen::MatrixXd dense = b.to_dense();
  const Eigen::PartialPivLU<Eigen::MatrixXd> lu(dense);
  const Eigen::VectorXd pivots = lu.matrixLU().diagonal();
  if (pivots.size() > 0 && pivots.cwiseAbs().minCoeff() < kPivotFloor) {
    throw SingularMatrixError("LU pivot below 1e-13; the system is singular");
  }
  const Eigen::VectorXd x =
      lu.solve(Eigen::Map<const Eigen::VectorXd>(r.data(), static_cast<Eigen::Index>(r.size())));
  return QVector(x.data(), x.data() + x.size());
}

QVector policy_evaluation(const SparseMatrix& b, const QVector& r,
                          const EvaluatorKind& evaluator) {
  return std::visit(
      [&](const auto& e) -> QVector {
        using T = std::decay_t<decltype(e)>;
        if constexpr (std::is_same_v<T, ExactEvaluator>) {
          return policy_evaluation_exact(b, r);
        } else if constexpr (std::is_same_v<T, HhlEvaluator>) {
          return solve_hhl(b, r, e);
        } else {
          return solve_vqls(b, r, e);
        }
      },
      evaluator);
}

Policy policy_improvement(const QVector& q, const MdpInstance& mdp) {
  if (q.size() != mdp.n_pairs()) throw InvalidArgument("Q length does not match the MDP");
  Policy pi = Policy::constant(mdp.n_states(), 0);
  for (int i = 0; i < mdp.n_states(); ++i) {
    double best = -std::numeric_limits<double>::infinity();
    for (int j = 0; j < mdp.n_actions(); ++j) {
      const double v = q[mdp.index(i, j)];
      if (!std::isfinite(v)) throw InvalidArgument("Q contains a non-finite entry");
      best = std::max(best, v);
    }
    const double slack = kTieTolerance * std::max(1.0, std::abs(best));
    for (int j = 0; j < mdp.n_actions(); ++j) {
      if (q[mdp.index(i, j)] >= best - slack) {
        pi.action_of[static_cast<std::size_t>(i)] = j;
        break;
      }
    }
  }
  return pi;
}

void PiTrace::write_jsonl(std::ostream& os) const {
  for (const auto& rec : records) {
    nlohmann::json j;
    j["k"] = rec.k;
    j["policy"] = rec.policy.action_of;
    j["residual"] = rec.residual;
    j["changed_states"] = rec.changed_states;
    os << j.dump() << '\n';
  }
}

PiResult policy_iteration(const MdpInstance& mdp, double gamma, int max_iters,
                          const EvaluatorKind& evaluator) {
  if (max_iters < 1) throw InvalidArgument("policy iteration needs K >= 1");
  const QVector r(mdp.reward().begin(), mdp.reward().end());
  PiResult result;
  Policy pi = Policy::constant(mdp.n_states(), 0);
  for (int k = 0; k < max_iters; ++k) {
    const SparseMatrix b = bellman_system_matrix(mdp, pi, gamma);
    QVector q;
    try {
      q = policy_evaluation(b, r, evaluator);
    } catch (const Error& e) {
      throw EvaluatorError(k, e.what());
    }
    const double res = residual_inf(b, q, r);
    Policy next = policy_improvement(q, mdp);
    int changed = 0;
    for (std::size_t i = 0; i < pi.size(); ++i) changed += next.action_of[i] != pi.action_of[i];
    result.trace.records.push_back({k, pi, std::move(q), res, changed});
    if (changed == 0) {
      result.converged = true;
      break;
    }
    pi = std::move(next);
  }
  result.policy = pi;
  return result;
}

ValueIterationResult value_iteration_oracle(const MdpInstance& mdp, double gamma, double tol) {
  if (!(tol > 0.0)) throw InvalidArgument("value iteration tolerance must be positive");
  if (!(gamma >= 0.0 && gamma < 1.0)) throw InvalidArgument("gamma must lie in [0, 1)");
  constexpr long kMaxSweeps = 1'000'000;
  const double threshold = gamma > 0.0 ? tol * (1.0 - gamma) / (2.0 * gamma)
                                       : std::numeric_limits<double>::infinity();
  const auto n_states = static_cast<std::size_t>(mdp.n_states());
  const auto& kernel = mdp.kernel();
  const auto reward = mdp.reward();

  ValueIterationResult out;
  out.q.assign(mdp.n_pairs(), 0.0);
  std::vector<double> v(n_states, 0.0);
  for (long sweep = 1; sweep <= kMaxSweeps; ++sweep) {
    for (std::size_t i = 0; i < n_states; ++i) {
      double best = -std::numeric_limits<double>::infinity();
      for (int j = 0; j < mdp.n_actions(); ++j) {
        best = std::max(best, out.q[mdp.index(static_cast<int>(i), j)]);
      }
      v[i] = best;
    }
    double change = 0.0;
    for (std::size_t p = 0; p < out.q.size(); ++p) {
      double next = reward[p];
      for (const auto& e : kernel.row(p)) next += gamma * e.value * v[e.col];
      change = std::max(change, std::abs(next - out.q[p]));
      out.q[p] = next;
    }
    if (change < threshold) {
      out.sweeps = sweep;
      out.policy = policy_improvement(out.q, mdp);
      return out;
    }
  }
  throw Error("value iteration did not converge within 10^6 sweeps");
}

std::vector<double> state_values(const QVector& q, const MdpInstance& mdp, const Policy& pi) {
  mdp.validate_policy(pi);
  std::vector<double> v(static_cast<std::size_t>(mdp.n_states()));
  for (int i = 0; i < mdp.n_states(); ++i) v[static_cast<std::size_t>(i)] = q[mdp.index(i, pi(i))];
  return v;
}

}  // namespace qpi
