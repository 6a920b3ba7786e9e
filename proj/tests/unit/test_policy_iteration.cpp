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

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <sstream>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "qpi/errors.hpp"
#include "qpi/policy_iteration.hpp"

namespace qpi {
namespace {

MdpInstance newsvendor(int max_order = 3) {
  return build_inventory_mdp({1.0, 9.0, 0.0, 0.95, 7, max_order}, DemandDistribution::uniform(3));
}

MdpInstance two_state() {
  return build_inventory_mdp({1.0, 10.0, 0.0, 0.9, 1, 1}, DemandDistribution::deterministic(1));
}

std::vector<double> random_pmf(std::mt19937_64& rng, int max_d) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> p(static_cast<std::size_t>(max_d + 1));
  double s = 0.0;
  for (auto& x : p) s += (x = u(rng));
  for (auto& x : p) x /= s;
  double acc = 0.0;
  for (std::size_t k = 0; k + 1 < p.size(); ++k) acc += p[k];
  p.back() = std::max(0.0, 1.0 - acc);
  return p;
}

MdpInstance random_instance(std::mt19937_64& rng, double gamma) {
  InventoryParams p;
  p.max_inventory = 1 + static_cast<int>(rng() % 15);
  p.max_order = 1 + static_cast<int>(rng() % static_cast<unsigned>(std::min(p.max_inventory, 7)));
  p.holding_cost = std::uniform_real_distribution<double>(0.1, 3.0)(rng);
  p.lost_sales_cost = std::uniform_real_distribution<double>(0.5, 20.0)(rng);
  p.unit_order_cost = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  p.gamma = gamma;
  return build_inventory_mdp(p, DemandDistribution(random_pmf(rng, static_cast<int>(rng() % 7))));
}

int order_up_to_3(int i, int max_order) { return std::min(std::max(0, 3 - i), max_order); }

TEST(ExactEvaluation, IdentitySystemReturnsRhs) {
  const std::vector<double> r{1.0, -2.0, 3.5};
  const auto q = policy_evaluation_exact(SparseMatrix::identity(3), r);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_DOUBLE_EQ(q[i], r[i]);
}

TEST(ExactEvaluation, MatchesNeumannSeries) {
  const auto mdp = two_state();
  const Policy pi = Policy::constant(2, 1);
  const auto b = bellman_system_matrix(mdp, pi, 0.9);
  const std::vector<double> r(mdp.reward().begin(), mdp.reward().end());
  const auto q = policy_evaluation_exact(b, r);
  // sum_{t<=200} gamma^t P^t r
  const auto p = policy_transition_matrix(mdp, pi);
  std::vector<double> term = r, series = r;
  for (int t = 1; t <= 200; ++t) {
    term = p.multiply(term);
    for (auto& v : term) v *= 0.9;
    for (std::size_t k = 0; k < series.size(); ++k) series[k] += term[k];
  }
  for (std::size_t k = 0; k < q.size(); ++k) EXPECT_NEAR(q[k], series[k], 1e-6);
}

TEST(ExactEvaluation, RandomDiagonallyDominant) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::MatrixXd d(16, 16);
    for (int i = 0; i < 16; ++i) {
      for (int j = 0; j < 16; ++j) d(i, j) = u(rng);
      d(i, i) = 17.0 + u(rng);
    }
    std::vector<double> r(16);
    for (auto& v : r) v = 10.0 * u(rng);
    const auto b = SparseMatrix::from_dense(d);
    const auto q = policy_evaluation_exact(b, r);
    double rinf = 0.0;
    for (double v : r) rinf = std::max(rinf, std::abs(v));
    EXPECT_LE(residual_inf(b, q, r), 1e-9 * (1.0 + rinf));
  }
}

TEST(ExactEvaluation, SingularRaises) {
  const auto b = SparseMatrix::from_triplets(2, 2, {{0, 0, 1.0}, {0, 1, 1.0}, {1, 0, 1.0}, {1, 1, 1.0}});
  EXPECT_THROW(policy_evaluation_exact(b, {1.0, 1.0}), SingularMatrixError);
}

TEST(Improvement, MonotoneQPicksZero) {
  const auto mdp = newsvendor();
  QVector q(mdp.n_pairs());
  for (int i = 0; i < mdp.n_states(); ++i)
    for (int j = 0; j < mdp.n_actions(); ++j) q[mdp.index(i, j)] = -j;
  EXPECT_EQ(policy_improvement(q, mdp), Policy::constant(mdp.n_states(), 0));
}

TEST(Improvement, TiesGoToSmallestAction) {
  const auto mdp = two_state();
  const QVector q{5.0, 5.0, 1.0, 2.0};
  const auto pi = policy_improvement(q, mdp);
  EXPECT_EQ(pi(0), 0);
  EXPECT_EQ(pi(1), 1);
}

TEST(Improvement, ShiftInvariant) {
  std::mt19937_64 rng(8);
  const auto mdp = newsvendor();
  std::uniform_real_distribution<double> u(-50.0, 0.0);
  for (int trial = 0; trial < 50; ++trial) {
    QVector q(mdp.n_pairs());
    for (auto& v : q) v = u(rng);
    QVector shifted = q;
    const double c = 37.25 * (trial - 25);
    for (auto& v : shifted) v += c;
    EXPECT_EQ(policy_improvement(q, mdp), policy_improvement(shifted, mdp));
  }
}

TEST(Improvement, NewsvendorExactEvaluationGivesOrderUpTo) {
  // Q of the optimal policy, improved greedily, reproduces the base stock rule.
  const auto mdp = newsvendor();
  const auto vi = value_iteration_oracle(mdp, 0.95, 1e-10);
  const auto b = bellman_system_matrix(mdp, vi.policy, 0.95);
  const auto q = policy_evaluation_exact(b, QVector(mdp.reward().begin(), mdp.reward().end()));
  const auto pi = policy_improvement(q, mdp);
  for (int i = 0; i < mdp.n_states(); ++i) EXPECT_EQ(pi(i), std::max(0, 3 - i)) << "state " << i;
}

TEST(PolicyIteration, ZeroDemandOrdersNothing) {
  const auto mdp = build_inventory_mdp({1.0, 5.0, 0.0, 0.9, 5, 2}, DemandDistribution::deterministic(0));
  const auto res = policy_iteration(mdp, 0.9);
  EXPECT_EQ(res.policy, Policy::constant(6, 0));
  EXPECT_TRUE(res.converged);
  EXPECT_LE(res.trace.records.size(), 2u);
}

TEST(PolicyIteration, NewsvendorOrderUpTo3) {
  const auto mdp = newsvendor(3);
  const auto res = policy_iteration(mdp, 0.95);
  ASSERT_TRUE(res.converged);
  for (int i = 0; i < mdp.n_states(); ++i) {
    EXPECT_EQ(res.policy(i), order_up_to_3(i, 3)) << "state " << i;
  }
}

TEST(PolicyIteration, CapacityLimitedNewsvendorMatchesValueIteration) {
  // With a tight order cap the base-stock level rises above 3, so the
  // reference is value iteration rather than a closed-form rule.
  for (int max_order : {1, 2}) {
    const auto mdp = newsvendor(max_order);
    const auto res = policy_iteration(mdp, 0.95);
    ASSERT_TRUE(res.converged);
    EXPECT_EQ(res.policy, value_iteration_oracle(mdp, 0.95, 1e-10).policy) << max_order;
  }
}

TEST(PolicyIteration, TraceContents) {
  const auto mdp = newsvendor();
  const auto res = policy_iteration(mdp, 0.95, 20);
  ASSERT_FALSE(res.trace.records.empty());
  EXPECT_LE(res.trace.records.size(), 21u);
  EXPECT_EQ(res.trace.records.front().policy, Policy::constant(8, 0));
  EXPECT_EQ(res.trace.records.back().changed_states, 0);
  for (const auto& rec : res.trace.records) {
    EXPECT_GE(rec.residual, 0.0);
    EXPECT_LT(rec.residual, 1e-9);
  }
  std::ostringstream os;
  res.trace.write_jsonl(os);
  std::istringstream in(os.str());
  std::string line;
  int k = 0;
  while (std::getline(in, line)) {
    const auto j = nlohmann::json::parse(line);
    EXPECT_EQ(j.at("k").get<int>(), k++);
    EXPECT_TRUE(j.contains("policy"));
    EXPECT_TRUE(j.contains("residual"));
    EXPECT_TRUE(j.contains("changed_states"));
  }
  EXPECT_EQ(static_cast<std::size_t>(k), res.trace.records.size());
}

TEST(PolicyIteration, CapAtKWithoutConvergence) {
  const auto mdp = newsvendor();
  const auto res = policy_iteration(mdp, 0.95, 1);
  EXPECT_EQ(res.trace.records.size(), 1u);
  EXPECT_FALSE(res.converged);
  EXPECT_THROW(policy_iteration(mdp, 0.95, 0), InvalidArgument);
}

TEST(PolicyIteration, MonotoneStateValues) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 30; ++trial) {
    const double gamma = std::array{0.8, 0.9, 0.95}[static_cast<std::size_t>(trial % 3)];
    const auto mdp = random_instance(rng, gamma);
    const auto res = policy_iteration(mdp, gamma, 50);
    EXPECT_TRUE(res.converged);
    EXPECT_LE(res.trace.records.size(), 11u);
    std::vector<double> prev;
    for (const auto& rec : res.trace.records) {
      const auto v = state_values(rec.q, mdp, rec.policy);
      if (!prev.empty()) {
        for (std::size_t i = 0; i < v.size(); ++i) EXPECT_GE(v[i], prev[i] - 1e-9);
      }
      prev = v;
    }
  }
}

TEST(PolicyIteration, AgreesWithValueIteration) {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 50; ++trial) {
    const double gamma = std::array{0.8, 0.9, 0.95}[static_cast<std::size_t>(trial % 3)];
    const auto mdp = random_instance(rng, gamma);
    const auto pi = policy_iteration(mdp, gamma, 50);
    const auto vi = value_iteration_oracle(mdp, gamma, 1e-10);
    EXPECT_EQ(pi.policy, vi.policy) << "trial " << trial;
  }
}

TEST(PolicyIteration, PerturbedEvaluatorReachesSameFixedPoint) {
  // Evaluator with residual ~1e-7 standing in for an approximate backend.
  const auto mdp = newsvendor();
  const auto exact = policy_iteration(mdp, 0.95);
  Policy pi = Policy::constant(mdp.n_states(), 0);
  const QVector r(mdp.reward().begin(), mdp.reward().end());
  for (int k = 0; k < 20; ++k) {
    const auto b = bellman_system_matrix(mdp, pi, 0.95);
    auto q = policy_evaluation_exact(b, r);
    for (std::size_t i = 0; i < q.size(); ++i) q[i] += (i % 2 ? 1e-8 : -1e-8);
    EXPECT_LE(residual_inf(b, q, r), 1e-6);
    const auto next = policy_improvement(q, mdp);
    if (next == pi) break;
    pi = next;
  }
  EXPECT_EQ(pi, exact.policy);
}

TEST(PolicyIteration, HhlBackendMatchesExactOnTwoStates) {
  const auto mdp = two_state();
  const auto exact = policy_iteration(mdp, 0.9);
  const auto hhl = policy_iteration(mdp, 0.9, 20, HhlEvaluator{});
  EXPECT_EQ(hhl.policy, exact.policy);
  EXPECT_EQ(exact.policy, (Policy{{1, 0}}));
}

TEST(PolicyIteration, VqlsBackendRuns) {
  const auto mdp = two_state();
  VqlsEvaluator e;
  e.config.max_iters = 20;
  const auto res = policy_iteration(mdp, 0.9, 2, e);
  EXPECT_FALSE(res.trace.records.empty());
  for (const auto& rec : res.trace.records) EXPECT_TRUE(std::isfinite(rec.residual));
}

TEST(PolicyIteration, EvaluatorFailureCarriesIteration) {
  const auto mdp = build_inventory_mdp({1.0, 1.0, 0.0, 0.9, 2, 1}, DemandDistribution::deterministic(0));
  HhlEvaluator bad;
  bad.config.rotation_constant = 10.0;  // above min |lambda|, rejected by the backend
  try {
    policy_iteration(mdp, 0.9, 5, bad);
    FAIL() << "expected EvaluatorError";
  } catch (const EvaluatorError& e) {
    EXPECT_EQ(e.iteration(), 0);
  }
}

TEST(ValueIteration, GammaZeroIsReward) {
  const auto mdp = two_state();
  const auto vi = value_iteration_oracle(mdp, 0.0, 1e-10);
  EXPECT_EQ(vi.sweeps, 1);
  for (std::size_t k = 0; k < mdp.n_pairs(); ++k) EXPECT_DOUBLE_EQ(vi.q[k], mdp.reward()[k]);
}

TEST(ValueIteration, NewsvendorCriticalRatio) {
  const auto mdp = newsvendor();
  const auto vi = value_iteration_oracle(mdp, 0.95, 1e-10);
  for (int i = 0; i < mdp.n_states(); ++i) EXPECT_EQ(vi.policy(i), order_up_to_3(i, 3));
  EXPECT_THROW(value_iteration_oracle(mdp, 0.95, 0.0), InvalidArgument);
}

}  // namespace
}  // namespace qpi
