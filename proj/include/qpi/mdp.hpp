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
#include <span>
#include <vector>

#include "qpi/sparse.hpp"

namespace qpi {

/// Demand PMF over the contiguous support {0, 1, ..., D}.
class DemandDistribution {
 public:
  explicit DemandDistribution(std::vector<double> pmf);

  static DemandDistribution uniform(int max_demand);
  static DemandDistribution deterministic(int demand);

  std::span<const double> probabilities() const noexcept { return pmf_; }
  double probability(int d) const;
  std::size_t support_size() const noexcept { return pmf_.size(); }
  int max_demand() const noexcept { return static_cast<int>(pmf_.size()) - 1; }
  /// Number of demand values with positive probability.
  std::size_t n_outcomes() const noexcept;
  double mean() const noexcept;

 private:
  std::vector<double> pmf_;
};

struct InventoryParams {
  double holding_cost = 1.0;
  double lost_sales_cost = 1.0;
  double unit_order_cost = 0.0;
  double gamma = 0.9;
  int max_inventory = 1;
  int max_order = 1;

  void validate() const;
};

/// Deterministic stationary policy: one order quantity per inventory level.
struct Policy {
  std::vector<int> action_of;

  static Policy constant(int n_states, int action);
  int operator()(int state) const { return action_of[static_cast<std::size_t>(state)]; }
  std::size_t size() const noexcept { return action_of.size(); }
  bool operator==(const Policy&) const = default;
};

/// Inventory MDP on levels 0..max_inventory and orders 0..max_order.
/// State-action pairs are laid out state-major: index = i * |A| + j.
class MdpInstance {
 public:
  MdpInstance(InventoryParams params, DemandDistribution demand,
              SparseMatrix kernel, std::vector<double> reward);

  const InventoryParams& params() const noexcept { return params_; }
  const DemandDistribution& demand() const noexcept { return demand_; }
  int n_states() const noexcept { return params_.max_inventory + 1; }
  int n_actions() const noexcept { return params_.max_order + 1; }
  std::size_t n_pairs() const noexcept {
    return static_cast<std::size_t>(n_states()) *
           static_cast<std::size_t>(n_actions());
  }
  std::size_t index(int state, int action) const noexcept {
    return static_cast<std::size_t>(state) *
               static_cast<std::size_t>(n_actions()) +
           static_cast<std::size_t>(action);
  }

  /// Rows are state-action pairs, columns next states: P(i' | i, j).
  const SparseMatrix& kernel() const noexcept { return kernel_; }
  double transition(int state, int action, int next) const {
    return kernel_.at(index(state, action), static_cast<std::size_t>(next));
  }
  std::span<const double> reward() const noexcept { return reward_; }
  double reward(int state, int action) const { return reward_[index(state, action)]; }

  void validate_policy(const Policy& pi) const;

 private:
  InventoryParams params_;
  DemandDistribution demand_;
  SparseMatrix kernel_;
  std::vector<double> reward_;
};

/// Lost-sales inventory dynamics s' = [min(s + a, max_inventory) - D]^+ with
/// expected one-period reward -h[y - D]^+ - l[D - y]^+ - c a.
MdpInstance build_inventory_mdp(const InventoryParams& params,
                                const DemandDistribution& demand);

/// P^pi on state-action pairs: P((i,j),(i',j')) = P(i'|i,j) [j' = pi(i')].
SparseMatrix policy_transition_matrix(const MdpInstance& mdp, const Policy& pi);

/// B = I - gamma P^pi, the policy-evaluation system matrix.
SparseMatrix bellman_system_matrix(const MdpInstance& mdp, const Policy& pi,
                                   double gamma);

enum class MatrixKind { Transition, System };

struct SparsityStats {
  std::size_t nnz;
  std::size_t bound;
};

/// Non-zero count against the a-priori bound: (#demand outcomes) |S||A| for
/// P^pi, one more diagonal per row for B. Throws std::logic_error if exceeded.
SparsityStats sparsity_stats(const SparseMatrix& m, const MdpInstance& mdp,
                             MatrixKind kind);

}  // namespace qpi
