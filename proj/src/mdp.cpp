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

#include "qpi/mdp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "qpi/errors.hpp"

namespace qpi {

namespace {
constexpr double kPmfTolerance = 1e-12;
}

DemandDistribution::DemandDistribution(std::vector<double> pmf)
    : pmf_(std::move(pmf)) {
  if (pmf_.empty()) throw InvalidArgument("demand pmf has empty support");
  double total = 0.0;
  for (double p : pmf_) {
    if (!std::isfinite(p) || p < 0.0) {
      throw InvalidArgument("demand pmf entries must be finite and >= 0");
    }
    total += p;
  }
  if (std::abs(total - 1.0) > kPmfTolerance) {
    throw InvalidArgument("demand pmf must sum to 1 (got " +
                          std::to_string(total) + ")");
  }
}

DemandDistribution DemandDistribution::uniform(int max_demand) {
  if (max_demand < 0) throw InvalidArgument("max_demand must be >= 0");
  const auto n = static_cast<std::size_t>(max_demand) + 1;
  return DemandDistribution(std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

DemandDistribution DemandDistribution::deterministic(int demand) {
  if (demand < 0) throw InvalidArgument("demand must be >= 0");
  std::vector<double> pmf(static_cast<std::size_t>(demand) + 1, 0.0);
  pmf.back() = 1.0;
  return DemandDistribution(std::move(pmf));
}

double DemandDistribution::probability(int d) const {
  if (d < 0 || d > max_demand()) return 0.0;
  return pmf_[static_cast<std::size_t>(d)];
}

std::size_t DemandDistribution::n_outcomes() const noexcept {
  return static_cast<std::size_t>(
      std::count_if(pmf_.begin(), pmf_.end(), [](double p) { return p > 0.0; }));
}

double DemandDistribution::mean() const noexcept {
  double m = 0.0;
  for (std::size_t d = 0; d < pmf_.size(); ++d) m += static_cast<double>(d) * pmf_[d];
  return m;
}

void InventoryParams::validate() const {
  if (!(holding_cost >= 0.0)) throw InvalidArgument("holding_cost must be >= 0");
  if (!(lost_sales_cost >= 0.0)) throw InvalidArgument("lost_sales_cost must be >= 0");
  if (!(unit_order_cost >= 0.0)) throw InvalidArgument("unit_order_cost must be >= 0");
  if (!(gamma > 0.0 && gamma < 1.0)) throw InvalidArgument("gamma must lie in (0, 1)");
  if (max_order < 1) throw InvalidArgument("max_order must be >= 1");
  if (max_inventory < max_order) {
    throw InvalidArgument("max_inventory must be >= max_order");
  }
}

Policy Policy::constant(int n_states, int action) {
  return Policy{std::vector<int>(static_cast<std::size_t>(n_states), action)};
}

MdpInstance::MdpInstance(InventoryParams params, DemandDistribution demand,
                         SparseMatrix kernel, std::vector<double> reward)
    : params_(params),
      demand_(std::move(demand)),
      kernel_(std::move(kernel)),
      reward_(std::move(reward)) {}

void MdpInstance::validate_policy(const Policy& pi) const {
  if (pi.size() != static_cast<std::size_t>(n_states())) {
    throw InvalidArgument("policy length does not match state count");
  }
  for (int a : pi.action_of) {
    if (a < 0 || a >= n_actions()) {
      throw InvalidArgument("policy action " + std::to_string(a) + " out of range");
    }
  }
}

MdpInstance build_inventory_mdp(const InventoryParams& params,
                                const DemandDistribution& demand) {
  params.validate();
  const int n_states = params.max_inventory + 1;
  const int n_actions = params.max_order + 1;
  const auto n_pairs =
      static_cast<std::size_t>(n_states) * static_cast<std::size_t>(n_actions);

  std::vector<Triplet> kernel;
  kernel.reserve(n_pairs * demand.n_outcomes());
  std::vector<double> reward(n_pairs, 0.0);

  const auto pmf = demand.probabilities();
  for (int i = 0; i < n_states; ++i) {
    for (int j = 0; j < n_actions; ++j) {
      const auto row = static_cast<std::size_t>(i) * static_cast<std::size_t>(n_actions) +
                       static_cast<std::size_t>(j);
      const int stock = std::min(i + j, params.max_inventory);
      double expected_cost = 0.0;
      for (std::size_t d = 0; d < pmf.size(); ++d) {
        const double p = pmf[d];
        if (p == 0.0) continue;
        const int dd = static_cast<int>(d);
        const int next = std::max(stock - dd, 0);
        const int lost = std::max(dd - stock, 0);
        // Duplicate next-state entries (all d >= stock land on 0) are summed.
        kernel.push_back({row, static_cast<std::size_t>(next), p});
        expected_cost += p * (params.holding_cost * next + params.lost_sales_cost * lost);
      }
      reward[row] = -expected_cost - params.unit_order_cost * j;
    }
  }
  return MdpInstance(params, demand,
                     SparseMatrix::from_triplets(n_pairs, static_cast<std::size_t>(n_states),
                                                 std::move(kernel)),
                     std::move(reward));
}

SparseMatrix policy_transition_matrix(const MdpInstance& mdp, const Policy& pi) {
  mdp.validate_policy(pi);
  std::vector<Triplet> t;
  t.reserve(mdp.kernel().nnz());
  for (std::size_t row = 0; row < mdp.n_pairs(); ++row) {
    for (const auto& e : mdp.kernel().row(row)) {
      const int next = static_cast<int>(e.col);
      t.push_back({row, mdp.index(next, pi(next)), e.value});
    }
  }
  return SparseMatrix::from_triplets(mdp.n_pairs(), mdp.n_pairs(), std::move(t));
}

SparseMatrix bellman_system_matrix(const MdpInstance& mdp, const Policy& pi,
                                   double gamma) {
  if (!(gamma >= 0.0 && gamma < 1.0)) {
    throw InvalidArgument("gamma must lie in [0, 1)");
  }
  return SparseMatrix::identity(mdp.n_pairs())
      .linear_combination(1.0, policy_transition_matrix(mdp, pi), -gamma);
}

SparsityStats sparsity_stats(const SparseMatrix& m, const MdpInstance& mdp,
                             MatrixKind kind) {
  const std::size_t per_row =
      mdp.demand().n_outcomes() + (kind == MatrixKind::System ? 1 : 0);
  SparsityStats s{m.nnz(), per_row * mdp.n_pairs()};
  if (s.nnz > s.bound) {
    throw std::logic_error("sparsity bound violated: nnz " + std::to_string(s.nnz) +
                           " > " + std::to_string(s.bound));
  }
  return s;
}

}  // namespace qpi
