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

#include "qpi/vqls.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>

#include "qpi/errors.hpp"

namespace qpi {

namespace {

using std::numbers::pi;

constexpr double kShift = pi / 2.0;

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

VqlsProblem::Terms averaged_terms(std::span<const double> theta, const VqlsProblem& problem,
                                  const AnsatzConfig& ansatz, const NoiseModel* noise,
                                  int trajectories, std::uint64_t stream) {
  const Circuit c = ansatz_circuit(ansatz, theta);
  if (noise == nullptr || noise->is_noiseless()) {
    StateVector x(ansatz.n_qubits);
    apply_circuit_inplace(x, c);
    return problem.terms(x);
  }
  VqlsProblem::Terms acc{0.0, 0.0};
  for (int k = 0; k < trajectories; ++k) {
    auto rng = trajectory_rng(stream, static_cast<std::uint64_t>(k));
    StateVector x(ansatz.n_qubits);
    apply_circuit_inplace(x, c, noise, &rng);
    const auto t = problem.terms(x);
    acc.overlap_sq += t.overlap_sq;
    acc.norm_sq += t.norm_sq;
  }
  acc.overlap_sq /= trajectories;
  acc.norm_sq /= trajectories;
  return acc;
}

// ||B x||^2 below this (relative to (sum |a_i|)^2) counts as B|x> = 0.
void check_nonvanishing(const VqlsProblem::Terms& t, const VqlsProblem& problem) {
  double scale = 0.0;
  for (const auto& term : problem.lcu().terms) scale += std::abs(term.coefficient);
  if (!(t.norm_sq > 1e-24 * scale * scale)) {
    throw InvalidArgument("B|x(theta)> vanishes; the LCU is over-truncated");
  }
}

double cost_from(const VqlsProblem::Terms& t, const VqlsProblem& problem) {
  check_nonvanishing(t, problem);
  return 1.0 - t.overlap_sq / t.norm_sq;
}

const NoiseModel* noise_of(const VqlsConfig& cfg) {
  return cfg.noise ? &*cfg.noise : nullptr;
}

}  // namespace

void AnsatzConfig::validate() const {
  if (n_qubits < 1 || n_qubits > kMaxSimQubits) throw InvalidArgument("ansatz qubit count out of range");
  if (n_layers < 0) throw InvalidArgument("ansatz layer count must be >= 0");
}

void VqlsConfig::validate() const {
  if (!(learning_rate > 0.0)) throw InvalidArgument("learning rate must be positive");
  if (max_iters < 1) throw InvalidArgument("max_iters must be >= 1");
  if (!(fd_step > 0.0)) throw InvalidArgument("finite-difference step must be positive");
  if (trajectories < 1) throw InvalidArgument("trajectory count must be >= 1");
  if (divergence_patience < 1) throw InvalidArgument("divergence patience must be >= 1");
  if (noise) noise->validate();
}

void TrainTrace::write_csv(std::ostream& os) const {
  const auto old = os.precision(17);
  os << "iter,cost,grad_norm\n";
  for (const auto& r : records) os << r.iter << ',' << r.cost << ',' << r.grad_norm << '\n';
  os.precision(old);
}

Circuit ansatz_circuit(const AnsatzConfig& cfg, std::span<const double> theta) {
  cfg.validate();
  if (theta.size() != cfg.parameter_count()) {
    throw InvalidArgument("ansatz expects " + std::to_string(cfg.parameter_count()) +
                          " parameters, got " + std::to_string(theta.size()));
  }
  const int n = cfg.n_qubits;
  Circuit c(n);
  for (int q = 0; q < n; ++q) c.ry(q, theta[static_cast<std::size_t>(q)]);
  for (int layer = 1; layer <= cfg.n_layers; ++layer) {
    for (int q = 0; q + 1 < n; ++q) c.cz(q, q + 1);
    for (int q = 0; q < n; ++q) c.ry(q, theta[static_cast<std::size_t>(layer * n + q)]);
  }
  return c;
}

StateVector ansatz_state(const AnsatzConfig& cfg, std::span<const double> theta) {
  return apply_circuit(StateVector(cfg.n_qubits), ansatz_circuit(cfg, theta));
}

VqlsProblem::VqlsProblem(LcuDecomposition lcu, std::span<const double> rhs)
    : lcu_(std::move(lcu)), rhs_(prepare_state(rhs)), rhs_norm_(0.0) {
  if (rhs.size() != (std::size_t{1} << lcu_.n_qubits)) {
    throw InvalidArgument("rhs length does not match the LCU register");
  }
  if (lcu_.terms.empty()) throw InvalidArgument("LCU has no terms");
  for (double v : rhs) rhs_norm_ += v * v;
  rhs_norm_ = std::sqrt(rhs_norm_);
}

StateVector VqlsProblem::prepare_state(std::span<const double> rhs) {
  return StateVector::from_real(rhs);
}

std::vector<Complex> VqlsProblem::apply(const StateVector& x) const {
  std::vector<Complex> y(x.dim(), Complex{0.0, 0.0});
  const auto amps = x.amplitudes();
  for (const auto& term : lcu_.terms) {
    const auto xm = term.pauli.x_mask();
    for (std::uint64_t k = 0; k < amps.size(); ++k) {
      y[k ^ xm] += term.coefficient * term.pauli.phase(k) * amps[k];
    }
  }
  return y;
}

VqlsProblem::Terms VqlsProblem::terms(const StateVector& x) const {
  const auto y = apply(x);
  Complex overlap = 0.0;
  double norm_sq = 0.0;
  for (std::size_t k = 0; k < y.size(); ++k) {
    overlap += std::conj(rhs_[k]) * y[k];
    norm_sq += std::norm(y[k]);
  }
  return {std::norm(overlap), norm_sq};
}

double vqls_cost(std::span<const double> theta, const VqlsProblem& problem,
                 const AnsatzConfig& ansatz) {
  return cost_from(averaged_terms(theta, problem, ansatz, nullptr, 1, 0), problem);
}

double vqls_cost_noisy(std::span<const double> theta, const VqlsProblem& problem,
                       const AnsatzConfig& ansatz, const NoiseModel& noise, int trajectories,
                       std::uint64_t stream) {
  return cost_from(averaged_terms(theta, problem, ansatz, &noise, trajectories, stream), problem);
}

std::vector<double> vqls_gradient(std::span<const double> theta, const VqlsProblem& problem,
                                  const AnsatzConfig& ansatz, const VqlsConfig& cfg,
                                  std::uint64_t stream) {
  const NoiseModel* noise = noise_of(cfg);
  auto eval = [&](std::span<const double> th) {
    return averaged_terms(th, problem, ansatz, noise, cfg.trajectories, stream);
  };
  std::vector<double> grad(theta.size(), 0.0);
  std::vector<double> shifted(theta.begin(), theta.end());

  if (cfg.gradient == GradientMethod::FiniteDifference) {
    for (std::size_t k = 0; k < theta.size(); ++k) {
      shifted[k] = theta[k] + cfg.fd_step;
      const double up = cost_from(eval(shifted), problem);
      shifted[k] = theta[k] - cfg.fd_step;
      const double down = cost_from(eval(shifted), problem);
      shifted[k] = theta[k];
      grad[k] = (up - down) / (2.0 * cfg.fd_step);
    }
    return grad;
  }

  // Both the overlap and the norm are expectations of Hermitian operators,
  // so each obeys the pi/2 shift rule for Ry generators; the quotient rule
  // combines them.
  const auto centre = eval(theta);
  check_nonvanishing(centre, problem);
  for (std::size_t k = 0; k < theta.size(); ++k) {
    shifted[k] = theta[k] + kShift;
    const auto up = eval(shifted);
    shifted[k] = theta[k] - kShift;
    const auto down = eval(shifted);
    shifted[k] = theta[k];
    const double d_overlap = 0.5 * (up.overlap_sq - down.overlap_sq);
    const double d_norm = 0.5 * (up.norm_sq - down.norm_sq);
    grad[k] = -(d_overlap * centre.norm_sq - centre.overlap_sq * d_norm) /
              (centre.norm_sq * centre.norm_sq);
  }
  return grad;
}

std::vector<double> random_parameters(std::size_t count, std::uint64_t seed) {
  auto rng = trajectory_rng(seed, 0xA115A7Cull);
  std::uniform_real_distribution<double> dist(-pi, pi);
  std::vector<double> theta(count);
  for (auto& t : theta) t = dist(rng);
  return theta;
}

VqlsResult vqls_solve(const VqlsProblem& problem, const AnsatzConfig& ansatz,
                      const VqlsConfig& cfg) {
  cfg.validate();
  ansatz.validate();
  if (ansatz.n_qubits != problem.n_qubits()) {
    throw InvalidArgument("ansatz width does not match the system");
  }
  const auto start = std::chrono::steady_clock::now();
  std::vector<double> theta = cfg.initial_params.value_or(
      random_parameters(ansatz.parameter_count(), cfg.seed));
  if (theta.size() != ansatz.parameter_count()) {
    throw InvalidArgument("initial parameter count does not match the ansatz");
  }

  const NoiseModel* noise = noise_of(cfg);
  VqlsResult result;
  double previous = std::numeric_limits<double>::infinity();
  int rising = 0;
  for (int it = 0; it <= cfg.max_iters; ++it) {
    const std::uint64_t stream = splitmix(cfg.seed ^ splitmix(static_cast<std::uint64_t>(it)));
    const double cost = cost_from(
        averaged_terms(theta, problem, ansatz, noise, cfg.trajectories, stream), problem);

    rising = cost > previous ? rising + 1 : 0;
    previous = cost;
    if (rising >= cfg.divergence_patience) {
      throw DivergenceError("VQLS cost rose for " + std::to_string(rising) +
                            " consecutive iterations");
    }
    if (cost <= cfg.target_cost || it == cfg.max_iters) {
      result.trace.records.push_back({it, cost, 0.0});
      if (cost > cfg.target_cost) {
        double gn = 0.0;
        for (double g : vqls_gradient(theta, problem, ansatz, cfg, stream)) gn += g * g;
        result.trace.records.back().grad_norm = std::sqrt(gn);
      }
      result.final_cost = cost;
      break;
    }
    const auto grad = vqls_gradient(theta, problem, ansatz, cfg, stream);
    double gn = 0.0;
    for (double g : grad) gn += g * g;
    result.trace.records.push_back({it, cost, std::sqrt(gn)});
    for (std::size_t k = 0; k < theta.size(); ++k) theta[k] -= cfg.learning_rate * grad[k];
  }

  const StateVector x = ansatz_state(ansatz, theta);
  const auto y = problem.apply(x);
  const auto r = problem.rhs_state().amplitudes();
  Complex num = 0.0;
  double den = 0.0;
  for (std::size_t k = 0; k < y.size(); ++k) {
    num += std::conj(y[k]) * r[k];
    den += std::norm(y[k]);
  }
  // s B x ~ r with r = ||r|| |r>.
  const double scale = den > 0.0 ? (num.real() / den) * problem.rhs_norm() : 0.0;
  result.solution.resize(x.dim());
  for (std::size_t k = 0; k < x.dim(); ++k) result.solution[k] = scale * x[k].real();
  result.trace.final_params = theta;
  result.trace.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

}  // namespace qpi
