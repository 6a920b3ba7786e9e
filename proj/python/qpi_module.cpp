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

// Python bindings: instances, policy iteration with each evaluator, the LCU
// decomposition, single HHL/VQLS solves and the QRAM formulas.

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qpi/config.hpp"
#include "qpi/errors.hpp"
#include "qpi/hhl.hpp"
#include "qpi/mdp.hpp"
#include "qpi/pauli.hpp"
#include "qpi/policy_iteration.hpp"
#include "qpi/qram.hpp"
#include "qpi/vqls.hpp"

namespace py = pybind11;
using namespace pybind11::literals;

namespace qpi {
namespace {

MdpInstance make_mdp(const InventoryParams& p, const std::vector<double>& pmf) {
  return build_inventory_mdp(p, DemandDistribution(pmf));
}

EvaluatorKind evaluator_from(const std::string& name, int n_clock, int layers,
                             std::optional<std::size_t> terms, double lr, int iters,
                             std::uint64_t seed) {
  if (name == "exact") return ExactEvaluator{};
  if (name == "hhl") {
    HhlConfig c;
    c.n_clock = n_clock;
    return HhlEvaluator{c};
  }
  if (name == "vqls") {
    VqlsEvaluator v;
    v.n_layers = layers;
    v.n_terms = terms;
    v.config.learning_rate = lr;
    v.config.max_iters = iters;
    v.config.seed = seed;
    return v;
  }
  throw InvalidArgument("evaluator must be exact, hhl or vqls");
}

py::dict pi_result(const PiResult& r) {
  py::list trace;
  for (const auto& rec : r.trace.records) {
    trace.append(py::dict("k"_a = rec.k, "policy"_a = rec.policy.action_of, "q"_a = rec.q,
                          "residual"_a = rec.residual, "changed_states"_a = rec.changed_states));
  }
  return py::dict("policy"_a = r.policy.action_of, "converged"_a = r.converged,
                  "iterations"_a = r.trace.records.size(), "trace"_a = trace);
}

py::list lcu_terms(const LcuDecomposition& lcu) {
  py::list out;
  for (const auto& t : lcu.terms) out.append(py::make_tuple(t.pauli.str(), t.coefficient));
  return out;
}

}  // namespace
}  // namespace qpi

PYBIND11_MODULE(_qpi, m) {
  using namespace qpi;
  m.doc() = "Policy iteration with classical and simulated quantum evaluation steps.";

  auto error = py::register_exception<Error>(m, "Error");
  py::register_exception<InvalidArgument>(m, "InvalidArgument", error);
  py::register_exception<ConfigError>(m, "ConfigError", error);
  py::register_exception<SingularMatrixError>(m, "SingularMatrixError", error);
  py::register_exception<EvaluatorError>(m, "EvaluatorError", error);
  py::register_exception<PostSelectionError>(m, "PostSelectionError", error);
  py::register_exception<DivergenceError>(m, "DivergenceError", error);
  py::register_exception<InfeasibleError>(m, "InfeasibleError", error);
  py::register_exception<DisallowedError>(m, "DisallowedError", error);

  py::class_<InventoryParams>(m, "InventoryParams")
      .def(py::init([](double h, double l, double c, double gamma, int max_inventory, int max_order) {
             InventoryParams p{h, l, c, gamma, max_inventory, max_order};
             p.validate();
             return p;
           }),
           "holding_cost"_a = 1.0, "lost_sales_cost"_a = 1.0, "unit_order_cost"_a = 0.0,
           "gamma"_a = 0.9, "max_inventory"_a = 1, "max_order"_a = 1)
      .def_readwrite("holding_cost", &InventoryParams::holding_cost)
      .def_readwrite("lost_sales_cost", &InventoryParams::lost_sales_cost)
      .def_readwrite("unit_order_cost", &InventoryParams::unit_order_cost)
      .def_readwrite("gamma", &InventoryParams::gamma)
      .def_readwrite("max_inventory", &InventoryParams::max_inventory)
      .def_readwrite("max_order", &InventoryParams::max_order);

  m.def(
      "load_instance",
      [](const std::string& path) {
        const auto cfg = load_instance(path);
        const auto pmf = cfg.demand.probabilities();
        return py::make_tuple(cfg.params, std::vector<double>(pmf.begin(), pmf.end()));
      },
      "path"_a, "(InventoryParams, demand_pmf) from a TOML or JSON instance file.");

  m.def(
      "rewards",
      [](const InventoryParams& p, const std::vector<double>& pmf) {
        const auto mdp = make_mdp(p, pmf);
        return std::vector<double>(mdp.reward().begin(), mdp.reward().end());
      },
      "params"_a, "demand_pmf"_a, "Expected one-step reward per (state, action), state-major.");

  m.def(
      "system_matrix",
      [](const InventoryParams& p, const std::vector<double>& pmf, const std::vector<int>& policy) {
        const auto mdp = make_mdp(p, pmf);
        return bellman_system_matrix(mdp, Policy{policy}, p.gamma).to_dense();
      },
      "params"_a, "demand_pmf"_a, "policy"_a, "Dense B = I - gamma P^pi.");

  m.def(
      "policy_iteration",
      [](const InventoryParams& p, const std::vector<double>& pmf, const std::string& evaluator,
         int max_iters, int n_clock, int layers, std::optional<std::size_t> terms, double lr,
         int vqls_iters, std::uint64_t seed) {
        const auto mdp = make_mdp(p, pmf);
        return pi_result(policy_iteration(
            mdp, p.gamma, max_iters, evaluator_from(evaluator, n_clock, layers, terms, lr, vqls_iters, seed)));
      },
      "params"_a, "demand_pmf"_a, "evaluator"_a = "exact", "max_iters"_a = 20, "n_clock"_a = 6,
      "vqls_layers"_a = 2, "vqls_terms"_a = py::none(), "learning_rate"_a = 0.5,
      "vqls_iters"_a = 500, "seed"_a = 0);

  m.def(
      "value_iteration",
      [](const InventoryParams& p, const std::vector<double>& pmf, double tol) {
        const auto vi = value_iteration_oracle(make_mdp(p, pmf), p.gamma, tol);
        return py::dict("policy"_a = vi.policy.action_of, "q"_a = vi.q, "sweeps"_a = vi.sweeps);
      },
      "params"_a, "demand_pmf"_a, "tol"_a = 1e-10);

  m.def(
      "lcu_decompose",
      [](const Eigen::MatrixXcd& h, std::optional<std::size_t> keep) {
        auto lcu = lcu_decompose(h);
        if (keep) lcu = lcu_truncate(lcu, *keep);
        return py::dict("n_qubits"_a = lcu.n_qubits, "terms"_a = lcu_terms(lcu),
                        "truncation_error"_a = lcu.truncation_error);
      },
      "h"_a, "keep"_a = py::none(), "Pauli terms (string, coefficient), largest first.");

  m.def(
      "hermitian_embed",
      [](const Eigen::MatrixXd& b, const std::vector<double>& r) {
        const auto sys = hermitian_embed(b, r);
        return py::make_tuple(Eigen::MatrixXd(sys.h.real()), Eigen::VectorXd(sys.rhs));
      },
      "b"_a, "r"_a, "Padded [[0, B], [B^T, 0]] and its right-hand side (r, 0).");

  m.def(
      "hhl_solve",
      [](const Eigen::MatrixXd& b, const std::vector<double>& r, int n_clock,
         std::optional<double> evolution_time) {
        HhlConfig cfg;
        cfg.n_clock = n_clock;
        cfg.evolution_time = evolution_time;
        const auto res = hhl_solve(hermitian_embed(b, r), cfg);
        return py::dict("solution"_a = res.solution, "fidelity"_a = res.report.solution_fidelity,
                        "success_probability"_a = res.report.success_probability,
                        "gates"_a = res.report.gate_counts.total());
      },
      "b"_a, "r"_a, "n_clock"_a = 6, "evolution_time"_a = py::none());

  m.def(
      "vqls_solve",
      [](const Eigen::MatrixXd& b, const std::vector<double>& r, int layers,
         std::optional<std::size_t> terms, double lr, int iters, std::uint64_t seed, double noise,
         int trajectories) {
        const auto sys = hermitian_embed(b, r);
        auto lcu = lcu_decompose(sys);
        if (terms) lcu = lcu_truncate(lcu, *terms);
        const VqlsProblem problem(std::move(lcu),
                                  std::vector<double>(sys.rhs.data(), sys.rhs.data() + sys.rhs.size()));
        VqlsConfig cfg;
        cfg.learning_rate = lr;
        cfg.max_iters = iters;
        cfg.seed = seed;
        cfg.trajectories = trajectories;
        if (noise > 0.0) cfg.noise = NoiseModel{noise, noise, seed};
        const auto res = vqls_solve(problem, AnsatzConfig{problem.n_qubits(), layers}, cfg);
        std::vector<double> costs;
        for (const auto& rec : res.trace.records) costs.push_back(rec.cost);
        return py::dict("solution"_a = sys.extract_solution(Eigen::Map<const Eigen::VectorXd>(
                            res.solution.data(), static_cast<Eigen::Index>(res.solution.size()))),
                        "final_cost"_a = res.final_cost, "costs"_a = costs);
      },
      "b"_a, "r"_a, "layers"_a = 2, "terms"_a = py::none(), "learning_rate"_a = 0.5,
      "iters"_a = 500, "seed"_a = 0, "noise"_a = 0.0, "trajectories"_a = 20);

  auto q = m.def_submodule("qram", "Closed-form QRAM feasibility estimates (rates in rad/s).");
  auto base_of = [](const std::string& b) {
    if (b == "2") return LogBase::Two;
    if (b == "e") return LogBase::Natural;
    throw InvalidArgument("log base must be '2' or 'e'");
  };
  auto hw_of = [](double g_d, double nu, double c_d, double kg) {
    QramHardwareParams hw{g_d, nu, c_d, kg};
    hw.validate();
    return hw;
  };
  const double g_default = QramHardwareParams{}.g_d, nu_default = QramHardwareParams{}.nu;
  q.def("infidelity", [=](double eps, double n, const std::string& b) { return infidelity(eps, n, base_of(b)); },
        "epsilon"_a, "n"_a, "log_base"_a = "2");
  q.def("epsilon_bound",
        [=](double x, double n, const std::string& b) { return epsilon_bound(x, n, base_of(b)); },
        "one_minus_f"_a, "n"_a, "log_base"_a = "2");
  q.def("epsilon_from_hardware",
        [=](double g, double nu, double c, double kg) { return epsilon_from_hardware(hw_of(g, nu, c, kg)); },
        "g_d"_a = g_default, "nu"_a = nu_default, "c_d"_a = 4.5, "kappa_plus_gamma"_a = 0.0);
  q.def("decoherence_budget",
        [=](double eps, double g, double nu, double c) { return decoherence_budget(eps, hw_of(g, nu, c, 0.0)); },
        "epsilon"_a, "g_d"_a = g_default, "nu"_a = nu_default, "c_d"_a = 4.5);
  q.def("parse_angular_rate", [](const std::string& s) { return parse_angular_rate(s); }, "text"_a);
}
