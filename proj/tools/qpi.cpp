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

// qpi command-line front end.
//
//   qpi solve -i instance.toml --evaluator exact|hhl|vqls
//   qpi lcu   -i instance.toml [-L 16]
//   qpi gates --n-max 6 --l-list 1,4,9,16
//   qpi qram  --n-range 2:1e9:9 --fidelity-range 1e-9:1e-1:9
//   qpi vqls  -i instance.toml --layers 2 --terms 5 [--noise 0.001]
//
// Exit codes: 0 ok, 1 bad configuration, 2 evaluator failure, 3 infeasible
// QRAM query, 4 optimizer divergence.

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qpi/config.hpp"
#include "qpi/errors.hpp"
#include "qpi/hhl.hpp"
#include "qpi/io.hpp"
#include "qpi/mdp.hpp"
#include "qpi/pauli.hpp"
#include "qpi/policy_iteration.hpp"
#include "qpi/qram.hpp"
#include "qpi/vqls.hpp"

namespace fs = std::filesystem;
using namespace qpi;

namespace {

enum Exit { kOk = 0, kConfig = 1, kEvaluator = 2, kInfeasible = 3, kDivergence = 4 };

constexpr std::uint64_t kDefaultSeed = 0;

struct Common {
  std::string instance;
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;
  std::optional<double> gamma;
  std::optional<int> truncate_states;
};

// Newsvendor instance used when no file is given: uniform demand on {0..3},
// h=1, l=9, gamma=0.95, 8 levels, orders up to 3.
InstanceConfig default_instance() {
  InstanceConfig cfg;
  cfg.params = {1.0, 9.0, 0.0, 0.95, 7, 3};
  cfg.demand = DemandDistribution::uniform(3);
  return cfg;
}

InstanceConfig load(const Common& c) {
  InstanceConfig cfg = c.instance.empty() ? default_instance() : load_instance(c.instance);
  if (c.gamma) cfg.params.gamma = *c.gamma;
  if (c.truncate_states) {
    if (*c.truncate_states < 2) throw ConfigError("truncate-states", "--truncate-states must be >= 2");
    cfg.params.max_inventory = *c.truncate_states - 1;
    cfg.params.max_order = std::min(cfg.params.max_order, cfg.params.max_inventory);
  }
  try {
    cfg.params.validate();
  } catch (const InvalidArgument& e) {
    throw ConfigError("gamma", e.what());
  }
  return cfg;
}

// Flag beats QPI_SEED beats the instance file beats the built-in constant.
std::uint64_t resolve_seed(const Common& c, const InstanceConfig& cfg) {
  if (c.seed) return *c.seed;
  if (const char* env = std::getenv("QPI_SEED"); env != nullptr && *env != '\0') {
    try {
      std::size_t used = 0;
      const auto v = std::stoull(env, &used);
      if (used == std::string(env).size()) return v;
    } catch (const std::exception&) {
    }
    throw ConfigError("QPI_SEED", std::string("QPI_SEED is not an unsigned integer: ") + env);
  }
  return cfg.seed.value_or(kDefaultSeed);
}

void add_common(CLI::App* app, Common& c, bool with_instance = true) {
  if (with_instance) {
    app->add_option("-i,--instance", c.instance, "instance file (TOML or JSON)");
    app->add_option("--gamma", c.gamma, "discount factor override");
    app->add_option("--truncate-states", c.truncate_states,
                    "keep only the lowest N inventory levels");
  }
  app->add_option("-o,--out", c.out_dir, "output directory");
  app->add_option("--seed", c.seed, "RNG seed (overrides QPI_SEED)");
}

Policy parse_policy(const std::string& text, const MdpInstance& mdp) {
  if (text.empty() || text == "zero") return Policy::constant(mdp.n_states(), 0);
  Policy pi;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      pi.action_of.push_back(std::stoi(item));
    } catch (const std::exception&) {
      throw ConfigError("policy", "--policy entry '" + item + "' is not an integer");
    }
  }
  try {
    mdp.validate_policy(pi);
  } catch (const InvalidArgument& e) {
    throw ConfigError("policy", e.what());
  }
  return pi;
}

std::vector<double> parse_range(const std::string& text, const char* flag) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(item);
  try {
    if (parts.size() == 1) return {std::stod(parts[0])};
    if (parts.size() == 3) {
      return log_space(std::stod(parts[0]), std::stod(parts[1]), std::stoi(parts[2]));
    }
  } catch (const InvalidArgument& e) {
    throw ConfigError(flag, std::string(flag) + ": " + e.what());
  } catch (const std::exception&) {
  }
  throw ConfigError(flag, std::string(flag) + " expects 'value' or 'lo:hi:count', got '" + text + "'");
}

// ---- solve ----------------------------------------------------------------

struct SolveOpts {
  Common common;
  std::string evaluator;
  std::optional<int> max_iters;
  std::optional<int> n_clock;
  std::optional<int> vqls_layers;
  std::optional<std::size_t> vqls_terms;
  std::optional<int> vqls_iters;
  std::optional<double> learning_rate;
};

int run_solve(const SolveOpts& o) {
  const auto cfg = load(o.common);
  const auto seed = resolve_seed(o.common, cfg);
  const auto& so = cfg.solver;
  const std::string which = !o.evaluator.empty() ? o.evaluator : so.evaluator.value_or("exact");
  const int k = o.max_iters.value_or(so.max_iters.value_or(20));

  EvaluatorKind evaluator = ExactEvaluator{};
  if (which == "hhl") {
    HhlEvaluator e;
    e.config.n_clock = o.n_clock.value_or(so.hhl_n_clock.value_or(6));
    e.config.seed = seed;
    evaluator = e;
  } else if (which == "vqls") {
    VqlsEvaluator e;
    e.n_layers = o.vqls_layers.value_or(so.vqls_layers.value_or(2));
    e.n_terms = o.vqls_terms ? o.vqls_terms : so.vqls_terms;
    e.config.learning_rate = o.learning_rate.value_or(so.vqls_learning_rate.value_or(0.5));
    e.config.max_iters = o.vqls_iters.value_or(so.vqls_max_iters.value_or(500));
    e.config.seed = seed;
    evaluator = e;
  } else if (which != "exact") {
    throw ConfigError("evaluator", "unknown evaluator '" + which + "'");
  }

  const auto mdp = build_inventory_mdp(cfg.params, cfg.demand);
  const auto result = policy_iteration(mdp, cfg.params.gamma, k, evaluator);

  const fs::path out = o.common.out_dir;
  write_file(out / "policy.json", [&](std::ostream& os) {
    os << policy_json(result.policy, mdp, cfg.params.gamma, result);
  });
  write_file(out / "trace.jsonl", [&](std::ostream& os) { result.trace.write_jsonl(os); });

  std::cout << "evaluator: " << which << "  |S|=" << mdp.n_states() << "  |A|=" << mdp.n_actions()
            << "  gamma=" << cfg.params.gamma << "\n\n";
  print_convergence_table(std::cout, result.trace);
  std::cout << '\n';
  print_policy_table(std::cout, result.policy);
  if (!result.converged) {
    std::cout << "\nwarning: policy still changing after K=" << k << " iterations\n";
  }
  return kOk;
}

// ---- lcu ------------------------------------------------------------------

struct LcuOpts {
  Common common;
  std::string policy;
  std::optional<std::size_t> keep;
};

int run_lcu(const LcuOpts& o) {
  const auto cfg = load(o.common);
  const auto mdp = build_inventory_mdp(cfg.params, cfg.demand);
  const Policy pi = parse_policy(o.policy, mdp);
  const auto b = bellman_system_matrix(mdp, pi, cfg.params.gamma);
  const std::vector<double> r(mdp.reward().begin(), mdp.reward().end());
  const auto sys = hermitian_embed(b, r);
  if (sys.n_qubits > 8) {
    throw ConfigError("instance", "embedded system needs " + std::to_string(sys.n_qubits) +
                                      " qubits; LCU export supports at most 8");
  }
  const auto full = lcu_decompose(sys);
  if (o.keep && (*o.keep < 1 || *o.keep > full.size())) {
    throw ConfigError("L", "-L must lie in [1, " + std::to_string(full.size()) + "]");
  }
  const auto lcu = o.keep ? lcu_truncate(full, *o.keep) : full;

  const fs::path out = o.common.out_dir;
  write_file(out / "lcu.csv", [&](std::ostream& os) { write_lcu_csv(os, lcu); });
  write_file(out / "lcu_histogram.csv", [&](std::ostream& os) { write_histogram_csv(os, lcu); });

  const double frob_sq = full.source_norm * full.source_norm;
  std::cout << "qubits: " << lcu.n_qubits << "\nterms: " << full.size() << " (kept "
            << lcu.size() << ")\nfrobenius norm: " << full.source_norm
            << "\nparseval gap: " << std::abs(full.parseval_norm_sq() - frob_sq)
            << "\ntruncation error (frobenius): " << lcu.truncation_error << '\n';
  return kOk;
}

// ---- gates ----------------------------------------------------------------

struct GatesOpts {
  Common common;
  int n_max = 6;
  std::vector<std::size_t> l_list{1, 4, 9, 16};
  int n_clock = 6;
};

int run_gates(const GatesOpts& o) {
  if (o.n_max < 1 || o.n_max > 6) throw ConfigError("n-max", "--n-max must lie in [1, 6]");
  if (o.l_list.empty()) throw ConfigError("l-list", "--l-list must not be empty");
  const auto cfg = load(o.common);
  const auto mdp = build_inventory_mdp(cfg.params, cfg.demand);
  const auto b = bellman_system_matrix(mdp, Policy::constant(mdp.n_states(), 0), cfg.params.gamma);
  const std::vector<double> r(mdp.reward().begin(), mdp.reward().end());
  HhlConfig hc;
  hc.n_clock = o.n_clock;
  const auto grid = gate_count_grid(o.n_max, o.l_list, b, r, hc);

  write_file(fs::path(o.common.out_dir) / "gates.csv",
             [&](std::ostream& os) { write_gate_grid_csv(os, grid); });
  std::cout << "   N";
  for (auto l : o.l_list) std::cout << std::setw(12) << ("L=" + std::to_string(l));
  std::cout << '\n';
  for (int n = 1; n <= o.n_max; ++n) {
    std::cout << std::setw(4) << n;
    for (const auto& cell : grid) {
      if (cell.n_qubits != n) continue;
      std::cout << std::setw(12) << (cell.gates ? std::to_string(*cell.gates) : "x");
    }
    std::cout << '\n';
  }
  return kOk;
}

// ---- qram -----------------------------------------------------------------

struct QramOpts {
  Common common;
  std::string n_range = "2:1e9:9";
  std::string f_range = "1e-9:1e-1:9";
  std::string gd = "1kHz*2pi";
  std::string nu = "10MHz*2pi";
  double cd = 4.5;
  std::string kappa_gamma = "0";
  std::string log_base = "2";
  std::optional<double> n;
  std::optional<double> one_minus_f;
};

int run_qram(const QramOpts& o) {
  QramHardwareParams hw;
  try {
    hw.g_d = parse_angular_rate(o.gd);
    hw.nu = parse_angular_rate(o.nu);
    hw.c_d = o.cd;
    hw.kappa_plus_gamma = parse_angular_rate(o.kappa_gamma);
    hw.validate();
  } catch (const InvalidArgument& e) {
    throw ConfigError("hardware", e.what());
  }
  if (o.log_base != "2" && o.log_base != "e") {
    throw ConfigError("log-base", "--log-base must be 2 or e");
  }
  const LogBase base = o.log_base == "2" ? LogBase::Two : LogBase::Natural;

  std::cout << "log base: " << o.log_base << "\nhardware epsilon: " << epsilon_from_hardware(hw)
            << "\ncoupling floor (g_d/nu)^2: " << coupling_floor(hw) << '\n';

  if (o.n || o.one_minus_f) {
    if (!o.n || !o.one_minus_f) {
      throw ConfigError("n", "--n and --one-minus-f must be given together");
    }
    double eps = 0.0;
    try {
      eps = epsilon_bound(*o.one_minus_f, *o.n, base);
    } catch (const InvalidArgument& e) {
      throw ConfigError("n", e.what());
    }
    std::cout << "N=" << *o.n << " 1-F=" << *o.one_minus_f << "\nepsilon: " << eps << '\n';
    const double budget = decoherence_budget(eps, hw);
    std::cout << "kappa+gamma budget: " << budget << " rad/s (" << budget / (2.0 * std::numbers::pi)
              << " Hz)\n";
    if (budget < hw.kappa_plus_gamma) {
      throw InfeasibleError("kappa+gamma " + std::to_string(hw.kappa_plus_gamma) +
                            " rad/s exceeds the budget");
    }
    return kOk;
  }

  const auto ns = parse_range(o.n_range, "n-range");
  const auto fs_ = parse_range(o.f_range, "fidelity-range");
  std::vector<FeasibilityCell> grid;
  try {
    grid = feasibility_grid(ns, fs_, hw, base);
  } catch (const InvalidArgument& e) {
    throw ConfigError("n-range", e.what());
  }
  write_file(fs::path(o.common.out_dir) / "qram.csv",
             [&](std::ostream& os) { write_feasibility_csv(os, grid); });
  for (const auto& c : grid) {
    if (c.highlighted && std::abs(c.n - 1e3) < 1e-6 && std::abs(c.one_minus_f - 1e-3) < 1e-15) {
      std::cout << "N=1e3, 1-F=1e-3: epsilon=" << c.epsilon
                << " kappa+gamma budget=" << c.kappa_plus_gamma << " rad/s ("
                << c.kappa_plus_gamma / (2.0 * std::numbers::pi) << " Hz)\n";
    }
  }
  std::cout << "cells: " << grid.size() << '\n';
  return kOk;
}

// ---- vqls -----------------------------------------------------------------

struct VqlsOpts {
  Common common;
  std::string policy;
  bool identity = false;
  int qubits = 1;
  std::optional<int> layers;
  std::optional<std::size_t> terms;
  std::optional<double> learning_rate;
  std::optional<int> iters;
  std::string gradient = "shift";
  std::optional<double> noise;
  std::optional<int> trajectories;
  double target = 1e-8;
  int patience = 50;
};

int run_vqls(const VqlsOpts& o) {
  InstanceConfig cfg = o.identity ? default_instance() : load(o.common);
  const auto seed = resolve_seed(o.common, cfg);

  std::optional<VqlsProblem> problem;
  if (o.identity) {
    if (o.qubits < 1 || o.qubits > kMaxSimQubits) throw ConfigError("qubits", "--qubits out of range");
    LcuDecomposition lcu{o.qubits, {{1.0, PauliString::identity(o.qubits)}}, 0.0, 0.0};
    std::vector<double> r(std::size_t{1} << o.qubits, 0.0);
    r[0] = 1.0;
    problem.emplace(std::move(lcu), r);
  } else {
    const auto mdp = build_inventory_mdp(cfg.params, cfg.demand);
    const Policy pi = parse_policy(o.policy, mdp);
    const auto b = bellman_system_matrix(mdp, pi, cfg.params.gamma);
    const std::vector<double> r(mdp.reward().begin(), mdp.reward().end());
    const auto sys = hermitian_embed(b, r);
    if (sys.n_qubits > 8) throw ConfigError("instance", "embedded system exceeds 8 qubits");
    auto lcu = lcu_decompose(sys);
    const auto keep = o.terms ? o.terms : cfg.solver.vqls_terms;
    if (keep) {
      if (*keep < 1 || *keep > lcu.size()) throw ConfigError("terms", "--terms out of range");
      lcu = lcu_truncate(lcu, *keep);
    }
    const std::vector<double> rhs(sys.rhs.data(), sys.rhs.data() + sys.rhs.size());
    problem.emplace(std::move(lcu), rhs);
  }

  const auto& so = cfg.solver;
  const AnsatzConfig ansatz{problem->n_qubits(), o.layers.value_or(so.vqls_layers.value_or(2))};
  VqlsConfig vc;
  vc.learning_rate = o.learning_rate.value_or(so.vqls_learning_rate.value_or(0.5));
  vc.max_iters = o.iters.value_or(so.vqls_max_iters.value_or(500));
  vc.seed = seed;
  vc.target_cost = o.target;
  vc.divergence_patience = o.patience;
  vc.trajectories = o.trajectories.value_or(so.vqls_trajectories.value_or(20));
  const double noise = o.noise.value_or(so.vqls_noise.value_or(0.0));
  if (o.gradient == "fd") {
    vc.gradient = GradientMethod::FiniteDifference;
  } else if (o.gradient != "shift") {
    throw ConfigError("gradient", "--gradient must be shift or fd");
  }
  try {
    ansatz.validate();
    vc.validate();
  } catch (const InvalidArgument& e) {
    throw ConfigError("vqls", e.what());
  }

  const auto clean = vqls_solve(*problem, ansatz, vc);
  std::optional<VqlsResult> noisy;
  if (noise > 0.0) {
    VqlsConfig nc = vc;
    nc.noise = NoiseModel{noise, noise, seed};
    try {
      nc.validate();
    } catch (const InvalidArgument& e) {
      throw ConfigError("noise", e.what());
    }
    noisy = vqls_solve(*problem, ansatz, nc);
  }

  write_file(fs::path(o.common.out_dir) / "trace.csv", [&](std::ostream& os) {
    os.precision(17);
    os << "iter,cost,grad_norm";
    if (noisy) os << ",noisy_cost,noisy_grad_norm";
    os << '\n';
    const auto& a = clean.trace.records;
    const std::size_t rows = std::max(a.size(), noisy ? noisy->trace.records.size() : 0);
    for (std::size_t i = 0; i < rows; ++i) {
      os << i << ',';
      if (i < a.size()) os << a[i].cost << ',' << a[i].grad_norm;
      else os << ',';
      if (noisy) {
        const auto& b = noisy->trace.records;
        os << ',';
        if (i < b.size()) os << b[i].cost << ',' << b[i].grad_norm;
        else os << ',';
      }
      os << '\n';
    }
  });

  std::cout << "qubits: " << ansatz.n_qubits << "  layers: " << ansatz.n_layers
            << "  terms: " << problem->lcu().size() << "  seed: " << seed << '\n'
            << "noiseless: " << clean.trace.records.front().cost << " -> " << clean.final_cost
            << " in " << clean.trace.records.size() - 1 << " iterations ("
            << clean.trace.wall_seconds << " s)\n";
  if (noisy) {
    std::cout << "noisy p=" << noise << ": " << noisy->trace.records.front().cost << " -> "
              << noisy->final_cost << " in " << noisy->trace.records.size() - 1
              << " iterations (" << noisy->trace.wall_seconds << " s)\n";
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Policy iteration with classical and simulated quantum linear solvers"};
  app.require_subcommand(1);

  SolveOpts solve;
  auto* s = app.add_subcommand("solve", "run policy iteration");
  add_common(s, solve.common);
  s->add_option("--evaluator", solve.evaluator, "exact, hhl or vqls")
      ->check(CLI::IsMember({"exact", "hhl", "vqls"}));
  s->add_option("-K,--max-iters", solve.max_iters, "policy-iteration cap");
  s->add_option("--n-clock", solve.n_clock, "HHL clock qubits");
  s->add_option("--vqls-layers", solve.vqls_layers, "VQLS ansatz layers");
  s->add_option("--vqls-terms", solve.vqls_terms, "LCU terms kept for VQLS");
  s->add_option("--vqls-iters", solve.vqls_iters, "VQLS descent steps per evaluation");
  s->add_option("--learning-rate", solve.learning_rate, "VQLS learning rate");

  LcuOpts lcu;
  auto* l = app.add_subcommand("lcu", "Pauli decomposition of the embedded system");
  add_common(l, lcu.common);
  l->add_option("--policy", lcu.policy, "comma-separated orders per state (default all 0)");
  l->add_option("-L,--keep", lcu.keep, "keep the L largest terms");

  GatesOpts gates;
  auto* g = app.add_subcommand("gates", "gate-count grid for the LCU-form HHL circuit");
  add_common(g, gates.common);
  g->add_option("--n-max", gates.n_max, "largest register size");
  g->add_option("--l-list", gates.l_list, "LCU term counts")->delimiter(',');
  g->add_option("--n-clock", gates.n_clock, "clock qubits");

  QramOpts qram;
  auto* q = app.add_subcommand("qram", "QRAM feasibility estimates");
  add_common(q, qram.common, false);
  q->add_option("--n-range", qram.n_range, "N values: value or lo:hi:count (log-spaced)");
  q->add_option("--fidelity-range", qram.f_range, "1-F values: value or lo:hi:count");
  q->add_option("--gd", qram.gd, "direct coupling g_d (rad/s, or e.g. 1kHz*2pi)");
  q->add_option("--nu", qram.nu, "free spectral range (rad/s, or e.g. 10MHz*2pi)");
  q->add_option("--cd", qram.cd, "gate-depth constant c_d");
  q->add_option("--kappa-gamma", qram.kappa_gamma, "decoherence rate kappa+gamma");
  q->add_option("--log-base", qram.log_base, "2 or e");
  q->add_option("--n", qram.n, "single query: data size N");
  q->add_option("--one-minus-f", qram.one_minus_f, "single query: target infidelity");

  VqlsOpts vq;
  auto* v = app.add_subcommand("vqls", "variational linear solve of one evaluation step");
  add_common(v, vq.common);
  v->add_option("--policy", vq.policy, "comma-separated orders per state (default all 0)");
  v->add_flag("--identity", vq.identity, "toy system B = I, r = |0...0>");
  v->add_option("--qubits", vq.qubits, "register size for --identity");
  v->add_option("--layers", vq.layers, "ansatz layers");
  v->add_option("--terms", vq.terms, "LCU terms kept");
  v->add_option("--lr", vq.learning_rate, "learning rate");
  v->add_option("--iters", vq.iters, "max iterations");
  v->add_option("--gradient", vq.gradient, "shift or fd");
  v->add_option("--noise", vq.noise, "depolarizing probability (also run noisy)");
  v->add_option("--trajectories", vq.trajectories, "noise trajectories per expectation");
  v->add_option("--target", vq.target, "stop once the cost drops below this");
  v->add_option("--patience", vq.patience, "consecutive cost increases before giving up")
      ->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kConfig;
  }

  try {
    if (*s) return run_solve(solve);
    if (*l) return run_lcu(lcu);
    if (*g) return run_gates(gates);
    if (*q) return run_qram(qram);
    if (*v) return run_vqls(vq);
  } catch (const ConfigError& e) {
    std::cerr << "config error [" << e.key() << "]: " << e.what() << '\n';
    return kConfig;
  } catch (const InvalidArgument& e) {
    std::cerr << "invalid argument: " << e.what() << '\n';
    return kConfig;
  } catch (const InfeasibleError& e) {
    std::cerr << "infeasible: " << e.what() << '\n';
    return kInfeasible;
  } catch (const DivergenceError& e) {
    std::cerr << "diverged: " << e.what() << '\n';
    return kDivergence;
  } catch (const EvaluatorError& e) {
    std::cerr << "evaluator failure: " << e.what() << '\n';
    return kEvaluator;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kEvaluator;
  }
  return kConfig;
}
