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

#include "qpi/hhl.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <ostream>

#include <nlohmann/json.hpp>

#include "qpi/errors.hpp"

namespace qpi {

namespace {

using std::numbers::pi;

struct Spectrum {
  Eigen::VectorXd values;
  Eigen::MatrixXcd vectors;
};

Spectrum spectrum(const Eigen::MatrixXcd& h) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
  if (es.info() != Eigen::Success) throw Error("eigendecomposition failed");
  return {es.eigenvalues(), es.eigenvectors()};
}

double max_abs(const Eigen::VectorXd& v) { return v.cwiseAbs().maxCoeff(); }
double min_abs(const Eigen::VectorXd& v) { return v.cwiseAbs().minCoeff(); }

int data_qubits(Eigen::Index dim) {
  const auto u = static_cast<std::uint64_t>(dim);
  if (dim < 2 || !std::has_single_bit(u)) {
    throw InvalidArgument("HHL system dimension must be a power of two >= 2");
  }
  return std::countr_zero(u);
}

void append_state_preparation(Circuit& c, std::span<const double> r) {
  const auto n = static_cast<int>(std::countr_zero(r.size()));
  // Block norms per level: norms[q][p] is the norm of the amplitudes whose
  // bits above q-1 equal p.
  std::vector<std::vector<double>> norms(static_cast<std::size_t>(n) + 1);
  norms[0].assign(r.begin(), r.end());
  for (auto& v : norms[0]) v = std::abs(v);
  for (int q = 1; q <= n; ++q) {
    const auto& below = norms[static_cast<std::size_t>(q) - 1];
    auto& cur = norms[static_cast<std::size_t>(q)];
    cur.resize(below.size() / 2);
    for (std::size_t p = 0; p < cur.size(); ++p) cur[p] = std::hypot(below[2 * p], below[2 * p + 1]);
  }
  for (int q = n - 1; q >= 0; --q) {
    const std::size_t n_blocks = std::size_t{1} << (n - 1 - q);
    std::vector<double> angles(n_blocks, 0.0);
    for (std::size_t p = 0; p < n_blocks; ++p) {
      double lo, hi;
      if (q == 0) {
        lo = r[2 * p];
        hi = r[2 * p + 1];
      } else {
        const auto& below = norms[static_cast<std::size_t>(q)];
        lo = below[2 * p];
        hi = below[2 * p + 1];
      }
      angles[p] = (lo == 0.0 && hi == 0.0) ? 0.0 : 2.0 * std::atan2(hi, lo);
    }
    std::vector<int> controls;
    for (int k = q + 1; k < n; ++k) controls.push_back(k);
    if (controls.empty()) {
      c.ry(q, angles[0]);
    } else {
      c.multiplexed_ry(q, std::move(controls), std::move(angles));
    }
  }
}

Circuit phase_estimation(const HhlLayout& layout, const std::vector<Circuit>& powers) {
  Circuit c(layout.total());
  for (int k = 0; k < layout.n_clock; ++k) c.h(layout.clock(k));
  for (const auto& p : powers) c.append(p);
  const auto clock = layout.clock_qubits();
  c.append(qft_circuit(layout.total(), clock).inverse());
  return c;
}

Circuit assemble(const HhlLayout& layout, const Circuit& qpe, double t, double rot_c) {
  Circuit c = qpe;
  c.multiplexed_ry(layout.ancilla(), layout.clock_qubits(),
                   inversion_angles(layout.n_clock, t, rot_c));
  c.append(qpe.inverse());
  return c;
}

}  // namespace

void HhlConfig::validate() const {
  if (n_clock < 1) throw InvalidArgument("n_clock must be >= 1");
  if (evolution_time && !(*evolution_time > 0.0)) {
    throw InvalidArgument("evolution time must be positive");
  }
  if (rotation_constant && !(*rotation_constant > 0.0)) {
    throw InvalidArgument("rotation constant must be positive");
  }
  if (shots < 0) throw InvalidArgument("shots must be >= 0");
}

std::string HhlReport::to_json() const {
  nlohmann::json j;
  j["fidelity"] = solution_fidelity;
  j["success_prob"] = success_probability;
  if (sampled_success_probability) j["sampled_success_prob"] = *sampled_success_probability;
  j["residual"] = residual;
  j["counts"] = gate_counts.to_map();
  j["n_qubits_total"] = n_qubits_total;
  j["n_clock"] = n_clock;
  j["evolution_time"] = evolution_time;
  j["rotation_constant"] = rotation_constant;
  j["aliasing_warning"] = aliasing_warning;
  return j.dump();
}

std::vector<int> HhlLayout::clock_qubits() const {
  std::vector<int> q(static_cast<std::size_t>(n_clock));
  for (int k = 0; k < n_clock; ++k) q[static_cast<std::size_t>(k)] = clock(k);
  return q;
}

StateVector prepare_rhs_state(std::span<const double> r) {
  double nrm = 0.0;
  for (double v : r) nrm += v * v;
  if (!(nrm > 0.0)) throw InvalidArgument("right-hand side is the zero vector");
  return StateVector::from_real(r);
}

Circuit state_preparation_circuit(std::span<const double> r) {
  const int n = data_qubits(static_cast<Eigen::Index>(r.size()));
  prepare_rhs_state(r);  // rejects the zero vector
  Circuit c(n);
  append_state_preparation(c, r);
  return c;
}

Eigen::MatrixXcd evolution_unitary(const Eigen::MatrixXcd& h, double t) {
  if (h.rows() != h.cols()) throw InvalidArgument("Hamiltonian must be square");
  const auto s = spectrum(h);
  Eigen::VectorXcd phases(s.values.size());
  for (Eigen::Index k = 0; k < s.values.size(); ++k) phases(k) = std::polar(1.0, s.values(k) * t);
  return s.vectors * phases.asDiagonal() * s.vectors.adjoint();
}

Circuit qft_circuit(int n_register, std::span<const int> qubits) {
  Circuit c(n_register);
  const int n = static_cast<int>(qubits.size());
  for (int i = n - 1; i >= 0; --i) {
    c.h(qubits[static_cast<std::size_t>(i)]);
    for (int j = i - 1; j >= 0; --j) {
      c.cphase(qubits[static_cast<std::size_t>(j)], qubits[static_cast<std::size_t>(i)],
               pi / static_cast<double>(1 << (i - j)));
    }
  }
  for (int k = 0; k < n / 2; ++k) {
    c.swap(qubits[static_cast<std::size_t>(k)], qubits[static_cast<std::size_t>(n - 1 - k)]);
  }
  return c;
}

double default_evolution_time(double lambda_max, int n_clock) {
  if (!(lambda_max > 0.0)) throw InvalidArgument("lambda_max must be positive");
  const double m = std::ldexp(1.0, n_clock);
  const double top = n_clock == 1 ? 0.5 : m / 2.0 - 1.0;
  return 2.0 * pi * top / (m * lambda_max);
}

double clock_eigenvalue(std::uint64_t clock_value, int n_clock, double t) {
  const auto m = std::int64_t{1} << n_clock;
  auto v = static_cast<std::int64_t>(clock_value);
  if (v >= m / 2) v -= m;
  return 2.0 * pi * static_cast<double>(v) / (static_cast<double>(m) * t);
}

std::vector<double> inversion_angles(int n_clock, double t, double c) {
  const std::size_t m = std::size_t{1} << n_clock;
  std::vector<double> angles(m, 0.0);
  for (std::size_t v = 1; v < m; ++v) {
    const double lambda = clock_eigenvalue(v, n_clock, t);
    angles[v] = 2.0 * std::asin(std::clamp(c / lambda, -1.0, 1.0));
  }
  return angles;
}

Circuit hhl_core_circuit(const Eigen::MatrixXcd& h, int n_clock, double t, double c) {
  const HhlLayout layout{data_qubits(h.rows()), n_clock};
  std::vector<int> data(static_cast<std::size_t>(layout.n_data));
  for (int q = 0; q < layout.n_data; ++q) data[static_cast<std::size_t>(q)] = q;

  const auto s = spectrum(h);
  std::vector<Circuit> powers;
  for (int k = 0; k < n_clock; ++k) {
    const double tk = t * std::ldexp(1.0, k);
    Eigen::VectorXcd phases(s.values.size());
    for (Eigen::Index e = 0; e < s.values.size(); ++e) phases(e) = std::polar(1.0, s.values(e) * tk);
    Circuit p(layout.total());
    p.unitary(data, s.vectors * phases.asDiagonal() * s.vectors.adjoint(), {layout.clock(k)});
    powers.push_back(std::move(p));
  }
  return assemble(layout, phase_estimation(layout, powers), t, c);
}

Circuit hhl_lcu_circuit(const LcuDecomposition& lcu, std::span<const double> rhs, int n_clock,
                        double t, double c) {
  const HhlLayout layout{lcu.n_qubits, n_clock};
  if (rhs.size() != (std::size_t{1} << lcu.n_qubits)) {
    throw InvalidArgument("rhs length does not match the LCU register");
  }
  std::vector<Circuit> powers;
  for (int k = 0; k < n_clock; ++k) {
    const double tk = t * std::ldexp(1.0, k);
    Circuit p(layout.total());
    for (const auto& term : lcu.terms) {
      std::vector<Pauli> ops(static_cast<std::size_t>(layout.total()), Pauli::I);
      std::copy(term.pauli.ops().begin(), term.pauli.ops().end(), ops.begin());
      // exp(i a t P) = exp(-i (theta/2) P) with theta = -2 a t.
      p.pauli_rotation(PauliString(std::move(ops)), -2.0 * term.coefficient * tk, {layout.clock(k)});
    }
    powers.push_back(std::move(p));
  }

  Circuit c_full(layout.total());
  const bool has_rhs = std::any_of(rhs.begin(), rhs.end(), [](double v) { return v != 0.0; });
  if (has_rhs) append_state_preparation(c_full, rhs);
  c_full.append(assemble(layout, phase_estimation(layout, powers), t, c));
  return c_full;
}

HhlResult hhl_solve(const EmbeddedSystem& sys, const HhlConfig& cfg) {
  cfg.validate();
  const HhlLayout layout{data_qubits(sys.h.rows()), cfg.n_clock};
  if (layout.total() > kMaxSimQubits) {
    throw InvalidArgument("HHL register needs " + std::to_string(layout.total()) +
                          " qubits, simulator cap is " + std::to_string(kMaxSimQubits));
  }
  const auto s = spectrum(sys.h);
  const double lambda_min = min_abs(s.values);
  const double lambda_max = max_abs(s.values);
  if (lambda_min < 1e-12) throw SingularMatrixError("embedded system is singular");

  const double t = cfg.evolution_time.value_or(default_evolution_time(lambda_max, cfg.n_clock));
  const double rot_c = cfg.rotation_constant.value_or(lambda_min);
  if (rot_c > lambda_min * (1.0 + 1e-12)) {
    throw InvalidArgument("rotation constant exceeds the smallest |eigenvalue|");
  }

  HhlReport report;
  report.n_clock = cfg.n_clock;
  report.n_qubits_total = layout.total();
  report.evolution_time = t;
  report.rotation_constant = rot_c;
  const double m = std::ldexp(1.0, cfg.n_clock);
  report.aliasing_warning = lambda_max * t * m / (2.0 * pi) > m / 2.0 - 0.5;

  const Circuit core = hhl_core_circuit(sys.h, cfg.n_clock, t, rot_c);
  const std::vector<double> rhs(sys.rhs.data(), sys.rhs.data() + sys.rhs.size());
  const StateVector rhs_state = prepare_rhs_state(rhs);

  StateVector psi(layout.total());
  auto amps = psi.amplitudes();
  amps[0] = 0.0;
  for (std::size_t d = 0; d < rhs_state.dim(); ++d) amps[d] = rhs_state[d];
  apply_circuit_inplace(psi, core);

  const std::uint64_t anc = std::uint64_t{1} << layout.ancilla();
  double p_anc = 0.0;
  for (std::uint64_t k = 0; k < psi.dim(); ++k) {
    if (k & anc) p_anc += std::norm(psi[k]);
  }
  report.success_probability = std::clamp(p_anc, 0.0, 1.0);
  if (cfg.post_select && p_anc < kMinSuccessProbability) {
    throw PostSelectionError(p_anc, "HHL post-selection starved (p = " + std::to_string(p_anc) + ")");
  }
  if (cfg.shots > 0) {
    const int q = layout.ancilla();
    const auto counts = sample_measurement(psi, std::span<const int>(&q, 1), cfg.shots, cfg.seed);
    const auto it = counts.find("1");
    report.sampled_success_probability =
        static_cast<double>(it == counts.end() ? 0 : it->second) / cfg.shots;
  }

  // Post-selected branch (ancilla 1, clock back at 0); amplitudes there are
  // sum_l r_l (C / lambda_l) |E_l> times ||r||^-1.
  const double r_norm = sys.rhs.norm();
  Eigen::VectorXd x(static_cast<Eigen::Index>(sys.padded_dim()));
  for (std::size_t d = 0; d < sys.padded_dim(); ++d) {
    x(static_cast<Eigen::Index>(d)) = psi[d | anc].real() * r_norm / rot_c;
  }

  HhlResult out;
  out.solution = sys.extract_solution(x);
  out.embedded_solution = x;

  const Eigen::VectorXd exact = sys.h.real().partialPivLu().solve(sys.rhs);
  const auto q_exact = sys.extract_solution(exact);
  double dot = 0.0, nq = 0.0, ne = 0.0;
  for (std::size_t k = 0; k < q_exact.size(); ++k) {
    dot += out.solution[k] * q_exact[k];
    nq += out.solution[k] * out.solution[k];
    ne += q_exact[k] * q_exact[k];
  }
  report.solution_fidelity = (nq > 0.0 && ne > 0.0) ? std::clamp(dot * dot / (nq * ne), 0.0, 1.0) : 0.0;
  report.residual = (sys.h.real() * x - sys.rhs).cwiseAbs().maxCoeff();
  report.gate_counts = count_gates(core) + count_gates(state_preparation_circuit(rhs));
  out.report = report;
  return out;
}

bool gate_count_allowed(int n_qubits, std::size_t n_terms) {
  if (n_qubits < 1 || n_terms < 1) return false;
  if (n_qubits == 1) return n_terms == 1;
  return n_terms <= (std::size_t{1} << (2 * n_qubits));
}

HhlReport gate_count_report(int n_qubits, std::size_t n_terms, const SparseMatrix& b,
                            std::span<const double> r, const HhlConfig& cfg) {
  cfg.validate();
  if (n_qubits < 1 || n_qubits > 6) throw InvalidArgument("gate counting supports 1..6 qubits");
  if (!gate_count_allowed(n_qubits, n_terms)) {
    throw DisallowedError("N=" + std::to_string(n_qubits) + " cannot hold L=" +
                          std::to_string(n_terms) + " LCU terms");
  }
  const std::size_t half = std::size_t{1} << (n_qubits - 1);
  if (b.rows() < half || b.cols() < half || r.size() < half) {
    throw InvalidArgument("source system smaller than the requested leading block");
  }
  const auto n = static_cast<Eigen::Index>(half);
  const Eigen::MatrixXd block = b.to_dense().topLeftCorner(n, n);
  const std::vector<double> r_block(r.begin(), r.begin() + static_cast<std::ptrdiff_t>(half));
  const auto sys = hermitian_embed(block, r_block);

  // Keep every string (zero coefficients included) so L slots always exist.
  const auto lcu = lcu_truncate(lcu_decompose(sys.h, 0.0), n_terms);
  const auto s = spectrum(lcu.reconstruct());
  double lambda_max = max_abs(s.values);
  double lambda_min = 0.0;
  for (Eigen::Index k = 0; k < s.values.size(); ++k) {
    const double a = std::abs(s.values(k));
    if (a > 1e-12 && (lambda_min == 0.0 || a < lambda_min)) lambda_min = a;
  }
  if (!(lambda_max > 1e-12)) lambda_max = 1.0;
  if (lambda_min == 0.0) lambda_min = 1.0;
  const double t = cfg.evolution_time.value_or(default_evolution_time(lambda_max, cfg.n_clock));

  const std::vector<double> rhs(sys.rhs.data(), sys.rhs.data() + sys.rhs.size());
  const Circuit c = hhl_lcu_circuit(lcu, rhs, cfg.n_clock, t, cfg.rotation_constant.value_or(lambda_min));

  HhlReport report;
  report.gate_counts = count_gates(c);
  report.n_qubits_total = c.n_qubits();
  report.n_clock = cfg.n_clock;
  report.evolution_time = t;
  report.rotation_constant = cfg.rotation_constant.value_or(lambda_min);
  return report;
}

std::vector<GateGridCell> gate_count_grid(int n_max, std::span<const std::size_t> l_list,
                                          const SparseMatrix& b, std::span<const double> r,
                                          const HhlConfig& cfg) {
  std::vector<GateGridCell> grid;
  for (int n = 1; n <= n_max; ++n) {
    for (std::size_t l : l_list) {
      GateGridCell cell{n, l, std::nullopt};
      if (gate_count_allowed(n, l)) cell.gates = gate_count_report(n, l, b, r, cfg).gate_counts.total();
      grid.push_back(cell);
    }
  }
  return grid;
}

void write_gate_grid_csv(std::ostream& os, std::span<const GateGridCell> grid) {
  os << "N,L,gates\n";
  for (const auto& cell : grid) {
    os << cell.n_qubits << ',' << cell.n_terms << ',';
    if (cell.gates) {
      os << *cell.gates;
    } else {
      os << "disallowed";
    }
    os << '\n';
  }
}

}  // namespace qpi
