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

#include "qpi/qsim.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <ostream>
#include <sstream>

#include "qpi/errors.hpp"

namespace qpi {

namespace {

constexpr double kUnitaryTolerance = 1e-10;
const Complex kI{0.0, 1.0};

std::uint64_t bit(int q) { return std::uint64_t{1} << q; }

std::uint64_t mask_of(std::span<const int> qubits) {
  std::uint64_t m = 0;
  for (int q : qubits) m |= bit(q);
  return m;
}

void check_qubits(int n_qubits, std::span<const int> qubits) {
  std::uint64_t seen = 0;
  for (int q : qubits) {
    if (q < 0 || q >= n_qubits) {
      throw InvalidArgument("qubit index " + std::to_string(q) + " out of range");
    }
    if (seen & bit(q)) throw InvalidArgument("qubit used twice in one gate");
    seen |= bit(q);
  }
}

std::string kind_name(GateKind kind) {
  switch (kind) {
    case GateKind::H: return "H";
    case GateKind::X: return "X";
    case GateKind::Y: return "Y";
    case GateKind::Z: return "Z";
    case GateKind::S: return "S";
    case GateKind::Sdg: return "SDG";
    case GateKind::T: return "T";
    case GateKind::Tdg: return "TDG";
    case GateKind::Rx: return "RX";
    case GateKind::Ry: return "RY";
    case GateKind::Rz: return "RZ";
    case GateKind::Phase: return "P";
    case GateKind::CZ: return "CZ";
    case GateKind::CX: return "CX";
    case GateKind::SWAP: return "SWAP";
    case GateKind::Unitary: return "U";
    case GateKind::PauliString: return "PAULI";
    case GateKind::PauliRotation: return "PAULIROT";
    case GateKind::MultiplexedRy: return "MUXRY";
  }
  return "?";
}

bool is_single_qubit_kind(GateKind kind) {
  switch (kind) {
    case GateKind::H: case GateKind::X: case GateKind::Y: case GateKind::Z:
    case GateKind::S: case GateKind::Sdg: case GateKind::T: case GateKind::Tdg:
    case GateKind::Rx: case GateKind::Ry: case GateKind::Rz: case GateKind::Phase:
      return true;
    default:
      return false;
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// StateVector

StateVector::StateVector(int n_qubits) : StateVector(std::vector<Complex>{}, n_qubits) {
  amps_.assign(std::size_t{1} << n_qubits, Complex{0.0, 0.0});
  amps_[0] = 1.0;
}

StateVector::StateVector(std::vector<Complex> amps, int n_qubits)
    : n_qubits_(n_qubits), amps_(std::move(amps)) {
  if (n_qubits < 1 || n_qubits > kMaxSimQubits) {
    throw InvalidArgument("simulator supports 1.." + std::to_string(kMaxSimQubits) +
                          " qubits, got " + std::to_string(n_qubits));
  }
}

StateVector StateVector::basis(int n_qubits, std::uint64_t index) {
  StateVector s(n_qubits);
  if (index >= s.dim()) throw InvalidArgument("basis index out of range");
  s.amps_[0] = 0.0;
  s.amps_[index] = 1.0;
  return s;
}

StateVector StateVector::from_amplitudes(std::vector<Complex> amplitudes) {
  const auto n = amplitudes.size();
  if (n < 2 || !std::has_single_bit(n)) {
    throw InvalidArgument("amplitude count must be a power of two >= 2");
  }
  double nrm = 0.0;
  for (const auto& a : amplitudes) nrm += std::norm(a);
  nrm = std::sqrt(nrm);
  if (!(nrm > 0.0) || !std::isfinite(nrm)) {
    throw InvalidArgument("cannot normalize a zero vector");
  }
  for (auto& a : amplitudes) a /= nrm;
  return StateVector(std::move(amplitudes), std::countr_zero(n));
}

StateVector StateVector::from_real(std::span<const double> amplitudes) {
  return from_amplitudes(std::vector<Complex>(amplitudes.begin(), amplitudes.end()));
}

double StateVector::norm() const noexcept {
  double s = 0.0;
  for (const auto& a : amps_) s += std::norm(a);
  return std::sqrt(s);
}

Complex StateVector::inner(const StateVector& other) const {
  if (other.dim() != dim()) throw InvalidArgument("state dimensions differ");
  Complex s = 0.0;
  for (std::size_t k = 0; k < amps_.size(); ++k) s += std::conj(amps_[k]) * other.amps_[k];
  return s;
}

std::vector<double> StateVector::probabilities() const {
  std::vector<double> p(amps_.size());
  for (std::size_t k = 0; k < amps_.size(); ++k) p[k] = std::norm(amps_[k]);
  return p;
}

void StateVector::apply_1q(int target, const Eigen::Matrix2cd& u, std::uint64_t control_mask) {
  const std::uint64_t tb = bit(target);
  const std::uint64_t n = amps_.size();
  for (std::uint64_t k = 0; k < n; ++k) {
    if ((k & tb) || (k & control_mask) != control_mask) continue;
    const Complex a0 = amps_[k];
    const Complex a1 = amps_[k | tb];
    amps_[k] = u(0, 0) * a0 + u(0, 1) * a1;
    amps_[k | tb] = u(1, 0) * a0 + u(1, 1) * a1;
  }
}

void StateVector::apply_dense(std::span<const int> targets, const Eigen::MatrixXcd& u,
                              std::uint64_t control_mask) {
  const std::size_t m = targets.size();
  const std::size_t local = std::size_t{1} << m;
  const std::uint64_t tmask = mask_of(targets);
  std::vector<std::uint64_t> offset(local);
  for (std::size_t s = 0; s < local; ++s) {
    std::uint64_t o = 0;
    for (std::size_t j = 0; j < m; ++j) {
      if (s & (std::size_t{1} << j)) o |= bit(targets[j]);
    }
    offset[s] = o;
  }
  Eigen::VectorXcd in(static_cast<Eigen::Index>(local));
  for (std::uint64_t k = 0; k < amps_.size(); ++k) {
    if ((k & tmask) || (k & control_mask) != control_mask) continue;
    for (std::size_t s = 0; s < local; ++s) in(static_cast<Eigen::Index>(s)) = amps_[k | offset[s]];
    const Eigen::VectorXcd out = u * in;
    for (std::size_t s = 0; s < local; ++s) amps_[k | offset[s]] = out(static_cast<Eigen::Index>(s));
  }
}

void StateVector::apply_pauli(const PauliString& p, std::uint64_t control_mask) {
  const auto xm = p.x_mask();
  std::vector<Complex> out = amps_;
  for (std::uint64_t k = 0; k < amps_.size(); ++k) {
    if ((k & control_mask) != control_mask) continue;
    out[k ^ xm] = p.phase(k) * amps_[k];
  }
  amps_ = std::move(out);
}

void StateVector::apply_pauli_rotation(const PauliString& p, double theta,
                                       std::uint64_t control_mask) {
  const double c = std::cos(theta / 2.0);
  const Complex ms = -kI * std::sin(theta / 2.0);
  const auto xm = p.x_mask();
  std::vector<Complex> out = amps_;
  for (std::uint64_t k = 0; k < amps_.size(); ++k) {
    if ((k & control_mask) != control_mask) continue;
    // (P psi)[k ^ x] = phase(k) psi[k]
    out[k ^ xm] = c * amps_[k ^ xm] + ms * p.phase(k) * amps_[k];
  }
  amps_ = std::move(out);
}

void StateVector::apply_multiplexed_ry(int target, std::span<const int> controls,
                                       std::span<const double> angles) {
  const std::uint64_t tb = bit(target);
  for (std::uint64_t k = 0; k < amps_.size(); ++k) {
    if (k & tb) continue;
    std::size_t sel = 0;
    for (std::size_t j = 0; j < controls.size(); ++j) {
      if (k & bit(controls[j])) sel |= std::size_t{1} << j;
    }
    const double c = std::cos(angles[sel] / 2.0);
    const double s = std::sin(angles[sel] / 2.0);
    const Complex a0 = amps_[k];
    const Complex a1 = amps_[k | tb];
    amps_[k] = c * a0 - s * a1;
    amps_[k | tb] = s * a0 + c * a1;
  }
}

// ---------------------------------------------------------------------------
// Gates and circuits

Eigen::Matrix2cd gate_matrix(GateKind kind, double angle) {
  using std::numbers::pi;
  const double c = std::cos(angle / 2.0);
  const double s = std::sin(angle / 2.0);
  const double r = std::numbers::sqrt2 / 2.0;
  Eigen::Matrix2cd m;
  switch (kind) {
    case GateKind::H: m << r, r, r, -r; break;
    case GateKind::X: m << 0, 1, 1, 0; break;
    case GateKind::Y: m << 0, -kI, kI, 0; break;
    case GateKind::Z: m << 1, 0, 0, -1; break;
    case GateKind::S: m << 1, 0, 0, kI; break;
    case GateKind::Sdg: m << 1, 0, 0, -kI; break;
    case GateKind::T: m << 1, 0, 0, std::polar(1.0, pi / 4); break;
    case GateKind::Tdg: m << 1, 0, 0, std::polar(1.0, -pi / 4); break;
    case GateKind::Rx: m << c, -kI * s, -kI * s, c; break;
    case GateKind::Ry: m << c, -s, s, c; break;
    case GateKind::Rz: m << std::polar(1.0, -angle / 2), 0, 0, std::polar(1.0, angle / 2); break;
    case GateKind::Phase: m << 1, 0, 0, std::polar(1.0, angle); break;
    default:
      throw InvalidArgument("gate kind " + kind_name(kind) + " has no 2x2 matrix");
  }
  return m;
}

std::vector<int> GateOp::touched() const {
  std::vector<int> q = targets;
  q.insert(q.end(), controls.begin(), controls.end());
  if (kind == GateKind::PauliString || kind == GateKind::PauliRotation) {
    for (int k = 0; k < pauli.n_qubits(); ++k) {
      if (pauli[k] != Pauli::I) q.push_back(k);
    }
  }
  std::sort(q.begin(), q.end());
  q.erase(std::unique(q.begin(), q.end()), q.end());
  return q;
}

GateOp GateOp::inverse() const {
  GateOp inv = *this;
  switch (kind) {
    case GateKind::S: inv.kind = GateKind::Sdg; break;
    case GateKind::Sdg: inv.kind = GateKind::S; break;
    case GateKind::T: inv.kind = GateKind::Tdg; break;
    case GateKind::Tdg: inv.kind = GateKind::T; break;
    case GateKind::Rx: case GateKind::Ry: case GateKind::Rz: case GateKind::Phase:
    case GateKind::PauliRotation:
      inv.angle = -angle;
      break;
    case GateKind::Unitary: inv.matrix = matrix.adjoint(); break;
    case GateKind::MultiplexedRy:
      for (auto& a : inv.angles) a = -a;
      break;
    default:
      break;  // self-inverse
  }
  return inv;
}

Circuit::Circuit(int n_qubits) : n_qubits_(n_qubits) {
  if (n_qubits < 1 || n_qubits > 63) throw InvalidArgument("circuit qubit count out of range");
}

Circuit& Circuit::add(GateOp op) {
  std::vector<int> all = op.targets;
  all.insert(all.end(), op.controls.begin(), op.controls.end());
  check_qubits(n_qubits_, all);

  switch (op.kind) {
    case GateKind::CZ:
    case GateKind::SWAP:
      if (op.targets.size() != 2) throw InvalidArgument(kind_name(op.kind) + " needs two qubits");
      break;
    case GateKind::CX:
      if (op.targets.size() != 1 || op.controls.empty()) {
        throw InvalidArgument("CX needs one control and one target");
      }
      break;
    case GateKind::Unitary: {
      const auto dim = Eigen::Index{1} << op.targets.size();
      if (op.targets.empty() || op.matrix.rows() != dim || op.matrix.cols() != dim) {
        throw InvalidArgument("unitary matrix does not match target count");
      }
      const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(dim, dim);
      if ((op.matrix.adjoint() * op.matrix - id).cwiseAbs().maxCoeff() > kUnitaryTolerance) {
        throw InvalidArgument("custom gate matrix is not unitary");
      }
      break;
    }
    case GateKind::PauliString:
    case GateKind::PauliRotation: {
      if (op.pauli.n_qubits() != n_qubits_) {
        throw InvalidArgument("Pauli string length does not match the register");
      }
      if (!op.targets.empty()) throw InvalidArgument("Pauli gates take no explicit targets");
      const std::uint64_t support = op.pauli.x_mask() | op.pauli.z_mask();
      if (support & mask_of(op.controls)) {
        throw InvalidArgument("control qubit overlaps Pauli support");
      }
      break;
    }
    case GateKind::MultiplexedRy:
      if (op.targets.size() != 1) throw InvalidArgument("multiplexed Ry needs one target");
      if (op.angles.size() != (std::size_t{1} << op.controls.size())) {
        throw InvalidArgument("multiplexed Ry needs 2^controls angles");
      }
      break;
    default:
      if (!is_single_qubit_kind(op.kind) || op.targets.size() != 1) {
        throw InvalidArgument(kind_name(op.kind) + " needs exactly one target");
      }
  }
  ops_.push_back(std::move(op));
  return *this;
}

Circuit& Circuit::append(const Circuit& other) {
  if (other.n_qubits_ != n_qubits_) throw InvalidArgument("circuit widths differ");
  ops_.insert(ops_.end(), other.ops_.begin(), other.ops_.end());
  return *this;
}

Circuit& Circuit::single(GateKind kind, int q, double angle) {
  GateOp op;
  op.kind = kind;
  op.targets = {q};
  op.angle = angle;
  return add(std::move(op));
}

Circuit& Circuit::cphase(int control, int target, double theta) {
  GateOp op;
  op.kind = GateKind::Phase;
  op.targets = {target};
  op.controls = {control};
  op.angle = theta;
  return add(std::move(op));
}

Circuit& Circuit::cz(int a, int b) {
  GateOp op;
  op.kind = GateKind::CZ;
  op.targets = {a, b};
  return add(std::move(op));
}

Circuit& Circuit::cx(int control, int target) {
  GateOp op;
  op.kind = GateKind::CX;
  op.targets = {target};
  op.controls = {control};
  return add(std::move(op));
}

Circuit& Circuit::swap(int a, int b) {
  GateOp op;
  op.kind = GateKind::SWAP;
  op.targets = {a, b};
  return add(std::move(op));
}

Circuit& Circuit::unitary(std::vector<int> targets, Eigen::MatrixXcd u, std::vector<int> controls) {
  GateOp op;
  op.kind = GateKind::Unitary;
  op.targets = std::move(targets);
  op.controls = std::move(controls);
  op.matrix = std::move(u);
  return add(std::move(op));
}

Circuit& Circuit::pauli(const qpi::PauliString& p) {
  GateOp op;
  op.kind = GateKind::PauliString;
  op.pauli = p;
  return add(std::move(op));
}

Circuit& Circuit::pauli_rotation(const qpi::PauliString& p, double theta, std::vector<int> controls) {
  GateOp op;
  op.kind = GateKind::PauliRotation;
  op.pauli = p;
  op.angle = theta;
  op.controls = std::move(controls);
  return add(std::move(op));
}

Circuit& Circuit::multiplexed_ry(int target, std::vector<int> controls, std::vector<double> angles) {
  GateOp op;
  op.kind = GateKind::MultiplexedRy;
  op.targets = {target};
  op.controls = std::move(controls);
  op.angles = std::move(angles);
  return add(std::move(op));
}

Circuit Circuit::inverse() const {
  Circuit inv(n_qubits_);
  inv.ops_.reserve(ops_.size());
  for (auto it = ops_.rbegin(); it != ops_.rend(); ++it) inv.ops_.push_back(it->inverse());
  return inv;
}

void Circuit::dump(std::ostream& os) const {
  auto join = [&os](const std::vector<int>& qs) {
    for (int q : qs) os << ' ' << q;
  };
  for (const auto& op : ops_) {
    if (!op.controls.empty() && op.kind != GateKind::CX && op.kind != GateKind::MultiplexedRy) {
      os << "C(";
      for (std::size_t k = 0; k < op.controls.size(); ++k) os << (k ? "," : "") << op.controls[k];
      os << ") ";
    }
    os << kind_name(op.kind);
    switch (op.kind) {
      case GateKind::Rx: case GateKind::Ry: case GateKind::Rz: case GateKind::Phase:
        os << '(' << op.angle << ')';
        break;
      case GateKind::Unitary:
        os << '[' << op.matrix.rows() << ']';
        break;
      case GateKind::PauliString:
        os << '(' << op.pauli.str() << ')';
        break;
      case GateKind::PauliRotation:
        os << '(' << op.pauli.str() << ',' << op.angle << ')';
        break;
      case GateKind::MultiplexedRy:
        os << '[' << op.angles.size() << ']';
        break;
      default:
        break;
    }
    if (op.kind == GateKind::CX || op.kind == GateKind::MultiplexedRy) join(op.controls);
    join(op.targets);
    os << '\n';
  }
}

std::string Circuit::dump() const {
  std::ostringstream os;
  dump(os);
  return os.str();
}

// ---------------------------------------------------------------------------
// Execution

void NoiseModel::validate() const {
  if (!(p1 >= 0.0 && p1 <= 1.0) || !(p2 >= 0.0 && p2 <= 1.0)) {
    throw InvalidArgument("depolarizing probabilities must lie in [0, 1]");
  }
}

std::mt19937_64 trajectory_rng(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32),
                    0x71706955U};
  return std::mt19937_64(seq);
}

namespace {

void apply_op(StateVector& psi, const GateOp& op) {
  const std::uint64_t cmask = mask_of(op.controls);
  switch (op.kind) {
    case GateKind::CZ:
      psi.apply_1q(op.targets[1], gate_matrix(GateKind::Z), cmask | bit(op.targets[0]));
      break;
    case GateKind::CX:
      psi.apply_1q(op.targets[0], gate_matrix(GateKind::X), cmask);
      break;
    case GateKind::SWAP: {
      Eigen::MatrixXcd sw = Eigen::MatrixXcd::Zero(4, 4);
      sw(0, 0) = sw(1, 2) = sw(2, 1) = sw(3, 3) = 1.0;
      psi.apply_dense(op.targets, sw, cmask);
      break;
    }
    case GateKind::Unitary:
      psi.apply_dense(op.targets, op.matrix, cmask);
      break;
    case GateKind::PauliString:
      psi.apply_pauli(op.pauli, cmask);
      break;
    case GateKind::PauliRotation:
      psi.apply_pauli_rotation(op.pauli, op.angle, cmask);
      break;
    case GateKind::MultiplexedRy:
      psi.apply_multiplexed_ry(op.targets[0], op.controls, op.angles);
      break;
    default:
      psi.apply_1q(op.targets[0], gate_matrix(op.kind, op.angle), cmask);
  }
}

void inject_noise(StateVector& psi, const GateOp& op, const NoiseModel& noise,
                  std::mt19937_64& rng) {
  const auto qubits = op.touched();
  const double p = qubits.size() <= 1 ? noise.p1 : noise.p2;
  if (p <= 0.0) return;
  static const GateKind kErrors[3] = {GateKind::X, GateKind::Y, GateKind::Z};
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::uniform_int_distribution<int> which(0, 2);
  for (int q : qubits) {
    if (coin(rng) < p) psi.apply_1q(q, gate_matrix(kErrors[which(rng)]));
  }
}

}  // namespace

void apply_circuit_inplace(StateVector& psi, const Circuit& c, const NoiseModel* noise,
                           std::mt19937_64* rng) {
  if (psi.n_qubits() != c.n_qubits()) {
    throw InvalidArgument("state has " + std::to_string(psi.n_qubits()) +
                          " qubits, circuit has " + std::to_string(c.n_qubits()));
  }
  const bool noisy = noise != nullptr && !noise->is_noiseless();
  if (noisy) {
    noise->validate();
    if (rng == nullptr) throw InvalidArgument("noisy execution needs an rng");
  }
  for (const auto& op : c.ops()) {
    apply_op(psi, op);
    if (noisy) inject_noise(psi, op, *noise, *rng);
  }
}

StateVector apply_circuit(StateVector psi, const Circuit& c, const std::optional<NoiseModel>& noise) {
  if (noise) {
    auto rng = trajectory_rng(noise->seed, 0);
    apply_circuit_inplace(psi, c, &*noise, &rng);
  } else {
    apply_circuit_inplace(psi, c);
  }
  return psi;
}

double expectation_pauli(const StateVector& psi, const PauliString& p) {
  if (p.n_qubits() != psi.n_qubits()) throw InvalidArgument("Pauli length mismatch");
  const auto xm = p.x_mask();
  const auto amps = psi.amplitudes();
  Complex e = 0.0;
  for (std::uint64_t k = 0; k < amps.size(); ++k) {
    e += std::conj(amps[k ^ xm]) * p.phase(k) * amps[k];
  }
  return e.real();
}

std::map<std::string, int> sample_measurement(const StateVector& psi, std::span<const int> qubits,
                                              int shots, std::uint64_t seed) {
  if (shots < 1) throw InvalidArgument("shots must be >= 1");
  check_qubits(psi.n_qubits(), qubits);
  const std::size_t m = qubits.size();
  std::vector<double> marginal(std::size_t{1} << m, 0.0);
  const auto amps = psi.amplitudes();
  for (std::uint64_t k = 0; k < amps.size(); ++k) {
    std::size_t outcome = 0;
    for (std::size_t j = 0; j < m; ++j) {
      if (k & bit(qubits[j])) outcome |= std::size_t{1} << j;
    }
    marginal[outcome] += std::norm(amps[k]);
  }
  std::mt19937_64 rng = trajectory_rng(seed, 0);
  std::discrete_distribution<std::size_t> dist(marginal.begin(), marginal.end());
  std::vector<int> hits(marginal.size(), 0);
  for (int s = 0; s < shots; ++s) ++hits[dist(rng)];

  std::map<std::string, int> counts;
  for (std::size_t o = 0; o < hits.size(); ++o) {
    if (hits[o] == 0) continue;
    std::string key(m, '0');
    for (std::size_t j = 0; j < m; ++j) {
      if (o & (std::size_t{1} << j)) key[j] = '1';
    }
    counts[key] = hits[o];
  }
  return counts;
}

double fidelity(const StateVector& psi, const StateVector& phi) {
  if (psi.n_qubits() != phi.n_qubits()) throw InvalidArgument("qubit counts differ");
  return std::clamp(std::norm(psi.inner(phi)), 0.0, 1.0);
}

}  // namespace qpi
