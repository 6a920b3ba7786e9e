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

#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "qpi/errors.hpp"
#include "qpi/qsim.hpp"

namespace qpi {
namespace {

using Mat = Eigen::MatrixXcd;
using std::numbers::pi;

StateVector random_state(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<Complex> a(std::size_t{1} << n);
  for (auto& x : a) x = Complex(g(rng), g(rng));
  return StateVector::from_amplitudes(a);
}

// Full-register matrix of a (multi-)controlled single-qubit gate, built by
// enumerating basis states.
Mat embed_1q(int n, int target, const Eigen::Matrix2cd& u, std::vector<int> controls = {}) {
  const Eigen::Index dim = Eigen::Index{1} << n;
  Mat m = Mat::Zero(dim, dim);
  for (Eigen::Index k = 0; k < dim; ++k) {
    bool on = true;
    for (int c : controls) on = on && ((k >> c) & 1);
    if (!on) {
      m(k, k) = 1.0;
      continue;
    }
    const int b = static_cast<int>((k >> target) & 1);
    const Eigen::Index k0 = k & ~(Eigen::Index{1} << target);
    const Eigen::Index k1 = k0 | (Eigen::Index{1} << target);
    m(k0, k) += u(0, b);
    m(k1, k) += u(1, b);
  }
  return m;
}

Eigen::VectorXcd as_vec(const StateVector& s) {
  Eigen::VectorXcd v(static_cast<Eigen::Index>(s.dim()));
  for (std::size_t k = 0; k < s.dim(); ++k) v(static_cast<Eigen::Index>(k)) = s[k];
  return v;
}

Eigen::Matrix2cd ry(double t) {
  Eigen::Matrix2cd m;
  m << std::cos(t / 2), -std::sin(t / 2), std::sin(t / 2), std::cos(t / 2);
  return m;
}

TEST(StateVector, ConstructionAndValidation) {
  StateVector s(3);
  EXPECT_EQ(s.dim(), 8u);
  EXPECT_EQ(s[0], Complex(1.0));
  EXPECT_THROW(StateVector(0), InvalidArgument);
  EXPECT_THROW(StateVector(kMaxSimQubits + 1), InvalidArgument);
  EXPECT_THROW(StateVector::from_amplitudes({0.0, 0.0}), InvalidArgument);
  const std::vector<double> r{3.0, 4.0};
  const auto t = StateVector::from_real(r);
  EXPECT_NEAR(t[0].real(), 0.6, 1e-15);
  EXPECT_NEAR(t[1].real(), 0.8, 1e-15);
}

TEST(Gates, HadamardOnZero) {
  Circuit c(1);
  c.h(0);
  const auto s = apply_circuit(StateVector(1), c);
  EXPECT_NEAR(s[0].real(), 1.0 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(s[1].real(), 1.0 / std::sqrt(2.0), 1e-15);
}

TEST(Gates, XInvolution) {
  std::mt19937_64 rng(1);
  const auto psi = random_state(rng, 3);
  Circuit c(3);
  c.x(1).x(1);
  EXPECT_NEAR(fidelity(apply_circuit(psi, c), psi), 1.0, 1e-14);
}

TEST(Gates, SingleQubitMatricesMatchOracle) {
  std::mt19937_64 rng(2);
  const int n = 3;
  const auto psi = random_state(rng, n);
  for (auto kind : {GateKind::H, GateKind::X, GateKind::Y, GateKind::Z, GateKind::S, GateKind::Sdg,
                    GateKind::T, GateKind::Tdg, GateKind::Rx, GateKind::Ry, GateKind::Rz,
                    GateKind::Phase}) {
    for (int q = 0; q < n; ++q) {
      GateOp op;
      op.kind = kind;
      op.targets = {q};
      op.angle = 0.37;
      Circuit c(n);
      c.add(op);
      const Eigen::VectorXcd want = embed_1q(n, q, gate_matrix(kind, 0.37)) * as_vec(psi);
      EXPECT_LE((as_vec(apply_circuit(psi, c)) - want).norm(), 1e-13);
    }
  }
  const Eigen::Matrix2cd r = gate_matrix(GateKind::Ry, 0.8);
  EXPECT_LE((r - ry(0.8)).norm(), 1e-15);
}

TEST(Gates, TwoQubitGatesMatchOracle) {
  std::mt19937_64 rng(3);
  const int n = 3;
  const auto psi = random_state(rng, n);
  const Eigen::Matrix2cd x = gate_matrix(GateKind::X), z = gate_matrix(GateKind::Z);

  Circuit cx(n);
  cx.cx(2, 0);
  EXPECT_LE((as_vec(apply_circuit(psi, cx)) - embed_1q(n, 0, x, {2}) * as_vec(psi)).norm(), 1e-13);

  Circuit cz(n);
  cz.cz(0, 1);
  EXPECT_LE((as_vec(apply_circuit(psi, cz)) - embed_1q(n, 1, z, {0}) * as_vec(psi)).norm(), 1e-13);

  Circuit sw(n);
  sw.swap(0, 2);
  const Mat swap = embed_1q(n, 0, x, {2}) * embed_1q(n, 2, x, {0}) * embed_1q(n, 0, x, {2});
  EXPECT_LE((as_vec(apply_circuit(psi, sw)) - swap * as_vec(psi)).norm(), 1e-13);

  Circuit cp(n);
  cp.cphase(1, 2, 0.9);
  EXPECT_LE((as_vec(apply_circuit(psi, cp)) -
             embed_1q(n, 2, gate_matrix(GateKind::Phase, 0.9), {1}) * as_vec(psi)).norm(), 1e-13);
}

TEST(Gates, ControlledDenseUnitary) {
  std::mt19937_64 rng(4);
  const auto psi = random_state(rng, 3);
  const Eigen::Matrix2cd u = gate_matrix(GateKind::Rx, 1.1) * gate_matrix(GateKind::T);
  Circuit c(3);
  c.unitary({1}, u, {0, 2});
  EXPECT_LE((as_vec(apply_circuit(psi, c)) - embed_1q(3, 1, u, {0, 2}) * as_vec(psi)).norm(), 1e-13);
}

TEST(Gates, RejectsBadOps) {
  Circuit c(2);
  EXPECT_THROW(c.h(2), InvalidArgument);
  EXPECT_THROW(c.cx(1, 1), InvalidArgument);
  Mat bad = Mat::Identity(2, 2);
  bad(0, 0) = 2.0;
  EXPECT_THROW(c.unitary({0}, bad), InvalidArgument);
  EXPECT_THROW(c.multiplexed_ry(0, {1}, {0.1}), InvalidArgument);
}

TEST(Pauli, StringGateSquaredIsIdentity) {
  std::mt19937_64 rng(5);
  for (const char* s : {"XYZ", "YIY", "ZZI", "IXI"}) {
    const auto psi = random_state(rng, 3);
    Circuit c(3);
    c.pauli(PauliString::parse(s)).pauli(PauliString::parse(s));
    EXPECT_LE((as_vec(apply_circuit(psi, c)) - as_vec(psi)).norm(), 1e-13);
    Circuit once(3);
    once.pauli(PauliString::parse(s));
    EXPECT_LE((as_vec(apply_circuit(psi, once)) - PauliString::parse(s).matrix() * as_vec(psi)).norm(),
              1e-13);
  }
}

TEST(Pauli, RotationMatchesMatrixExponential) {
  std::mt19937_64 rng(6);
  const auto psi = random_state(rng, 3);
  const auto p = PauliString::parse("XZY");
  const double theta = 0.71;
  Circuit c(3);
  c.pauli_rotation(p, theta);
  // exp(-i theta/2 P) = cos(theta/2) I - i sin(theta/2) P
  const Mat want = std::cos(theta / 2) * Mat::Identity(8, 8) - Complex(0, std::sin(theta / 2)) * p.matrix();
  EXPECT_LE((as_vec(apply_circuit(psi, c)) - want * as_vec(psi)).norm(), 1e-13);
}

TEST(Multiplexor, AnglesFollowControlBits) {
  const std::vector<double> angles{0.1, 0.2, 0.3, 0.4};
  std::mt19937_64 rng(7);
  const auto psi = random_state(rng, 3);
  Circuit c(3);
  c.multiplexed_ry(2, {0, 1}, angles);
  Mat want = Mat::Identity(8, 8);
  for (int sel = 0; sel < 4; ++sel) {
    // Block for control value sel (qubit 0 lowest bit).
    Mat block = Mat::Identity(8, 8);
    const Eigen::Matrix2cd r = ry(angles[static_cast<std::size_t>(sel)]);
    for (Eigen::Index k = 0; k < 8; ++k) {
      if ((k & 3) != sel || (k >> 2) & 1) continue;
      block(k, k) = r(0, 0);
      block(k | 4, k) = r(1, 0);
      block(k, k | 4) = r(0, 1);
      block(k | 4, k | 4) = r(1, 1);
    }
    want = block * want;
  }
  EXPECT_LE((as_vec(apply_circuit(psi, c)) - want * as_vec(psi)).norm(), 1e-13);
}

Circuit random_circuit(std::mt19937_64& rng, int n, int gates) {
  Circuit c(n);
  std::uniform_real_distribution<double> a(-pi, pi);
  for (int g = 0; g < gates; ++g) {
    const int q = static_cast<int>(rng() % static_cast<unsigned>(n));
    const int r = static_cast<int>((q + 1 + rng() % static_cast<unsigned>(n - 1)) % static_cast<unsigned>(n));
    switch (rng() % 8) {
      case 0: c.h(q); break;
      case 1: c.rx(q, a(rng)); break;
      case 2: c.ry(q, a(rng)); break;
      case 3: c.rz(q, a(rng)); break;
      case 4: c.cx(q, r); break;
      case 5: c.cz(q, r); break;
      case 6: c.swap(q, r); break;
      default: c.t(q); break;
    }
  }
  return c;
}

TEST(Circuit, RandomCircuitsPreserveNorm) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    const auto c = random_circuit(rng, 4, 50);
    const auto out = apply_circuit(random_state(rng, 4), c);
    EXPECT_NEAR(out.norm(), 1.0, 1e-10);
  }
}

TEST(Circuit, CompositionAndInverse) {
  std::mt19937_64 rng(9);
  const auto c1 = random_circuit(rng, 4, 30);
  const auto c2 = random_circuit(rng, 4, 30);
  const auto psi = random_state(rng, 4);
  Circuit both = c1;
  both.append(c2);
  const auto a = apply_circuit(psi, both);
  const auto b = apply_circuit(apply_circuit(psi, c1), c2);
  for (std::size_t k = 0; k < a.dim(); ++k) EXPECT_LE(std::abs(a[k] - b[k]), 1e-12);
  const auto back = apply_circuit(a, both.inverse());
  EXPECT_NEAR(fidelity(back, psi), 1.0, 1e-12);
}

TEST(Circuit, DumpFormat) {
  Circuit c(3);
  c.cz(0, 1).ry(2, 0.5).cx(0, 2);
  EXPECT_EQ(c.dump(), "CZ 0 1\nRY(0.5) 2\nCX 0 2\n");
}

TEST(Noise, ZeroProbabilityIsBitExact) {
  std::mt19937_64 rng(10);
  const auto c = random_circuit(rng, 4, 40);
  const auto psi = random_state(rng, 4);
  const auto clean = apply_circuit(psi, c);
  const auto noisy = apply_circuit(psi, c, NoiseModel{0.0, 0.0, 123});
  for (std::size_t k = 0; k < clean.dim(); ++k) EXPECT_EQ(clean[k], noisy[k]);
}

TEST(Noise, FullDepolarizationReachesBaseline) {
  // p1 = 1: H|0> = |+> is hit by X, Y or Z uniformly; only X leaves |+> intact.
  Circuit c(1);
  c.h(0);
  Circuit plus(1);
  plus.h(0);
  const auto target = apply_circuit(StateVector(1), plus);
  const NoiseModel nm{1.0, 1.0, 7};
  double avg = 0.0;
  const int n = 3000;
  for (int k = 0; k < n; ++k) {
    auto rng = trajectory_rng(nm.seed, static_cast<std::uint64_t>(k));
    StateVector s(1);
    apply_circuit_inplace(s, c, &nm, &rng);
    avg += fidelity(s, target);
  }
  EXPECT_NEAR(avg / n, 1.0 / 3.0, 0.03);
}

TEST(Noise, SeededTrajectoriesRepeat) {
  std::mt19937_64 rng(11);
  const auto c = random_circuit(rng, 3, 30);
  const NoiseModel nm{0.2, 0.2, 99};
  const auto a = apply_circuit(StateVector(3), c, nm);
  const auto b = apply_circuit(StateVector(3), c, nm);
  for (std::size_t k = 0; k < a.dim(); ++k) EXPECT_EQ(a[k], b[k]);
  EXPECT_THROW((NoiseModel{1.5, 0.0, 0}.validate()), InvalidArgument);
}

TEST(Expectation, BasicValues) {
  EXPECT_NEAR(expectation_pauli(StateVector(1), PauliString::parse("Z")), 1.0, 1e-15);
  Circuit c(1);
  c.h(0);
  EXPECT_NEAR(expectation_pauli(apply_circuit(StateVector(1), c), PauliString::parse("X")), 1.0, 1e-15);
  std::mt19937_64 rng(12);
  EXPECT_NEAR(expectation_pauli(random_state(rng, 3), PauliString::identity(3)), 1.0, 1e-12);
  const auto psi = random_state(rng, 3);
  const auto p = PauliString::parse("YXZ");
  const Complex want = as_vec(psi).adjoint() * p.matrix() * as_vec(psi);
  EXPECT_NEAR(expectation_pauli(psi, p), want.real(), 1e-12);
}

TEST(Sampling, DeterministicAndBinomial) {
  const std::vector<int> q0{0};
  const auto zero = sample_measurement(StateVector(1), q0, 100, 1);
  ASSERT_EQ(zero.size(), 1u);
  EXPECT_EQ(zero.at("0"), 100);

  Circuit c(1);
  c.h(0);
  const auto plus = apply_circuit(StateVector(1), c);
  const auto counts = sample_measurement(plus, q0, 10000, 42);
  const double sigma = std::sqrt(10000 * 0.25);
  EXPECT_LE(std::abs(counts.at("0") - 5000), 5 * sigma);
  EXPECT_EQ(counts.at("0") + counts.at("1"), 10000);
  EXPECT_EQ(sample_measurement(plus, q0, 1000, 5), sample_measurement(plus, q0, 1000, 5));

  // First listed qubit is leftmost.
  const auto s = StateVector::basis(2, 0b01);
  const std::vector<int> q01{0, 1};
  EXPECT_EQ(sample_measurement(s, q01, 10, 0).at("10"), 10);
}

TEST(Fidelity, Values) {
  Circuit c(1);
  c.h(0);
  EXPECT_NEAR(fidelity(StateVector(1), StateVector(1)), 1.0, 1e-15);
  EXPECT_NEAR(fidelity(StateVector(1), StateVector::basis(1, 1)), 0.0, 1e-15);
  EXPECT_NEAR(fidelity(StateVector(1), apply_circuit(StateVector(1), c)), 0.5, 1e-15);
}

}  // namespace
}  // namespace qpi
