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

#include "qpi/pauli.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <ostream>

#include "qpi/errors.hpp"

namespace qpi {

namespace {

constexpr int kMaxLcuQubits = 8;

char pauli_char(Pauli p) {
  switch (p) {
    case Pauli::I: return 'I';
    case Pauli::X: return 'X';
    case Pauli::Y: return 'Y';
    case Pauli::Z: return 'Z';
  }
  return '?';
}

int qubits_for_dim(Eigen::Index dim) {
  if (dim < 1) throw InvalidArgument("matrix dimension must be positive");
  const auto u = static_cast<std::uint64_t>(dim);
  if (!std::has_single_bit(u)) {
    throw InvalidArgument("matrix dimension " + std::to_string(dim) +
                          " is not a power of two");
  }
  return std::countr_zero(u);
}

// Sort key: |a| quantized so values equal to ~12 digits tie and fall back to
// the lexicographic Pauli order.
double magnitude_key(double a) { return std::round(std::abs(a) * 1e12); }

void sort_terms(std::vector<LcuTerm>& terms) {
  std::sort(terms.begin(), terms.end(), [](const LcuTerm& x, const LcuTerm& y) {
    const double kx = magnitude_key(x.coefficient);
    const double ky = magnitude_key(y.coefficient);
    if (kx != ky) return kx > ky;
    return x.pauli < y.pauli;
  });
}

}  // namespace

PauliString::PauliString(std::vector<Pauli> ops) : ops_(std::move(ops)) {
  if (ops_.empty()) throw InvalidArgument("Pauli string needs at least one qubit");
  if (ops_.size() > 63) throw InvalidArgument("Pauli string too long");
}

PauliString PauliString::identity(int n_qubits) {
  return PauliString(std::vector<Pauli>(static_cast<std::size_t>(n_qubits), Pauli::I));
}

PauliString PauliString::parse(std::string_view text) {
  std::vector<Pauli> ops(text.size());
  for (std::size_t k = 0; k < text.size(); ++k) {
    Pauli p;
    switch (text[k]) {
      case 'I': p = Pauli::I; break;
      case 'X': p = Pauli::X; break;
      case 'Y': p = Pauli::Y; break;
      case 'Z': p = Pauli::Z; break;
      default:
        throw InvalidArgument("invalid Pauli character '" + std::string(1, text[k]) + "'");
    }
    ops[text.size() - 1 - k] = p;
  }
  return PauliString(std::move(ops));
}

PauliString PauliString::from_index(std::uint64_t index, int n_qubits) {
  std::vector<Pauli> ops(static_cast<std::size_t>(n_qubits));
  for (auto& op : ops) {
    op = static_cast<Pauli>(index & 3U);
    index >>= 2;
  }
  return PauliString(std::move(ops));
}

int PauliString::weight() const noexcept {
  return static_cast<int>(
      std::count_if(ops_.begin(), ops_.end(), [](Pauli p) { return p != Pauli::I; }));
}

std::uint64_t PauliString::x_mask() const noexcept {
  std::uint64_t m = 0;
  for (std::size_t q = 0; q < ops_.size(); ++q) {
    if (ops_[q] == Pauli::X || ops_[q] == Pauli::Y) m |= std::uint64_t{1} << q;
  }
  return m;
}

std::uint64_t PauliString::z_mask() const noexcept {
  std::uint64_t m = 0;
  for (std::size_t q = 0; q < ops_.size(); ++q) {
    if (ops_[q] == Pauli::Z || ops_[q] == Pauli::Y) m |= std::uint64_t{1} << q;
  }
  return m;
}

int PauliString::y_count() const noexcept {
  return static_cast<int>(std::count(ops_.begin(), ops_.end(), Pauli::Y));
}

std::complex<double> PauliString::phase(std::uint64_t basis_index) const noexcept {
  // Y = i X Z, so P = i^{#Y} X^x Z^z acting on |k> gives (-1)^{popcount(k&z)}.
  static constexpr std::complex<double> kIPow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  std::complex<double> ph = kIPow[y_count() & 3];
  if (std::popcount(basis_index & z_mask()) & 1) ph = -ph;
  return ph;
}

std::string PauliString::str() const {
  std::string s(ops_.size(), 'I');
  for (std::size_t q = 0; q < ops_.size(); ++q) {
    s[ops_.size() - 1 - q] = pauli_char(ops_[q]);
  }
  return s;
}

Eigen::MatrixXcd PauliString::matrix() const {
  const auto dim = static_cast<Eigen::Index>(std::uint64_t{1} << ops_.size());
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  const auto xm = x_mask();
  for (Eigen::Index k = 0; k < dim; ++k) {
    const auto ku = static_cast<std::uint64_t>(k);
    m(static_cast<Eigen::Index>(ku ^ xm), k) = phase(ku);
  }
  return m;
}

Eigen::MatrixXcd LcuDecomposition::reconstruct() const {
  const auto dim = static_cast<Eigen::Index>(std::uint64_t{1} << n_qubits);
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& t : terms) {
    const auto xm = t.pauli.x_mask();
    for (Eigen::Index k = 0; k < dim; ++k) {
      const auto ku = static_cast<std::uint64_t>(k);
      m(static_cast<Eigen::Index>(ku ^ xm), k) += t.coefficient * t.pauli.phase(ku);
    }
  }
  return m;
}

double LcuDecomposition::parseval_norm_sq() const {
  double s = 0.0;
  for (const auto& t : terms) s += t.coefficient * t.coefficient;
  return s * std::ldexp(1.0, n_qubits);
}

std::vector<double> EmbeddedSystem::extract_solution(const Eigen::VectorXd& embedded) const {
  if (static_cast<std::size_t>(embedded.size()) != padded_dim()) {
    throw InvalidArgument("embedded vector has wrong dimension");
  }
  std::vector<double> q(original_dim);
  for (std::size_t k = 0; k < original_dim; ++k) {
    q[k] = embedded(static_cast<Eigen::Index>(solution_offset() + k));
  }
  return q;
}

Eigen::VectorXd EmbeddedSystem::lift_solution(const std::vector<double>& q) const {
  Eigen::VectorXd x = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(padded_dim()));
  for (std::size_t k = 0; k < original_dim && k < q.size(); ++k) {
    x(static_cast<Eigen::Index>(solution_offset() + k)) = q[k];
  }
  return x;
}

Eigen::MatrixXd EmbeddedSystem::system_block() const {
  const auto n = static_cast<Eigen::Index>(original_dim);
  return h.block(0, n, n, n).real();
}

EmbeddedSystem hermitian_embed(const Eigen::MatrixXd& b, const std::vector<double>& r) {
  if (b.rows() != b.cols()) throw InvalidArgument("system matrix must be square");
  const auto n = b.rows();
  if (static_cast<std::size_t>(n) != r.size()) {
    throw InvalidArgument("rhs length does not match system dimension");
  }
  if (n < 1) throw InvalidArgument("empty system");
  EmbeddedSystem sys;
  sys.original_dim = static_cast<std::size_t>(n);
  sys.n_qubits = std::bit_width(static_cast<std::uint64_t>(2 * n - 1));
  if (sys.n_qubits > 20) throw InvalidArgument("system too large to embed");
  const auto dim = static_cast<Eigen::Index>(sys.padded_dim());

  sys.h = Eigen::MatrixXcd::Identity(dim, dim);
  sys.h.topLeftCorner(2 * n, 2 * n).setZero();
  sys.h.block(0, n, n, n) = b.cast<std::complex<double>>();
  sys.h.block(n, 0, n, n) = b.transpose().cast<std::complex<double>>();
  sys.rhs = Eigen::VectorXd::Zero(dim);
  for (Eigen::Index k = 0; k < n; ++k) sys.rhs(k) = r[static_cast<std::size_t>(k)];
  return sys;
}

EmbeddedSystem hermitian_embed(const SparseMatrix& b, const std::vector<double>& r) {
  return hermitian_embed(b.to_dense(), r);
}

LcuDecomposition lcu_decompose(const Eigen::MatrixXcd& h, double drop_tol) {
  if (h.rows() != h.cols()) throw InvalidArgument("matrix must be square");
  const int n = qubits_for_dim(h.rows());
  if (n > kMaxLcuQubits) throw InvalidArgument("LCU enumeration capped at 8 qubits");
  if ((h - h.adjoint()).norm() > 1e-10 * (1.0 + h.norm())) {
    throw InvalidArgument("matrix is not Hermitian");
  }
  const auto dim = static_cast<std::uint64_t>(h.rows());
  const double scale = 1.0 / static_cast<double>(dim);

  LcuDecomposition lcu;
  lcu.n_qubits = n;
  lcu.source_norm = h.norm();
  const std::uint64_t n_strings = std::uint64_t{1} << (2 * n);
  for (std::uint64_t idx = 0; idx < n_strings; ++idx) {
    auto p = PauliString::from_index(idx, n);
    const auto xm = p.x_mask();
    // P[k ^ x, k] = phase(k), so Tr(H P) = sum_k H[k, k ^ x] phase(k)
    std::complex<double> tr = 0.0;
    for (std::uint64_t k = 0; k < dim; ++k) {
      tr += h(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k ^ xm)) * p.phase(k);
    }
    const double a = tr.real() * scale;
    if (std::abs(a) >= drop_tol) lcu.terms.push_back({a, std::move(p)});
  }
  sort_terms(lcu.terms);
  return lcu;
}

LcuDecomposition lcu_decompose(const EmbeddedSystem& sys, double drop_tol) {
  return lcu_decompose(sys.h, drop_tol);
}

LcuDecomposition lcu_truncate(const LcuDecomposition& lcu, std::size_t keep) {
  if (keep < 1 || keep > lcu.size()) {
    throw InvalidArgument("truncation length " + std::to_string(keep) +
                          " outside [1, " + std::to_string(lcu.size()) + "]");
  }
  LcuDecomposition out;
  out.n_qubits = lcu.n_qubits;
  out.source_norm = lcu.source_norm;
  out.terms.assign(lcu.terms.begin(), lcu.terms.begin() + static_cast<std::ptrdiff_t>(keep));
  double dropped = lcu.truncation_error * lcu.truncation_error;
  for (std::size_t k = keep; k < lcu.size(); ++k) {
    dropped += lcu.terms[k].coefficient * lcu.terms[k].coefficient *
               std::ldexp(1.0, lcu.n_qubits);
  }
  out.truncation_error = std::sqrt(dropped);
  return out;
}

std::vector<HistogramRow> lcu_histogram(const LcuDecomposition& lcu) {
  std::vector<HistogramRow> rows;
  rows.reserve(lcu.size());
  for (std::size_t k = 0; k < lcu.size(); ++k) {
    rows.push_back({k, lcu.terms[k].pauli.str(), lcu.terms[k].coefficient});
  }
  return rows;
}

void write_histogram_csv(std::ostream& os, const LcuDecomposition& lcu) {
  const auto old = os.precision(17);
  os << "term,coefficient\n";
  for (const auto& row : lcu_histogram(lcu)) os << row.index << ',' << row.coefficient << '\n';
  os.precision(old);
}

void write_lcu_csv(std::ostream& os, const LcuDecomposition& lcu) {
  const auto old = os.precision(17);
  os << "pauli_string,coefficient\n";
  for (const auto& t : lcu.terms) os << t.pauli.str() << ',' << t.coefficient << '\n';
  os.precision(old);
}

}  // namespace qpi
