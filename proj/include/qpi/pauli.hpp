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

#include <complex>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "qpi/sparse.hpp"

namespace qpi {

enum class Pauli : std::uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

/// Tensor product of single-qubit Paulis. ops()[q] acts on qubit q; the text
/// form lists the highest qubit first, so "XZ" means X on qubit 1, Z on qubit 0.
class PauliString {
 public:
  PauliString() = default;
  explicit PauliString(std::vector<Pauli> ops);
  static PauliString identity(int n_qubits);
  static PauliString parse(std::string_view text);
  /// Decodes a base-4 index (digit q selects the Pauli on qubit q).
  static PauliString from_index(std::uint64_t index, int n_qubits);

  int n_qubits() const noexcept { return static_cast<int>(ops_.size()); }
  const std::vector<Pauli>& ops() const noexcept { return ops_; }
  Pauli operator[](int q) const { return ops_[static_cast<std::size_t>(q)]; }
  int weight() const noexcept;
  bool is_identity() const noexcept { return weight() == 0; }

  /// Bits flipped by the string (X or Y positions).
  std::uint64_t x_mask() const noexcept;
  /// Bits picking up a sign (Y or Z positions).
  std::uint64_t z_mask() const noexcept;
  int y_count() const noexcept;

  /// P|k> = phase(k) |k ^ x_mask()>.
  std::complex<double> phase(std::uint64_t basis_index) const noexcept;

  std::string str() const;
  Eigen::MatrixXcd matrix() const;

  friend bool operator==(const PauliString&, const PauliString&) = default;
  /// Lexicographic on the text form (I < X < Y < Z, highest qubit first).
  friend bool operator<(const PauliString& a, const PauliString& b) {
    return a.str() < b.str();
  }

 private:
  std::vector<Pauli> ops_;
};

struct LcuTerm {
  double coefficient;
  PauliString pauli;
};

/// H = sum_i a_i P_i over Pauli strings, sorted by |a_i| descending with
/// lexicographic Pauli order breaking ties.
struct LcuDecomposition {
  int n_qubits = 0;
  std::vector<LcuTerm> terms;
  double source_norm = 0.0;       // Frobenius norm of the decomposed matrix
  double truncation_error = 0.0;  // ||H - H_L||_F of the dropped terms

  std::size_t size() const noexcept { return terms.size(); }
  Eigen::MatrixXcd reconstruct() const;
  /// sum_i a_i^2 2^N, equal to ||H||_F^2 when nothing was dropped.
  double parseval_norm_sq() const;
};

/// Hermitian block embedding [[0, B], [B^T, 0]] padded to 2^N with an
/// identity diagonal. The rhs block (r, 0) maps to the solution (0, q).
struct EmbeddedSystem {
  Eigen::MatrixXcd h;
  Eigen::VectorXd rhs;
  std::size_t original_dim = 0;
  int n_qubits = 0;

  std::size_t padded_dim() const noexcept { return std::size_t{1} << n_qubits; }
  std::size_t solution_offset() const noexcept { return original_dim; }
  std::vector<double> extract_solution(const Eigen::VectorXd& embedded) const;
  /// Embedded-vector layout of a solution q of B q = r.
  Eigen::VectorXd lift_solution(const std::vector<double>& q) const;
  Eigen::MatrixXd system_block() const;
};

EmbeddedSystem hermitian_embed(const SparseMatrix& b, const std::vector<double>& r);
EmbeddedSystem hermitian_embed(const Eigen::MatrixXd& b, const std::vector<double>& r);

/// a_i = Tr(H P_i) / 2^N over all 4^N strings, dropping |a_i| < drop_tol.
LcuDecomposition lcu_decompose(const Eigen::MatrixXcd& h, double drop_tol = 1e-12);
LcuDecomposition lcu_decompose(const EmbeddedSystem& sys, double drop_tol = 1e-12);

/// Keeps the `keep` largest terms; throws InvalidArgument unless
/// 1 <= keep <= lcu.size().
LcuDecomposition lcu_truncate(const LcuDecomposition& lcu, std::size_t keep);

struct HistogramRow {
  std::size_t index;
  std::string pauli;
  double coefficient;
};

std::vector<HistogramRow> lcu_histogram(const LcuDecomposition& lcu);
/// `term,coefficient` rows in sorted order.
void write_histogram_csv(std::ostream& os, const LcuDecomposition& lcu);
/// `pauli_string,coefficient` rows, e.g. `XZI,0.125`.
void write_lcu_csv(std::ostream& os, const LcuDecomposition& lcu);

}  // namespace qpi
