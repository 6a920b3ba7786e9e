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
#include <iosfwd>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace qpi {

struct Triplet {
  std::size_t row;
  std::size_t col;
  double value;
};

struct SparseEntry {
  std::size_t col;
  double value;
};

/// Compressed-row real matrix. Entries below 1e-15 in magnitude are never
/// stored and column indices are strictly increasing within a row.
class SparseMatrix {
 public:
  static constexpr double kDropTolerance = 1e-15;

  SparseMatrix() = default;
  SparseMatrix(std::size_t rows, std::size_t cols);

  /// Duplicate (row, col) pairs are summed before the drop tolerance applies.
  static SparseMatrix from_triplets(std::size_t rows, std::size_t cols,
                                    std::vector<Triplet> triplets);
  static SparseMatrix identity(std::size_t n);
  static SparseMatrix from_dense(const Eigen::MatrixXd& dense);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t nnz() const noexcept { return entries_.size(); }

  std::span<const SparseEntry> row(std::size_t i) const;
  double at(std::size_t i, std::size_t j) const;
  double row_sum(std::size_t i) const;

  std::vector<double> multiply(std::span<const double> x) const;
  Eigen::MatrixXd to_dense() const;

  /// Returns a*this + b*other; shapes must agree.
  SparseMatrix linear_combination(double a, const SparseMatrix& other,
                                  double b) const;

  std::vector<Triplet> triplets() const;

  /// Coordinate-list CSV with header `row,col,value`.
  void write_csv(std::ostream& os) const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::size_t> row_ptr_{0};
  std::vector<SparseEntry> entries_;
};

}  // namespace qpi
