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

#include "qpi/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>

#include "qpi/errors.hpp"

namespace qpi {

SparseMatrix::SparseMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), row_ptr_(rows + 1, 0) {}

SparseMatrix SparseMatrix::from_triplets(std::size_t rows, std::size_t cols,
                                         std::vector<Triplet> triplets) {
  for (const auto& t : triplets) {
    if (t.row >= rows || t.col >= cols) {
      throw InvalidArgument("sparse triplet out of range");
    }
  }
  std::sort(triplets.begin(), triplets.end(),
            [](const Triplet& a, const Triplet& b) {
              return a.row != b.row ? a.row < b.row : a.col < b.col;
            });

  SparseMatrix m(rows, cols);
  std::size_t k = 0;
  for (std::size_t i = 0; i < rows; ++i) {
    while (k < triplets.size() && triplets[k].row == i) {
      const std::size_t col = triplets[k].col;
      double sum = 0.0;
      while (k < triplets.size() && triplets[k].row == i &&
             triplets[k].col == col) {
        sum += triplets[k].value;
        ++k;
      }
      if (std::abs(sum) >= kDropTolerance) m.entries_.push_back({col, sum});
    }
    m.row_ptr_[i + 1] = m.entries_.size();
  }
  return m;
}

SparseMatrix SparseMatrix::identity(std::size_t n) {
  std::vector<Triplet> t;
  t.reserve(n);
  for (std::size_t i = 0; i < n; ++i) t.push_back({i, i, 1.0});
  return from_triplets(n, n, std::move(t));
}

SparseMatrix SparseMatrix::from_dense(const Eigen::MatrixXd& dense) {
  std::vector<Triplet> t;
  for (Eigen::Index i = 0; i < dense.rows(); ++i) {
    for (Eigen::Index j = 0; j < dense.cols(); ++j) {
      if (dense(i, j) != 0.0) {
        t.push_back({static_cast<std::size_t>(i), static_cast<std::size_t>(j),
                     dense(i, j)});
      }
    }
  }
  return from_triplets(static_cast<std::size_t>(dense.rows()),
                       static_cast<std::size_t>(dense.cols()), std::move(t));
}

std::span<const SparseEntry> SparseMatrix::row(std::size_t i) const {
  return {entries_.data() + row_ptr_[i], row_ptr_[i + 1] - row_ptr_[i]};
}

double SparseMatrix::at(std::size_t i, std::size_t j) const {
  const auto r = row(i);
  const auto it = std::lower_bound(
      r.begin(), r.end(), j,
      [](const SparseEntry& e, std::size_t c) { return e.col < c; });
  return (it != r.end() && it->col == j) ? it->value : 0.0;
}

double SparseMatrix::row_sum(std::size_t i) const {
  double s = 0.0;
  for (const auto& e : row(i)) s += e.value;
  return s;
}

std::vector<double> SparseMatrix::multiply(std::span<const double> x) const {
  if (x.size() != cols_) throw InvalidArgument("sparse multiply: size mismatch");
  std::vector<double> y(rows_, 0.0);
  for (std::size_t i = 0; i < rows_; ++i) {
    double acc = 0.0;
    for (const auto& e : row(i)) acc += e.value * x[e.col];
    y[i] = acc;
  }
  return y;
}

Eigen::MatrixXd SparseMatrix::to_dense() const {
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(rows_),
                                            static_cast<Eigen::Index>(cols_));
  for (std::size_t i = 0; i < rows_; ++i) {
    for (const auto& e : row(i)) {
      d(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(e.col)) =
          e.value;
    }
  }
  return d;
}

SparseMatrix SparseMatrix::linear_combination(double a,
                                              const SparseMatrix& other,
                                              double b) const {
  if (rows_ != other.rows_ || cols_ != other.cols_) {
    throw InvalidArgument("sparse linear_combination: shape mismatch");
  }
  std::vector<Triplet> t;
  t.reserve(nnz() + other.nnz());
  for (const auto& e : triplets()) t.push_back({e.row, e.col, a * e.value});
  for (const auto& e : other.triplets()) {
    t.push_back({e.row, e.col, b * e.value});
  }
  return from_triplets(rows_, cols_, std::move(t));
}

std::vector<Triplet> SparseMatrix::triplets() const {
  std::vector<Triplet> t;
  t.reserve(nnz());
  for (std::size_t i = 0; i < rows_; ++i) {
    for (const auto& e : row(i)) t.push_back({i, e.col, e.value});
  }
  return t;
}

void SparseMatrix::write_csv(std::ostream& os) const {
  os << "row,col,value\n";
  const auto old = os.precision(17);
  for (const auto& t : triplets()) {
    os << t.row << ',' << t.col << ',' << t.value << '\n';
  }
  os.precision(old);
}

}  // namespace qpi
