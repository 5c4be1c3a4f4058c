// Copyright 2026 The docre Authors.
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

#include "docre/tensor.h"

#include <algorithm>
#include <cmath>

#include "docre/errors.h"

namespace docre {

Tensor::Tensor(size_t rows, size_t cols, std::vector<double> values)
    : rows_(rows), cols_(cols), data_(std::move(values)) {
  if (data_.size() != rows * cols) {
    throw DimensionError("tensor value count " + std::to_string(data_.size()) +
                         " does not match shape " + ShapeString());
  }
}

Tensor Tensor::FromRows(std::initializer_list<std::initializer_list<double>> rows) {
  const size_t r = rows.size();
  const size_t c = r == 0 ? 0 : rows.begin()->size();
  Tensor t(r, c);
  size_t i = 0;
  for (const auto &row : rows) {
    if (row.size() != c) throw DimensionError("ragged rows in Tensor::FromRows");
    for (double v : row) t.data_[i++] = v;
  }
  return t;
}

Tensor Tensor::Identity(size_t n) {
  Tensor t(n, n);
  for (size_t i = 0; i < n; ++i) t(i, i) = 1.0;
  return t;
}

Tensor Tensor::RowVector(std::initializer_list<double> values) {
  return Tensor(1, values.size(), std::vector<double>(values));
}

void Tensor::Fill(double v) { std::fill(data_.begin(), data_.end(), v); }

void Tensor::AddScaled(const Tensor &other, double scale) {
  CheckShape(SameShape(other), "AddScaled", *this, other);
  for (size_t i = 0; i < data_.size(); ++i) data_[i] += scale * other.data_[i];
}

bool Tensor::AllFinite() const {
  return std::all_of(data_.begin(), data_.end(),
                     [](double v) { return std::isfinite(v); });
}

double Tensor::MaxAbsDiff(const Tensor &other) const {
  CheckShape(SameShape(other), "MaxAbsDiff", *this, other);
  double m = 0.0;
  for (size_t i = 0; i < data_.size(); ++i) {
    m = std::max(m, std::abs(data_[i] - other.data_[i]));
  }
  return m;
}

Tensor Tensor::Transposed() const {
  Tensor t(cols_, rows_);
  for (size_t r = 0; r < rows_; ++r) {
    for (size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  }
  return t;
}

std::string Tensor::ShapeString() const {
  return "[" + std::to_string(rows_) + "x" + std::to_string(cols_) + "]";
}

void CheckShape(bool cond, const std::string &op, const Tensor &a, const Tensor &b) {
  if (!cond) {
    throw DimensionError(op + ": incompatible shapes " + a.ShapeString() + " and " +
                         b.ShapeString());
  }
}

}  // namespace docre
