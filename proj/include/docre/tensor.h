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

#ifndef DOCRE_TENSOR_H_
#define DOCRE_TENSOR_H_

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace docre {

// Dense row-major matrix of doubles. Vectors are 1 x d.
class Tensor {
 public:
  Tensor() = default;
  Tensor(size_t rows, size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  Tensor(size_t rows, size_t cols, std::vector<double> values);

  static Tensor FromRows(std::initializer_list<std::initializer_list<double>> rows);
  static Tensor Identity(size_t n);
  static Tensor RowVector(std::initializer_list<double> values);

  size_t rows() const { return rows_; }
  size_t cols() const { return cols_; }
  size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }
  bool SameShape(const Tensor &other) const {
    return rows_ == other.rows_ && cols_ == other.cols_;
  }

  double &operator()(size_t r, size_t c) { return data_[r * cols_ + c]; }
  double operator()(size_t r, size_t c) const { return data_[r * cols_ + c]; }
  double &operator[](size_t i) { return data_[i]; }
  double operator[](size_t i) const { return data_[i]; }

  std::span<double> row(size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }

  double *data() { return data_.data(); }
  const double *data() const { return data_.data(); }
  std::vector<double> &values() { return data_; }
  const std::vector<double> &values() const { return data_; }

  void Fill(double v);
  // this += scale * other; shapes must agree.
  void AddScaled(const Tensor &other, double scale = 1.0);
  bool AllFinite() const;
  double MaxAbsDiff(const Tensor &other) const;
  Tensor Transposed() const;
  std::string ShapeString() const;

  bool operator==(const Tensor &other) const = default;

 private:
  size_t rows_ = 0;
  size_t cols_ = 0;
  std::vector<double> data_;
};

// Throws DimensionError unless `cond` holds.
void CheckShape(bool cond, const std::string &op, const Tensor &a, const Tensor &b);

}  // namespace docre

#endif  // DOCRE_TENSOR_H_
