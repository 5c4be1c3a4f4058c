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

#ifndef DOCRE_KERNELS_H_
#define DOCRE_KERNELS_H_

// Dense and sparse compute kernels. Each kernel has an OpenMP-parallel
// version used by the library and a plain serial reference kept for tests
// and benchmarks. Parallel versions split work by output row only, so every
// output element is accumulated in the same order as the reference.

#include <cstddef>
#include <vector>

#include "docre/tensor.h"

namespace docre {

// One weighted entry of a row-sparse matrix: out[row] += weight * in[col].
struct SparseEntry {
  int row;
  int col;
  double weight;
};

// Row-sparse matrix with entries grouped by row.
struct SparseRows {
  size_t rows = 0;
  size_t cols = 0;
  std::vector<size_t> offsets;  // rows + 1 entries
  std::vector<int> cols_index;
  std::vector<double> weights;

  static SparseRows FromEntries(size_t rows, size_t cols, std::vector<SparseEntry> entries);
  size_t nnz() const { return weights.size(); }
};

namespace kernels {

// Minimum multiply-add count before a kernel opens a parallel region.
inline constexpr size_t kParallelWork = 1 << 15;

// out = a * b
Tensor MatMul(const Tensor &a, const Tensor &b);
// out = a * b^T
Tensor MatMulTransB(const Tensor &a, const Tensor &b);
// out = a^T * b
Tensor MatMulTransA(const Tensor &a, const Tensor &b);
// out = s * x
Tensor SparseMatMul(const SparseRows &s, const Tensor &x);
// out = s^T * g, used for gradients of SparseMatMul.
Tensor SparseMatMulTransA(const SparseRows &s, const Tensor &g);

Tensor RowSoftmax(const Tensor &x);
// Column-wise log-sum-exp over all rows, 1 x cols.
Tensor LogSumExpRows(const Tensor &x);

namespace serial {
Tensor MatMul(const Tensor &a, const Tensor &b);
Tensor MatMulTransB(const Tensor &a, const Tensor &b);
Tensor MatMulTransA(const Tensor &a, const Tensor &b);
Tensor SparseMatMul(const SparseRows &s, const Tensor &x);
Tensor SparseMatMulTransA(const SparseRows &s, const Tensor &g);
}  // namespace serial

}  // namespace kernels
}  // namespace docre

#endif  // DOCRE_KERNELS_H_
