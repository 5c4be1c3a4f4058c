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

#include "docre/kernels.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "docre/errors.h"

namespace docre {

SparseRows SparseRows::FromEntries(size_t rows, size_t cols, std::vector<SparseEntry> entries) {
  std::stable_sort(entries.begin(), entries.end(),
                   [](const SparseEntry &a, const SparseEntry &b) { return a.row < b.row; });
  SparseRows s;
  s.rows = rows;
  s.cols = cols;
  s.offsets.assign(rows + 1, 0);
  s.cols_index.reserve(entries.size());
  s.weights.reserve(entries.size());
  for (const SparseEntry &e : entries) {
    if (e.row < 0 || static_cast<size_t>(e.row) >= rows || e.col < 0 ||
        static_cast<size_t>(e.col) >= cols) {
      throw DimensionError("sparse entry out of range");
    }
    s.offsets[e.row + 1]++;
    s.cols_index.push_back(e.col);
    s.weights.push_back(e.weight);
  }
  for (size_t r = 0; r < rows; ++r) s.offsets[r + 1] += s.offsets[r];
  return s;
}

namespace kernels {

namespace {

void CheckInner(bool ok, const char *op, const Tensor &a, const Tensor &b) {
  CheckShape(ok, op, a, b);
}

}  // namespace

Tensor MatMul(const Tensor &a, const Tensor &b) {
  CheckInner(a.cols() == b.rows(), "matmul", a, b);
  const size_t m = a.rows(), k = a.cols(), n = b.cols();
  Tensor out(m, n);
  const long rows = static_cast<long>(m);
#pragma omp parallel for schedule(static) if (m * k * n >= kParallelWork)
  for (long i = 0; i < rows; ++i) {
    double *o = out.data() + i * n;
    const double *ai = a.data() + i * k;
    for (size_t p = 0; p < k; ++p) {
      const double av = ai[p];
      const double *bp = b.data() + p * n;
      for (size_t j = 0; j < n; ++j) o[j] += av * bp[j];
    }
  }
  return out;
}

Tensor MatMulTransB(const Tensor &a, const Tensor &b) {
  CheckInner(a.cols() == b.cols(), "matmul_transb", a, b);
  const size_t m = a.rows(), k = a.cols(), n = b.rows();
  Tensor out(m, n);
  const long rows = static_cast<long>(m);
#pragma omp parallel for schedule(static) if (m * k * n >= kParallelWork)
  for (long i = 0; i < rows; ++i) {
    const double *ai = a.data() + i * k;
    for (size_t j = 0; j < n; ++j) {
      const double *bj = b.data() + j * k;
      double acc = 0.0;
      for (size_t p = 0; p < k; ++p) acc += ai[p] * bj[p];
      out(i, j) = acc;
    }
  }
  return out;
}

Tensor MatMulTransA(const Tensor &a, const Tensor &b) {
  CheckInner(a.rows() == b.rows(), "matmul_transa", a, b);
  const size_t m = a.cols(), k = a.rows(), n = b.cols();
  Tensor out(m, n);
  const long rows = static_cast<long>(m);
#pragma omp parallel for schedule(static) if (m * k * n >= kParallelWork)
  for (long i = 0; i < rows; ++i) {
    double *o = out.data() + i * n;
    for (size_t p = 0; p < k; ++p) {
      const double av = a(p, i);
      if (av == 0.0) continue;
      const double *bp = b.data() + p * n;
      for (size_t j = 0; j < n; ++j) o[j] += av * bp[j];
    }
  }
  return out;
}

Tensor SparseMatMul(const SparseRows &s, const Tensor &x) {
  if (s.cols != x.rows()) {
    throw DimensionError("sparse matmul: " + std::to_string(s.cols) + " columns vs " +
                         x.ShapeString());
  }
  const size_t n = x.cols();
  Tensor out(s.rows, n);
  const long rows = static_cast<long>(s.rows);
#pragma omp parallel for schedule(static) if (s.nnz() * n >= kParallelWork)
  for (long r = 0; r < rows; ++r) {
    double *o = out.data() + r * n;
    for (size_t e = s.offsets[r]; e < s.offsets[r + 1]; ++e) {
      const double w = s.weights[e];
      const double *xr = x.data() + static_cast<size_t>(s.cols_index[e]) * n;
      for (size_t j = 0; j < n; ++j) o[j] += w * xr[j];
    }
  }
  return out;
}

Tensor SparseMatMulTransA(const SparseRows &s, const Tensor &g) {
  if (s.rows != g.rows()) {
    throw DimensionError("sparse matmul^T: " + std::to_string(s.rows) + " rows vs " +
                         g.ShapeString());
  }
  // Scatter form is not row-parallel; the transpose is small for document graphs.
  return serial::SparseMatMulTransA(s, g);
}

Tensor RowSoftmax(const Tensor &x) {
  Tensor out(x.rows(), x.cols());
  for (size_t r = 0; r < x.rows(); ++r) {
    auto in = x.row(r);
    auto o = out.row(r);
    if (in.empty()) continue;
    const double mx = *std::max_element(in.begin(), in.end());
    double z = 0.0;
    for (size_t j = 0; j < in.size(); ++j) {
      o[j] = std::exp(in[j] - mx);
      z += o[j];
    }
    for (double &v : o) v /= z;
  }
  return out;
}

Tensor LogSumExpRows(const Tensor &x) {
  if (x.rows() == 0) throw ArgumentError("logsumexp pooling over zero rows");
  Tensor out(1, x.cols());
  for (size_t c = 0; c < x.cols(); ++c) {
    double mx = -std::numeric_limits<double>::infinity();
    for (size_t r = 0; r < x.rows(); ++r) mx = std::max(mx, x(r, c));
    double z = 0.0;
    for (size_t r = 0; r < x.rows(); ++r) z += std::exp(x(r, c) - mx);
    out(0, c) = mx + std::log(z);
  }
  return out;
}

namespace serial {

Tensor MatMul(const Tensor &a, const Tensor &b) {
  CheckInner(a.cols() == b.rows(), "matmul", a, b);
  Tensor out(a.rows(), b.cols());
  for (size_t i = 0; i < a.rows(); ++i) {
    for (size_t j = 0; j < b.cols(); ++j) {
      double acc = 0.0;
      for (size_t p = 0; p < a.cols(); ++p) acc += a(i, p) * b(p, j);
      out(i, j) = acc;
    }
  }
  return out;
}

Tensor MatMulTransB(const Tensor &a, const Tensor &b) {
  CheckInner(a.cols() == b.cols(), "matmul_transb", a, b);
  Tensor out(a.rows(), b.rows());
  for (size_t i = 0; i < a.rows(); ++i) {
    for (size_t j = 0; j < b.rows(); ++j) {
      double acc = 0.0;
      for (size_t p = 0; p < a.cols(); ++p) acc += a(i, p) * b(j, p);
      out(i, j) = acc;
    }
  }
  return out;
}

Tensor MatMulTransA(const Tensor &a, const Tensor &b) {
  CheckInner(a.rows() == b.rows(), "matmul_transa", a, b);
  Tensor out(a.cols(), b.cols());
  for (size_t i = 0; i < a.cols(); ++i) {
    for (size_t j = 0; j < b.cols(); ++j) {
      double acc = 0.0;
      for (size_t p = 0; p < a.rows(); ++p) acc += a(p, i) * b(p, j);
      out(i, j) = acc;
    }
  }
  return out;
}

Tensor SparseMatMul(const SparseRows &s, const Tensor &x) {
  if (s.cols != x.rows()) throw DimensionError("sparse matmul shape mismatch");
  Tensor out(s.rows, x.cols());
  for (size_t r = 0; r < s.rows; ++r) {
    for (size_t e = s.offsets[r]; e < s.offsets[r + 1]; ++e) {
      for (size_t j = 0; j < x.cols(); ++j) {
        out(r, j) += s.weights[e] * x(s.cols_index[e], j);
      }
    }
  }
  return out;
}

Tensor SparseMatMulTransA(const SparseRows &s, const Tensor &g) {
  if (s.rows != g.rows()) throw DimensionError("sparse matmul^T shape mismatch");
  Tensor out(s.cols, g.cols());
  for (size_t r = 0; r < s.rows; ++r) {
    for (size_t e = s.offsets[r]; e < s.offsets[r + 1]; ++e) {
      for (size_t j = 0; j < g.cols(); ++j) {
        out(s.cols_index[e], j) += s.weights[e] * g(r, j);
      }
    }
  }
  return out;
}

}  // namespace serial
}  // namespace kernels
}  // namespace docre
