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

#include "docre/autograd.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "docre/errors.h"

namespace docre {

Var Graph::Push(Tensor value, const char *op, std::function<void()> backward) {
  if (!value.AllFinite()) {
    throw NumericError(std::string(op) + " produced non-finite values");
  }
  Node n;
  n.value = std::move(value);
  n.backward = std::move(backward);
  nodes_.push_back(std::move(n));
  return Var{static_cast<int>(nodes_.size()) - 1};
}

Var Graph::Constant(Tensor value) { return Push(std::move(value), "constant"); }

Var Graph::Param(const Parameter &p) {
  auto it = param_nodes_.find(p.index);
  if (it != param_nodes_.end()) return Var{it->second};
  Node n;
  n.external = &p.value;
  n.param_index = static_cast<int>(p.index);
  nodes_.push_back(std::move(n));
  Var v{static_cast<int>(nodes_.size()) - 1};
  param_nodes_[p.index] = v.id;
  return v;
}

Var Graph::MatMul(Var a, Var b) {
  Var out = Push(kernels::MatMul(value(a), value(b)), "matmul");
  nodes_[out.id].backward = [this, a, b, out] {
    const Tensor &g = nodes_[out.id].grad;
    node(a).grad.AddScaled(kernels::MatMulTransB(g, value(b)));
    node(b).grad.AddScaled(kernels::MatMulTransA(value(a), g));
  };
  return out;
}

Var Graph::MatMulTransB(Var a, Var b) {
  Var out = Push(kernels::MatMulTransB(value(a), value(b)), "matmul_transb");
  nodes_[out.id].backward = [this, a, b, out] {
    const Tensor &g = nodes_[out.id].grad;
    node(a).grad.AddScaled(kernels::MatMul(g, value(b)));
    node(b).grad.AddScaled(kernels::MatMulTransA(g, value(a)));
  };
  return out;
}

Var Graph::Add(Var a, Var b) {
  CheckShape(value(a).SameShape(value(b)), "add", value(a), value(b));
  Tensor v = value(a);
  v.AddScaled(value(b));
  Var out = Push(std::move(v), "add");
  nodes_[out.id].backward = [this, a, b, out] {
    const Tensor &g = nodes_[out.id].grad;
    node(a).grad.AddScaled(g);
    node(b).grad.AddScaled(g);
  };
  return out;
}

Var Graph::AddRow(Var a, Var row) {
  const Tensor &x = value(a);
  const Tensor &r = value(row);
  CheckShape(r.rows() == 1 && r.cols() == x.cols(), "add_row", x, r);
  Tensor v = x;
  for (size_t i = 0; i < v.rows(); ++i) {
    for (size_t j = 0; j < v.cols(); ++j) v(i, j) += r(0, j);
  }
  Var out = Push(std::move(v), "add_row");
  nodes_[out.id].backward = [this, a, row, out] {
    const Tensor &g = nodes_[out.id].grad;
    node(a).grad.AddScaled(g);
    Tensor &gr = node(row).grad;
    for (size_t i = 0; i < g.rows(); ++i) {
      for (size_t j = 0; j < g.cols(); ++j) gr(0, j) += g(i, j);
    }
  };
  return out;
}

Var Graph::Scale(Var a, double s) {
  Tensor v = value(a);
  for (double &x : v.values()) x *= s;
  Var out = Push(std::move(v), "scale");
  nodes_[out.id].backward = [this, a, out, s] {
    node(a).grad.AddScaled(nodes_[out.id].grad, s);
  };
  return out;
}

Var Graph::Tanh(Var a) {
  Tensor v = value(a);
  for (double &x : v.values()) x = std::tanh(x);
  Var out = Push(std::move(v), "tanh");
  nodes_[out.id].backward = [this, a, out] {
    const Tensor &g = nodes_[out.id].grad;
    const Tensor &y = nodes_[out.id].value;
    Tensor &ga = node(a).grad;
    for (size_t i = 0; i < g.size(); ++i) ga[i] += g[i] * (1.0 - y[i] * y[i]);
  };
  return out;
}

Var Graph::Relu(Var a) {
  Tensor v = value(a);
  for (double &x : v.values()) {
    kinks_.push_back(x > 0.0);
    x = x > 0.0 ? x : 0.0;
  }
  Var out = Push(std::move(v), "relu");
  nodes_[out.id].backward = [this, a, out] {
    const Tensor &g = nodes_[out.id].grad;
    const Tensor &x = value(a);
    Tensor &ga = node(a).grad;
    for (size_t i = 0; i < g.size(); ++i) {
      if (x[i] > 0.0) ga[i] += g[i];
    }
  };
  return out;
}

Var Graph::Sigmoid(Var a) {
  Tensor v = value(a);
  for (double &x : v.values()) {
    x = x >= 0.0 ? 1.0 / (1.0 + std::exp(-x)) : std::exp(x) / (1.0 + std::exp(x));
  }
  Var out = Push(std::move(v), "sigmoid");
  nodes_[out.id].backward = [this, a, out] {
    const Tensor &g = nodes_[out.id].grad;
    const Tensor &y = nodes_[out.id].value;
    Tensor &ga = node(a).grad;
    for (size_t i = 0; i < g.size(); ++i) ga[i] += g[i] * y[i] * (1.0 - y[i]);
  };
  return out;
}

Var Graph::ConcatCols(const std::vector<Var> &parts) {
  if (parts.empty()) throw ArgumentError("concat of zero parts");
  const size_t rows = value(parts[0]).rows();
  size_t cols = 0;
  for (Var p : parts) {
    CheckShape(value(p).rows() == rows, "concat_cols", value(parts[0]), value(p));
    cols += value(p).cols();
  }
  Tensor v(rows, cols);
  size_t off = 0;
  for (Var p : parts) {
    const Tensor &x = value(p);
    for (size_t i = 0; i < rows; ++i) {
      std::copy(x.row(i).begin(), x.row(i).end(), v.row(i).begin() + off);
    }
    off += x.cols();
  }
  Var out = Push(std::move(v), "concat_cols");
  nodes_[out.id].backward = [this, parts, out] {
    const Tensor &g = nodes_[out.id].grad;
    size_t off = 0;
    for (Var p : parts) {
      Tensor &gp = node(p).grad;
      for (size_t i = 0; i < gp.rows(); ++i) {
        for (size_t j = 0; j < gp.cols(); ++j) gp(i, j) += g(i, off + j);
      }
      off += gp.cols();
    }
  };
  return out;
}

Var Graph::ConcatRows(const std::vector<Var> &parts) {
  if (parts.empty()) throw ArgumentError("concat of zero parts");
  const size_t cols = value(parts[0]).cols();
  size_t rows = 0;
  for (Var p : parts) {
    CheckShape(value(p).cols() == cols, "concat_rows", value(parts[0]), value(p));
    rows += value(p).rows();
  }
  std::vector<double> data;
  data.reserve(rows * cols);
  for (Var p : parts) {
    data.insert(data.end(), value(p).values().begin(), value(p).values().end());
  }
  Var out = Push(Tensor(rows, cols, std::move(data)), "concat_rows");
  nodes_[out.id].backward = [this, parts, out] {
    const Tensor &g = nodes_[out.id].grad;
    size_t off = 0;
    for (Var p : parts) {
      Tensor &gp = node(p).grad;
      for (size_t i = 0; i < gp.size(); ++i) gp[i] += g[off + i];
      off += gp.size();
    }
  };
  return out;
}

Var Graph::GatherRows(Var a, std::vector<int> idx) {
  const Tensor &x = value(a);
  Tensor v(idx.size(), x.cols());
  for (size_t i = 0; i < idx.size(); ++i) {
    if (idx[i] < 0) continue;
    if (static_cast<size_t>(idx[i]) >= x.rows()) {
      throw DimensionError("gather index " + std::to_string(idx[i]) + " out of range for " +
                           x.ShapeString());
    }
    auto src = x.row(idx[i]);
    std::copy(src.begin(), src.end(), v.row(i).begin());
  }
  Var out = Push(std::move(v), "gather_rows");
  nodes_[out.id].backward = [this, a, out, idx = std::move(idx)] {
    const Tensor &g = nodes_[out.id].grad;
    Tensor &ga = node(a).grad;
    for (size_t i = 0; i < idx.size(); ++i) {
      if (idx[i] < 0) continue;
      auto dst = ga.row(idx[i]);
      auto src = g.row(i);
      for (size_t j = 0; j < dst.size(); ++j) dst[j] += src[j];
    }
  };
  return out;
}

Var Graph::RepeatRow(Var row, size_t n) {
  return GatherRows(row, std::vector<int>(n, 0));
}

Var Graph::SegmentMean(Var a, std::vector<std::pair<size_t, size_t>> ranges) {
  const Tensor &x = value(a);
  Tensor v(ranges.size(), x.cols());
  for (size_t i = 0; i < ranges.size(); ++i) {
    const auto [s, e] = ranges[i];
    if (s >= e || e > x.rows()) throw ArgumentError("segment mean over an empty or invalid span");
    for (size_t r = s; r < e; ++r) {
      for (size_t j = 0; j < x.cols(); ++j) v(i, j) += x(r, j);
    }
    const double inv = 1.0 / static_cast<double>(e - s);
    for (double &y : v.row(i)) y *= inv;
  }
  Var out = Push(std::move(v), "segment_mean");
  nodes_[out.id].backward = [this, a, out, ranges = std::move(ranges)] {
    const Tensor &g = nodes_[out.id].grad;
    Tensor &ga = node(a).grad;
    for (size_t i = 0; i < ranges.size(); ++i) {
      const auto [s, e] = ranges[i];
      const double inv = 1.0 / static_cast<double>(e - s);
      for (size_t r = s; r < e; ++r) {
        for (size_t j = 0; j < g.cols(); ++j) ga(r, j) += g(i, j) * inv;
      }
    }
  };
  return out;
}

Var Graph::GroupLogSumExp(Var a, std::vector<std::vector<int>> groups) {
  const Tensor &x = value(a);
  Tensor v(groups.size(), x.cols());
  for (size_t i = 0; i < groups.size(); ++i) {
    if (groups[i].empty()) throw ArgumentError("logsumexp pooling over zero rows");
    for (size_t c = 0; c < x.cols(); ++c) {
      double mx = -std::numeric_limits<double>::infinity();
      for (int r : groups[i]) mx = std::max(mx, x(r, c));
      double z = 0.0;
      for (int r : groups[i]) z += std::exp(x(r, c) - mx);
      v(i, c) = mx + std::log(z);
    }
  }
  Var out = Push(std::move(v), "logsumexp");
  nodes_[out.id].backward = [this, a, out, groups = std::move(groups)] {
    const Tensor &g = nodes_[out.id].grad;
    const Tensor &y = nodes_[out.id].value;
    const Tensor &x = value(a);
    Tensor &ga = node(a).grad;
    for (size_t i = 0; i < groups.size(); ++i) {
      for (int r : groups[i]) {
        for (size_t c = 0; c < x.cols(); ++c) {
          ga(r, c) += g(i, c) * std::exp(x(r, c) - y(i, c));
        }
      }
    }
  };
  return out;
}

Var Graph::LogSumExpRows(Var a) {
  std::vector<int> all(value(a).rows());
  for (size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i);
  return GroupLogSumExp(a, {std::move(all)});
}

Var Graph::RowSoftmax(Var a) {
  Var out = Push(kernels::RowSoftmax(value(a)), "row_softmax");
  nodes_[out.id].backward = [this, a, out] {
    const Tensor &g = nodes_[out.id].grad;
    const Tensor &y = nodes_[out.id].value;
    Tensor &ga = node(a).grad;
    for (size_t i = 0; i < y.rows(); ++i) {
      double dot = 0.0;
      for (size_t j = 0; j < y.cols(); ++j) dot += g(i, j) * y(i, j);
      for (size_t j = 0; j < y.cols(); ++j) ga(i, j) += y(i, j) * (g(i, j) - dot);
    }
  };
  return out;
}

Var Graph::SparseMatMul(std::shared_ptr<const SparseRows> s, Var a) {
  Var out = Push(kernels::SparseMatMul(*s, value(a)), "sparse_matmul");
  nodes_[out.id].backward = [this, s, a, out] {
    node(a).grad.AddScaled(kernels::SparseMatMulTransA(*s, nodes_[out.id].grad));
  };
  return out;
}

Var Graph::Sum(Var a) {
  double total = 0.0;
  for (double x : value(a).values()) total += x;
  Var out = Push(Tensor(1, 1, total), "sum");
  nodes_[out.id].backward = [this, a, out] {
    const double g = nodes_[out.id].grad[0];
    for (double &x : node(a).grad.values()) x += g;
  };
  return out;
}

Var Graph::BinaryCrossEntropy(Var probs, Tensor targets) {
  const Tensor &y = value(probs);
  CheckShape(y.SameShape(targets), "binary_cross_entropy", y, targets);
  double loss = 0.0;
  for (size_t i = 0; i < y.size(); ++i) {
    const double p = std::clamp(y[i], kClip, 1.0 - kClip);
    kinks_.push_back(y[i] < kClip ? 1 : y[i] > 1.0 - kClip ? 2 : 0);
    loss -= targets[i] * std::log(p) + (1.0 - targets[i]) * std::log(1.0 - p);
  }
  Var out = Push(Tensor(1, 1, loss), "binary_cross_entropy");
  nodes_[out.id].backward = [this, probs, out, targets = std::move(targets)] {
    const double g = nodes_[out.id].grad[0];
    const Tensor &y = value(probs);
    Tensor &gp = node(probs).grad;
    for (size_t i = 0; i < y.size(); ++i) {
      if (y[i] < kClip || y[i] > 1.0 - kClip) continue;  // clipped: flat
      gp[i] += g * (-targets[i] / y[i] + (1.0 - targets[i]) / (1.0 - y[i]));
    }
  };
  return out;
}

void Graph::Backward(Var loss) {
  const Tensor &l = value(loss);
  if (l.rows() != 1 || l.cols() != 1) {
    throw ArgumentError("backward needs a scalar loss, got " + l.ShapeString());
  }
  for (size_t i = 0; i < nodes_.size(); ++i) {
    const Tensor &v = value(Var{static_cast<int>(i)});
    nodes_[i].grad = Tensor(v.rows(), v.cols());
  }
  nodes_[loss.id].grad[0] = 1.0;
  for (int i = loss.id; i >= 0; --i) {
    if (nodes_[i].backward) nodes_[i].backward();
  }
}

GradientMap Graph::ParamGradients(const ParamRegistry &registry) const {
  GradientMap g = GradientMap::ZerosLike(registry);
  for (const Node &n : nodes_) {
    if (n.param_index < 0 || n.grad.empty()) continue;
    g.grads.at(n.param_index).AddScaled(n.grad);
  }
  return g;
}

}  // namespace docre
