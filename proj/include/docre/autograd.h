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

#ifndef DOCRE_AUTOGRAD_H_
#define DOCRE_AUTOGRAD_H_

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "docre/kernels.h"
#include "docre/params.h"
#include "docre/tensor.h"

namespace docre {

// Handle to a value recorded on a Graph.
struct Var {
  int id = -1;
  bool valid() const { return id >= 0; }
};

// Reverse-mode gradient tape. A Graph records one forward pass; values are
// computed eagerly and Backward() walks the tape in reverse. A Graph is not
// thread-safe, use one per document. Parameters are read, never written.
class Graph {
 public:
  Graph() = default;
  Graph(const Graph &) = delete;
  Graph &operator=(const Graph &) = delete;

  Var Constant(Tensor value);
  // Leaf bound to a registry parameter. Repeated calls return the same leaf.
  Var Param(const Parameter &p);

  const Tensor &value(Var v) const {
    const Node &n = nodes_.at(v.id);
    return n.external ? *n.external : n.value;
  }
  // One entry per non-smooth point visited by the forward pass: the side of
  // each ReLU input and the clip state of each BCE probability. Two forward
  // passes with equal patterns lie on the same smooth piece of the loss.
  const std::vector<uint8_t> &kink_pattern() const { return kinks_; }
  // Gradient of the last Backward() loss with respect to `v`.
  const Tensor &grad(Var v) const { return nodes_.at(v.id).grad; }
  size_t size() const { return nodes_.size(); }

  Var MatMul(Var a, Var b);
  Var MatMulTransB(Var a, Var b);  // a * b^T
  Var Add(Var a, Var b);
  Var AddRow(Var a, Var row);  // broadcast a 1 x n row over every row of a
  Var Scale(Var a, double s);
  Var Tanh(Var a);
  Var Relu(Var a);
  Var Sigmoid(Var a);
  Var ConcatCols(const std::vector<Var> &parts);
  Var ConcatRows(const std::vector<Var> &parts);
  // Row i of the result is row idx[i] of a, or zeros when idx[i] < 0.
  Var GatherRows(Var a, std::vector<int> idx);
  Var RepeatRow(Var row, size_t n);
  // Row i is the mean of rows [ranges[i].first, ranges[i].second) of a.
  Var SegmentMean(Var a, std::vector<std::pair<size_t, size_t>> ranges);
  // Row i is the column-wise log-sum-exp over rows groups[i] of a.
  Var GroupLogSumExp(Var a, std::vector<std::vector<int>> groups);
  Var LogSumExpRows(Var a);
  Var RowSoftmax(Var a);
  Var SparseMatMul(std::shared_ptr<const SparseRows> s, Var a);
  Var Sum(Var a);
  // Summed binary cross-entropy of probabilities against 0/1 targets, with
  // probabilities clipped to [kClip, 1 - kClip] before the logs.
  Var BinaryCrossEntropy(Var probs, Tensor targets);

  static constexpr double kClip = 1e-12;

  // Populates gradients of every node with respect to the scalar `loss`.
  void Backward(Var loss);
  // Gradients of registry parameters reached by the last Backward(); zero for
  // parameters that never entered the graph.
  GradientMap ParamGradients(const ParamRegistry &registry) const;

 private:
  struct Node {
    Tensor value;
    const Tensor *external = nullptr;  // parameter leaves read the registry directly
    Tensor grad;
    std::function<void()> backward;
    int param_index = -1;
  };

  Var Push(Tensor value, const char *op, std::function<void()> backward = {});
  Node &node(Var v) { return nodes_[v.id]; }

  std::vector<Node> nodes_;
  std::vector<uint8_t> kinks_;
  std::unordered_map<size_t, int> param_nodes_;
};

}  // namespace docre

#endif  // DOCRE_AUTOGRAD_H_
