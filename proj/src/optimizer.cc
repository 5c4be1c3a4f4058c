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

#include "docre/optimizer.h"

#include <cmath>

#include "docre/errors.h"

namespace docre {

void Adam::Step(ParamRegistry &registry) {
  for (size_t i = 0; i < registry.size(); ++i) {
    if (!registry.at(i).has_grad()) {
      throw NumericError("adam: parameter " + registry.at(i).name + " has no gradient");
    }
  }
  if (m_.empty()) {
    for (size_t i = 0; i < registry.size(); ++i) {
      const Tensor &v = registry.at(i).value;
      m_.emplace_back(v.rows(), v.cols());
      v_.emplace_back(v.rows(), v.cols());
    }
  } else if (m_.size() != registry.size()) {
    throw NumericError("adam: registry changed size between steps");
  }
  ++t_;
  const auto &o = options_;
  const double bc1 = 1.0 - std::pow(o.beta1, static_cast<double>(t_));
  const double bc2 = 1.0 - std::pow(o.beta2, static_cast<double>(t_));
  for (size_t i = 0; i < registry.size(); ++i) {
    Parameter &p = registry.at(i);
    Tensor &m = m_[i];
    Tensor &v = v_[i];
    for (size_t k = 0; k < p.value.size(); ++k) {
      const double g = p.grad[k];
      m[k] = o.beta1 * m[k] + (1.0 - o.beta1) * g;
      v[k] = o.beta2 * v[k] + (1.0 - o.beta2) * g * g;
      const double mhat = m[k] / bc1;
      const double vhat = v[k] / bc2;
      p.value[k] -= o.lr * mhat / (std::sqrt(vhat) + o.eps);
    }
    p.grad.Fill(0.0);
  }
}

}  // namespace docre
