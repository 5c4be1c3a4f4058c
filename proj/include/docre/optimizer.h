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

#ifndef DOCRE_OPTIMIZER_H_
#define DOCRE_OPTIMIZER_H_

#include <cstdint>
#include <vector>

#include "docre/params.h"

namespace docre {

struct AdamOptions {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

// Adam with bias correction. Moments are allocated lazily on the first step
// and shaped like the registry's parameters.
class Adam {
 public:
  explicit Adam(AdamOptions options = {}) : options_(options) {}

  // Applies one update from the registry's gradients, then zeroes them.
  // Throws NumericError if any parameter has no gradient.
  void Step(ParamRegistry &registry);

  int64_t step_count() const { return t_; }
  const AdamOptions &options() const { return options_; }
  const std::vector<Tensor> &first_moments() const { return m_; }
  const std::vector<Tensor> &second_moments() const { return v_; }

 private:
  AdamOptions options_;
  int64_t t_ = 0;
  std::vector<Tensor> m_;
  std::vector<Tensor> v_;
};

}  // namespace docre

#endif  // DOCRE_OPTIMIZER_H_
