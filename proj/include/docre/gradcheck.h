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

#ifndef DOCRE_GRADCHECK_H_
#define DOCRE_GRADCHECK_H_

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "docre/autograd.h"
#include "docre/params.h"

namespace docre {

// Builds the loss on a fresh graph from the registry's current values.
using LossBuilder = std::function<Var(Graph &)>;

struct GradCheckOptions {
  double step = 1e-3;
  // Registries with at most this many coordinates are checked exhaustively.
  size_t exhaustive_limit = 4096;
  // Otherwise each parameter contributes this many sampled coordinates, half
  // of them drawn from coordinates with a nonzero analytic gradient.
  size_t samples_per_param = 16;
  size_t min_total_samples = 200;
  uint64_t seed = 1234;
  // A coordinate whose +-step perturbation moves the forward pass onto a
  // different smooth piece (a ReLU input or a BCE clip changes side) has no
  // valid central difference. Such a coordinate is retried with the step
  // divided by 10, up to `kink_retries` times; if every step crosses, it is
  // counted in `kink_crossings` and left out of the error, and in sampled
  // mode a replacement coordinate is drawn.
  bool exclude_kinks = true;
  int kink_retries = 2;
};

struct GradCheckEntry {
  std::string param;
  size_t coordinate = 0;
  double analytic = 0.0;
  double numeric = 0.0;
  double rel_error = 0.0;
  double step = 0.0;  // perturbation actually used
};

struct GradCheckReport {
  double max_rel_error = 0.0;
  size_t coordinates_checked = 0;
  size_t kink_crossings = 0;
  size_t reduced_steps = 0;  // coordinates differenced with a retried step
  GradCheckEntry worst;
  std::vector<GradCheckEntry> entries;  // every checked coordinate
  std::vector<std::string> groups_checked;  // parameter names with >= 1 coordinate
};

// Compares reverse-mode gradients with central differences
// (f(t + h) - f(t - h)) / 2h. The relative error of one coordinate is
// |g_ad - g_fd| / max(1e-8, |g_ad| + |g_fd|). Parameter values are restored
// before returning. Throws NumericError naming the parameter if a perturbed
// loss is not finite.
GradCheckReport FiniteDifferenceCheck(const LossBuilder &loss_fn, ParamRegistry &registry,
                                      const GradCheckOptions &options = {});

}  // namespace docre

#endif  // DOCRE_GRADCHECK_H_
