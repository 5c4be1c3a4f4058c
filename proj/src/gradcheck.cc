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

#include "docre/gradcheck.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "docre/errors.h"

namespace docre {

namespace {

struct Evaluation {
  double loss;
  std::vector<uint8_t> kinks;
};

Evaluation EvalLoss(const LossBuilder &loss_fn) {
  Graph g;
  try {
    const double loss = g.value(loss_fn(g))[0];
    return {loss, g.kink_pattern()};
  } catch (const NumericError &) {
    return {std::numeric_limits<double>::quiet_NaN(), {}};
  }
}

std::vector<size_t> SampleCoordinates(const Tensor &grad, size_t want, std::mt19937_64 &rng) {
  const size_t n = grad.size();
  if (n <= want) {
    std::vector<size_t> all(n);
    std::iota(all.begin(), all.end(), 0);
    return all;
  }
  std::vector<size_t> nonzero;
  for (size_t i = 0; i < n; ++i) {
    if (grad[i] != 0.0) nonzero.push_back(i);
  }
  std::vector<size_t> picked;
  std::shuffle(nonzero.begin(), nonzero.end(), rng);
  for (size_t i = 0; i < nonzero.size() && picked.size() < want / 2; ++i) {
    picked.push_back(nonzero[i]);
  }
  std::uniform_int_distribution<size_t> any(0, n - 1);
  while (picked.size() < want) {
    const size_t c = any(rng);
    if (std::find(picked.begin(), picked.end(), c) == picked.end()) picked.push_back(c);
  }
  std::sort(picked.begin(), picked.end());
  return picked;
}

}  // namespace

GradCheckReport FiniteDifferenceCheck(const LossBuilder &loss_fn, ParamRegistry &registry,
                                      const GradCheckOptions &options) {
  if (!(options.step > 0.0)) throw ArgumentError("finite-difference step must be positive");
  GradientMap analytic;
  std::vector<uint8_t> base_kinks;
  {
    Graph g;
    Var loss = loss_fn(g);
    g.Backward(loss);
    analytic = g.ParamGradients(registry);
    base_kinks = g.kink_pattern();
  }

  const bool exhaustive = registry.NumCoordinates() <= options.exhaustive_limit;
  size_t per_param = options.samples_per_param;
  if (!exhaustive && registry.size() > 0) {
    per_param = std::max(per_param, (options.min_total_samples + registry.size() - 1) /
                                        registry.size());
  }
  std::mt19937_64 rng(options.seed);

  GradCheckReport report;
  for (size_t pi = 0; pi < registry.size(); ++pi) {
    Parameter &p = registry.at(pi);
    const Tensor &ga = analytic.grads[pi];
    std::vector<size_t> coords;
    size_t want;
    if (exhaustive) {
      coords.resize(p.value.size());
      std::iota(coords.begin(), coords.end(), 0);
      want = coords.size();
    } else {
      coords = SampleCoordinates(ga, per_param, rng);
      want = coords.size();
      // Replacement candidates for kink crossings, in seeded order.
      std::vector<size_t> rest;
      for (size_t c = 0; c < p.value.size(); ++c) {
        if (!std::binary_search(coords.begin(), coords.end(), c)) rest.push_back(c);
      }
      std::shuffle(rest.begin(), rest.end(), rng);
      coords.insert(coords.end(), rest.begin(), rest.end());
    }
    size_t done = 0;
    for (size_t k = 0; k < coords.size() && done < want; ++k) {
      const size_t c = coords[k];
      const double saved = p.value[c];
      double h = options.step;
      bool smooth = false;
      Evaluation up, down;
      for (int attempt = 0; attempt <= options.kink_retries; ++attempt, h /= 10.0) {
        p.value[c] = saved + h;
        up = EvalLoss(loss_fn);
        p.value[c] = saved - h;
        down = EvalLoss(loss_fn);
        p.value[c] = saved;
        if (!std::isfinite(up.loss) || !std::isfinite(down.loss)) {
          throw NumericError("gradient check: non-finite loss when perturbing " + p.name + "[" +
                             std::to_string(c) + "]");
        }
        smooth = !options.exclude_kinks || (up.kinks == base_kinks && down.kinks == base_kinks);
        if (smooth) break;
      }
      if (!smooth) {
        ++report.kink_crossings;
        continue;
      }
      if (h != options.step) ++report.reduced_steps;
      ++done;
      const double fd = (up.loss - down.loss) / (2.0 * h);
      const double ad = ga[c];
      const double err = std::abs(ad - fd) / std::max(1e-8, std::abs(ad) + std::abs(fd));
      ++report.coordinates_checked;
      report.entries.push_back({p.name, c, ad, fd, err, h});
      if (report.coordinates_checked == 1 || err > report.max_rel_error) {
        report.max_rel_error = err;
        report.worst = report.entries.back();
      }
    }
    if (done > 0) report.groups_checked.push_back(p.name);
  }
  return report;
}

}  // namespace docre
