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

#ifndef DOCRE_PARAMS_H_
#define DOCRE_PARAMS_H_

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "docre/tensor.h"

namespace docre {

// A named trainable tensor. `grad` is empty until gradients are applied.
struct Parameter {
  std::string name;
  Tensor value;
  Tensor grad;
  size_t index = 0;  // position in the owning registry

  bool has_grad() const { return grad.SameShape(value) && !grad.empty(); }
};

// Gradients for every parameter of a registry, indexed by Parameter::index.
struct GradientMap {
  std::vector<Tensor> grads;

  static GradientMap ZerosLike(const class ParamRegistry &registry);
  void Accumulate(const GradientMap &other, double scale = 1.0);
};

// Ordered collection of uniquely named parameters. Parameter addresses are
// stable for the registry's lifetime.
class ParamRegistry {
 public:
  ParamRegistry() = default;
  ParamRegistry(const ParamRegistry &other);
  ParamRegistry &operator=(const ParamRegistry &other);
  ParamRegistry(ParamRegistry &&) = default;
  ParamRegistry &operator=(ParamRegistry &&) = default;

  Parameter &Add(const std::string &name, Tensor value);
  Parameter &Get(const std::string &name);
  const Parameter &Get(const std::string &name) const;
  bool Contains(const std::string &name) const { return by_name_.count(name) > 0; }

  size_t size() const { return params_.size(); }
  Parameter &at(size_t i) { return *params_[i]; }
  const Parameter &at(size_t i) const { return *params_[i]; }
  size_t NumCoordinates() const;

  // Replaces every parameter's grad with the matching entry of `grads`.
  void SetGradients(const GradientMap &grads);
  void ZeroGradients();
  // Copies values from a registry with identical names and shapes.
  void CopyValuesFrom(const ParamRegistry &other);

 private:
  std::vector<std::unique_ptr<Parameter>> params_;
  std::map<std::string, size_t> by_name_;
};

// Seeded Gaussian matrix orthonormalized by modified Gram-Schmidt: columns are
// orthonormal when rows >= cols, rows are orthonormal otherwise.
Tensor OrthogonalInit(size_t rows, size_t cols, uint64_t seed);
Tensor GaussianInit(size_t rows, size_t cols, double stddev, uint64_t seed);

// Stable 64-bit FNV-1a hash, used for config fingerprints and seed derivation.
uint64_t Fnv1a64(const std::string &text);

// Binary checkpoint: header, metadata string, config hash, then each tensor
// as name, shape and row-major little-endian doubles.
struct Checkpoint {
  std::string metadata;  // serialized config (JSON)
  uint64_t config_hash = 0;
  ParamRegistry params;
};

void WriteCheckpoint(const std::string &path, const Checkpoint &ckpt);
Checkpoint ReadCheckpoint(const std::string &path);

}  // namespace docre

#endif  // DOCRE_PARAMS_H_
