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

#include "docre/params.h"

#include <cmath>
#include <cstring>
#include <fstream>
#include <random>

#include "docre/errors.h"

namespace docre {

GradientMap GradientMap::ZerosLike(const ParamRegistry &registry) {
  GradientMap g;
  g.grads.reserve(registry.size());
  for (size_t i = 0; i < registry.size(); ++i) {
    const Tensor &v = registry.at(i).value;
    g.grads.emplace_back(v.rows(), v.cols());
  }
  return g;
}

void GradientMap::Accumulate(const GradientMap &other, double scale) {
  if (grads.size() != other.grads.size()) {
    throw DimensionError("gradient maps cover different registries");
  }
  for (size_t i = 0; i < grads.size(); ++i) grads[i].AddScaled(other.grads[i], scale);
}

ParamRegistry::ParamRegistry(const ParamRegistry &other) : by_name_(other.by_name_) {
  params_.reserve(other.params_.size());
  for (const auto &p : other.params_) params_.push_back(std::make_unique<Parameter>(*p));
}

ParamRegistry &ParamRegistry::operator=(const ParamRegistry &other) {
  if (this != &other) {
    ParamRegistry copy(other);
    *this = std::move(copy);
  }
  return *this;
}

Parameter &ParamRegistry::Add(const std::string &name, Tensor value) {
  if (by_name_.count(name)) throw ArgumentError("duplicate parameter name: " + name);
  auto p = std::make_unique<Parameter>();
  p->name = name;
  p->value = std::move(value);
  p->index = params_.size();
  by_name_[name] = p->index;
  params_.push_back(std::move(p));
  return *params_.back();
}

Parameter &ParamRegistry::Get(const std::string &name) {
  auto it = by_name_.find(name);
  if (it == by_name_.end()) throw ArgumentError("unknown parameter: " + name);
  return *params_[it->second];
}

const Parameter &ParamRegistry::Get(const std::string &name) const {
  auto it = by_name_.find(name);
  if (it == by_name_.end()) throw ArgumentError("unknown parameter: " + name);
  return *params_[it->second];
}

size_t ParamRegistry::NumCoordinates() const {
  size_t n = 0;
  for (const auto &p : params_) n += p->value.size();
  return n;
}

void ParamRegistry::SetGradients(const GradientMap &grads) {
  if (grads.grads.size() != params_.size()) {
    throw DimensionError("gradient map size does not match registry");
  }
  for (size_t i = 0; i < params_.size(); ++i) {
    CheckShape(grads.grads[i].SameShape(params_[i]->value), "SetGradients " + params_[i]->name,
               grads.grads[i], params_[i]->value);
    params_[i]->grad = grads.grads[i];
  }
}

void ParamRegistry::ZeroGradients() {
  for (auto &p : params_) p->grad = Tensor(p->value.rows(), p->value.cols());
}

void ParamRegistry::CopyValuesFrom(const ParamRegistry &other) {
  if (other.size() != size()) throw ArgumentError("registries differ in size");
  for (size_t i = 0; i < size(); ++i) {
    if (other.at(i).name != at(i).name || !other.at(i).value.SameShape(at(i).value)) {
      throw ArgumentError("registry layout mismatch at " + at(i).name);
    }
    params_[i]->value = other.at(i).value;
  }
}

Tensor GaussianInit(size_t rows, size_t cols, double stddev, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> dist(0.0, stddev);
  Tensor t(rows, cols);
  for (double &v : t.values()) v = dist(rng);
  return t;
}

namespace {

// Orthonormalizes the columns of `m` (rows >= cols) in place. Two passes of
// modified Gram-Schmidt keep the residual near machine precision.
void OrthonormalizeColumns(Tensor &m) {
  const size_t rows = m.rows(), cols = m.cols();
  for (size_t j = 0; j < cols; ++j) {
    for (int pass = 0; pass < 2; ++pass) {
      for (size_t q = 0; q < j; ++q) {
        double dot = 0.0;
        for (size_t r = 0; r < rows; ++r) dot += m(r, q) * m(r, j);
        for (size_t r = 0; r < rows; ++r) m(r, j) -= dot * m(r, q);
      }
    }
    double norm = 0.0;
    for (size_t r = 0; r < rows; ++r) norm += m(r, j) * m(r, j);
    norm = std::sqrt(norm);
    if (norm < 1e-12) throw NumericError("orthogonal init: rank-deficient draw");
    for (size_t r = 0; r < rows; ++r) m(r, j) /= norm;
  }
}

}  // namespace

Tensor OrthogonalInit(size_t rows, size_t cols, uint64_t seed) {
  if (rows == 0 || cols == 0) throw ArgumentError("orthogonal init needs a nonempty shape");
  if (rows >= cols) {
    Tensor m = GaussianInit(rows, cols, 1.0, seed);
    OrthonormalizeColumns(m);
    return m;
  }
  Tensor m = GaussianInit(cols, rows, 1.0, seed);
  OrthonormalizeColumns(m);
  return m.Transposed();
}

uint64_t Fnv1a64(const std::string &text) {
  uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

namespace {

constexpr char kMagic[8] = {'D', 'O', 'C', 'R', 'E', 'C', 'K', '1'};

template <typename T>
void WritePod(std::ostream &out, T v) {
  out.write(reinterpret_cast<const char *>(&v), sizeof(T));
}

template <typename T>
T ReadPod(std::istream &in, const std::string &path) {
  T v{};
  in.read(reinterpret_cast<char *>(&v), sizeof(T));
  if (!in) throw DataError("truncated checkpoint: " + path);
  return v;
}

void WriteString(std::ostream &out, const std::string &s) {
  WritePod<uint64_t>(out, s.size());
  out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

std::string ReadString(std::istream &in, const std::string &path) {
  const uint64_t n = ReadPod<uint64_t>(in, path);
  if (n > (1ULL << 32)) throw DataError("corrupt checkpoint string length: " + path);
  std::string s(n, '\0');
  in.read(s.data(), static_cast<std::streamsize>(n));
  if (!in) throw DataError("truncated checkpoint: " + path);
  return s;
}

}  // namespace

void WriteCheckpoint(const std::string &path, const Checkpoint &ckpt) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot open checkpoint for writing: " + path);
  out.write(kMagic, sizeof(kMagic));
  WriteString(out, ckpt.metadata);
  WritePod<uint64_t>(out, ckpt.config_hash);
  WritePod<uint64_t>(out, ckpt.params.size());
  for (size_t i = 0; i < ckpt.params.size(); ++i) {
    const Parameter &p = ckpt.params.at(i);
    WriteString(out, p.name);
    WritePod<uint64_t>(out, p.value.rows());
    WritePod<uint64_t>(out, p.value.cols());
    out.write(reinterpret_cast<const char *>(p.value.data()),
              static_cast<std::streamsize>(p.value.size() * sizeof(double)));
  }
  if (!out) throw DataError("failed writing checkpoint: " + path);
}

Checkpoint ReadCheckpoint(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open checkpoint: " + path);
  char magic[sizeof(kMagic)];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw DataError("not a checkpoint file: " + path);
  }
  Checkpoint ckpt;
  ckpt.metadata = ReadString(in, path);
  ckpt.config_hash = ReadPod<uint64_t>(in, path);
  const uint64_t count = ReadPod<uint64_t>(in, path);
  for (uint64_t i = 0; i < count; ++i) {
    std::string name = ReadString(in, path);
    const uint64_t rows = ReadPod<uint64_t>(in, path);
    const uint64_t cols = ReadPod<uint64_t>(in, path);
    if (rows * cols > (1ULL << 30)) throw DataError("corrupt tensor shape in " + path);
    Tensor t(rows, cols);
    in.read(reinterpret_cast<char *>(t.data()),
            static_cast<std::streamsize>(t.size() * sizeof(double)));
    if (!in) throw DataError("truncated checkpoint: " + path);
    ckpt.params.Add(name, std::move(t));
  }
  return ckpt;
}

}  // namespace docre
