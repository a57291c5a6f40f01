#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <initializer_list>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "cfplan/errors.hpp"

namespace cfplan::nn {

// Dense row-major tensor, rank 1..4. Float32 in production models; tests
// instantiate the same code with double for finite-difference shadow checks.
template <class T>
struct Tensor {
  std::vector<std::size_t> shape;
  std::vector<T> v;

  Tensor() = default;
  explicit Tensor(std::vector<std::size_t> s) : shape(std::move(s)) {
    if (shape.empty() || shape.size() > 4) {
      throw std::invalid_argument("tensor rank must be 1..4");
    }
    v.assign(count(shape), T(0));
  }

  static std::size_t count(const std::vector<std::size_t>& s) {
    return std::accumulate(s.begin(), s.end(), std::size_t{1}, std::multiplies<>());
  }

  std::size_t size() const { return v.size(); }
  std::size_t dim(std::size_t i) const { return shape.at(i); }

  T& operator[](std::size_t i) { return v[i]; }
  const T& operator[](std::size_t i) const { return v[i]; }

  // 2D accessor [rows, cols].
  T& at(std::size_t r, std::size_t c) { return v[r * shape[1] + c]; }
  const T& at(std::size_t r, std::size_t c) const { return v[r * shape[1] + c]; }

  // 4D accessor [n, c, h, w].
  T& at(std::size_t n, std::size_t c, std::size_t h, std::size_t w) {
    return v[((n * shape[1] + c) * shape[2] + h) * shape[3] + w];
  }
  const T& at(std::size_t n, std::size_t c, std::size_t h, std::size_t w) const {
    return v[((n * shape[1] + c) * shape[2] + h) * shape[3] + w];
  }

  void fill(T x) { std::fill(v.begin(), v.end(), x); }
  void zero() { fill(T(0)); }

  Tensor reshaped(std::vector<std::size_t> s) const {
    if (count(s) != size()) throw std::invalid_argument("reshape element count mismatch");
    Tensor out = *this;
    out.shape = std::move(s);
    return out;
  }

  bool same_shape(const Tensor& o) const { return shape == o.shape; }
};

template <class T>
void require_shape(const Tensor<T>& t, std::initializer_list<std::size_t> s,
                   const char* what) {
  if (t.shape.size() != s.size() ||
      !std::equal(s.begin(), s.end(), t.shape.begin())) {
    throw std::invalid_argument(std::string("shape mismatch for ") + what);
  }
}

template <class T>
bool all_finite(const Tensor<T>& t) {
  for (T x : t.v) {
    if (!std::isfinite(static_cast<double>(x))) return false;
  }
  return true;
}

template <class T>
void check_finite(const Tensor<T>& t, const char* where) {
  if (!all_finite(t)) {
    throw ModelError(std::string("non-finite values after ") + where);
  }
}

template <class T>
void accumulate(Tensor<T>& dst, const Tensor<T>& src) {
  if (!dst.same_shape(src)) throw std::invalid_argument("accumulate shape mismatch");
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += src[i];
}

// Named parameter handle: value plus its gradient accumulator. Buffers
// (running statistics, power-iteration vectors) expose a null gradient.
template <class T>
struct ParamRef {
  std::string name;
  Tensor<T>* value = nullptr;
  Tensor<T>* grad = nullptr;
};

template <class T>
void zero_grads(const std::vector<ParamRef<T>>& params) {
  for (const ParamRef<T>& p : params) {
    if (p.grad != nullptr) p.grad->zero();
  }
}

}  // namespace cfplan::nn
