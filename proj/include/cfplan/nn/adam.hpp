#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <string>

#include "cfplan/nn/tensor.hpp"

namespace cfplan::nn {

template <class T>
struct AdamConfig {
  T lr = T(2e-4);
  T beta1 = T(0.5);
  T beta2 = T(0.999);
  T eps = T(1e-8);
};

// Adaptive-moment optimizer with bias correction. Moment slots are keyed by
// parameter name so checkpointing can round-trip optimizer state.
template <class T>
class Adam {
 public:
  explicit Adam(AdamConfig<T> cfg = {}) : cfg_(cfg) {}

  void step(const std::vector<ParamRef<T>>& params) {
    ++t_;
    const T bc1 = T(1) - static_cast<T>(std::pow(static_cast<double>(cfg_.beta1), t_));
    const T bc2 = T(1) - static_cast<T>(std::pow(static_cast<double>(cfg_.beta2), t_));
    for (const ParamRef<T>& p : params) {
      if (p.grad == nullptr) continue;
      Slot& slot = slots_.try_emplace(p.name).first->second;
      if (slot.m.size() != p.value->size()) {
        slot.m = Tensor<T>(p.value->shape);
        slot.v = Tensor<T>(p.value->shape);
      }
      for (std::size_t i = 0; i < p.value->size(); ++i) {
        const T g = (*p.grad)[i];
        slot.m[i] = cfg_.beta1 * slot.m[i] + (T(1) - cfg_.beta1) * g;
        slot.v[i] = cfg_.beta2 * slot.v[i] + (T(1) - cfg_.beta2) * g * g;
        const T mhat = slot.m[i] / bc1;
        const T vhat = slot.v[i] / bc2;
        (*p.value)[i] -= cfg_.lr * mhat / (std::sqrt(vhat) + cfg_.eps);
      }
    }
  }

  std::uint64_t step_count() const { return t_; }
  const AdamConfig<T>& config() const { return cfg_; }

  struct Slot {
    Tensor<T> m;
    Tensor<T> v;
  };

  const std::map<std::string, Slot>& slots() const { return slots_; }
  std::map<std::string, Slot>& slots() { return slots_; }
  void set_step_count(std::uint64_t t) { t_ = t; }

 private:
  AdamConfig<T> cfg_;
  std::map<std::string, Slot> slots_;
  std::uint64_t t_ = 0;
};

}  // namespace cfplan::nn
