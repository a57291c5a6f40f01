#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "cfplan/gan/models.hpp"
#include "cfplan/nn/tensor.hpp"

namespace cfplan::gan {

template <class T>
inline constexpr T kLogClampEps = T(1e-7);

template <class T>
T clamp_unit(T s) {
  return std::min(std::max(s, kLogClampEps<T>), T(1) - kLogClampEps<T>);
}

template <class T>
struct LossGrad {
  T value = T(0);
  Tensor<T> grad;  // same shape as the input scores/outputs
};

// -mean log(s); the clamp zeroes the gradient outside (eps, 1-eps).
template <class T>
LossGrad<T> nll_toward_one(const Tensor<T>& scores) {
  LossGrad<T> out;
  out.grad = Tensor<T>(scores.shape);
  const T batch = static_cast<T>(scores.dim(0));
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const T s = scores[i];
    out.value -= std::log(clamp_unit(s));
    if (s > kLogClampEps<T> && s < T(1) - kLogClampEps<T>) {
      out.grad[i] = -T(1) / (batch * s);
    }
  }
  out.value /= batch;
  return out;
}

// -mean log(1-s).
template <class T>
LossGrad<T> nll_toward_zero(const Tensor<T>& scores) {
  LossGrad<T> out;
  out.grad = Tensor<T>(scores.shape);
  const T batch = static_cast<T>(scores.dim(0));
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const T s = scores[i];
    out.value -= std::log(clamp_unit(T(1) - s));
    if (s > kLogClampEps<T> && s < T(1) - kLogClampEps<T>) {
      out.grad[i] = T(1) / (batch * (T(1) - s));
    }
  }
  out.value /= batch;
  return out;
}

// mean over the batch of the squared L2 row distance; gradient wrt `a`.
template <class T>
LossGrad<T> mean_sq_row_distance(const Tensor<T>& a, const Tensor<T>& b) {
  if (!a.same_shape(b)) throw std::invalid_argument("mean_sq_row_distance shape mismatch");
  LossGrad<T> out;
  out.grad = Tensor<T>(a.shape);
  const T batch = static_cast<T>(a.dim(0));
  for (std::size_t i = 0; i < a.size(); ++i) {
    const T d = a[i] - b[i];
    out.value += d * d;
    out.grad[i] = T(2) * d / batch;
  }
  out.value /= batch;
  return out;
}

template <class T>
std::vector<T> column_mean(const Tensor<T>& m) {
  const std::size_t batch = m.dim(0), cols = m.dim(1);
  std::vector<T> mean(cols, T(0));
  for (std::size_t n = 0; n < batch; ++n) {
    for (std::size_t c = 0; c < cols; ++c) mean[c] += m.at(n, c);
  }
  for (T& v : mean) v /= static_cast<T>(batch);
  return mean;
}

// ||colmean(features) - target||^2; gradient wrt the feature rows.
template <class T>
LossGrad<T> feature_match_to_mean(const Tensor<T>& features, const std::vector<T>& target) {
  const std::size_t cols = features.dim(1);
  if (target.size() != cols) throw std::invalid_argument("feature mean width mismatch");
  const std::vector<T> mean = column_mean(features);
  LossGrad<T> out;
  out.grad = Tensor<T>(features.shape);
  const T batch = static_cast<T>(features.dim(0));
  for (std::size_t c = 0; c < cols; ++c) {
    const T d = mean[c] - target[c];
    out.value += d * d;
    for (std::size_t n = 0; n < features.dim(0); ++n) {
      out.grad.at(n, c) = T(2) * d / batch;
    }
  }
  return out;
}

// Forward-only evaluation of the adversarial pair: d_term is the
// discriminator objective on (real up, fake down); g_term is the
// non-saturating generator objective.
template <class T>
struct GanLossTerms {
  T d_term = T(0);
  T g_term = T(0);
};

template <class T>
GanLossTerms<T> loss_gan(Discriminator<T>& disc, Generator<T>& gen, const Tensor<T>& mask,
                         const Tensor<T>& theta_real, const Tensor<T>& z, Mode mode) {
  const Tensor<T> dcond = disc.forward_cond(mask, mode);
  const Tensor<T> fake = gen.forward(z, mask, mode);
  const Tensor<T> s_real = disc.forward_trunk(theta_real, dcond, mode).score;
  const Tensor<T> s_fake = disc.forward_trunk(fake, dcond, mode).score;
  GanLossTerms<T> out;
  out.d_term = nll_toward_one(s_real).value + nll_toward_zero(s_fake).value;
  out.g_term = nll_toward_one(s_fake).value;
  return out;
}

// Collision term: discriminator pushed toward 0 on colliding joints. An
// empty batch contributes zero (vacuous expectation).
template <class T>
T loss_collision(Discriminator<T>& disc, const Tensor<T>& mask, const Tensor<T>& theta_collision,
                 Mode mode) {
  if (theta_collision.size() == 0 || theta_collision.dim(0) == 0) return T(0);
  const Tensor<T> s = disc.forward(theta_collision, mask, mode).score;
  return nll_toward_zero(s).value;
}

// Identity term: G(z = theta, c) should reproduce theta on collision-free points.
template <class T>
T loss_identity(Generator<T>& gen, const Tensor<T>& mask, const Tensor<T>& theta_free,
                Mode mode) {
  const Tensor<T> out = gen.forward(theta_free, mask, mode);
  return mean_sq_row_distance(out, theta_free).value;
}

template <class T>
T loss_feature_match(Discriminator<T>& disc, const Tensor<T>& mask, const Tensor<T>& theta_real,
                     const Tensor<T>& theta_fake, Mode mode) {
  const Tensor<T> dcond = disc.forward_cond(mask, mode);
  const std::vector<T> real_mean =
      column_mean(disc.forward_trunk(theta_real, dcond, mode).features);
  const Tensor<T> fake_feat = disc.forward_trunk(theta_fake, dcond, mode).features;
  return feature_match_to_mean(fake_feat, real_mean).value;
}

}  // namespace cfplan::gan
