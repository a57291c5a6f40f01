#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "cfplan/nn/layers.hpp"
#include "cfplan/nn/tensor.hpp"
#include "cfplan/rng.hpp"
#include "cfplan/scenario.hpp"

namespace cfplan::gan {

using nn::Mode;
using nn::ParamRef;
using nn::Tensor;

inline constexpr int kJointDims = 2;  // latent dims match the joint count

struct ArchConfig {
  int cond_channels1 = 8;
  int cond_channels2 = 16;
  int cond_features = 64;
  int trunk_width = 128;
};

template <class T>
Tensor<T> mask_to_tensor(const ConditionMask& mask) {
  Tensor<T> t({1, 1, ConditionMask::kRows, ConditionMask::kCols});
  for (std::size_t i = 0; i < mask.cells.size(); ++i) {
    t[i] = static_cast<T>(mask.cells[i]);
  }
  return t;
}

// Shared condition branch: two stride-2 convolutions with batch norm and
// leaky ReLU, flattened into a dense feature vector.
template <class T>
class CondEncoder {
 public:
  CondEncoder() = default;
  explicit CondEncoder(const ArchConfig& arch)
      : conv1_(1, arch.cond_channels1, 3, 2, 1),
        conv2_(arch.cond_channels1, arch.cond_channels2, 3, 2, 1),
        bn1_(arch.cond_channels1),
        bn2_(arch.cond_channels2),
        act1_(T(0.2)),
        act2_(T(0.2)) {
    const std::size_t h = conv2_.out_extent(conv1_.out_extent(ConditionMask::kRows));
    const std::size_t w = conv2_.out_extent(conv1_.out_extent(ConditionMask::kCols));
    flat_ = arch.cond_channels2 * h * w;
    fc_ = nn::Dense<T>(flat_, arch.cond_features);
  }

  void init(Rng& rng) {
    conv1_.init(rng);
    conv2_.init(rng);
    fc_.init(rng);
  }

  Tensor<T> forward(const Tensor<T>& mask, Mode mode) {
    Tensor<T> h = act1_.forward(bn1_.forward(conv1_.forward(mask, mode), mode));
    h = act2_.forward(bn2_.forward(conv2_.forward(h, mode), mode));
    shape_after_conv_ = h.shape;
    Tensor<T> feat = fc_.forward(h.reshaped({h.dim(0), flat_}), mode);
    nn::check_finite(feat, "condition encoder");
    return feat;
  }

  void backward(const Tensor<T>& gfeat) {
    Tensor<T> g = fc_.backward(gfeat).reshaped(shape_after_conv_);
    g = conv2_.backward(bn2_.backward(act2_.backward(g)));
    conv1_.backward(bn1_.backward(act1_.backward(g)));
  }

  void collect(const std::string& prefix, std::vector<ParamRef<T>>& out) {
    conv1_.collect(prefix + "/conv1", out);
    bn1_.collect(prefix + "/bn1", out);
    conv2_.collect(prefix + "/conv2", out);
    bn2_.collect(prefix + "/bn2", out);
    fc_.collect(prefix + "/fc", out);
  }

 private:
  nn::Conv2d<T> conv1_, conv2_;
  nn::BatchNorm<T> bn1_, bn2_;
  nn::LeakyRelu<T> act1_, act2_;
  nn::Dense<T> fc_;
  std::size_t flat_ = 0;
  std::vector<std::size_t> shape_after_conv_;
};

// Maps (z, condition) -> normalized joint angles in (0,1)^2.
template <class T>
class Generator {
 public:
  Generator() = default;
  explicit Generator(const ArchConfig& arch)
      : arch_(arch),
        cond_(arch),
        fc1_(kJointDims + arch.cond_features, arch.trunk_width),
        fc2_(arch.trunk_width, arch.trunk_width),
        fc3_(arch.trunk_width, kJointDims),
        act1_(T(0.2)),
        act2_(T(0.2)) {}

  void init(std::uint64_t seed) {
    Rng rng(seed);
    cond_.init(rng);
    fc1_.init(rng);
    fc2_.init(rng);
    fc3_.init(rng);
  }

  const ArchConfig& arch() const { return arch_; }

  Tensor<T> forward_cond(const Tensor<T>& mask, Mode mode) { return cond_.forward(mask, mode); }

  Tensor<T> forward_trunk(const Tensor<T>& z, const Tensor<T>& cond_feat, Mode mode) {
    Tensor<T> x = concat_rows(z, cond_feat);
    Tensor<T> h = act1_.forward(fc1_.forward(x, mode));
    h = act2_.forward(fc2_.forward(h, mode));
    Tensor<T> y = out_.forward(fc3_.forward(h, mode));
    nn::check_finite(y, "generator trunk");
    return y;
  }

  // Returns (grad wrt z, grad wrt condition features summed over the batch).
  std::pair<Tensor<T>, Tensor<T>> backward_trunk(const Tensor<T>& gy) {
    Tensor<T> g = fc3_.backward(out_.backward(gy));
    g = fc2_.backward(act2_.backward(g));
    g = fc1_.backward(act1_.backward(g));
    return split_rows(g);
  }

  void backward_cond(const Tensor<T>& gfeat) { cond_.backward(gfeat); }

  Tensor<T> forward(const Tensor<T>& z, const Tensor<T>& mask, Mode mode) {
    return forward_trunk(z, forward_cond(mask, mode), mode);
  }

  std::vector<ParamRef<T>> state() {
    std::vector<ParamRef<T>> out;
    cond_.collect("gen/cond", out);
    fc1_.collect("gen/fc1", out);
    fc2_.collect("gen/fc2", out);
    fc3_.collect("gen/fc3", out);
    return out;
  }

 private:
  Tensor<T> concat_rows(const Tensor<T>& z, const Tensor<T>& cond_feat) {
    if (z.shape.size() != 2 || z.dim(1) != kJointDims) {
      throw std::invalid_argument("generator expects latent input [B,2]");
    }
    const std::size_t batch = z.dim(0), f = cond_feat.dim(1);
    Tensor<T> x({batch, kJointDims + f});
    for (std::size_t n = 0; n < batch; ++n) {
      x.at(n, 0) = z.at(n, 0);
      x.at(n, 1) = z.at(n, 1);
      for (std::size_t i = 0; i < f; ++i) x.at(n, kJointDims + i) = cond_feat.at(0, i);
    }
    cond_width_ = f;
    return x;
  }

  std::pair<Tensor<T>, Tensor<T>> split_rows(const Tensor<T>& gx) {
    const std::size_t batch = gx.dim(0);
    Tensor<T> gz({batch, static_cast<std::size_t>(kJointDims)});
    Tensor<T> gfeat({1, cond_width_});
    for (std::size_t n = 0; n < batch; ++n) {
      gz.at(n, 0) = gx.at(n, 0);
      gz.at(n, 1) = gx.at(n, 1);
      for (std::size_t i = 0; i < cond_width_; ++i) gfeat.at(0, i) += gx.at(n, kJointDims + i);
    }
    return {std::move(gz), std::move(gfeat)};
  }

  ArchConfig arch_;
  CondEncoder<T> cond_;
  nn::Dense<T> fc1_, fc2_, fc3_;
  nn::LeakyRelu<T> act1_, act2_;
  nn::Sigmoid<T> out_;
  std::size_t cond_width_ = 0;
};

// Scores (theta, condition) pairs; spectral norm on all trunk layers. The
// activation after the second trunk layer is the feature-matching layer.
template <class T>
class Discriminator {
 public:
  struct Output {
    Tensor<T> score;     // [B,1]
    Tensor<T> features;  // [B,trunk]
  };

  Discriminator() = default;
  explicit Discriminator(const ArchConfig& arch)
      : arch_(arch),
        cond_(arch),
        fc1_(kJointDims + arch.cond_features, arch.trunk_width),
        fc2_(arch.trunk_width, arch.trunk_width),
        fc3_(arch.trunk_width, 1),
        act1_(T(0.2)),
        act2_(T(0.2)) {}

  void init(std::uint64_t seed) {
    Rng rng(seed);
    cond_.init(rng);
    fc1_.init(rng);
    fc2_.init(rng);
    fc3_.init(rng);
  }

  const ArchConfig& arch() const { return arch_; }

  Tensor<T> forward_cond(const Tensor<T>& mask, Mode mode) { return cond_.forward(mask, mode); }

  Output forward_trunk(const Tensor<T>& theta, const Tensor<T>& cond_feat, Mode mode) {
    Tensor<T> x = concat_rows(theta, cond_feat);
    Tensor<T> h = act1_.forward(fc1_.forward(x, mode));
    Tensor<T> feat = act2_.forward(fc2_.forward(h, mode));
    Tensor<T> s = out_.forward(fc3_.forward(feat, mode));
    nn::check_finite(s, "discriminator trunk");
    return {std::move(s), std::move(feat)};
  }

  // gfeat may be empty (no feature-matching term in this pass).
  std::pair<Tensor<T>, Tensor<T>> backward_trunk(const Tensor<T>& gscore,
                                                 const Tensor<T>& gfeat = {}) {
    Tensor<T> g = fc3_.backward(out_.backward(gscore));
    if (gfeat.size() != 0) nn::accumulate(g, gfeat);
    g = fc2_.backward(act2_.backward(g));
    g = fc1_.backward(act1_.backward(g));
    return split_rows(g);
  }

  void backward_cond(const Tensor<T>& gfeat) { cond_.backward(gfeat); }

  Output forward(const Tensor<T>& theta, const Tensor<T>& mask, Mode mode) {
    return forward_trunk(theta, forward_cond(mask, mode), mode);
  }

  std::vector<ParamRef<T>> state() {
    std::vector<ParamRef<T>> out;
    cond_.collect("disc/cond", out);
    fc1_.collect("disc/fc1", out);
    fc2_.collect("disc/fc2", out);
    fc3_.collect("disc/fc3", out);
    return out;
  }

 private:
  Tensor<T> concat_rows(const Tensor<T>& theta, const Tensor<T>& cond_feat) {
    if (theta.shape.size() != 2 || theta.dim(1) != kJointDims) {
      throw std::invalid_argument("discriminator expects joint input [B,2]");
    }
    const std::size_t batch = theta.dim(0), f = cond_feat.dim(1);
    Tensor<T> x({batch, kJointDims + f});
    for (std::size_t n = 0; n < batch; ++n) {
      x.at(n, 0) = theta.at(n, 0);
      x.at(n, 1) = theta.at(n, 1);
      for (std::size_t i = 0; i < f; ++i) x.at(n, kJointDims + i) = cond_feat.at(0, i);
    }
    cond_width_ = f;
    return x;
  }

  std::pair<Tensor<T>, Tensor<T>> split_rows(const Tensor<T>& gx) {
    const std::size_t batch = gx.dim(0);
    Tensor<T> gtheta({batch, static_cast<std::size_t>(kJointDims)});
    Tensor<T> gfeat({1, cond_width_});
    for (std::size_t n = 0; n < batch; ++n) {
      gtheta.at(n, 0) = gx.at(n, 0);
      gtheta.at(n, 1) = gx.at(n, 1);
      for (std::size_t i = 0; i < cond_width_; ++i) gfeat.at(0, i) += gx.at(n, kJointDims + i);
    }
    return {std::move(gtheta), std::move(gfeat)};
  }

  ArchConfig arch_;
  CondEncoder<T> cond_;
  nn::SpectralDense<T> fc1_, fc2_, fc3_;
  nn::LeakyRelu<T> act1_, act2_;
  nn::Sigmoid<T> out_;
  std::size_t cond_width_ = 0;
};

}  // namespace cfplan::gan
