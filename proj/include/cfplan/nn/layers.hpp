#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "cfplan/nn/tensor.hpp"
#include "cfplan/rng.hpp"

namespace cfplan::nn {

enum class Mode { kTrain, kEval };

template <class T>
T glorot_limit(std::size_t fan_in, std::size_t fan_out) {
  return static_cast<T>(std::sqrt(6.0 / static_cast<double>(fan_in + fan_out)));
}

template <class T>
void init_uniform(Tensor<T>& t, Rng& rng, T limit) {
  for (T& x : t.v) x = static_cast<T>(rng.uniform(-limit, limit));
}

// y = x W^T + b with W stored [out, in].
template <class T>
class Dense {
 public:
  Dense() = default;
  Dense(std::size_t in, std::size_t out)
      : w_({out, in}), b_({out}), gw_({out, in}), gb_({out}) {}

  void init(Rng& rng) { init_uniform(w_, rng, glorot_limit<T>(w_.dim(1), w_.dim(0))); }

  Tensor<T> forward(const Tensor<T>& x, Mode /*mode*/ = Mode::kTrain) {
    return forward_with(x, w_);
  }

  Tensor<T> backward(const Tensor<T>& gy) { return backward_with(gy, w_, gw_); }

  void collect(const std::string& prefix, std::vector<ParamRef<T>>& out) {
    out.push_back({prefix + "/w", &w_, &gw_});
    out.push_back({prefix + "/b", &b_, &gb_});
  }

  std::size_t in_features() const { return w_.dim(1); }
  std::size_t out_features() const { return w_.dim(0); }
  Tensor<T>& weight() { return w_; }
  Tensor<T>& bias() { return b_; }
  Tensor<T>& weight_grad() { return gw_; }
  Tensor<T>& bias_grad() { return gb_; }

 protected:
  Tensor<T> forward_with(const Tensor<T>& x, const Tensor<T>& w) {
    if (x.shape.size() != 2 || x.dim(1) != w.dim(1)) {
      throw std::invalid_argument("dense forward shape mismatch");
    }
    x_ = x;
    const std::size_t batch = x.dim(0), in = w.dim(1), out = w.dim(0);
    Tensor<T> y({batch, out});
    for (std::size_t n = 0; n < batch; ++n) {
      const T* xr = &x.v[n * in];
      T* yr = &y.v[n * out];
      for (std::size_t o = 0; o < out; ++o) {
        const T* wr = &w.v[o * in];
        T acc = b_[o];
        for (std::size_t i = 0; i < in; ++i) acc += wr[i] * xr[i];
        yr[o] = acc;
      }
    }
    return y;
  }

  Tensor<T> backward_with(const Tensor<T>& gy, const Tensor<T>& w, Tensor<T>& gw) {
    const std::size_t batch = x_.dim(0), in = w.dim(1), out = w.dim(0);
    if (gy.shape.size() != 2 || gy.dim(0) != batch || gy.dim(1) != out) {
      throw std::invalid_argument("dense backward shape mismatch");
    }
    Tensor<T> gx({batch, in});
    for (std::size_t n = 0; n < batch; ++n) {
      const T* gyr = &gy.v[n * out];
      const T* xr = &x_.v[n * in];
      T* gxr = &gx.v[n * in];
      for (std::size_t o = 0; o < out; ++o) {
        const T g = gyr[o];
        const T* wr = &w.v[o * in];
        T* gwr = &gw.v[o * in];
        gb_[o] += g;
        for (std::size_t i = 0; i < in; ++i) {
          gxr[i] += g * wr[i];
          gwr[i] += g * xr[i];
        }
      }
    }
    return gx;
  }

  Tensor<T> w_, b_, gw_, gb_;
  Tensor<T> x_;
};

// Dense layer whose effective weight is W / sigma, sigma estimated by power
// iteration on stored vectors (u, v). update_power_iteration() runs one step;
// forward never mutates u or v, so eval-mode passes are pure functions and the
// backward below (u, v treated as constants, quotient rule through sigma) is
// exactly the gradient of the computed function.
template <class T>
class SpectralDense : public Dense<T> {
 public:
  SpectralDense() = default;
  SpectralDense(std::size_t in, std::size_t out)
      : Dense<T>(in, out), u_({out}), v_({in}) {}

  void init(Rng& rng) {
    Dense<T>::init(rng);
    for (T& x : u_.v) x = static_cast<T>(rng.uniform(-1.0, 1.0));
    normalize(u_);
    update_power_iteration();
  }

  void update_power_iteration() {
    const auto& w = this->w_;
    const std::size_t out = w.dim(0), in = w.dim(1);
    // v <- normalize(W^T u); u <- normalize(W v)
    for (std::size_t i = 0; i < in; ++i) {
      T acc = 0;
      for (std::size_t o = 0; o < out; ++o) acc += w.v[o * in + i] * u_[o];
      v_[i] = acc;
    }
    normalize(v_);
    for (std::size_t o = 0; o < out; ++o) {
      T acc = 0;
      for (std::size_t i = 0; i < in; ++i) acc += w.v[o * in + i] * v_[i];
      u_[o] = acc;
    }
    normalize(u_);
  }

  T sigma() const {
    const auto& w = this->w_;
    const std::size_t out = w.dim(0), in = w.dim(1);
    T s = 0;
    for (std::size_t o = 0; o < out; ++o) {
      T acc = 0;
      for (std::size_t i = 0; i < in; ++i) acc += w.v[o * in + i] * v_[i];
      s += u_[o] * acc;
    }
    return s;
  }

  Tensor<T> effective_weight() const {
    Tensor<T> we = this->w_;
    const T s = sigma();
    for (T& x : we.v) x /= s;
    return we;
  }

  Tensor<T> forward(const Tensor<T>& x, Mode mode = Mode::kTrain) {
    if (mode == Mode::kTrain) update_power_iteration();
    sigma_cached_ = sigma();
    weff_ = this->w_;
    for (T& w : weff_.v) w /= sigma_cached_;
    return this->forward_with(x, weff_);
  }

  Tensor<T> backward(const Tensor<T>& gy) {
    Tensor<T> gweff({this->w_.dim(0), this->w_.dim(1)});
    Tensor<T> gx = this->backward_with(gy, weff_, gweff);
    // d(W/sigma)/dW with sigma = u^T W v: quotient rule, dsigma/dW = u v^T.
    const std::size_t out = this->w_.dim(0), in = this->w_.dim(1);
    T inner = 0;
    for (std::size_t i = 0; i < gweff.size(); ++i) inner += gweff[i] * this->w_[i];
    const T scale = inner / (sigma_cached_ * sigma_cached_);
    for (std::size_t o = 0; o < out; ++o) {
      for (std::size_t i = 0; i < in; ++i) {
        this->gw_.v[o * in + i] +=
            gweff.v[o * in + i] / sigma_cached_ - scale * u_[o] * v_[i];
      }
    }
    return gx;
  }

  void collect(const std::string& prefix, std::vector<ParamRef<T>>& out) {
    Dense<T>::collect(prefix, out);
    out.push_back({prefix + "/sn_u", &u_, nullptr});
    out.push_back({prefix + "/sn_v", &v_, nullptr});
  }

 private:
  static void normalize(Tensor<T>& t) {
    T n = 0;
    for (T x : t.v) n += x * x;
    n = std::sqrt(n) + static_cast<T>(1e-12);
    for (T& x : t.v) x /= n;
  }

  Tensor<T> u_, v_;
  Tensor<T> weff_;
  T sigma_cached_ = T(1);
};

// Direct 2D cross-correlation, NCHW layout, square kernel.
template <class T>
class Conv2d {
 public:
  Conv2d() = default;
  Conv2d(std::size_t in_ch, std::size_t out_ch, std::size_t kernel, std::size_t stride,
         std::size_t pad)
      : w_({out_ch, in_ch, kernel, kernel}),
        b_({out_ch}),
        gw_({out_ch, in_ch, kernel, kernel}),
        gb_({out_ch}),
        stride_(stride),
        pad_(pad) {}

  void init(Rng& rng) {
    const std::size_t k = w_.dim(2);
    init_uniform(w_, rng, glorot_limit<T>(w_.dim(1) * k * k, w_.dim(0) * k * k));
  }

  std::size_t out_extent(std::size_t in) const {
    return (in + 2 * pad_ - w_.dim(2)) / stride_ + 1;
  }

  Tensor<T> forward(const Tensor<T>& x, Mode /*mode*/ = Mode::kTrain) {
    if (x.shape.size() != 4 || x.dim(1) != w_.dim(1)) {
      throw std::invalid_argument("conv2d forward shape mismatch");
    }
    x_ = x;
    const std::size_t batch = x.dim(0), ic = x.dim(1), ih = x.dim(2), iw = x.dim(3);
    const std::size_t oc = w_.dim(0), k = w_.dim(2);
    const std::size_t oh = out_extent(ih), ow = out_extent(iw);
    Tensor<T> y({batch, oc, oh, ow});
    for (std::size_t n = 0; n < batch; ++n) {
      for (std::size_t o = 0; o < oc; ++o) {
        for (std::size_t r = 0; r < oh; ++r) {
          for (std::size_t c = 0; c < ow; ++c) {
            T acc = b_[o];
            for (std::size_t ci = 0; ci < ic; ++ci) {
              for (std::size_t kr = 0; kr < k; ++kr) {
                const std::ptrdiff_t sr = static_cast<std::ptrdiff_t>(r * stride_ + kr) -
                                          static_cast<std::ptrdiff_t>(pad_);
                if (sr < 0 || sr >= static_cast<std::ptrdiff_t>(ih)) continue;
                for (std::size_t kc = 0; kc < k; ++kc) {
                  const std::ptrdiff_t sc = static_cast<std::ptrdiff_t>(c * stride_ + kc) -
                                            static_cast<std::ptrdiff_t>(pad_);
                  if (sc < 0 || sc >= static_cast<std::ptrdiff_t>(iw)) continue;
                  acc += w_.at(o, ci, kr, kc) * x.at(n, ci, sr, sc);
                }
              }
            }
            y.at(n, o, r, c) = acc;
          }
        }
      }
    }
    return y;
  }

  Tensor<T> backward(const Tensor<T>& gy) {
    const std::size_t batch = x_.dim(0), ic = x_.dim(1), ih = x_.dim(2), iw = x_.dim(3);
    const std::size_t oc = w_.dim(0), k = w_.dim(2);
    const std::size_t oh = out_extent(ih), ow = out_extent(iw);
    if (gy.shape.size() != 4 || gy.dim(0) != batch || gy.dim(1) != oc || gy.dim(2) != oh ||
        gy.dim(3) != ow) {
      throw std::invalid_argument("conv2d backward shape mismatch");
    }
    Tensor<T> gx({batch, ic, ih, iw});
    for (std::size_t n = 0; n < batch; ++n) {
      for (std::size_t o = 0; o < oc; ++o) {
        for (std::size_t r = 0; r < oh; ++r) {
          for (std::size_t c = 0; c < ow; ++c) {
            const T g = gy.at(n, o, r, c);
            gb_[o] += g;
            for (std::size_t ci = 0; ci < ic; ++ci) {
              for (std::size_t kr = 0; kr < k; ++kr) {
                const std::ptrdiff_t sr = static_cast<std::ptrdiff_t>(r * stride_ + kr) -
                                          static_cast<std::ptrdiff_t>(pad_);
                if (sr < 0 || sr >= static_cast<std::ptrdiff_t>(ih)) continue;
                for (std::size_t kc = 0; kc < k; ++kc) {
                  const std::ptrdiff_t sc = static_cast<std::ptrdiff_t>(c * stride_ + kc) -
                                            static_cast<std::ptrdiff_t>(pad_);
                  if (sc < 0 || sc >= static_cast<std::ptrdiff_t>(iw)) continue;
                  gw_.at(o, ci, kr, kc) += g * x_.at(n, ci, sr, sc);
                  gx.at(n, ci, sr, sc) += g * w_.at(o, ci, kr, kc);
                }
              }
            }
          }
        }
      }
    }
    return gx;
  }

  void collect(const std::string& prefix, std::vector<ParamRef<T>>& out) {
    out.push_back({prefix + "/w", &w_, &gw_});
    out.push_back({prefix + "/b", &b_, &gb_});
  }

  Tensor<T>& weight() { return w_; }
  Tensor<T>& bias() { return b_; }

 private:
  Tensor<T> w_, b_, gw_, gb_;
  Tensor<T> x_;
  std::size_t stride_ = 1, pad_ = 0;
};

// Batch normalization. 2D input [B,F] normalizes per feature over the batch;
// 4D input [B,C,H,W] normalizes per channel over B*H*W. Train mode requires
// at least 2 reduction samples and folds batch statistics into the running
// estimates (biased variance, so matching running stats reproduce train-mode
// outputs exactly in eval).
template <class T>
class BatchNorm {
 public:
  BatchNorm() = default;
  explicit BatchNorm(std::size_t features, T momentum = T(0.9), T eps = T(1e-5))
      : gamma_({features}), beta_({features}), ggamma_({features}), gbeta_({features}),
        running_mean_({features}), running_var_({features}), momentum_(momentum), eps_(eps) {
    gamma_.fill(T(1));
    running_var_.fill(T(1));
  }

  Tensor<T> forward(const Tensor<T>& x, Mode mode) {
    if (x.shape.size() != 2 && x.shape.size() != 4) {
      throw std::invalid_argument("batchnorm expects [B,F] or [B,C,H,W] input");
    }
    layout_4d_ = x.shape.size() == 4;
    const std::size_t f = gamma_.dim(0);
    if (x.dim(1) != f) {
      throw std::invalid_argument("batchnorm feature dimension mismatch");
    }
    const std::size_t m = reduction_count(x);
    Tensor<T> mean({f}), var({f});
    if (mode == Mode::kTrain) {
      if (m < 2) {
        throw std::invalid_argument("batchnorm train mode needs >= 2 samples per feature");
      }
      compute_stats(x, mean, var);
      for (std::size_t i = 0; i < f; ++i) {
        running_mean_[i] = momentum_ * running_mean_[i] + (T(1) - momentum_) * mean[i];
        running_var_[i] = momentum_ * running_var_[i] + (T(1) - momentum_) * var[i];
      }
    } else {
      mean = running_mean_;
      var = running_var_;
    }
    mean_ = mean;
    invstd_ = Tensor<T>({f});
    for (std::size_t i = 0; i < f; ++i) invstd_[i] = T(1) / std::sqrt(var[i] + eps_);
    xhat_ = Tensor<T>(x.shape);
    Tensor<T> y(x.shape);
    for_each(x, [&](std::size_t idx, std::size_t feat) {
      const T xh = (x[idx] - mean_[feat]) * invstd_[feat];
      xhat_[idx] = xh;
      y[idx] = gamma_[feat] * xh + beta_[feat];
    });
    train_cached_ = mode == Mode::kTrain;
    m_cached_ = m;
    return y;
  }

  Tensor<T> backward(const Tensor<T>& gy) {
    if (!gy.same_shape(xhat_)) throw std::invalid_argument("batchnorm backward shape mismatch");
    const std::size_t f = gamma_.dim(0);
    Tensor<T> sum_g({f}), sum_gx({f});
    for_each(gy, [&](std::size_t idx, std::size_t feat) {
      ggamma_[feat] += gy[idx] * xhat_[idx];
      gbeta_[feat] += gy[idx];
      sum_g[feat] += gy[idx] * gamma_[feat];
      sum_gx[feat] += gy[idx] * gamma_[feat] * xhat_[idx];
    });
    Tensor<T> gx(gy.shape);
    const T m = static_cast<T>(m_cached_);
    for_each(gy, [&](std::size_t idx, std::size_t feat) {
      const T dxhat = gy[idx] * gamma_[feat];
      if (train_cached_) {
        gx[idx] = invstd_[feat] / m *
                  (m * dxhat - sum_g[feat] - xhat_[idx] * sum_gx[feat]);
      } else {
        gx[idx] = dxhat * invstd_[feat];
      }
    });
    return gx;
  }

  void collect(const std::string& prefix, std::vector<ParamRef<T>>& out) {
    out.push_back({prefix + "/gamma", &gamma_, &ggamma_});
    out.push_back({prefix + "/beta", &beta_, &gbeta_});
    out.push_back({prefix + "/running_mean", &running_mean_, nullptr});
    out.push_back({prefix + "/running_var", &running_var_, nullptr});
  }

  Tensor<T>& gamma() { return gamma_; }
  Tensor<T>& beta() { return beta_; }
  Tensor<T>& running_mean() { return running_mean_; }
  Tensor<T>& running_var() { return running_var_; }

 private:
  std::size_t reduction_count(const Tensor<T>& x) const {
    return layout_4d_ ? x.dim(0) * x.dim(2) * x.dim(3) : x.dim(0);
  }

  template <class F>
  void for_each(const Tensor<T>& x, F&& fn) const {
    if (layout_4d_) {
      const std::size_t b = x.dim(0), c = x.dim(1), hw = x.dim(2) * x.dim(3);
      for (std::size_t n = 0; n < b; ++n) {
        for (std::size_t ch = 0; ch < c; ++ch) {
          const std::size_t base = (n * c + ch) * hw;
          for (std::size_t i = 0; i < hw; ++i) fn(base + i, ch);
        }
      }
    } else {
      const std::size_t b = x.dim(0), f = x.dim(1);
      for (std::size_t n = 0; n < b; ++n) {
        for (std::size_t i = 0; i < f; ++i) fn(n * f + i, i);
      }
    }
  }

  void compute_stats(const Tensor<T>& x, Tensor<T>& mean, Tensor<T>& var) const {
    const T m = static_cast<T>(reduction_count(x));
    for_each(x, [&](std::size_t idx, std::size_t feat) { mean[feat] += x[idx]; });
    for (T& v : mean.v) v /= m;
    for_each(x, [&](std::size_t idx, std::size_t feat) {
      const T d = x[idx] - mean[feat];
      var[feat] += d * d;
    });
    for (T& v : var.v) v /= m;
  }

  Tensor<T> gamma_, beta_, ggamma_, gbeta_;
  Tensor<T> running_mean_, running_var_;
  Tensor<T> mean_, invstd_, xhat_;
  T momentum_ = T(0.9), eps_ = T(1e-5);
  bool layout_4d_ = false;
  bool train_cached_ = false;
  std::size_t m_cached_ = 0;
};

template <class T>
class LeakyRelu {
 public:
  explicit LeakyRelu(T alpha = T(0.2)) : alpha_(alpha) {}

  Tensor<T> forward(const Tensor<T>& x) {
    x_ = x;
    Tensor<T> y = x;
    for (T& v : y.v) {
      if (v < T(0)) v *= alpha_;
    }
    return y;
  }

  Tensor<T> backward(const Tensor<T>& gy) {
    Tensor<T> gx = gy;
    for (std::size_t i = 0; i < gx.size(); ++i) {
      if (x_[i] < T(0)) gx[i] *= alpha_;
    }
    return gx;
  }

 private:
  T alpha_;
  Tensor<T> x_;
};

template <class T>
class Sigmoid {
 public:
  Tensor<T> forward(const Tensor<T>& x) {
    y_ = x;
    for (T& v : y_.v) v = T(1) / (T(1) + std::exp(-v));
    return y_;
  }

  Tensor<T> backward(const Tensor<T>& gy) {
    Tensor<T> gx = gy;
    for (std::size_t i = 0; i < gx.size(); ++i) gx[i] *= y_[i] * (T(1) - y_[i]);
    return gx;
  }

 private:
  Tensor<T> y_;
};

}  // namespace cfplan::nn
