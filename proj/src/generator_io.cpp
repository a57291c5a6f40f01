#include "cfplan/gan/io.hpp"

#include <cstring>
#include <stdexcept>

#include "cfplan/errors.hpp"
#include "cfplan/nn/checkpoint.hpp"

namespace cfplan::gan {
namespace {

std::vector<std::uint32_t> split_u64(std::uint64_t v) {
  return {static_cast<std::uint32_t>(v & 0xffffffffull), static_cast<std::uint32_t>(v >> 32)};
}

std::uint64_t join_u64(const std::vector<std::uint32_t>& w) {
  if (w.size() != 2) throw ModelError("bad u64 meta width in checkpoint");
  return static_cast<std::uint64_t>(w[0]) | (static_cast<std::uint64_t>(w[1]) << 32);
}

}  // namespace

void save_models(const std::string& path, Generator<float>& gen, Discriminator<float>& disc,
                 const CheckpointMeta& meta, const nn::Adam<float>* adam_gen,
                 const nn::Adam<float>* adam_disc) {
  std::vector<nn::ParamRef<float>> all = gen.state();
  const auto ds = disc.state();
  all.insert(all.end(), ds.begin(), ds.end());
  nn::CheckpointData data = nn::snapshot(all);
  if (adam_gen != nullptr && adam_disc != nullptr) {
    data.has_optimizer = true;
    data.optimizer_step = adam_gen->step_count();
    for (const auto* adam : {adam_gen, adam_disc}) {
      for (const auto& [name, slot] : adam->slots()) {
        data.optimizer_tensors.push_back({name + ".m", slot.m});
        data.optimizer_tensors.push_back({name + ".v", slot.v});
      }
    }
  }
  nn::put_meta(data, "seed", split_u64(meta.seed));
  nn::put_meta(data, "config_hash", split_u64(meta.config_hash));
  nn::put_meta(data, "fold_seed", split_u64(meta.fold_seed));
  nn::put_meta(data, "fold", {static_cast<std::uint32_t>(meta.fold_index),
                              static_cast<std::uint32_t>(meta.fold_count),
                              meta.scenario_count});
  nn::put_meta(data, "arch", {static_cast<std::uint32_t>(meta.arch.cond_channels1),
                              static_cast<std::uint32_t>(meta.arch.cond_channels2),
                              static_cast<std::uint32_t>(meta.arch.cond_features),
                              static_cast<std::uint32_t>(meta.arch.trunk_width)});
  nn::save_checkpoint(path, data);
}

LoadedGenerator load_generator(const std::string& path) {
  const nn::CheckpointData data = nn::load_checkpoint(path);
  LoadedGenerator out;
  std::vector<std::uint32_t> words;
  if (nn::get_meta(data, "arch", words) && words.size() == 4) {
    out.meta.arch.cond_channels1 = static_cast<int>(words[0]);
    out.meta.arch.cond_channels2 = static_cast<int>(words[1]);
    out.meta.arch.cond_features = static_cast<int>(words[2]);
    out.meta.arch.trunk_width = static_cast<int>(words[3]);
  }
  if (nn::get_meta(data, "seed", words)) out.meta.seed = join_u64(words);
  if (nn::get_meta(data, "config_hash", words)) out.meta.config_hash = join_u64(words);
  if (nn::get_meta(data, "fold_seed", words)) out.meta.fold_seed = join_u64(words);
  if (nn::get_meta(data, "fold", words) && words.size() == 3) {
    out.meta.fold_index = static_cast<std::int32_t>(words[0]);
    out.meta.fold_count = static_cast<std::int32_t>(words[1]);
    out.meta.scenario_count = words[2];
  }
  out.gen = std::make_unique<Generator<float>>(out.meta.arch);
  nn::restore(data, out.gen->state());
  return out;
}

Tensor<float> generate_batch(Generator<float>& gen, const Tensor<float>& z,
                             const ConditionMask& mask) {
  if (z.shape.size() != 2 || z.dim(1) != kJointDims) {
    throw std::invalid_argument("latent batch must have shape [N,2]");
  }
  for (float v : z.v) {
    if (v < 0.f || v > 1.f) throw std::out_of_range("latent points must lie in [0,1]^2");
  }
  const Tensor<float> cond = gen.forward_cond(mask_to_tensor<float>(mask), Mode::kEval);
  return gen.forward_trunk(z, cond, Mode::kEval);
}

std::array<double, 2> generate_one(Generator<float>& gen, double z1, double z2,
                                   const ConditionMask& mask) {
  Tensor<float> z({1, 2});
  z.at(0, 0) = static_cast<float>(z1);
  z.at(0, 1) = static_cast<float>(z2);
  const Tensor<float> y = generate_batch(gen, z, mask);
  return {static_cast<double>(y.at(0, 0)), static_cast<double>(y.at(0, 1))};
}

}  // namespace cfplan::gan
