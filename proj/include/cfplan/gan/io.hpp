#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <string>

#include "cfplan/gan/models.hpp"
#include "cfplan/nn/adam.hpp"

namespace cfplan::gan {

// Provenance and split info carried inside checkpoints as meta tensors.
struct CheckpointMeta {
  std::uint64_t seed = 0;
  std::uint64_t config_hash = 0;
  std::uint64_t fold_seed = 0;
  std::int32_t fold_index = -1;
  std::int32_t fold_count = 0;
  std::uint32_t scenario_count = 0;
  ArchConfig arch;
};

void save_models(const std::string& path, Generator<float>& gen, Discriminator<float>& disc,
                 const CheckpointMeta& meta, const nn::Adam<float>* adam_gen = nullptr,
                 const nn::Adam<float>* adam_disc = nullptr);

struct LoadedGenerator {
  std::unique_ptr<Generator<float>> gen;
  CheckpointMeta meta;
};

// Restores the generator (discriminator tensors, if present, are ignored).
LoadedGenerator load_generator(const std::string& path);

// Batched eval-mode inference; rows of z in [0,1]^2 -> rows in (0,1)^2.
Tensor<float> generate_batch(Generator<float>& gen, const Tensor<float>& z,
                             const ConditionMask& mask);

std::array<double, 2> generate_one(Generator<float>& gen, double z1, double z2,
                                   const ConditionMask& mask);

}  // namespace cfplan::gan
