#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cfplan/nn/adam.hpp"
#include "cfplan/nn/tensor.hpp"

namespace cfplan::nn {

struct NamedTensor {
  std::string name;
  Tensor<float> value;
};

struct CheckpointData {
  std::uint32_t format_version = 1;
  std::vector<NamedTensor> tensors;
  bool has_optimizer = false;
  std::uint64_t optimizer_step = 0;
  std::vector<NamedTensor> optimizer_tensors;  // "<param>.m" / "<param>.v"
};

// Little-endian container; save(load(path)) reproduces the byte stream.
void save_checkpoint(const std::string& path, const CheckpointData& data);
CheckpointData load_checkpoint(const std::string& path);

CheckpointData snapshot(const std::vector<ParamRef<float>>& state,
                        const Adam<float>* optimizer = nullptr);

// Copies checkpoint tensors into the referenced state by name; throws
// ModelError on missing names or shape mismatches.
void restore(const CheckpointData& data, const std::vector<ParamRef<float>>& state,
             Adam<float>* optimizer = nullptr);

// Meta scalars are stashed as bit-cast u32 tensors under "meta/<key>".
void put_meta(CheckpointData& data, const std::string& key,
              const std::vector<std::uint32_t>& words);
bool get_meta(const CheckpointData& data, const std::string& key,
              std::vector<std::uint32_t>& words);

}  // namespace cfplan::nn
