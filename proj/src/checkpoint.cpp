#include "cfplan/nn/checkpoint.hpp"

#include <cstring>
#include <fstream>

#include "cfplan/errors.hpp"
#include "cfplan/version.hpp"

namespace cfplan::nn {
namespace {

template <class T>
void write_raw(std::ostream& os, const T& v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
void read_raw(std::istream& is, T& v) {
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
}

void write_tensor(std::ostream& os, const NamedTensor& t) {
  write_raw(os, static_cast<std::uint32_t>(t.name.size()));
  os.write(t.name.data(), static_cast<std::streamsize>(t.name.size()));
  write_raw(os, static_cast<std::uint32_t>(t.value.shape.size()));
  for (std::size_t d : t.value.shape) write_raw(os, static_cast<std::uint32_t>(d));
  os.write(reinterpret_cast<const char*>(t.value.v.data()),
           static_cast<std::streamsize>(t.value.size() * sizeof(float)));
}

NamedTensor read_tensor(std::istream& is) {
  NamedTensor t;
  std::uint32_t name_len = 0;
  read_raw(is, name_len);
  if (!is || name_len > 4096) throw ModelError("corrupt checkpoint: bad tensor name");
  t.name.resize(name_len);
  is.read(t.name.data(), name_len);
  std::uint32_t rank = 0;
  read_raw(is, rank);
  if (!is || rank == 0 || rank > 4) throw ModelError("corrupt checkpoint: bad tensor rank");
  std::vector<std::size_t> shape(rank);
  for (std::uint32_t i = 0; i < rank; ++i) {
    std::uint32_t d = 0;
    read_raw(is, d);
    shape[i] = d;
  }
  t.value = Tensor<float>(shape);
  is.read(reinterpret_cast<char*>(t.value.v.data()),
          static_cast<std::streamsize>(t.value.size() * sizeof(float)));
  if (!is) throw ModelError("corrupt checkpoint: truncated tensor data");
  return t;
}

}  // namespace

void save_checkpoint(const std::string& path, const CheckpointData& data) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ModelError("cannot write checkpoint: " + path);
  f.write(kCheckpointMagic, 8);
  write_raw(f, data.format_version);
  write_raw(f, static_cast<std::uint32_t>(data.tensors.size()));
  for (const NamedTensor& t : data.tensors) write_tensor(f, t);
  write_raw(f, static_cast<std::uint8_t>(data.has_optimizer ? 1 : 0));
  if (data.has_optimizer) {
    write_raw(f, data.optimizer_step);
    write_raw(f, static_cast<std::uint32_t>(data.optimizer_tensors.size()));
    for (const NamedTensor& t : data.optimizer_tensors) write_tensor(f, t);
  }
  if (!f) throw ModelError("short write on checkpoint: " + path);
}

CheckpointData load_checkpoint(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ModelError("cannot open checkpoint: " + path);
  char magic[8];
  f.read(magic, 8);
  if (!f || std::memcmp(magic, kCheckpointMagic, 8) != 0) {
    throw ModelError("bad checkpoint magic in " + path);
  }
  CheckpointData data;
  read_raw(f, data.format_version);
  if (data.format_version != 1) {
    throw ModelError("unsupported checkpoint version in " + path);
  }
  std::uint32_t count = 0;
  read_raw(f, count);
  if (!f) throw ModelError("corrupt checkpoint: " + path);
  data.tensors.reserve(count);
  for (std::uint32_t i = 0; i < count; ++i) data.tensors.push_back(read_tensor(f));
  std::uint8_t has_opt = 0;
  read_raw(f, has_opt);
  if (!f) throw ModelError("corrupt checkpoint: " + path);
  data.has_optimizer = has_opt != 0;
  if (data.has_optimizer) {
    read_raw(f, data.optimizer_step);
    std::uint32_t n = 0;
    read_raw(f, n);
    if (!f) throw ModelError("corrupt checkpoint: " + path);
    for (std::uint32_t i = 0; i < n; ++i) data.optimizer_tensors.push_back(read_tensor(f));
  }
  return data;
}

CheckpointData snapshot(const std::vector<ParamRef<float>>& state, const Adam<float>* optimizer) {
  CheckpointData data;
  for (const ParamRef<float>& p : state) {
    data.tensors.push_back({p.name, *p.value});
  }
  if (optimizer != nullptr) {
    data.has_optimizer = true;
    data.optimizer_step = optimizer->step_count();
    for (const auto& [name, slot] : optimizer->slots()) {
      data.optimizer_tensors.push_back({name + ".m", slot.m});
      data.optimizer_tensors.push_back({name + ".v", slot.v});
    }
  }
  return data;
}

void restore(const CheckpointData& data, const std::vector<ParamRef<float>>& state,
             Adam<float>* optimizer) {
  for (const ParamRef<float>& p : state) {
    const NamedTensor* found = nullptr;
    for (const NamedTensor& t : data.tensors) {
      if (t.name == p.name) {
        found = &t;
        break;
      }
    }
    if (found == nullptr) throw ModelError("checkpoint missing tensor: " + p.name);
    if (found->value.shape != p.value->shape) {
      throw ModelError("checkpoint shape mismatch for tensor: " + p.name);
    }
    *p.value = found->value;
  }
  if (optimizer != nullptr && data.has_optimizer) {
    optimizer->set_step_count(data.optimizer_step);
    for (const NamedTensor& t : data.optimizer_tensors) {
      const bool is_m = t.name.ends_with(".m");
      const bool is_v = t.name.ends_with(".v");
      if (!is_m && !is_v) throw ModelError("bad optimizer tensor name: " + t.name);
      const std::string param = t.name.substr(0, t.name.size() - 2);
      auto& slot = optimizer->slots()[param];
      (is_m ? slot.m : slot.v) = t.value;
    }
  }
}

void put_meta(CheckpointData& data, const std::string& key,
              const std::vector<std::uint32_t>& words) {
  NamedTensor t;
  t.name = "meta/" + key;
  t.value = Tensor<float>({words.size()});
  std::memcpy(t.value.v.data(), words.data(), words.size() * sizeof(std::uint32_t));
  data.tensors.push_back(std::move(t));
}

bool get_meta(const CheckpointData& data, const std::string& key,
              std::vector<std::uint32_t>& words) {
  const std::string name = "meta/" + key;
  for (const NamedTensor& t : data.tensors) {
    if (t.name == name) {
      words.resize(t.value.size());
      std::memcpy(words.data(), t.value.v.data(), words.size() * sizeof(std::uint32_t));
      return true;
    }
  }
  return false;
}

}  // namespace cfplan::nn
