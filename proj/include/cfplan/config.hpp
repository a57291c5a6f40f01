#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>

namespace cfplan {

// Flat key=value configuration files: one pair per line, '#' comments,
// whitespace-trimmed keys and values.
using KvConfig = std::map<std::string, std::string>;

KvConfig load_kv_file(const std::string& path);
KvConfig parse_kv_text(const std::string& text);

std::uint64_t fnv1a_hash(std::string_view data);

// Canonical hash over sorted "key=value" lines.
std::uint64_t hash_config(const KvConfig& kv);

double kv_get_double(const KvConfig& kv, const std::string& key, double fallback);
int kv_get_int(const KvConfig& kv, const std::string& key, int fallback);
std::uint64_t kv_get_u64(const KvConfig& kv, const std::string& key, std::uint64_t fallback);
std::string kv_get_string(const KvConfig& kv, const std::string& key,
                          const std::string& fallback);

}  // namespace cfplan
