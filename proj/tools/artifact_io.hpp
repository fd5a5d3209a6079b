#ifndef URLSPREAD_TOOLS_ARTIFACT_IO_HPP
#define URLSPREAD_TOOLS_ARTIFACT_IO_HPP

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "urlspread/version.hpp"

namespace urlspread::tools {

// FNV-1a 64-bit; a provenance fingerprint, not a cryptographic hash.
inline std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

inline std::string hex64(std::uint64_t value) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(value));
  return buf;
}

struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("missing artifact: " + path);
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw std::runtime_error("read failed: " + path);
  return bytes;
}

// Temp file in the target directory plus rename, so a partial write is never
// visible under the final name.
inline void write_file_atomic(const std::string& path, std::string_view bytes) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write: " + tmp.string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    out.flush();
    if (!out) throw std::runtime_error("write failed: " + tmp.string());
  }
  fs::rename(tmp, target);
}

// {tool_version, config_hash, input_hashes}; attached to every artifact,
// inline for JSON documents and as a .meta.json sidecar for CSV/NDJSON.
struct Provenance {
  std::string config_hash;
  std::map<std::string, std::string> input_hashes;

  nlohmann::json to_json() const {
    nlohmann::json obj;
    obj["tool_version"] = kVersion;
    obj["config_hash"] = config_hash;
    obj["input_hashes"] = input_hashes;
    return obj;
  }
};

inline void write_sidecar(const std::string& artifact_path, const Provenance& provenance) {
  write_file_atomic(artifact_path + ".meta.json", provenance.to_json().dump(2) + "\n");
}

}  // namespace urlspread::tools

#endif
