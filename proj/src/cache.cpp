#include "asflab/cache.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "asflab/engine.hpp"

namespace fs = std::filesystem;

namespace asflab {

static std::string default_cache_dir() {
  if (const char* env = std::getenv("ASF_CACHE_DIR")) return env;
  if (const char* xdg = std::getenv("XDG_CACHE_HOME")) return std::string(xdg) + "/asflab";
  if (const char* home = std::getenv("HOME")) return std::string(home) + "/.cache/asflab";
  return ".asflab-cache";
}

Cache::Cache(std::string dir) : dir_(dir.empty() ? default_cache_dir() : std::move(dir)) {
  std::error_code ec;
  fs::create_directories(dir_, ec);
}

std::string Cache::hash_key(const std::string& canonical) {
  // FNV-1a, keyed with the engine version so stale records never resurface
  unsigned long long h = 1469598103934665603ULL;
  std::string full = std::string(kEngineVersion) + "\n" + canonical;
  for (unsigned char c : full) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  std::ostringstream os;
  os << std::hex << h;
  return os.str();
}

std::optional<std::string> Cache::get(const std::string& key) const {
  fs::path p = fs::path(dir_) / (hash_key(key) + ".json");
  std::ifstream in(p);
  if (!in) return std::nullopt;
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    auto env = nlohmann::json::parse(ss.str());
    if (env.at("key").get<std::string>() != key) return std::nullopt;  // hash collision
    return env.at("payload").get<std::string>();
  } catch (...) {
    return std::nullopt;
  }
}

void Cache::put(const std::string& key, const std::string& payload) const {
  nlohmann::json env;
  env["key"] = key;
  env["engine"] = kEngineVersion;
  env["payload"] = payload;
  env["written_at"] = (long long)::time(nullptr);
  fs::path p = fs::path(dir_) / (hash_key(key) + ".json");
  fs::path tmp = p;
  tmp += ".tmp";
  {
    std::ofstream out(tmp);
    out << env.dump();
  }
  std::error_code ec;
  fs::rename(tmp, p, ec);
  if (ec) std::remove(tmp.string().c_str());
}

}  // namespace asflab
