#pragma once

#include <optional>
#include <string>

namespace asflab {

// Content-addressed JSON cache for computed records.  The key is hashed
// together with the engine version; payloads are written atomically
// (temporary file + rename).  Timestamps live in the envelope, never in the
// payload.
class Cache {
 public:
  // dir: explicit directory, or empty to use ASF_CACHE_DIR, falling back to
  // the platform cache path.
  explicit Cache(std::string dir = "");

  const std::string& directory() const { return dir_; }
  std::optional<std::string> get(const std::string& key) const;
  void put(const std::string& key, const std::string& payload) const;

  static std::string hash_key(const std::string& canonical);

 private:
  std::string dir_;
};

}  // namespace asflab
