#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace cocrash {

// Minimal `key = value` config file. '#' starts a comment; repeated keys
// accumulate (used for event/holiday lists). Key order inside a repeated key
// is preserved.
class KeyValueConfig {
  public:
    static KeyValueConfig load(const std::string& path);
    static KeyValueConfig from_text(const std::string& text);

    bool has(const std::string& key) const { return values_.count(key) > 0; }
    std::optional<std::string> get(const std::string& key) const;
    std::string get_or(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key, double fallback) const;
    std::int64_t get_int(const std::string& key, std::int64_t fallback) const;
    const std::vector<std::string>& get_all(const std::string& key) const;

    void set(const std::string& key, const std::string& value);

    // Sorted-key canonical rendering, used for config hashing.
    std::string canonical_text() const;

  private:
    std::map<std::string, std::vector<std::string>> values_;
    static const std::vector<std::string> kEmpty;
};

// FNV-1a 64-bit, rendered as 16 hex digits. Stable across runs and builds.
std::string fnv1a_hex(const std::string& text);

}  // namespace cocrash
