#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace bfmn {

// Minimal INI/TOML-flavoured key-value file: `[section]` headers,
// `key = value` lines, `#` or `;` comments. Keys are stored as
// "section.key" (or "key" before any section). Surrounding quotes on values
// are stripped.
class KvConfig {
public:
    static KvConfig parse(const std::string& text);
    static KvConfig load(const std::string& path);

    bool has(const std::string& key) const { return values_.count(key) != 0; }
    std::optional<std::string> get(const std::string& key) const;
    std::string get_or(const std::string& key, const std::string& fallback) const;
    // Comma-separated list value, each element trimmed, empties removed.
    std::vector<std::string> get_list(const std::string& key) const;

    // All keys under `section.` with the prefix removed.
    std::map<std::string, std::string> section(const std::string& name) const;

    const std::map<std::string, std::string>& values() const { return values_; }

private:
    std::map<std::string, std::string> values_;
};

} // namespace bfmn
