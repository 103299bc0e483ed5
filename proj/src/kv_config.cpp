#include "bfmn/kv_config.hpp"
#include "bfmn/error.hpp"
#include "bfmn/text.hpp"

namespace bfmn {

KvConfig KvConfig::parse(const std::string& text) {
    KvConfig cfg;
    std::string section;
    std::size_t line_no = 0;
    for (const auto& raw : split(text, '\n')) {
        ++line_no;
        std::string line = trim(raw);
        if (line.empty() || line[0] == '#' || line[0] == ';') continue;
        if (line.front() == '[') {
            if (line.back() != ']') {
                throw Error(ErrorCode::BadConfig, "unterminated section header on line " + std::to_string(line_no));
            }
            section = trim(std::string_view(line).substr(1, line.size() - 2));
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw Error(ErrorCode::BadConfig, "expected key = value on line " + std::to_string(line_no));
        }
        std::string key = trim(std::string_view(line).substr(0, eq));
        std::string value = trim(std::string_view(line).substr(eq + 1));
        if (value.size() >= 2 && (value.front() == '"' || value.front() == '\'') && value.back() == value.front()) {
            value = value.substr(1, value.size() - 2);
        }
        if (key.empty()) throw Error(ErrorCode::BadConfig, "empty key on line " + std::to_string(line_no));
        cfg.values_[section.empty() ? key : section + "." + key] = value;
    }
    return cfg;
}

KvConfig KvConfig::load(const std::string& path) {
    return parse(read_file(path));
}

std::optional<std::string> KvConfig::get(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) return std::nullopt;
    return it->second;
}

std::string KvConfig::get_or(const std::string& key, const std::string& fallback) const {
    return get(key).value_or(fallback);
}

std::vector<std::string> KvConfig::get_list(const std::string& key) const {
    std::vector<std::string> out;
    auto v = get(key);
    if (!v) return out;
    for (auto& part : split(*v, ',')) {
        auto t = trim(part);
        if (!t.empty()) out.push_back(std::move(t));
    }
    return out;
}

std::map<std::string, std::string> KvConfig::section(const std::string& name) const {
    std::map<std::string, std::string> out;
    const std::string prefix = name + ".";
    for (auto it = values_.lower_bound(prefix); it != values_.end() && it->first.rfind(prefix, 0) == 0; ++it) {
        out.emplace(it->first.substr(prefix.size()), it->second);
    }
    return out;
}

} // namespace bfmn
