#pragma once

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <optional>
#include <string>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "poc/errors.hpp"
#include "poc/rng.hpp"

namespace poc {

// Layered run configuration keyed "section.key". Precedence:
// environment (POC_SECTION_KEY) > command-line flag > config file.
class RunConfig {
 public:
  static RunConfig from_file(const std::string& path) {
    RunConfig cfg;
    boost::property_tree::ptree tree;
    try {
      boost::property_tree::read_ini(path, tree);
    } catch (const boost::property_tree::ini_parser_error& e) {
      throw DataError("config " + path + ": " + e.what());
    }
    for (const auto& [section, body] : tree) {
      if (body.empty()) {
        cfg.file_[section] = body.data();
        continue;
      }
      for (const auto& [key, value] : body) cfg.file_[section + "." + key] = value.data();
    }
    return cfg;
  }

  void set_flag(const std::string& key, std::string value) { flags_[key] = std::move(value); }

  static std::string env_name(const std::string& key) {
    std::string out = "POC_";
    for (char c : key) {
      if (c == '.' || c == '-') out.push_back('_');
      else if (c >= 'a' && c <= 'z') out.push_back(static_cast<char>(c - 'a' + 'A'));
      else out.push_back(c);
    }
    return out;
  }

  std::optional<std::string> get(const std::string& key) const {
    if (const char* env = std::getenv(env_name(key).c_str())) return std::string(env);
    if (auto it = flags_.find(key); it != flags_.end()) return it->second;
    if (auto it = file_.find(key); it != file_.end()) return it->second;
    return std::nullopt;
  }

  std::string get_or(const std::string& key, const std::string& fallback) const { return get(key).value_or(fallback); }

  double get_double(const std::string& key, double fallback) const {
    auto v = get(key);
    if (!v) return fallback;
    try {
      std::size_t pos = 0;
      const double d = std::stod(*v, &pos);
      if (pos != v->size()) throw std::invalid_argument("trailing characters");
      return d;
    } catch (const std::exception&) {
      throw DataError("config value " + key + "='" + *v + "' is not a number");
    }
  }

  std::uint64_t get_uint(const std::string& key, std::uint64_t fallback) const {
    auto v = get(key);
    if (!v) return fallback;
    try {
      std::size_t pos = 0;
      const auto u = std::stoull(*v, &pos);
      if (pos != v->size() || v->front() == '-') throw std::invalid_argument("bad integer");
      return u;
    } catch (const std::exception&) {
      throw DataError("config value " + key + "='" + *v + "' is not a non-negative integer");
    }
  }

  // Every key visible through any layer, with its effective value.
  std::map<std::string, std::string> effective() const {
    std::map<std::string, std::string> out;
    for (const auto& [k, v] : file_) out[k] = *get(k);
    for (const auto& [k, v] : flags_) out[k] = *get(k);
    return out;
  }

  std::string hash() const {
    std::uint64_t h = fnv1a("poc-config");
    for (const auto& [k, v] : effective()) h = fnv1a(k + "=" + v + "\n", h);
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
  }

 private:
  std::map<std::string, std::string> file_;
  std::map<std::string, std::string> flags_;
};

}  // namespace poc
