#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include "healing/error.hpp"
#include "json.hpp"

namespace healing::detail {

using json = nlohmann::json;

inline std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline json parse_json(std::string_view text, std::string_view what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string(what) + ": " + e.what());
  }
}

template <class T>
T required_field(const json& obj, const char* key, std::string_view where) {
  if (!obj.is_object() || !obj.contains(key)) {
    throw ConfigError(std::string(where) + ": missing key '" + key + "'");
  }
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string(where) + ": bad value for '" + key + "': " + e.what());
  }
}

template <class T>
T optional_field(const json& obj, const char* key, T fallback, std::string_view where) {
  if (!obj.is_object() || !obj.contains(key)) return fallback;
  return required_field<T>(obj, key, where);
}

}  // namespace healing::detail
