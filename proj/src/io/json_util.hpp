#pragma once

#include <initializer_list>
#include <string>
#include <string_view>

#include <json.hpp>

#include "crnctl/error.hpp"

namespace crnctl::io::detail {

using Json = nlohmann::ordered_json;

inline std::string child(const std::string& where, std::string_view key) {
  return where.empty() ? std::string(key) : where + "." + std::string(key);
}

inline std::string item(const std::string& where, std::size_t i) { return where + "[" + std::to_string(i) + "]"; }

[[noreturn]] inline void fail(const std::string& where, const std::string& what) {
  throw Error((where.empty() ? std::string("scenario") : where) + ": " + what);
}

inline void require_object(const Json& j, const std::string& where) {
  if (!j.is_object()) fail(where, "expected an object");
}

/// Rejects keys outside `allowed`.
inline void check_keys(const Json& j, const std::string& where, std::initializer_list<std::string_view> allowed) {
  require_object(j, where);
  for (const auto& [key, value] : j.items()) {
    bool ok = false;
    for (const auto a : allowed) ok = ok || key == a;
    if (!ok) fail(child(where, key), "unknown key");
  }
}

inline double get_number(const Json& j, const std::string& where) {
  if (!j.is_number()) fail(where, "expected a number");
  return j.get<double>();
}

inline double number_or(const Json& j, std::string_view key, const std::string& where, double fallback) {
  const auto it = j.find(key);
  return it == j.end() ? fallback : get_number(*it, child(where, key));
}

inline double require_number(const Json& j, std::string_view key, const std::string& where) {
  const auto it = j.find(key);
  if (it == j.end()) fail(child(where, key), "missing required number");
  return get_number(*it, child(where, key));
}

inline std::string get_string(const Json& j, const std::string& where) {
  if (!j.is_string()) fail(where, "expected a string");
  return j.get<std::string>();
}

inline std::string require_string(const Json& j, std::string_view key, const std::string& where) {
  const auto it = j.find(key);
  if (it == j.end()) fail(child(where, key), "missing required string");
  return get_string(*it, child(where, key));
}

inline std::size_t get_count(const Json& j, const std::string& where) {
  if (!j.is_number_integer() && !j.is_number_unsigned()) fail(where, "expected a nonnegative integer");
  const auto v = j.get<long long>();
  if (v < 0) fail(where, "expected a nonnegative integer");
  return static_cast<std::size_t>(v);
}

/// Parses JSON text; syntax errors report line and column.
Json parse_text(const std::string& text, const std::string& origin);
std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace crnctl::io::detail

namespace crnctl::crn {
class Network;
}

namespace crnctl::io::detail {

crn::Network network_from_json(const Json& j, const std::string& where);
Json network_to_json(const crn::Network& network);

}  // namespace crnctl::io::detail
