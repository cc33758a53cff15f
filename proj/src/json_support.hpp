#pragma once

// Strict JSON reading helpers shared by the document parsers. Every accessor
// reports the dotted path of the offending value.

#include <cstdint>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "rangesim/error.hpp"
#include "rangesim/vocabulary.hpp"

namespace rangesim::json_support {

using Json = nlohmann::json;
using OrderedJson = nlohmann::ordered_json;

Json parse_text(std::string_view text);

// Canonical text: two-space indent, insertion-ordered keys, trailing newline.
std::string dump(const OrderedJson& value);

std::string join(const std::string& path, std::string_view key);
std::string index(const std::string& path, std::size_t i);

[[noreturn]] void violation(const std::string& path, const std::string& detail);

const Json& expect_array(const Json& value, const std::string& path);
std::string as_string(const Json& value, const std::string& path);
std::string as_identifier(const Json& value, const std::string& path);
double as_fraction(const Json& value, const std::string& path);
std::int64_t as_integer(const Json& value, const std::string& path, std::int64_t lo,
                        std::int64_t hi);
std::uint64_t as_u64(const Json& value, const std::string& path);
bool as_bool(const Json& value, const std::string& path);
NodeClass as_node_class(const Json& value, const std::string& path);
std::vector<std::string> as_identifier_list(const Json& value, const std::string& path);

// Reads one JSON object. Fields are consumed through the accessors and
// finish() rejects whatever was left unread.
class ObjectReader {
 public:
  ObjectReader(const Json& value, std::string path);

  bool has(std::string_view key) const;
  const Json& required(std::string_view key);
  const Json* optional(std::string_view key);
  std::string path_of(std::string_view key) const { return join(path_, key); }
  const std::string& path() const noexcept { return path_; }

  std::string string(std::string_view key) { return as_string(required(key), path_of(key)); }
  std::string identifier(std::string_view key) {
    return as_identifier(required(key), path_of(key));
  }
  double fraction(std::string_view key) { return as_fraction(required(key), path_of(key)); }
  std::int64_t integer(std::string_view key, std::int64_t lo, std::int64_t hi) {
    return as_integer(required(key), path_of(key), lo, hi);
  }
  bool boolean(std::string_view key) { return as_bool(required(key), path_of(key)); }

  void finish() const;

 private:
  const Json& value_;
  std::string path_;
  std::set<std::string, std::less<>> consumed_;
};

}  // namespace rangesim::json_support
