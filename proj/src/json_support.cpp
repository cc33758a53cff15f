#include "json_support.hpp"

#include <limits>

namespace rangesim::json_support {

Json parse_text(std::string_view text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw Error(Errc::MalformedDocument, e.what());
  }
}

std::string dump(const OrderedJson& value) { return value.dump(2) + "\n"; }

std::string join(const std::string& path, std::string_view key) {
  return path.empty() ? std::string(key) : path + "." + std::string(key);
}

std::string index(const std::string& path, std::size_t i) {
  return path + "[" + std::to_string(i) + "]";
}

void violation(const std::string& path, const std::string& detail) {
  throw Error(Errc::InvariantViolation, path + ": " + detail);
}

const Json& expect_array(const Json& value, const std::string& path) {
  if (!value.is_array()) violation(path, "expected an array");
  return value;
}

std::string as_string(const Json& value, const std::string& path) {
  if (!value.is_string()) violation(path, "expected a string");
  return value.get<std::string>();
}

std::string as_identifier(const Json& value, const std::string& path) {
  std::string text = as_string(value, path);
  if (!is_identifier(text)) violation(path, "'" + text + "' is not a well-formed identifier");
  return text;
}

double as_fraction(const Json& value, const std::string& path) {
  if (!value.is_number()) violation(path, "expected a number");
  double x = value.get<double>();
  if (!(x >= 0.0 && x <= 1.0)) violation(path, "fraction outside [0,1]");
  return x;
}

std::int64_t as_integer(const Json& value, const std::string& path, std::int64_t lo,
                        std::int64_t hi) {
  if (!value.is_number_integer()) violation(path, "expected an integer");
  if (value.is_number_unsigned() &&
      value.get<std::uint64_t>() >
          static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max())) {
    violation(path, "integer out of range");
  }
  auto x = value.get<std::int64_t>();
  if (x < lo || x > hi) {
    violation(path, "integer " + std::to_string(x) + " outside [" + std::to_string(lo) + "," +
                        std::to_string(hi) + "]");
  }
  return x;
}

std::uint64_t as_u64(const Json& value, const std::string& path) {
  if (!value.is_number_unsigned()) violation(path, "expected a non-negative integer");
  return value.get<std::uint64_t>();
}

bool as_bool(const Json& value, const std::string& path) {
  if (!value.is_boolean()) violation(path, "expected a boolean");
  return value.get<bool>();
}

NodeClass as_node_class(const Json& value, const std::string& path) {
  auto text = as_string(value, path);
  auto cls = parse_node_class(text);
  if (!cls) violation(path, "unknown node class '" + text + "'");
  return *cls;
}

std::vector<std::string> as_identifier_list(const Json& value, const std::string& path) {
  std::vector<std::string> out;
  const auto& arr = expect_array(value, path);
  for (std::size_t i = 0; i < arr.size(); ++i) out.push_back(as_identifier(arr[i], index(path, i)));
  return out;
}

ObjectReader::ObjectReader(const Json& value, std::string path)
    : value_(value), path_(std::move(path)) {
  if (!value_.is_object()) violation(path_.empty() ? "<root>" : path_, "expected an object");
}

bool ObjectReader::has(std::string_view key) const {
  return value_.contains(std::string(key));
}

const Json& ObjectReader::required(std::string_view key) {
  auto it = value_.find(std::string(key));
  if (it == value_.end()) throw Error(Errc::MissingSection, path_of(key));
  consumed_.emplace(key);
  return *it;
}

const Json* ObjectReader::optional(std::string_view key) {
  auto it = value_.find(std::string(key));
  if (it == value_.end()) return nullptr;
  consumed_.emplace(key);
  return &*it;
}

void ObjectReader::finish() const {
  for (const auto& [key, _] : value_.items()) {
    if (!consumed_.contains(key)) throw Error(Errc::UnknownField, path_of(key));
  }
}

}  // namespace rangesim::json_support
