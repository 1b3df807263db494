#include "fraudcc/scalar.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace fraudcc {

ScalarKind kind_of(const Scalar& value) {
  switch (value.index()) {
    case 0: return ScalarKind::String;
    case 1: return ScalarKind::Integer;
    case 2: return ScalarKind::Float;
    default: return ScalarKind::Timestamp;
  }
}

std::string_view kind_name(ScalarKind kind) {
  switch (kind) {
    case ScalarKind::String: return "STRING";
    case ScalarKind::Integer: return "INT";
    case ScalarKind::Float: return "FLOAT";
    case ScalarKind::Timestamp: return "DATETIME";
  }
  return "STRING";
}

std::optional<ScalarKind> parse_kind(std::string_view name) {
  if (name == "STRING") return ScalarKind::String;
  if (name == "INT" || name == "INTEGER" || name == "UINT") return ScalarKind::Integer;
  if (name == "FLOAT" || name == "DOUBLE") return ScalarKind::Float;
  if (name == "DATETIME" || name == "TIMESTAMP") return ScalarKind::Timestamp;
  return std::nullopt;
}

std::optional<Scalar> scalar_from_text(std::string_view text, ScalarKind kind) {
  switch (kind) {
    case ScalarKind::String:
      return Scalar{std::string(text)};
    case ScalarKind::Integer: {
      std::int64_t v = 0;
      auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
      if (ec != std::errc{} || ptr != text.data() + text.size()) return std::nullopt;
      return Scalar{v};
    }
    case ScalarKind::Float: {
      // libstdc++ 11 has no floating from_chars.
      std::string buf(text);
      if (buf.empty()) return std::nullopt;
      char* end = nullptr;
      double v = std::strtod(buf.c_str(), &end);
      if (end != buf.c_str() + buf.size() || !std::isfinite(v)) return std::nullopt;
      return Scalar{v};
    }
    case ScalarKind::Timestamp: {
      auto ts = parse_timestamp(text);
      if (!ts) return std::nullopt;
      return Scalar{*ts};
    }
  }
  return std::nullopt;
}

std::string scalar_to_text(const Scalar& value) {
  switch (value.index()) {
    case 0: return std::get<std::string>(value);
    case 1: return std::to_string(std::get<std::int64_t>(value));
    case 2: {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.17g", std::get<double>(value));
      return buf;
    }
    default: return std::to_string(std::get<Timestamp>(value).seconds);
  }
}

}  // namespace fraudcc
