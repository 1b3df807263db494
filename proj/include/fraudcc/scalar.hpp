#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "fraudcc/timeutil.hpp"

namespace fraudcc {

enum class ScalarKind { String, Integer, Float, Timestamp };

using Scalar = std::variant<std::string, std::int64_t, double, Timestamp>;

ScalarKind kind_of(const Scalar& value);

/// Schema spelling: STRING, INT, FLOAT, DATETIME.
std::string_view kind_name(ScalarKind kind);
std::optional<ScalarKind> parse_kind(std::string_view name);

/// Converts raw source text to a scalar of the requested kind. Returns
/// nullopt when the text does not parse as that kind.
std::optional<Scalar> scalar_from_text(std::string_view text, ScalarKind kind);

/// Text form used by exports; timestamps render as epoch seconds.
std::string scalar_to_text(const Scalar& value);

}  // namespace fraudcc
