#pragma once

#include <string>
#include <string_view>

#include "json.hpp"
#include "polyaut/endo.hpp"

namespace polyaut::cli {

inline constexpr int kSchemaVersion = 1;

/// {"schema_version": 1, "field": "q" | "fp:<p>" | "zeta8", "n": n,
///  "components": [[{"coef": "<scalar>", "exp": [e_1, ..., e_n]}, ...], ...]}
/// Terms are listed in descending graded-lex order, coefficients in the
/// canonical scalar text.
nlohmann::json autofile_json(const Endo& f);
/// Throws ParseError on schema violations.
Endo autofile_from_json(const nlohmann::json& j);

std::string serialize_autofile(const Endo& f);
Endo parse_autofile(std::string_view text);

}  // namespace polyaut::cli
