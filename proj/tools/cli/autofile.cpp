#include "autofile.hpp"

#include "polyaut/error.hpp"

namespace polyaut::cli {

using nlohmann::json;

json autofile_json(const Endo& f) {
  json comps = json::array();
  for (const auto& c : f.components()) {
    json terms = json::array();
    for (const auto& [m, s] : c.terms()) {
      json exp = json::array();
      for (std::size_t i = 0; i < f.n(); ++i) exp.push_back(m[i]);
      terms.push_back({{"coef", s.to_string()}, {"exp", exp}});
    }
    comps.push_back(terms);
  }
  return {{"schema_version", kSchemaVersion}, {"field", f.field().descriptor()}, {"n", f.n()}, {"components", comps}};
}

namespace {

void expect(bool cond, const std::string& what) {
  if (!cond) fail(Reason::ParseError, "AutoFile: " + what);
}

}  // namespace

Endo autofile_from_json(const json& j) {
  expect(j.is_object(), "top level must be an object");
  expect(j.contains("schema_version") && j["schema_version"].is_number_integer() &&
             j["schema_version"].get<int>() == kSchemaVersion,
         "schema_version must be " + std::to_string(kSchemaVersion));
  expect(j.contains("field") && j["field"].is_string(), "missing field descriptor");
  const FieldSpec field = FieldSpec::parse(j["field"].get<std::string>());
  expect(j.contains("n") && j["n"].is_number_unsigned(), "missing dimension n");
  const std::size_t n = j["n"].get<std::size_t>();
  expect(n >= 1 && n <= kMaxVars, "n must lie in [1, " + std::to_string(kMaxVars) + "]");
  expect(j.contains("components") && j["components"].is_array() && j["components"].size() == n,
         "components must list n term lists");
  std::vector<MPoly> comps;
  for (const auto& c : j["components"]) {
    expect(c.is_array(), "a component must be a list of terms");
    std::vector<MPoly::Term> terms;
    for (const auto& t : c) {
      expect(t.is_object() && t.contains("coef") && t["coef"].is_string() && t.contains("exp") &&
                 t["exp"].is_array() && t["exp"].size() == n,
             "a term needs a coef string and n exponents");
      std::vector<int> exps;
      for (const auto& e : t["exp"]) {
        expect(e.is_number_unsigned() && e.get<std::uint64_t>() <= 65535, "exponents must be small nonnegative integers");
        exps.push_back(e.get<int>());
      }
      terms.emplace_back(Monomial(exps), Scalar::parse(field, t["coef"].get<std::string>()));
    }
    comps.push_back(MPoly::from_terms(field, n, std::move(terms)));
  }
  return Endo(std::move(comps));
}

std::string serialize_autofile(const Endo& f) { return autofile_json(f).dump(); }

Endo parse_autofile(std::string_view text) {
  json j = json::parse(text.begin(), text.end(), nullptr, false);
  expect(!j.is_discarded(), "malformed JSON");
  return autofile_from_json(j);
}

}  // namespace polyaut::cli
