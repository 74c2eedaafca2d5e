#pragma once

#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

namespace plc::test {

/// Small JSON Schema subset: type, enum, required, properties,
/// additionalProperties: false, minimum, maximum, exclusiveMinimum.
/// Returns a list of violations; empty means valid.
inline void schema_errors(const nlohmann::json& schema, const nlohmann::json& v, const std::string& at,
                          std::vector<std::string>& out) {
  if (schema.contains("type")) {
    std::vector<std::string> types;
    if (schema["type"].is_array()) {
      for (const auto& t : schema["type"]) types.push_back(t.get<std::string>());
    } else {
      types.push_back(schema["type"].get<std::string>());
    }
    bool ok = false;
    for (const auto& t : types) {
      ok = ok || (t == "null" && v.is_null()) || (t == "boolean" && v.is_boolean()) ||
           (t == "string" && v.is_string()) || (t == "object" && v.is_object()) ||
           (t == "array" && v.is_array()) || (t == "integer" && v.is_number_integer()) ||
           (t == "number" && v.is_number());
    }
    if (!ok) {
      out.push_back(at + ": wrong type");
      return;
    }
  }
  if (schema.contains("enum")) {
    bool found = false;
    for (const auto& e : schema["enum"]) found = found || e == v;
    if (!found) out.push_back(at + ": not in enum");
  }
  if (v.is_number()) {
    const double x = v.get<double>();
    if (schema.contains("minimum") && x < schema["minimum"].get<double>()) out.push_back(at + ": below minimum");
    if (schema.contains("maximum") && x > schema["maximum"].get<double>()) out.push_back(at + ": above maximum");
    if (schema.contains("exclusiveMinimum") && x <= schema["exclusiveMinimum"].get<double>()) {
      out.push_back(at + ": not above exclusiveMinimum");
    }
  }
  if (v.is_object()) {
    if (schema.contains("required")) {
      for (const auto& k : schema["required"]) {
        if (!v.contains(k.get<std::string>())) out.push_back(at + ": missing " + k.get<std::string>());
      }
    }
    const bool closed = schema.value("additionalProperties", true) == false;
    for (const auto& [k, sub] : v.items()) {
      if (schema.contains("properties") && schema["properties"].contains(k)) {
        schema_errors(schema["properties"][k], sub, at + "." + k, out);
      } else if (closed) {
        out.push_back(at + ": unexpected key " + k);
      }
    }
  }
}

inline std::vector<std::string> validate_against(const std::string& schema_path, const nlohmann::json& v) {
  std::ifstream in(schema_path);
  const nlohmann::json schema = nlohmann::json::parse(in);
  std::vector<std::string> out;
  schema_errors(schema, v, "$", out);
  return out;
}

}  // namespace plc::test
