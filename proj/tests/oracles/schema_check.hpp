// Validator for the JSON Schema subset used by schema/report.schema.json:
// type, enum, const, required, properties, additionalProperties, items,
// minItems, minimum, oneOf and local $ref.
#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace oracle {

class SchemaCheck {
 public:
  explicit SchemaCheck(nlohmann::json root) : root_(std::move(root)) {}

  std::vector<std::string> validate(const nlohmann::json& doc) const {
    std::vector<std::string> errs;
    check(root_, doc, "$", errs);
    return errs;
  }

 private:
  const nlohmann::json& deref(const nlohmann::json& s) const {
    if (!s.is_object() || !s.contains("$ref")) return s;
    std::string ref = s["$ref"].get<std::string>();
    return root_.at(nlohmann::json::json_pointer(ref.substr(1)));
  }

  static bool has_type(const nlohmann::json& v, const std::string& t) {
    if (t == "object") return v.is_object();
    if (t == "array") return v.is_array();
    if (t == "string") return v.is_string();
    if (t == "integer") return v.is_number_integer();
    if (t == "number") return v.is_number();
    if (t == "boolean") return v.is_boolean();
    if (t == "null") return v.is_null();
    return false;
  }

  void check(const nlohmann::json& schema_in, const nlohmann::json& v, const std::string& path,
             std::vector<std::string>& errs) const {
    const nlohmann::json& s = deref(schema_in);
    if (s.contains("oneOf")) {
      int ok = 0;
      for (const auto& alt : s["oneOf"]) {
        std::vector<std::string> sub;
        check(alt, v, path, sub);
        ok += sub.empty();
      }
      if (ok != 1) errs.push_back(path + ": matches " + std::to_string(ok) + " oneOf branches");
    }
    if (s.contains("type")) {
      bool ok = false;
      if (s["type"].is_array()) {
        for (const auto& t : s["type"]) ok = ok || has_type(v, t.get<std::string>());
      } else {
        ok = has_type(v, s["type"].get<std::string>());
      }
      if (!ok) {
        errs.push_back(path + ": wrong type " + std::string(v.type_name()));
        return;
      }
    }
    if (s.contains("const") && v != s["const"]) errs.push_back(path + ": expected const " + s["const"].dump());
    if (s.contains("enum")) {
      bool found = false;
      for (const auto& e : s["enum"]) found = found || e == v;
      if (!found) errs.push_back(path + ": " + v.dump() + " not in enum");
    }
    if (s.contains("minimum") && v.is_number() && v.get<double>() < s["minimum"].get<double>())
      errs.push_back(path + ": below minimum");
    if (v.is_object()) {
      if (s.contains("required"))
        for (const auto& r : s["required"])
          if (!v.contains(r.get<std::string>())) errs.push_back(path + ": missing " + r.get<std::string>());
      for (const auto& [k, sub] : v.items()) {
        if (s.contains("properties") && s["properties"].contains(k)) {
          check(s["properties"][k], sub, path + "." + k, errs);
        } else if (s.contains("additionalProperties")) {
          const auto& ap = s["additionalProperties"];
          if (ap.is_boolean()) {
            if (!ap.get<bool>()) errs.push_back(path + ": unexpected property " + k);
          } else {
            check(ap, sub, path + "." + k, errs);
          }
        }
      }
    }
    if (v.is_array()) {
      if (s.contains("minItems") && v.size() < s["minItems"].get<std::size_t>()) errs.push_back(path + ": too few items");
      if (s.contains("items"))
        for (std::size_t i = 0; i < v.size(); ++i) check(s["items"], v[i], path + "[" + std::to_string(i) + "]", errs);
    }
  }

  nlohmann::json root_;
};

}  // namespace oracle
