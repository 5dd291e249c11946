#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include <json.hpp>

#include "ergofit/core_model.hpp"
#include "ergofit/error.hpp"

namespace ergofit {

// Furniture specs are JSON objects keyed by dimension acronym:
//   {"name": "type-2", "SH": {"lo": 431.8, "hi": 533.4}, "SW": 457.2, ...}

inline nlohmann::ordered_json spec_to_json(const FurnitureSpec& spec) {
  nlohmann::ordered_json j;
  j["name"] = spec.name();
  for (Dimension d : kDimensions) {
    const auto& v = spec[d];
    const std::string key(to_string(d));
    if (v.is_fixed()) {
      j[key] = v.value();
    } else {
      j[key] = {{"lo", v.lo()}, {"hi", v.hi()}};
    }
  }
  return j;
}

namespace detail {

inline double spec_number(const nlohmann::json& j, const std::string& field) {
  if (!j.is_number()) throw SpecError(field, field + " must be a number");
  const double v = j.get<double>();
  if (!std::isfinite(v) || !(v > 0.0)) throw SpecError(field, field + " must be > 0");
  return v;
}

}  // namespace detail

inline FurnitureSpec spec_from_json(const nlohmann::json& j, std::string fallback_name = "spec") {
  if (!j.is_object()) throw SpecError("", "furniture spec must be a JSON object");
  std::string name = std::move(fallback_name);
  std::map<Dimension, DimensionValue> dims;
  for (const auto& [key, value] : j.items()) {
    if (key == "name") {
      if (!value.is_string()) throw SpecError("name", "name must be a string");
      name = value.get<std::string>();
      continue;
    }
    const auto d = parse_dimension(key);
    if (!d) throw SpecError(key, "unknown dimension " + key);
    if (value.is_object()) {
      if (!value.contains("lo") || !value.contains("hi"))
        throw SpecError(key, key + " range must have 'lo' and 'hi'");
      const double lo = detail::spec_number(value["lo"], key);
      const double hi = detail::spec_number(value["hi"], key);
      if (!(lo < hi)) throw SpecError(key, key + " requires lo < hi");
      dims.insert_or_assign(*d, DimensionValue::adjustable(lo, hi));
    } else {
      dims.insert_or_assign(*d, DimensionValue::fixed(detail::spec_number(value, key)));
    }
  }
  return FurnitureSpec::from_map(std::move(name), dims);
}

inline FurnitureSpec parse_spec(const std::string& text, std::string fallback_name = "spec") {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw SpecError("", std::string("malformed JSON: ") + e.what());
  }
  return spec_from_json(j, std::move(fallback_name));
}

inline FurnitureSpec load_spec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("spec not found: " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_spec(ss.str(), path.stem().string());
}

}  // namespace ergofit
