#pragma once

// Declarative configuration for proposal rulesets and optimisation runs.
//
// Key-value files, one `key = value` per line, '#' starts a comment:
//
//   name = my-proposal
//   base = existing-type1            # preset name or path to a spec JSON file
//   rule.SH  = 400 to 450            # adjustable constant range
//   rule.SW  = anchor HB F 0.95      # 95th percentile of female hip breadth
//   rule.SD  = anchor BPL F 0.05 scale 0.95 offset -5
//   rule.STC = const 95.25 to anchor TT M 0.95 offset 20
//
//   search.SW = 380 480 5            # lo hi step
//   search.SH = 380 480 5 span 60    # adjustable ranges up to 60 mm wide
//   weight.default = 1
//   weight.SH_PH   = 2               # both genders
//   weight.SH_PH.F = 3
//
// Presets: existing-type1, existing-type2, proposed-type1, proposed-type2.

#include <filesystem>
#include <fstream>
#include <functional>
#include <istream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "ergofit/core_model.hpp"
#include "ergofit/design.hpp"
#include "ergofit/error.hpp"
#include "ergofit/fit.hpp"
#include "ergofit/format.hpp"
#include "ergofit/spec_io.hpp"

namespace ergofit::design {

inline std::optional<FurnitureSpec> preset_spec(std::string_view name) {
  if (name == "existing-type1") return ergofit::reference::existing_type1();
  if (name == "existing-type2") return ergofit::reference::existing_type2();
  if (name == "proposed-type1") return proposed_type1_spec();
  if (name == "proposed-type2") return proposed_type2_spec();
  return std::nullopt;
}

inline std::optional<ProposalRuleset> preset_ruleset(std::string_view name) {
  if (name == "type1" || name == "proposed-type1") return proposed_type1_rules();
  if (name == "type2" || name == "proposed-type2") return proposed_type2_rules();
  if (name == "anchored-type1") return anchored_type1_rules();
  return std::nullopt;
}

using SpecResolver = std::function<FurnitureSpec(const std::string&)>;

/// Presets first, then a spec JSON path relative to `dir`.
inline SpecResolver file_spec_resolver(std::filesystem::path dir) {
  return [dir = std::move(dir)](const std::string& ref) {
    if (auto p = preset_spec(ref)) return *p;
    std::filesystem::path path(ref);
    if (path.is_relative()) path = dir / path;
    return load_spec(path);
  };
}

struct ConfigEntry {
  std::string key;
  std::string value;
  std::size_t line;
};

inline std::vector<ConfigEntry> parse_key_values(std::istream& in) {
  std::vector<ConfigEntry> out;
  std::string line;
  std::size_t no = 0;
  while (std::getline(in, line)) {
    ++no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto t = trim(line);
    if (t.empty()) continue;
    const auto eq = t.find('=');
    if (eq == std::string_view::npos) throw RowError(no, "expected 'key = value'");
    const auto key = trim(t.substr(0, eq));
    if (key.empty()) throw RowError(no, "empty key");
    out.push_back({std::string(key), std::string(trim(t.substr(eq + 1))), no});
  }
  return out;
}

namespace detail {

inline std::vector<std::string> tokens(std::string_view s) {
  std::vector<std::string> out;
  std::istringstream ss{std::string(s)};
  for (std::string tok; ss >> tok;) out.push_back(tok);
  return out;
}

inline double number_token(const std::vector<std::string>& toks, std::size_t i, std::size_t line,
                           std::string_view what) {
  if (i >= toks.size()) throw RowError(line, "missing " + std::string(what));
  const auto v = parse_double(toks[i]);
  if (!v) throw RowError(line, std::string(what) + " is not a number: '" + toks[i] + "'");
  return *v;
}

// term := NUM | const NUM [mods] | anchor MEASURE GENDER P [mods];  mods := scale S | offset O
inline AnchorTerm parse_term(const std::vector<std::string>& toks, std::size_t line) {
  if (toks.empty()) throw RowError(line, "empty rule term");
  AnchorTerm term;
  std::size_t i = 0;
  if (toks[0] == "const") {
    term = AnchorTerm::constant(number_token(toks, 1, line, "constant"));
    i = 2;
  } else if (toks[0] == "anchor") {
    if (toks.size() < 4) throw RowError(line, "anchor needs MEASURE GENDER PERCENTILE");
    const auto m = parse_measure(toks[1]);
    if (!m) throw RowError(line, "unknown measure '" + toks[1] + "'");
    const auto g = parse_gender(toks[2]);
    if (!g) throw RowError(line, "unknown gender '" + toks[2] + "'");
    term = AnchorTerm::percentile(*m, *g, number_token(toks, 3, line, "percentile"));
    i = 4;
  } else {
    term = AnchorTerm::constant(number_token(toks, 0, line, "constant"));
    i = 1;
  }
  while (i < toks.size()) {
    if (toks[i] == "scale") term.scale = number_token(toks, i + 1, line, "scale");
    else if (toks[i] == "offset") term.offset = number_token(toks, i + 1, line, "offset");
    else throw RowError(line, "unexpected token '" + toks[i] + "'");
    i += 2;
  }
  return term;
}

inline ProposalRule parse_rule(Dimension dim, std::string_view value, std::size_t line) {
  const auto toks = tokens(value);
  const auto to = std::find(toks.begin(), toks.end(), "to");
  ProposalRule rule{dim, parse_term({toks.begin(), to}, line), std::nullopt};
  if (to != toks.end()) rule.upper = parse_term({to + 1, toks.end()}, line);
  validate_rule(rule);
  return rule;
}

}  // namespace detail

inline ProposalRuleset parse_ruleset_config(std::istream& in, const SpecResolver& resolve) {
  ProposalRuleset rs;
  rs.rules.clear();
  for (const auto& e : parse_key_values(in)) {
    if (e.key == "name") {
      rs.name = e.value;
    } else if (e.key == "base") {
      rs.base = resolve(e.value);
    } else if (e.key.rfind("rule.", 0) == 0) {
      const auto dim = parse_dimension(e.key.substr(5));
      if (!dim) throw RowError(e.line, "unknown dimension in '" + e.key + "'");
      std::erase_if(rs.rules, [&](const ProposalRule& r) { return r.dimension == *dim; });
      rs.rules.push_back(detail::parse_rule(*dim, e.value, e.line));
    } else {
      throw RowError(e.line, "unknown key '" + e.key + "'");
    }
  }
  return rs;
}

inline OptimizationSpec parse_optimization_config(std::istream& in, const SpecResolver& resolve) {
  OptimizationSpec opt;
  std::vector<ConfigEntry> weight_entries;
  std::optional<double> default_weight;
  for (const auto& e : parse_key_values(in)) {
    if (e.key == "name") {
      continue;
    } else if (e.key == "base") {
      opt.base = resolve(e.value);
    } else if (e.key.rfind("search.", 0) == 0) {
      const auto dim = parse_dimension(e.key.substr(7));
      if (!dim) throw RowError(e.line, "unknown dimension in '" + e.key + "'");
      const auto toks = detail::tokens(e.value);
      SearchAxis axis{detail::number_token(toks, 0, e.line, "lo"),
                      detail::number_token(toks, 1, e.line, "hi"),
                      detail::number_token(toks, 2, e.line, "step"), std::nullopt};
      if (toks.size() > 3) {
        if (toks[3] != "span" || toks.size() != 5) throw RowError(e.line, "expected 'span MM'");
        axis.max_span = detail::number_token(toks, 4, e.line, "span");
      }
      opt.axes.insert_or_assign(*dim, axis);
    } else if (e.key == "weight.default") {
      const auto v = parse_double(e.value);
      if (!v) throw RowError(e.line, "weight is not a number");
      default_weight = *v;
    } else if (e.key.rfind("weight.", 0) == 0) {
      weight_entries.push_back(e);
    } else {
      throw RowError(e.line, "unknown key '" + e.key + "'");
    }
  }
  if (default_weight)
    for (const auto& c : fit::criteria())
      for (Gender g : kGenders) opt.weights[{c.id, g}] = *default_weight;
  for (const auto& e : weight_entries) {
    std::string_view rest = std::string_view(e.key).substr(7);
    std::optional<Gender> only;
    if (const auto dot = rest.find('.'); dot != std::string_view::npos) {
      only = parse_gender(rest.substr(dot + 1));
      if (!only) throw RowError(e.line, "unknown gender in '" + e.key + "'");
      rest = rest.substr(0, dot);
    }
    const auto c = fit::parse_criterion(rest);
    if (!c) throw RowError(e.line, "unknown criterion in '" + e.key + "'");
    const auto v = parse_double(e.value);
    if (!v) throw RowError(e.line, "weight is not a number");
    for (Gender g : kGenders)
      if (!only || *only == g) opt.weights[{*c, g}] = *v;
  }
  return opt;
}

inline ProposalRuleset load_ruleset_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("rules file not found: " + path.string());
  return parse_ruleset_config(in, file_spec_resolver(path.parent_path()));
}

inline OptimizationSpec load_optimization_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("optimization config not found: " + path.string());
  return parse_optimization_config(in, file_spec_resolver(path.parent_path()));
}

// ---------------------------------------------------------------------------
// JSON rulesets (HTTP body of POST /api/propose)
//
//   {"name": "...", "base": "existing-type1" | {spec},
//    "rules": {"SH": {"lo": 400, "hi": 450}, "SW": 425,
//              "SD": {"measure": "BPL", "gender": "F", "percentile": 0.05, "scale": 0.95}}}

namespace detail {

inline AnchorTerm term_from_json(const nlohmann::json& j, const std::string& field) {
  auto num = [&](const nlohmann::json& v, const char* what) {
    if (!v.is_number()) throw SpecError(field, field + ": " + what + " must be a number");
    return v.get<double>();
  };
  if (j.is_number()) return AnchorTerm::constant(j.get<double>());
  if (!j.is_object()) throw SpecError(field, field + ": rule term must be a number or object");
  AnchorTerm t;
  if (j.contains("const")) {
    t = AnchorTerm::constant(num(j["const"], "const"));
  } else if (j.contains("measure")) {
    const auto m = j["measure"].is_string() ? parse_measure(j["measure"].get<std::string>()) : std::nullopt;
    if (!m) throw SpecError(field, field + ": unknown measure");
    const auto g = j.contains("gender") && j["gender"].is_string()
                       ? parse_gender(j["gender"].get<std::string>())
                       : std::nullopt;
    if (!g) throw SpecError(field, field + ": gender must be M or F");
    if (!j.contains("percentile")) throw SpecError(field, field + ": missing percentile");
    t = AnchorTerm::percentile(*m, *g, num(j["percentile"], "percentile"));
  } else {
    throw SpecError(field, field + ": rule term needs 'const' or 'measure'");
  }
  if (j.contains("scale")) t.scale = num(j["scale"], "scale");
  if (j.contains("offset")) t.offset = num(j["offset"], "offset");
  return t;
}

}  // namespace detail

inline ProposalRuleset ruleset_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw SpecError("", "ruleset must be a JSON object");
  ProposalRuleset rs;
  if (j.contains("name")) {
    if (!j["name"].is_string()) throw SpecError("name", "name must be a string");
    rs.name = j["name"].get<std::string>();
  }
  if (j.contains("base")) {
    const auto& b = j["base"];
    if (b.is_string()) {
      rs.base = preset_spec(b.get<std::string>());
      if (!rs.base) throw SpecError("base", "unknown base preset '" + b.get<std::string>() + "'");
    } else {
      rs.base = spec_from_json(b, "base");
    }
  }
  if (!j.contains("rules") || !j["rules"].is_object())
    throw SpecError("rules", "ruleset needs a 'rules' object");
  for (const auto& [key, value] : j["rules"].items()) {
    const auto dim = parse_dimension(key);
    if (!dim) throw SpecError(key, "unknown dimension " + key);
    ProposalRule rule{*dim, AnchorTerm::constant(0), std::nullopt};
    if (value.is_object() && value.contains("lo")) {
      if (!value.contains("hi")) throw SpecError(key, key + ": range needs 'hi'");
      rule.lower = detail::term_from_json(value["lo"], key);
      rule.upper = detail::term_from_json(value["hi"], key);
    } else {
      rule.lower = detail::term_from_json(value, key);
    }
    try {
      validate_rule(rule);
    } catch (const RuleError& e) {
      throw SpecError(key, e.what());
    }
    rs.rules.push_back(rule);
  }
  return rs;
}

}  // namespace ergofit::design
