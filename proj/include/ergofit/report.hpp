#pragma once

// Rendering of analysis results as human tables, CSV, or JSON. The CLI and the HTTP
// service both go through these functions, so identical inputs give identical bytes.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "ergofit/core_model.hpp"
#include "ergofit/dataset_io.hpp"
#include "ergofit/design.hpp"
#include "ergofit/fit.hpp"
#include "ergofit/format.hpp"
#include "ergofit/spec_io.hpp"
#include "ergofit/stats.hpp"

namespace ergofit::report {

enum class Format { Table, Csv, Json };

inline std::optional<Format> parse_format(std::string_view s) {
  if (s == "table") return Format::Table;
  if (s == "csv") return Format::Csv;
  if (s == "json") return Format::Json;
  return std::nullopt;
}

inline std::string_view content_type(Format f) {
  switch (f) {
    case Format::Csv: return "text/csv";
    case Format::Json: return "application/json";
    case Format::Table: return "text/plain";
  }
  return "text/plain";
}

using Json = nlohmann::ordered_json;

// Machine formats carry full precision; NaN (no data) becomes an empty cell or null.
inline std::string csv_num(double v) { return std::isnan(v) ? std::string() : format_number(v); }
inline Json json_num(double v) { return std::isnan(v) ? Json(nullptr) : Json(v); }

inline std::string dump(const Json& j) { return j.dump(2) + "\n"; }

/// Left-aligned first column, right-aligned numbers, single space gutters.
inline std::string render_table(const std::vector<std::string>& header,
                                const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> width(header.size());
  for (std::size_t c = 0; c < header.size(); ++c) width[c] = header[c].size();
  for (const auto& r : rows)
    for (std::size_t c = 0; c < r.size() && c < width.size(); ++c) width[c] = std::max(width[c], r[c].size());
  std::ostringstream out;
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t c = 0; c < cells.size(); ++c) {
      const std::size_t pad = width[c] - cells[c].size();
      if (c) out << "  ";
      if (c == 0) out << cells[c] << std::string(c + 1 == cells.size() ? 0 : pad, ' ');
      else out << std::string(pad, ' ') << cells[c];
    }
    out << '\n';
  };
  line(header);
  std::size_t total = 0;
  for (std::size_t w : width) total += w;
  out << std::string(total + 2 * (width.size() - 1), '-') << '\n';
  for (const auto& r : rows) line(r);
  return out.str();
}

inline std::string render_csv(const std::vector<std::string>& header,
                              const std::vector<std::vector<std::string>>& rows) {
  std::ostringstream out;
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t c = 0; c < cells.size(); ++c) out << (c ? "," : "") << csv::quote_if_needed(cells[c]);
    out << '\n';
  };
  line(header);
  for (const auto& r : rows) line(r);
  return out.str();
}

// ---------------------------------------------------------------------------
// Descriptive statistics

struct DescribeRow {
  Measure measure;
  Gender gender;
  stats::DescriptiveStats stats;
};

/// One row per (measure, gender present). A single-record gender gets sd = NaN.
inline std::vector<DescribeRow> describe_dataset(const PopulationDataset& d, const FitConfig& cfg = {}) {
  std::vector<DescribeRow> out;
  for (Measure m : kMeasures) {
    for (Gender g : kGenders) {
      std::vector<double> values;
      for (const auto& r : d)
        if (r.gender == g) values.push_back(r[m]);
      if (values.empty()) continue;
      stats::DescriptiveStats s;
      if (values.size() == 1) {
        s = {1, values[0], values[0], values[0], std::nan(""), values[0], values[0], values[0]};
      } else {
        s = stats::describe(values, cfg.percentile_triple);
      }
      out.push_back({m, g, s});
    }
  }
  return out;
}

inline std::string render_describe(const std::vector<DescribeRow>& rows, Format f) {
  if (f == Format::Json) {
    Json arr = Json::array();
    for (const auto& r : rows)
      arr.push_back({{"measure", to_string(r.measure)},
                     {"gender", to_string(r.gender)},
                     {"n", r.stats.n},
                     {"min", r.stats.min},
                     {"max", r.stats.max},
                     {"mean", r.stats.mean},
                     {"sd", json_num(r.stats.sd)},
                     {"p5", r.stats.p5},
                     {"p50", r.stats.p50},
                     {"p95", r.stats.p95}});
    return dump(arr);
  }
  const bool human = f == Format::Table;
  auto num = [&](double v) { return human ? format_fixed(v, 2) : csv_num(v); };
  std::vector<std::vector<std::string>> body;
  for (const auto& r : rows)
    body.push_back({std::string(to_string(r.measure)), std::string(to_string(r.gender)),
                    std::to_string(r.stats.n), num(r.stats.min), num(r.stats.max), num(r.stats.mean),
                    num(r.stats.sd), num(r.stats.p5), num(r.stats.p50), num(r.stats.p95)});
  if (human)
    return render_table({"Measure", "Gender", "n", "Min", "Max", "Mean", "SD", "P5", "P50", "P95"}, body);
  return render_csv({"measure", "gender", "n", "min", "max", "mean", "sd", "p5", "p50", "p95"}, body);
}

// ---------------------------------------------------------------------------
// Mismatch reports

inline std::string render_mismatch(const fit::MismatchReport& rep, Format f) {
  if (f == Format::Json) {
    Json rows = Json::array();
    for (const auto& r : rep.rows) {
      const auto& c = fit::criterion(r.criterion);
      rows.push_back({{"criterion", c.key},
                      {"label", c.label},
                      {"dimension", to_string(c.dimension)},
                      {"gender", to_string(r.gender)},
                      {"two_sided", fit::is_two_sided(c)},
                      {"n", r.n},
                      {"match_pct", json_num(r.match_pct())},
                      {"low_pct", json_num(r.low_pct())},
                      {"high_pct", json_num(r.high_pct())},
                      {"total_pct", json_num(r.total_mismatch_pct())}});
    }
    Json j{{"spec", rep.spec_name},
           {"n", {{"Male", rep.n_male}, {"Female", rep.n_female}}},
           {"notes", rep.notes},
           {"rows", rows}};
    return dump(j);
  }
  std::vector<std::vector<std::string>> body;
  if (f == Format::Csv) {
    for (const auto& r : rep.rows)
      body.push_back({std::string(fit::to_string(r.criterion)), std::string(to_string(r.gender)),
                      std::to_string(r.n), csv_num(r.match_pct()), csv_num(r.low_pct()),
                      csv_num(r.high_pct()), csv_num(r.total_mismatch_pct())});
    return render_csv({"criterion", "gender", "n", "match_pct", "low_pct", "high_pct", "total_pct"}, body);
  }
  for (const auto& r : rep.rows) {
    const auto& c = fit::criterion(r.criterion);
    auto pct = [&](double v) { return r.empty() ? std::string("n=0") : format_fixed(v, 2); };
    body.push_back({std::string(c.label), std::string(to_string(r.gender)), pct(r.match_pct()),
                    pct(r.low_pct()), pct(r.high_pct()), pct(r.total_mismatch_pct())});
  }
  std::string out = "Spec: " + rep.spec_name + " (Male n=" + std::to_string(rep.n_male) +
                    ", Female n=" + std::to_string(rep.n_female) + ")\n";
  out += render_table({"Dimensions and anthropometry", "Gender", "Match (%)", "Lower mismatch (%)",
                       "Upper mismatch (%)", "Total mismatch (%)"},
                      body);
  for (const auto& n : rep.notes) out += "note: " + n + "\n";
  return out;
}

inline std::string render_deltas(const std::vector<fit::DeltaRow>& rows, std::string_view before,
                                 std::string_view after, Format f) {
  if (f == Format::Json) {
    Json arr = Json::array();
    for (const auto& r : rows)
      arr.push_back({{"criterion", fit::to_string(r.criterion)},
                     {"gender", to_string(r.gender)},
                     {"before_pct", json_num(r.before_pct)},
                     {"after_pct", json_num(r.after_pct)},
                     {"delta_pct", json_num(r.delta)}});
    return dump(Json{{"before", before}, {"after", after}, {"rows", arr}});
  }
  const bool human = f == Format::Table;
  std::vector<std::vector<std::string>> body;
  for (const auto& r : rows) {
    auto num = [&](double v) { return human ? format_fixed(v, 2) : csv_num(v); };
    std::string delta = num(r.delta);
    if (human && r.delta > 0) delta.insert(0, "+");
    body.push_back({std::string(human ? fit::criterion(r.criterion).label : fit::to_string(r.criterion)),
                    std::string(to_string(r.gender)), num(r.before_pct), num(r.after_pct), delta});
  }
  if (human)
    return "Total mismatch change: " + std::string(before) + " -> " + std::string(after) + "\n" +
           render_table({"Dimensions and anthropometry", "Gender", "Before (%)", "After (%)", "Delta (pp)"},
                        body);
  return render_csv({"criterion", "gender", "before_pct", "after_pct", "delta_pct"}, body);
}

// ---------------------------------------------------------------------------
// ANOVA

struct AnovaRow {
  std::string label;
  stats::AnovaResult result;
};

inline std::string render_anova(const std::vector<AnovaRow>& rows, double alpha, Format f) {
  if (f == Format::Json) {
    Json arr = Json::array();
    for (const auto& r : rows)
      arr.push_back({{"label", r.label},
                     {"f_value", r.result.f_value},
                     {"df_between", r.result.df_between},
                     {"df_within", r.result.df_within},
                     {"p_value", r.result.p_value},
                     {"decision", stats::to_string(r.result.decision)}});
    return dump(Json{{"alpha", alpha}, {"rows", arr}});
  }
  const bool human = f == Format::Table;
  std::vector<std::vector<std::string>> body;
  for (const auto& r : rows)
    body.push_back({r.label, human ? format_fixed(r.result.f_value, 3) : format_number(r.result.f_value),
                    std::to_string(r.result.df_between), std::to_string(r.result.df_within),
                    human ? format_fixed(r.result.p_value, 3) : format_number(r.result.p_value),
                    std::string(stats::to_string(r.result.decision))});
  if (human)
    return render_table({"Comparison", "F-value", "df1", "df2", "p-value", "Decision"}, body) +
           "alpha = " + format_number(alpha) + "\n";
  return render_csv({"label", "f_value", "df_between", "df_within", "p_value", "decision"}, body);
}

// ---------------------------------------------------------------------------
// Furniture specs, guidelines, optimisation

inline std::string render_spec(const FurnitureSpec& spec, Format f) {
  if (f == Format::Json) return dump(spec_to_json(spec));
  std::vector<std::vector<std::string>> body;
  for (Dimension d : kDimensions) {
    const auto& v = spec[d];
    if (f == Format::Csv)
      body.push_back({std::string(to_string(d)), v.is_fixed() ? "fixed" : "adjustable",
                      format_number(v.lo()), format_number(v.hi())});
    else
      body.push_back({std::string(to_string(d)), to_string(v)});
  }
  if (f == Format::Csv) return render_csv({"dimension", "kind", "lo", "hi"}, body);
  return "Spec: " + spec.name() + "\n" + render_table({"Dimension", "Value (mm)"}, body);
}

inline std::string render_optimization(const design::OptimizationResult& r, Format f) {
  if (f == Format::Json) {
    Json j{{"objective", r.objective},
           {"candidates_evaluated", r.candidates_evaluated},
           {"spec", spec_to_json(r.spec)}};
    return dump(j);
  }
  if (f == Format::Csv) return render_spec(r.spec, f);
  return render_spec(r.spec, f) + "objective (weighted total mismatch) = " + format_fixed(r.objective, 4) +
         "\ncandidates evaluated = " + std::to_string(r.candidates_evaluated) + "\n";
}

inline std::string render_guidelines(const design::WorkstationGuidelines& g, Format f) {
  if (f == Format::Json) {
    Json j{{"keyboard_zone_depth_mm", g.keyboard_zone_depth},
           {"keyboard_zone_length_mm", g.keyboard_zone_length},
           {"monitor_distance_mm", {g.monitor_distance.first, g.monitor_distance.second}},
           {"viewing_angle_deg", {g.viewing_angle_deg.first, g.viewing_angle_deg.second}}};
    return dump(j);
  }
  const std::vector<std::vector<std::string>> body{
      {"keyboard_zone_depth_mm", format_number(g.keyboard_zone_depth)},
      {"keyboard_zone_length_mm", format_number(g.keyboard_zone_length)},
      {"monitor_distance_mm",
       format_number(g.monitor_distance.first) + "-" + format_number(g.monitor_distance.second)},
      {"viewing_angle_deg",
       format_number(g.viewing_angle_deg.first) + "-" + format_number(g.viewing_angle_deg.second)}};
  if (f == Format::Csv) return render_csv({"guideline", "value"}, body);
  return render_table({"Guideline", "Value"}, body);
}

// ---------------------------------------------------------------------------
// Histograms and correlation

struct HistogramSeries {
  Measure measure;
  Gender gender;
  std::vector<stats::HistogramBin> bins;
};

inline std::string render_histograms(const std::vector<HistogramSeries>& series, Format f) {
  if (f == Format::Json) {
    Json arr = Json::array();
    for (const auto& s : series) {
      Json bins = Json::array();
      for (const auto& b : s.bins) bins.push_back({{"lower", b.lower}, {"upper", b.upper}, {"count", b.count}});
      arr.push_back({{"measure", to_string(s.measure)}, {"gender", to_string(s.gender)}, {"bins", bins}});
    }
    return dump(arr);
  }
  const bool human = f == Format::Table;
  std::vector<std::vector<std::string>> body;
  for (const auto& s : series)
    for (std::size_t i = 0; i < s.bins.size(); ++i)
      body.push_back({std::string(to_string(s.measure)), std::string(to_string(s.gender)), std::to_string(i),
                      human ? format_fixed(s.bins[i].lower, 2) : format_number(s.bins[i].lower),
                      human ? format_fixed(s.bins[i].upper, 2) : format_number(s.bins[i].upper),
                      std::to_string(s.bins[i].count)});
  if (human) return render_table({"Measure", "Gender", "Bin", "Lower", "Upper", "Count"}, body);
  return render_csv({"measure", "gender", "bin", "lower", "upper", "count"}, body);
}

inline std::string render_correlation(const stats::CorrelationMatrix& m, Format f) {
  std::vector<std::string> labels;
  for (Measure x : m.labels) labels.emplace_back(to_string(x));
  if (f == Format::Json) return dump(Json{{"labels", labels}, {"values", m.values}});
  std::vector<std::string> header{""};
  header.insert(header.end(), labels.begin(), labels.end());
  std::vector<std::vector<std::string>> body;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    std::vector<std::string> row{labels[i]};
    for (double v : m.values[i]) row.push_back(f == Format::Table ? format_fixed(v, 2) : format_number(v));
    body.push_back(std::move(row));
  }
  if (f == Format::Table) return render_table(header, body);
  return render_csv(header, body);
}

}  // namespace ergofit::report
