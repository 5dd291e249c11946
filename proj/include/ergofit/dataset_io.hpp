#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "ergofit/core_model.hpp"
#include "ergofit/error.hpp"
#include "ergofit/format.hpp"

namespace ergofit {

// Canonical column order of the dataset CSV.
inline constexpr std::array<std::string_view, 15> kDatasetColumns{
    "id", "gender", "age", "study_year", "PH", "SEH", "BPL", "BKL",
    "HB", "SSH", "SEB", "TT",  "AL",         "EFL", "SCH"};

namespace csv {

// RFC 4180-ish: comma separated, double-quoted fields may contain commas and "" escapes.
inline std::vector<std::string> split_line(std::string_view line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  fields.push_back(std::move(cur));
  return fields;
}

inline std::string quote_if_needed(std::string_view s) {
  if (s.find_first_of(",\"\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out.push_back(c);
  }
  out += '"';
  return out;
}

}  // namespace csv

/// Parses the dataset CSV. `source` is carried into the dataset for reporting.
inline PopulationDataset parse_dataset(std::istream& in, std::string source = "<stream>") {
  std::string line;
  std::size_t line_no = 0;
  // Skip leading blank lines; the first non-blank line is the header.
  while (std::getline(in, line)) {
    ++line_no;
    if (!trim(line).empty()) break;
  }
  if (trim(line).empty()) throw SchemaError("id", "dataset is empty: missing header row");
  if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);

  const auto header = csv::split_line(line);
  std::array<std::size_t, kDatasetColumns.size()> index{};
  for (std::size_t c = 0; c < kDatasetColumns.size(); ++c) {
    bool found = false;
    for (std::size_t h = 0; h < header.size(); ++h) {
      if (trim(header[h]) == kDatasetColumns[c]) {
        index[c] = h;
        found = true;
        break;
      }
    }
    if (!found) {
      const std::string col(kDatasetColumns[c]);
      throw SchemaError(col, "schema error: missing column '" + col + "'");
    }
  }

  std::vector<AnthropometricRecord> records;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = csv::split_line(line);
    if (fields.size() < header.size())
      throw RowError(line_no, "expected " + std::to_string(header.size()) + " fields, found " +
                                  std::to_string(fields.size()));
    auto cell = [&](std::size_t c) -> std::string_view { return trim(fields[index[c]]); };

    AnthropometricRecord r;
    r.id = std::string(cell(0));
    if (r.id.empty()) throw RowError(line_no, "empty id");
    const auto g = parse_gender(cell(1));
    if (!g) throw RowError(line_no, "gender must be M or F, got '" + std::string(cell(1)) + "'");
    r.gender = *g;
    for (std::size_t c : {std::size_t{2}, std::size_t{3}}) {
      if (cell(c).empty()) continue;
      const auto v = parse_integer(cell(c));
      if (!v)
        throw RowError(line_no, std::string(kDatasetColumns[c]) + " is not an integer: '" +
                                    std::string(cell(c)) + "'");
      (c == 2 ? r.age : r.study_year) = static_cast<int>(*v);
    }
    for (std::size_t m = 0; m < kMeasureCount; ++m) {
      const std::size_t c = 4 + m;
      const auto v = parse_double(cell(c));
      if (!v)
        throw RowError(line_no, std::string(kDatasetColumns[c]) + " is not numeric: '" +
                                    std::string(cell(c)) + "'");
      r.measures[m] = *v;
    }
    if (auto violations = validate_record(r); !violations.empty())
      throw ValidationError(line_no, std::move(violations));
    records.push_back(std::move(r));
  }
  return PopulationDataset(std::move(records), std::move(source));
}

inline PopulationDataset load_dataset(const std::filesystem::path& path) {
  std::error_code ec;
  if (!std::filesystem::is_regular_file(path, ec))
    throw InputError("dataset not found: " + path.string());
  std::ifstream in(path);
  if (!in) throw InputError("cannot open dataset: " + path.string());
  return parse_dataset(in, path.string());
}

/// Writes the canonical CSV; parse_dataset(write_dataset(d)) reproduces every field.
inline void write_dataset(std::ostream& out, const PopulationDataset& d) {
  for (std::size_t c = 0; c < kDatasetColumns.size(); ++c) out << (c ? "," : "") << kDatasetColumns[c];
  out << '\n';
  for (const auto& r : d) {
    out << csv::quote_if_needed(r.id) << ',' << gender_code(r.gender) << ',';
    if (r.age) out << *r.age;
    out << ',';
    if (r.study_year) out << *r.study_year;
    for (Mm v : r.measures) out << ',' << format_number(v);
    out << '\n';
  }
}

}  // namespace ergofit
