#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

#include "ergofit/error.hpp"
#include "ergofit/format.hpp"

namespace ergofit {

/// Millimetres. All lengths in the library use this unit.
using Mm = double;

enum class Gender : std::uint8_t { Male, Female };

inline constexpr std::array<Gender, 2> kGenders{Gender::Male, Gender::Female};

inline std::string_view to_string(Gender g) { return g == Gender::Male ? "Male" : "Female"; }
inline std::string_view gender_code(Gender g) { return g == Gender::Male ? "M" : "F"; }

inline std::optional<Gender> parse_gender(std::string_view s) {
  s = trim(s);
  if (s == "M" || s == "m" || s == "Male" || s == "male") return Gender::Male;
  if (s == "F" || s == "f" || s == "Female" || s == "female") return Gender::Female;
  return std::nullopt;
}

/// The eleven body measures, in dataset column order.
enum class Measure : std::uint8_t { PH, SEH, BPL, BKL, HB, SSH, SEB, TT, AL, EFL, SCH };

inline constexpr std::size_t kMeasureCount = 11;

inline constexpr std::array<Measure, kMeasureCount> kMeasures{
    Measure::PH, Measure::SEH, Measure::BPL, Measure::BKL, Measure::HB, Measure::SSH,
    Measure::SEB, Measure::TT,  Measure::AL,  Measure::EFL, Measure::SCH};

inline constexpr std::array<std::string_view, kMeasureCount> kMeasureNames{
    "PH", "SEH", "BPL", "BKL", "HB", "SSH", "SEB", "TT", "AL", "EFL", "SCH"};

inline std::string_view to_string(Measure m) { return kMeasureNames[static_cast<std::size_t>(m)]; }

inline std::optional<Measure> parse_measure(std::string_view s) {
  s = trim(s);
  for (std::size_t i = 0; i < kMeasureCount; ++i)
    if (kMeasureNames[i] == s) return kMeasures[i];
  return std::nullopt;
}

/// The eleven furniture dimensions. TH is not stored; where needed it is SH + STH.
enum class Dimension : std::uint8_t { SH, SW, SD, BH, BW, UEB, STH, STC, UTH, TL, TD };

inline constexpr std::size_t kDimensionCount = 11;

inline constexpr std::array<Dimension, kDimensionCount> kDimensions{
    Dimension::SH,  Dimension::SW,  Dimension::SD,  Dimension::BH,  Dimension::BW, Dimension::UEB,
    Dimension::STH, Dimension::STC, Dimension::UTH, Dimension::TL, Dimension::TD};

inline constexpr std::array<std::string_view, kDimensionCount> kDimensionNames{
    "SH", "SW", "SD", "BH", "BW", "UEB", "STH", "STC", "UTH", "TL", "TD"};

inline std::string_view to_string(Dimension d) {
  return kDimensionNames[static_cast<std::size_t>(d)];
}

inline std::optional<Dimension> parse_dimension(std::string_view s) {
  s = trim(s);
  for (std::size_t i = 0; i < kDimensionCount; ++i)
    if (kDimensionNames[i] == s) return kDimensions[i];
  return std::nullopt;
}

// Plausibility ceiling for any body measure.
inline constexpr Mm kMeasureCeiling = 3000.0;

struct AnthropometricRecord {
  std::string id;
  Gender gender = Gender::Male;
  std::optional<int> age;
  std::optional<int> study_year;
  std::array<Mm, kMeasureCount> measures{};

  Mm operator[](Measure m) const { return measures[static_cast<std::size_t>(m)]; }
  Mm& operator[](Measure m) { return measures[static_cast<std::size_t>(m)]; }

  friend bool operator==(const AnthropometricRecord&, const AnthropometricRecord&) = default;
};

/// Empty result means the record is valid. Each entry names the field and the bound it breaks.
inline std::vector<std::string> validate_record(const AnthropometricRecord& r) {
  std::vector<std::string> out;
  for (Measure m : kMeasures) {
    const Mm v = r[m];
    const std::string name(to_string(m));
    if (!std::isfinite(v)) {
      out.push_back(name + " must be a finite number");
    } else if (!(v > 0.0)) {
      out.push_back(name + " must be > 0");
    } else if (!(v < kMeasureCeiling)) {
      out.push_back(name + " must be < 3000");
    }
  }
  if (r.age && (*r.age < 10 || *r.age > 80)) out.emplace_back("age outside 10–80");
  if (r.study_year && (*r.study_year < 1 || *r.study_year > 4))
    out.emplace_back("study_year outside 1–4");
  return out;
}

/// Ordered, immutable participant list with unique ids.
class PopulationDataset {
 public:
  PopulationDataset() = default;

  explicit PopulationDataset(std::vector<AnthropometricRecord> records, std::string source = {})
      : records_(std::move(records)), source_(std::move(source)) {
    std::unordered_set<std::string> seen;
    seen.reserve(records_.size());
    for (const auto& r : records_)
      if (!seen.insert(r.id).second) throw InputError("duplicate record id '" + r.id + "'");
  }

  const std::vector<AnthropometricRecord>& records() const noexcept { return records_; }
  const std::string& source() const noexcept { return source_; }
  std::size_t size() const noexcept { return records_.size(); }
  bool empty() const noexcept { return records_.empty(); }
  auto begin() const noexcept { return records_.begin(); }
  auto end() const noexcept { return records_.end(); }

  std::size_t count(Gender g) const {
    return static_cast<std::size_t>(
        std::count_if(records_.begin(), records_.end(), [g](const auto& r) { return r.gender == g; }));
  }

  std::vector<Mm> column(Measure m) const {
    std::vector<Mm> out;
    out.reserve(records_.size());
    for (const auto& r : records_) out.push_back(r[m]);
    return out;
  }

 private:
  std::vector<AnthropometricRecord> records_;
  std::string source_;
};

inline PopulationDataset filter_by_gender(const PopulationDataset& d, Gender g) {
  std::vector<AnthropometricRecord> out;
  for (const auto& r : d)
    if (r.gender == g) out.push_back(r);
  return PopulationDataset(std::move(out), d.source() + " [" + std::string(to_string(g)) + "]");
}

/// Slovin's sample size n = N / (1 + N e^2), rounded up.
inline std::int64_t required_sample_size(std::int64_t population, double precision) {
  if (population < 1) throw DomainError("population must be >= 1");
  if (!(precision >= 0.0) || !(precision < 1.0))
    throw DomainError("precision must lie in [0, 1)");
  const double n = static_cast<double>(population);
  const double raw = n / (1.0 + n * precision * precision);
  // 1e-9 absorbs representation error so exact quotients are not bumped up by one.
  const auto up = static_cast<std::int64_t>(std::ceil(raw - 1e-9));
  return std::clamp<std::int64_t>(up, 1, population);
}

/// A furniture dimension: a fixed value or an adjustable closed range.
class DimensionValue {
 public:
  static DimensionValue fixed(Mm v) {
    if (!std::isfinite(v) || !(v > 0.0)) throw DomainError("dimension value must be > 0");
    return DimensionValue(v, v, false);
  }

  static DimensionValue adjustable(Mm lo, Mm hi) {
    if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo > 0.0) || !(hi > 0.0))
      throw DomainError("dimension values must be > 0");
    if (!(lo < hi)) throw DomainError("adjustable dimension requires lo < hi");
    return DimensionValue(lo, hi, true);
  }

  bool is_adjustable() const noexcept { return adjustable_; }
  bool is_fixed() const noexcept { return !adjustable_; }
  Mm lo() const noexcept { return lo_; }
  Mm hi() const noexcept { return hi_; }
  /// Fixed value; for adjustable ranges, the lower setting.
  Mm value() const noexcept { return lo_; }

  friend bool operator==(const DimensionValue&, const DimensionValue&) = default;

 private:
  DimensionValue(Mm lo, Mm hi, bool adj) : lo_(lo), hi_(hi), adjustable_(adj) {}

  Mm lo_;
  Mm hi_;
  bool adjustable_;
};

inline std::string to_string(const DimensionValue& v) {
  if (v.is_fixed()) return format_number(v.value());
  return format_number(v.lo()) + " - " + format_number(v.hi());
}

class FurnitureSpec {
 public:
  /// Throws SpecError("missing dimension XX") unless all eleven dimensions are given.
  static FurnitureSpec from_map(std::string name, const std::map<Dimension, DimensionValue>& dims) {
    for (Dimension d : kDimensions)
      if (!dims.contains(d))
        throw SpecError(std::string(to_string(d)), "missing dimension " + std::string(to_string(d)));
    std::vector<DimensionValue> values;
    values.reserve(kDimensionCount);
    for (Dimension d : kDimensions) values.push_back(dims.at(d));
    return FurnitureSpec(std::move(name), std::move(values));
  }

  const std::string& name() const noexcept { return name_; }
  const DimensionValue& operator[](Dimension d) const { return values_[static_cast<std::size_t>(d)]; }

  FurnitureSpec with(Dimension d, DimensionValue v) const {
    FurnitureSpec copy = *this;
    copy.values_[static_cast<std::size_t>(d)] = v;
    return copy;
  }

  FurnitureSpec renamed(std::string name) const {
    FurnitureSpec copy = *this;
    copy.name_ = std::move(name);
    return copy;
  }

  std::map<Dimension, DimensionValue> to_map() const {
    std::map<Dimension, DimensionValue> out;
    for (Dimension d : kDimensions) out.emplace(d, (*this)[d]);
    return out;
  }

  friend bool operator==(const FurnitureSpec&, const FurnitureSpec&) = default;

 private:
  FurnitureSpec(std::string name, std::vector<DimensionValue> values)
      : name_(std::move(name)), values_(std::move(values)) {}

  std::string name_;
  std::vector<DimensionValue> values_;
};

struct FitConfig {
  Mm shoe_allowance = 30.0;
  Mm table_thickness = 30.0;
  Mm clearance_margin = 20.0;
  double alpha_level = 0.05;
  std::array<double, 3> percentile_triple{0.05, 0.50, 0.95};
  Mm rounding_step = 5.0;

  void validate() const {
    auto positive = [](double v, const char* name) {
      if (!std::isfinite(v) || !(v > 0.0)) throw ConfigError(std::string(name) + " must be > 0");
    };
    positive(shoe_allowance, "shoe_allowance");
    positive(table_thickness, "table_thickness");
    positive(clearance_margin, "clearance_margin");
    positive(rounding_step, "rounding_step");
    if (!(alpha_level > 0.0) || !(alpha_level < 1.0))
      throw ConfigError("alpha_level must lie in (0, 1)");
    double prev = 0.0;
    for (double p : percentile_triple) {
      if (!(p > prev) || !(p < 1.0))
        throw ConfigError("percentile_triple must be strictly increasing in (0, 1)");
      prev = p;
    }
  }
};

namespace reference {

// Existing computer-lab furniture measured on site (type 1: non-adjustable chair).
inline FurnitureSpec existing_type1() {
  using V = DimensionValue;
  return FurnitureSpec::from_map("existing-type1", {{Dimension::SH, V::fixed(457.2)},
                                                    {Dimension::SW, V::fixed(393.7)},
                                                    {Dimension::SD, V::fixed(406.4)},
                                                    {Dimension::BH, V::fixed(304.8)},
                                                    {Dimension::BW, V::fixed(355.6)},
                                                    {Dimension::UEB, V::fixed(406.4)},
                                                    {Dimension::STH, V::fixed(241.3)},
                                                    {Dimension::STC, V::fixed(88.9)},
                                                    {Dimension::UTH, V::fixed(546.1)},
                                                    {Dimension::TL, V::fixed(482.6)},
                                                    {Dimension::TD, V::fixed(749.3)}});
}

// Type 2: adjustable chair with a non-adjustable table.
inline FurnitureSpec existing_type2() {
  using V = DimensionValue;
  return FurnitureSpec::from_map("existing-type2", {{Dimension::SH, V::adjustable(431.8, 533.4)},
                                                    {Dimension::SW, V::fixed(457.2)},
                                                    {Dimension::SD, V::fixed(431.8)},
                                                    {Dimension::BH, V::fixed(304.8)},
                                                    {Dimension::BW, V::fixed(393.7)},
                                                    {Dimension::UEB, V::fixed(406.4)},
                                                    {Dimension::STH, V::adjustable(228.6, 330.2)},
                                                    {Dimension::STC, V::adjustable(95.25, 196.85)},
                                                    {Dimension::UTH, V::fixed(628.65)},
                                                    {Dimension::TL, V::fixed(457.2)},
                                                    {Dimension::TD, V::fixed(749.3)}});
}

}  // namespace reference

}  // namespace ergofit
