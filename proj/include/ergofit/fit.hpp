#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ergofit/core_model.hpp"
#include "ergofit/error.hpp"

namespace ergofit::fit {

enum class CriterionId : std::uint8_t {
  SH_PH,
  SW_HB,
  SD_BPL,
  BH_SSH,
  BW_HB,
  UEB_SCH,
  STH_SEH,
  STC_TT,
  UTH_combined,
  TL_BKL,
  TD_combined,
};

inline constexpr std::size_t kCriterionCount = 11;

enum class Sidedness : std::uint8_t { TwoSided, OneSidedMin, OneSidedMax };

/// Admissible furniture values for one person. `lo_open` marks a strict lower bound.
struct Interval {
  Mm lo = -std::numeric_limits<Mm>::infinity();
  Mm hi = std::numeric_limits<Mm>::infinity();
  bool lo_open = false;

  bool contains(Mm v) const { return (lo_open ? v > lo : v >= lo) && v <= hi; }
  bool below(Mm v) const { return lo_open ? v <= lo : v < lo; }
  bool above(Mm v) const { return v > hi; }
};

/// Seat height used when evaluating the under-table clearance. With an adjustable
/// seat the lowest setting is the most favourable one for that criterion.
inline Mm uth_seat_height(const FurnitureSpec& spec) { return spec[Dimension::SH].lo(); }

namespace detail {

inline const double kCos30 = std::cos(std::numbers::pi / 6.0);
inline const double kCos5 = std::cos(5.0 * std::numbers::pi / 180.0);
inline constexpr double kInf = std::numeric_limits<double>::infinity();
// Leg clearance added to seat height plus thigh thickness for the lowest under-table height.
inline constexpr Mm kUthLegClearance = 30.0;

using BoundFn = Interval (*)(const AnthropometricRecord&, const FurnitureSpec&, const FitConfig&);

inline Interval seat_height(const AnthropometricRecord& r, const FurnitureSpec&, const FitConfig& c) {
  const Mm shod = r[Measure::PH] + c.shoe_allowance;
  return {shod * kCos30, shod * kCos5};
}
inline Interval seat_width(const AnthropometricRecord& r, const FurnitureSpec&, const FitConfig&) {
  return {1.10 * r[Measure::HB], 1.30 * r[Measure::HB]};
}
inline Interval seat_depth(const AnthropometricRecord& r, const FurnitureSpec&, const FitConfig&) {
  return {0.80 * r[Measure::BPL], 0.95 * r[Measure::BPL]};
}
inline Interval backrest_height(const AnthropometricRecord& r, const FurnitureSpec&, const FitConfig&) {
  return {0.60 * r[Measure::SSH], 0.80 * r[Measure::SSH]};
}
inline Interval backrest_width(const AnthropometricRecord& r, const FurnitureSpec&, const FitConfig&) {
  return {r[Measure::HB], kInf};
}
inline Interval backrest_upper_edge(const AnthropometricRecord& r, const FurnitureSpec&, const FitConfig&) {
  return {-kInf, r[Measure::SCH]};
}
inline Interval seat_to_table(const AnthropometricRecord& r, const FurnitureSpec&, const FitConfig&) {
  return {r[Measure::SEH], r[Measure::SEH] + 50.0};
}
inline Interval seat_to_table_clearance(const AnthropometricRecord& r, const FurnitureSpec&,
                                        const FitConfig& c) {
  return {r[Measure::TT] + c.clearance_margin, kInf, true};
}
inline Interval under_table_height(const AnthropometricRecord& r, const FurnitureSpec& s,
                                   const FitConfig& c) {
  const Mm sh = uth_seat_height(s);
  if (!std::isfinite(sh) || !(sh > 0.0))
    throw ConfigError("UTH criterion: seat height cannot be resolved");
  const Mm lo = sh + r[Measure::TT] + kUthLegClearance;
  const Mm hi = r[Measure::SEH] + (r[Measure::PH] + c.shoe_allowance) * kCos5 +
                0.1483 * r[Measure::AL] - c.table_thickness;
  return {lo, hi};
}
inline Interval table_length(const AnthropometricRecord& r, const FurnitureSpec&, const FitConfig&) {
  return {r[Measure::BKL], kInf};
}
inline Interval table_depth(const AnthropometricRecord& r, const FurnitureSpec&, const FitConfig& c) {
  return {0.5 * r[Measure::SEB] + 0.342 * r[Measure::AL] + c.clearance_margin, r[Measure::EFL]};
}

}  // namespace detail

struct FitCriterion {
  CriterionId id;
  std::string_view key;    // stable identifier, e.g. "SH_PH"
  std::string_view label;  // table row heading
  Dimension dimension;
  Sidedness sided;
  std::vector<Measure> governing;
  detail::BoundFn bounds;
};

/// Registry of the eleven fit relations, in report order.
inline const std::array<FitCriterion, kCriterionCount>& criteria() {
  using M = Measure;
  using D = Dimension;
  using S = Sidedness;
  static const std::array<FitCriterion, kCriterionCount> registry{{
      {CriterionId::SH_PH, "SH_PH", "SH against PH", D::SH, S::TwoSided, {M::PH}, detail::seat_height},
      {CriterionId::SW_HB, "SW_HB", "SW against HB", D::SW, S::TwoSided, {M::HB}, detail::seat_width},
      {CriterionId::SD_BPL, "SD_BPL", "SD against BPL", D::SD, S::TwoSided, {M::BPL}, detail::seat_depth},
      {CriterionId::BH_SSH, "BH_SSH", "BH against SSH", D::BH, S::TwoSided, {M::SSH},
       detail::backrest_height},
      {CriterionId::BW_HB, "BW_HB", "BW against HB", D::BW, S::OneSidedMin, {M::HB},
       detail::backrest_width},
      {CriterionId::UEB_SCH, "UEB_SCH", "UEB against SCH", D::UEB, S::OneSidedMax, {M::SCH},
       detail::backrest_upper_edge},
      {CriterionId::STH_SEH, "STH_SEH", "STH against SEH", D::STH, S::TwoSided, {M::SEH},
       detail::seat_to_table},
      {CriterionId::STC_TT, "STC_TT", "STC against TT", D::STC, S::OneSidedMin, {M::TT},
       detail::seat_to_table_clearance},
      {CriterionId::UTH_combined, "UTH_combined", "UTH against TT, SEH, PH and AL", D::UTH,
       S::TwoSided, {M::TT, M::SEH, M::PH, M::AL}, detail::under_table_height},
      {CriterionId::TL_BKL, "TL_BKL", "TL against BKL", D::TL, S::OneSidedMin, {M::BKL},
       detail::table_length},
      {CriterionId::TD_combined, "TD_combined", "TD against SEB, AL and EFL", D::TD, S::TwoSided,
       {M::SEB, M::AL, M::EFL}, detail::table_depth},
  }};
  return registry;
}

inline const FitCriterion& criterion(CriterionId id) { return criteria()[static_cast<std::size_t>(id)]; }

inline std::string_view to_string(CriterionId id) { return criterion(id).key; }

inline std::optional<CriterionId> parse_criterion(std::string_view s) {
  for (const auto& c : criteria())
    if (c.key == s) return c.id;
  return std::nullopt;
}

inline bool is_two_sided(const FitCriterion& c) { return c.sided == Sidedness::TwoSided; }

inline Interval admissible_interval(const FitCriterion& c, const AnthropometricRecord& r,
                                    const FurnitureSpec& spec, const FitConfig& cfg) {
  return c.bounds(r, spec, cfg);
}

enum class FitClass : std::uint8_t { Match, LowMismatch, HighMismatch, Mismatch };

inline std::string_view to_string(FitClass f) {
  switch (f) {
    case FitClass::Match: return "Match";
    case FitClass::LowMismatch: return "LowMismatch";
    case FitClass::HighMismatch: return "HighMismatch";
    case FitClass::Mismatch: return "Mismatch";
  }
  return "?";
}

/// Furniture below the admissible interval is a high mismatch (the person's measure
/// exceeds what the furniture serves); above it, a low mismatch. Adjustable furniture
/// matches when its range intersects the interval.
inline FitClass classify(const FitCriterion& c, const AnthropometricRecord& r,
                         const FurnitureSpec& spec, const FitConfig& cfg) {
  const Interval iv = admissible_interval(c, r, spec, cfg);
  const DimensionValue& v = spec[c.dimension];
  FitClass out;
  if (v.is_fixed()) {
    const Mm f = v.value();
    if (iv.below(f)) out = FitClass::HighMismatch;
    else if (iv.above(f)) out = FitClass::LowMismatch;
    else out = FitClass::Match;
  } else {
    const Mm a = v.lo(), b = v.hi();
    const bool lower_ok = iv.lo_open ? b > iv.lo : b >= iv.lo;
    const bool upper_ok = a <= iv.hi;
    // Non-empty overlap of [a, b] and the interval, allowing for an empty interval.
    const Mm lo = std::max(a, iv.lo), hi = std::min(b, iv.hi);
    const bool overlap = lo < hi || (lo == hi && !(iv.lo_open && lo == iv.lo));
    if (overlap) out = FitClass::Match;
    else if (!lower_ok) out = FitClass::HighMismatch;
    else if (!upper_ok) out = FitClass::LowMismatch;
    else out = FitClass::HighMismatch;  // straddles an empty interval
  }
  if (!is_two_sided(c) && out != FitClass::Match) out = FitClass::Mismatch;
  return out;
}

inline FitClass classify(CriterionId id, const AnthropometricRecord& r, const FurnitureSpec& spec,
                         const FitConfig& cfg) {
  return classify(criterion(id), r, spec, cfg);
}

struct MismatchRow {
  CriterionId criterion;
  Gender gender;
  std::size_t n = 0;
  std::size_t match = 0;
  std::size_t low = 0;
  std::size_t high = 0;
  std::size_t mismatch = 0;  // one-sided criteria only

  bool two_sided() const { return is_two_sided(fit::criterion(criterion)); }
  bool empty() const { return n == 0; }
  double pct(std::size_t k) const {
    return n == 0 ? std::numeric_limits<double>::quiet_NaN() : 100.0 * static_cast<double>(k) / n;
  }
  double match_pct() const { return pct(match); }
  double low_pct() const { return two_sided() ? pct(low) : std::numeric_limits<double>::quiet_NaN(); }
  double high_pct() const { return two_sided() ? pct(high) : std::numeric_limits<double>::quiet_NaN(); }
  double total_mismatch_pct() const { return pct(low + high + mismatch); }

  friend bool operator==(const MismatchRow&, const MismatchRow&) = default;
};

struct MismatchReport {
  std::string spec_name;
  std::size_t n_male = 0;
  std::size_t n_female = 0;
  std::vector<MismatchRow> rows;  // criterion-major, Male then Female
  std::vector<std::string> notes;

  const MismatchRow& row(CriterionId c, Gender g) const {
    for (const auto& r : rows)
      if (r.criterion == c && r.gender == g) return r;
    throw DomainError("report has no row " + std::string(to_string(c)) + "/" +
                      std::string(ergofit::to_string(g)));
  }

  friend bool operator==(const MismatchReport&, const MismatchReport&) = default;
};

inline void tally(MismatchRow& row, FitClass f) {
  ++row.n;
  switch (f) {
    case FitClass::Match: ++row.match; break;
    case FitClass::LowMismatch: ++row.low; break;
    case FitClass::HighMismatch: ++row.high; break;
    case FitClass::Mismatch: ++row.mismatch; break;
  }
}

/// Classifies every record against every criterion and tallies per gender.
/// A gender with no records yields rows with n = 0 (percentages NaN).
inline MismatchReport population_mismatch(const PopulationDataset& d, const FurnitureSpec& spec,
                                          const FitConfig& cfg) {
  MismatchReport rep;
  rep.spec_name = spec.name();
  rep.n_male = d.count(Gender::Male);
  rep.n_female = d.count(Gender::Female);
  rep.rows.reserve(2 * kCriterionCount);
  for (const auto& c : criteria()) {
    MismatchRow male{c.id, Gender::Male}, female{c.id, Gender::Female};
    for (const auto& r : d) tally(r.gender == Gender::Male ? male : female, classify(c, r, spec, cfg));
    rep.rows.push_back(male);
    rep.rows.push_back(female);
  }
  if (spec[Dimension::SH].is_adjustable())
    rep.notes.push_back("UTH evaluated at the lowest seat setting SH = " +
                        format_number(uth_seat_height(spec)) + " mm");
  for (Gender g : kGenders)
    if (d.count(g) == 0) rep.notes.push_back("no " + std::string(ergofit::to_string(g)) + " records (n=0)");
  return rep;
}

struct DeltaRow {
  CriterionId criterion;
  Gender gender;
  double before_pct;  // total mismatch in the first report
  double after_pct;   // total mismatch in the second report
  double delta;       // after - before, percentage points
};

/// Signed change in total mismatch from `a` to `b`, per criterion and gender.
inline std::vector<DeltaRow> compare_reports(const MismatchReport& a, const MismatchReport& b) {
  auto keys = [](const MismatchReport& r) {
    std::vector<std::pair<CriterionId, Gender>> k;
    for (const auto& row : r.rows) k.emplace_back(row.criterion, row.gender);
    return k;
  };
  if (keys(a) != keys(b)) throw DomainError("compare_reports: reports cover different criteria");
  std::vector<DeltaRow> out;
  out.reserve(a.rows.size());
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    const double before = a.rows[i].total_mismatch_pct();
    const double after = b.rows[i].total_mismatch_pct();
    out.push_back({a.rows[i].criterion, a.rows[i].gender, before, after, after - before});
  }
  return out;
}

}  // namespace ergofit::fit
