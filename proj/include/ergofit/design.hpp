#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "ergofit/core_model.hpp"
#include "ergofit/error.hpp"
#include "ergofit/fit.hpp"
#include "ergofit/stats.hpp"

namespace ergofit::design {

struct PercentileAnchor {
  Measure measure;
  Gender gender;
  double percentile;  // in (0, 1)

  friend bool operator==(const PercentileAnchor&, const PercentileAnchor&) = default;
};

/// scale * source + offset. Percentile-anchored terms are rounded to the configured
/// manufacturing step; constants pass through unrounded.
struct AnchorTerm {
  std::variant<Mm, PercentileAnchor> source;
  double scale = 1.0;
  Mm offset = 0.0;

  static AnchorTerm constant(Mm v) { return {v, 1.0, 0.0}; }
  static AnchorTerm percentile(Measure m, Gender g, double p, double scale = 1.0, Mm offset = 0.0) {
    return {PercentileAnchor{m, g, p}, scale, offset};
  }
  bool is_constant() const { return std::holds_alternative<Mm>(source); }

  friend bool operator==(const AnchorTerm&, const AnchorTerm&) = default;
};

/// One dimension's rule: a single term, or a range [lower, upper] for adjustable furniture.
struct ProposalRule {
  Dimension dimension;
  AnchorTerm lower;
  std::optional<AnchorTerm> upper;

  std::string name() const { return std::string(to_string(dimension)); }

  friend bool operator==(const ProposalRule&, const ProposalRule&) = default;
};

struct ProposalRuleset {
  std::string name = "proposal";
  std::vector<ProposalRule> rules;
  // Supplies dimensions that have no rule.
  std::optional<FurnitureSpec> base;
};

inline Mm round_to_step(Mm v, Mm step) { return std::round(v / step) * step; }

inline void validate_rule(const ProposalRule& rule) {
  auto check = [&](const AnchorTerm& t) {
    if (!(t.scale > 0.0)) throw RuleError(rule.name(), "scale must be > 0");
    if (const auto* a = std::get_if<PercentileAnchor>(&t.source))
      if (!(a->percentile > 0.0 && a->percentile < 1.0))
        throw RuleError(rule.name(), "percentile must lie in (0, 1)");
  };
  check(rule.lower);
  if (rule.upper) check(*rule.upper);
}

namespace detail {

inline Mm evaluate_term(const AnchorTerm& t, const ProposalRule& rule, const PopulationDataset& d,
                        const FitConfig& cfg) {
  if (const auto* v = std::get_if<Mm>(&t.source)) return t.scale * *v + t.offset;
  const auto& a = std::get<PercentileAnchor>(t.source);
  std::vector<Mm> values;
  for (const auto& r : d)
    if (r.gender == a.gender) values.push_back(r[a.measure]);
  if (values.empty())
    throw RuleError(rule.name(), "no " + std::string(to_string(a.gender)) + " records to anchor on");
  const Mm raw = t.scale * stats::percentile_inc(values, a.percentile) + t.offset;
  return round_to_step(raw, cfg.rounding_step);
}

}  // namespace detail

/// Applies each rule to the population; dimensions without a rule come from the ruleset's base.
inline FurnitureSpec propose_dimensions(const PopulationDataset& d, const ProposalRuleset& rules,
                                        const FitConfig& cfg) {
  std::map<Dimension, DimensionValue> dims;
  if (rules.base) dims = rules.base->to_map();
  for (const auto& rule : rules.rules) {
    validate_rule(rule);
    const Mm lo = detail::evaluate_term(rule.lower, rule, d, cfg);
    try {
      if (rule.upper) {
        const Mm hi = detail::evaluate_term(*rule.upper, rule, d, cfg);
        dims.insert_or_assign(rule.dimension, DimensionValue::adjustable(lo, hi));
      } else {
        dims.insert_or_assign(rule.dimension, DimensionValue::fixed(lo));
      }
    } catch (const DomainError& e) {
      throw RuleError(rule.name(), e.what());
    }
  }
  for (Dimension dim : kDimensions)
    if (!dims.contains(dim))
      throw RuleError(std::string(to_string(dim)), "no rule or base value for this dimension");
  return FurnitureSpec::from_map(rules.name, dims);
}

/// Constant rules for the proposed type-1 set (non-adjustable chair and table).
/// TL and TD are not proposed and are carried over from the existing type-1 set.
inline ProposalRuleset proposed_type1_rules() {
  using T = AnchorTerm;
  return {"proposed-type1",
          {{Dimension::SH, T::constant(430), {}},
           {Dimension::SW, T::constant(425), {}},
           {Dimension::SD, T::constant(385), {}},
           {Dimension::BH, T::constant(350), {}},
           {Dimension::BW, T::constant(390), {}},
           {Dimension::UEB, T::constant(465), {}},
           {Dimension::STH, T::constant(260), {}},
           {Dimension::STC, T::constant(200), {}},
           {Dimension::UTH, T::constant(645), {}}},
          reference::existing_type1()};
}

/// Proposed type-2 set (adjustable chair, non-adjustable table).
inline ProposalRuleset proposed_type2_rules() {
  using T = AnchorTerm;
  return {"proposed-type2",
          {{Dimension::SH, T::constant(400), T::constant(450)},
           {Dimension::SW, T::constant(425), {}},
           {Dimension::SD, T::constant(385), {}},
           {Dimension::BH, T::constant(350), {}},
           {Dimension::BW, T::constant(390), {}},
           {Dimension::UEB, T::constant(465), {}},
           {Dimension::STH, T::constant(235), T::constant(310)},
           {Dimension::STC, T::constant(95.25), T::constant(200)},
           {Dimension::UTH, T::constant(645), {}}},
          reference::existing_type2()};
}

/// The anchors the proposed values are described by, taken literally (scale 1, plus the
/// shoe allowance on seat height). These do not reproduce the published constants; they
/// are shipped so the anchoring can be inspected and re-tuned.
inline ProposalRuleset anchored_type1_rules(const FitConfig& cfg = {}) {
  using T = AnchorTerm;
  using M = Measure;
  constexpr Gender F = Gender::Female, Ml = Gender::Male;
  return {"anchored-type1",
          {{Dimension::SH, T::percentile(M::PH, F, 0.05, 1.0, cfg.shoe_allowance), {}},
           {Dimension::SW, T::percentile(M::HB, F, 0.95), {}},
           {Dimension::SD, T::percentile(M::BPL, F, 0.05), {}},
           {Dimension::BH, T::percentile(M::SSH, F, 0.05), {}},
           {Dimension::BW, T::percentile(M::SEB, Ml, 0.95), {}},
           {Dimension::UEB, T::percentile(M::SCH, F, 0.05), {}},
           {Dimension::UTH, T::percentile(M::SEH, Ml, 0.05), {}}},
          proposed_type1_rules().base};
}

inline FurnitureSpec proposed_type1_spec() { return propose_dimensions({}, proposed_type1_rules(), {}); }
inline FurnitureSpec proposed_type2_spec() { return propose_dimensions({}, proposed_type2_rules(), {}); }

inline fit::MismatchReport evaluate_proposal(const PopulationDataset& d, const FurnitureSpec& spec,
                                             const FitConfig& cfg) {
  return fit::population_mismatch(d, spec, cfg);
}

struct WorkstationGuidelines {
  Mm keyboard_zone_depth = 394;
  Mm keyboard_zone_length = 1194;
  std::pair<Mm, Mm> monitor_distance{500, 1000};
  std::pair<double, double> viewing_angle_deg{15, 20};  // below horizontal

  friend bool operator==(const WorkstationGuidelines&, const WorkstationGuidelines&) = default;
};

/// Keyboard/mouse work-envelope and monitor placement constants.
inline constexpr WorkstationGuidelines workstation_guidelines() { return {}; }

// ---------------------------------------------------------------------------
// Grid-search optimisation

/// Grid for one dimension: lo, lo+step, ... <= hi. With `max_span`, candidates are
/// adjustable ranges [a, b] of grid points with 0 < b - a <= max_span.
struct SearchAxis {
  Mm lo;
  Mm hi;
  Mm step;
  std::optional<Mm> max_span;
};

using WeightKey = std::pair<fit::CriterionId, Gender>;

struct OptimizationSpec {
  std::map<Dimension, SearchAxis> axes;
  FurnitureSpec base = proposed_type1_spec();
  std::map<WeightKey, double> weights;  // absent keys weigh 1

  double weight(fit::CriterionId c, Gender g) const {
    const auto it = weights.find({c, g});
    return it == weights.end() ? 1.0 : it->second;
  }

  void validate() const {
    for (const auto& [dim, axis] : axes) {
      const std::string name(to_string(dim));
      if (!(axis.step > 0.0)) throw DomainError("search " + name + ": step must be > 0");
      if (!(axis.lo <= axis.hi)) throw DomainError("search " + name + ": empty grid (lo > hi)");
      if (!(axis.lo > 0.0)) throw DomainError("search " + name + ": values must be > 0");
      if (axis.max_span && !(*axis.max_span > 0.0))
        throw DomainError("search " + name + ": max span must be > 0");
    }
    bool any_positive = false;
    for (const auto& c : fit::criteria())
      for (Gender g : kGenders) {
        const double w = weight(c.id, g);
        if (!(w >= 0.0) || !std::isfinite(w)) throw DomainError("weights must be finite and >= 0");
        any_positive |= w > 0.0;
      }
    if (!any_positive) throw DomainError("at least one weight must be positive");
  }
};

struct OptimizationResult {
  FurnitureSpec spec;
  double objective;
  std::size_t candidates_evaluated = 0;
};

/// Weighted sum of total mismatch percentages. Rows with no records contribute nothing.
inline double objective(const fit::MismatchReport& rep, const OptimizationSpec& opt) {
  double sum = 0;
  for (const auto& row : rep.rows)
    if (!row.empty()) sum += opt.weight(row.criterion, row.gender) * row.total_mismatch_pct();
  return sum;
}

/// Candidate values along one axis, in ascending (lo, hi) order.
inline std::vector<DimensionValue> axis_candidates(const SearchAxis& axis) {
  std::vector<Mm> grid;
  const auto steps = static_cast<std::size_t>(std::floor((axis.hi - axis.lo) / axis.step + 1e-9));
  for (std::size_t i = 0; i <= steps; ++i) grid.push_back(axis.lo + static_cast<double>(i) * axis.step);
  std::vector<DimensionValue> out;
  if (!axis.max_span) {
    for (Mm v : grid) out.push_back(DimensionValue::fixed(v));
  } else {
    for (std::size_t i = 0; i < grid.size(); ++i)
      for (std::size_t j = i + 1; j < grid.size() && grid[j] - grid[i] <= *axis.max_span + 1e-9; ++j)
        out.push_back(DimensionValue::adjustable(grid[i], grid[j]));
  }
  if (out.empty()) throw DomainError("empty search grid");
  return out;
}

namespace detail {

inline double criterion_cost(const fit::FitCriterion& c, const PopulationDataset& d,
                             const FurnitureSpec& spec, const FitConfig& cfg,
                             const OptimizationSpec& opt) {
  fit::MismatchRow male{c.id, Gender::Male}, female{c.id, Gender::Female};
  for (const auto& r : d) fit::tally(r.gender == Gender::Male ? male : female, fit::classify(c, r, spec, cfg));
  double cost = 0;
  for (const auto* row : {&male, &female})
    if (!row->empty()) cost += opt.weight(c.id, row->gender) * row->total_mismatch_pct();
  return cost;
}

}  // namespace detail

/// Exhaustive grid search minimising the weighted total mismatch.
///
/// Every criterion depends on a single furniture dimension except the under-table
/// height, which also reads the seat height. Dimensions are therefore searched one at a
/// time (seat group, then table group), and the seat height is chosen jointly with the
/// under-table height so the coupled pair is optimal too. Ties go to the smallest value.
inline OptimizationResult optimize_dimensions(const PopulationDataset& d, const OptimizationSpec& opt,
                                              const FitConfig& cfg) {
  if (d.empty()) throw DomainError("optimize_dimensions: empty dataset");
  opt.validate();
  FurnitureSpec best = opt.base.renamed("optimized");
  std::size_t evaluated = 0;

  auto criteria_of = [](Dimension dim) {
    std::vector<const fit::FitCriterion*> out;
    for (const auto& c : fit::criteria())
      if (c.dimension == dim) out.push_back(&c);
    return out;
  };

  auto search_single = [&](Dimension dim) {
    const auto it = opt.axes.find(dim);
    if (it == opt.axes.end()) return;
    const auto cands = axis_candidates(it->second);
    const auto crit = criteria_of(dim);
    double best_cost = std::numeric_limits<double>::infinity();
    for (const auto& v : cands) {
      const FurnitureSpec trial = best.with(dim, v);
      double cost = 0;
      for (const auto* c : crit) cost += detail::criterion_cost(*c, d, trial, cfg, opt);
      ++evaluated;
      if (cost < best_cost) {
        best_cost = cost;
        best = trial;
      }
    }
  };

  // Seat group.
  const bool search_sh = opt.axes.contains(Dimension::SH);
  const bool search_uth = opt.axes.contains(Dimension::UTH);
  if (search_sh || search_uth) {
    const auto sh_cands = search_sh ? axis_candidates(opt.axes.at(Dimension::SH))
                                    : std::vector<DimensionValue>{best[Dimension::SH]};
    const auto uth_cands = search_uth ? axis_candidates(opt.axes.at(Dimension::UTH))
                                      : std::vector<DimensionValue>{best[Dimension::UTH]};
    const auto& sh_crit = fit::criterion(fit::CriterionId::SH_PH);
    const auto& uth_crit = fit::criterion(fit::CriterionId::UTH_combined);
    double best_cost = std::numeric_limits<double>::infinity();
    FurnitureSpec pair_best = best;
    for (const auto& sh : sh_cands) {
      const FurnitureSpec with_sh = best.with(Dimension::SH, sh);
      const double sh_cost = detail::criterion_cost(sh_crit, d, with_sh, cfg, opt);
      for (const auto& uth : uth_cands) {
        const FurnitureSpec trial = with_sh.with(Dimension::UTH, uth);
        const double cost = sh_cost + detail::criterion_cost(uth_crit, d, trial, cfg, opt);
        ++evaluated;
        if (cost < best_cost) {
          best_cost = cost;
          pair_best = trial;
        }
      }
    }
    best = pair_best;
  }
  for (Dimension dim : {Dimension::SW, Dimension::SD, Dimension::BH, Dimension::BW, Dimension::UEB})
    search_single(dim);
  // Table group; UTH was settled together with SH.
  for (Dimension dim : {Dimension::STH, Dimension::STC, Dimension::TL, Dimension::TD}) search_single(dim);

  const double obj = objective(fit::population_mismatch(d, best, cfg), opt);
  return {best, obj, evaluated};
}

}  // namespace ergofit::design
