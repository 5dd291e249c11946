#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "ergofit/core_model.hpp"
#include "ergofit/error.hpp"

namespace ergofit::stats {

/// Inclusive linear-interpolation percentile (spreadsheet PERCENTILE.INC):
/// rank 1 + p(n-1) on the sorted values, interpolating between neighbours.
inline double percentile_inc(std::span<const double> values, double p) {
  if (values.empty()) throw DomainError("percentile of empty input");
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("percentile must lie in [0, 1]");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const double h = p * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  if (lo + 1 >= sorted.size()) return sorted.back();
  const double frac = h - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

struct DescriptiveStats {
  std::size_t n = 0;
  double min = 0, max = 0, mean = 0, sd = 0;
  double p5 = 0, p50 = 0, p95 = 0;
};

/// Summary row as in an anthropometric table. `sd` uses the n-1 denominator.
inline DescriptiveStats describe(std::span<const double> values,
                                 std::array<double, 3> percentiles = {0.05, 0.50, 0.95}) {
  if (values.size() < 2) throw DomainError("describe requires at least 2 values");
  DescriptiveStats s;
  s.n = values.size();
  const auto [mn, mx] = std::minmax_element(values.begin(), values.end());
  s.min = *mn;
  s.max = *mx;
  // Summing in sorted order keeps the result independent of input order.
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  s.mean = std::accumulate(sorted.begin(), sorted.end(), 0.0) / static_cast<double>(s.n);
  double ss = 0.0;
  for (double v : sorted) ss += (v - s.mean) * (v - s.mean);
  s.sd = std::sqrt(ss / static_cast<double>(s.n - 1));
  s.p5 = percentile_inc(sorted, percentiles[0]);
  s.p50 = percentile_inc(sorted, percentiles[1]);
  s.p95 = percentile_inc(sorted, percentiles[2]);
  return s;
}

/// 1-based ranks; tied values share the mean of the ranks they span.
inline std::vector<double> average_ranks(std::span<const double> values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(n);
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i + 1;
    while (j < n && values[order[j]] == values[order[i]]) ++j;
    const double avg = 0.5 * static_cast<double>(i + 1 + j);  // mean of ranks i+1..j
    for (std::size_t k = i; k < j; ++k) ranks[order[k]] = avg;
    i = j;
  }
  return ranks;
}

inline double pearson(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(n);
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(n);
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) throw UndefinedCorrelationError("zero variance: correlation undefined");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

/// Spearman's rho: Pearson correlation of average ranks.
inline double spearman(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw DomainError("spearman: length mismatch");
  if (x.size() < 3) throw DomainError("spearman: need at least 3 pairs");
  const auto rx = average_ranks(x);
  const auto ry = average_ranks(y);
  return pearson(rx, ry);
}

struct CorrelationMatrix {
  std::vector<Measure> labels;
  std::vector<std::vector<double>> values;

  double at(Measure a, Measure b) const {
    const auto ia = std::find(labels.begin(), labels.end(), a) - labels.begin();
    const auto ib = std::find(labels.begin(), labels.end(), b) - labels.begin();
    if (ia == static_cast<long>(labels.size()) || ib == static_cast<long>(labels.size()))
      throw DomainError("measure not in correlation matrix");
    return values[ia][ib];
  }
};

/// Pairwise Spearman over all records (both genders pooled).
inline CorrelationMatrix correlation_matrix(const PopulationDataset& d,
                                            const std::vector<Measure>& measures) {
  if (d.empty()) throw DomainError("correlation_matrix: empty dataset");
  CorrelationMatrix m;
  m.labels = measures;
  const std::size_t k = measures.size();
  m.values.assign(k, std::vector<double>(k, 1.0));
  std::vector<std::vector<double>> columns;
  columns.reserve(k);
  for (Measure ms : measures) columns.push_back(d.column(ms));
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) {
      double r = 0;
      try {
        r = spearman(columns[i], columns[j]);
      } catch (const UndefinedCorrelationError& e) {
        throw UndefinedCorrelationError("(" + std::string(to_string(measures[i])) + ", " +
                                        std::string(to_string(measures[j])) + "): " + e.what());
      } catch (const DomainError& e) {
        throw DomainError("(" + std::string(to_string(measures[i])) + ", " +
                          std::string(to_string(measures[j])) + "): " + e.what());
      }
      m.values[i][j] = m.values[j][i] = r;
    }
  }
  return m;
}

namespace detail {

// Modified Lentz evaluation of the incomplete-beta continued fraction.
inline double beta_continued_fraction(double a, double b, double x) {
  constexpr int kMaxIter = 500;
  constexpr double kEps = 1e-16;
  constexpr double kTiny = 1e-300;
  const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEps) break;
  }
  return h;
}

}  // namespace detail

/// Regularized incomplete beta I_x(a, b).
inline double incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0)) throw DomainError("incomplete_beta: a and b must be > 0");
  if (!(x >= 0.0 && x <= 1.0)) throw DomainError("incomplete_beta: x must lie in [0, 1]");
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  const double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                           a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(log_front);
  // The fraction converges fast only below the mean; use the symmetry relation above it.
  if (x < (a + 1.0) / (a + b + 2.0)) return front * detail::beta_continued_fraction(a, b, x) / a;
  return 1.0 - front * detail::beta_continued_fraction(b, a, 1.0 - x) / b;
}

/// Upper tail P(X > f) for X ~ F(d1, d2).
inline double f_sf(double f, int d1, int d2) {
  if (d1 <= 0 || d2 <= 0) throw DomainError("f_sf: degrees of freedom must be positive");
  if (std::isnan(f) || f < 0.0) throw DomainError("f_sf: F must be >= 0");
  if (f == 0.0) return 1.0;
  if (std::isinf(f)) return 0.0;
  const double x = d2 / (d2 + d1 * f);
  return std::clamp(incomplete_beta(0.5 * d2, 0.5 * d1, x), 0.0, 1.0);
}

enum class Decision { Accept, Reject };

inline std::string_view to_string(Decision d) { return d == Decision::Accept ? "Accept" : "Reject"; }

struct AnovaResult {
  double f_value = 0;
  int df_between = 0;
  int df_within = 0;
  double p_value = 1;
  Decision decision = Decision::Accept;
  double ss_between = 0;
  double ss_within = 0;
};

/// One-way ANOVA across `groups`; Reject iff p <= alpha.
inline AnovaResult one_way_anova(const std::vector<std::vector<double>>& groups, double alpha = 0.05) {
  if (groups.size() < 2) throw DomainError("one_way_anova: need at least 2 groups");
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("one_way_anova: alpha must lie in (0, 1)");
  std::size_t total = 0;
  double grand_sum = 0;
  for (const auto& g : groups) {
    if (g.empty()) throw DomainError("one_way_anova: empty group");
    total += g.size();
    grand_sum += std::accumulate(g.begin(), g.end(), 0.0);
  }
  const std::size_t k = groups.size();
  if (total <= k) throw DomainError("one_way_anova: insufficient degrees of freedom");
  const double grand_mean = grand_sum / static_cast<double>(total);

  AnovaResult r;
  for (const auto& g : groups) {
    const double mean = std::accumulate(g.begin(), g.end(), 0.0) / static_cast<double>(g.size());
    r.ss_between += static_cast<double>(g.size()) * (mean - grand_mean) * (mean - grand_mean);
    for (double v : g) r.ss_within += (v - mean) * (v - mean);
  }
  r.df_between = static_cast<int>(k - 1);
  r.df_within = static_cast<int>(total - k);

  // Relative tolerance: identical groups leave rounding residue in ss_between.
  const double scale = std::max(1.0, grand_mean * grand_mean * static_cast<double>(total));
  const bool no_between = r.ss_between <= 1e-14 * scale;
  if (r.ss_within == 0.0 && !no_between)
    throw DegenerateVarianceError("one_way_anova: zero within-group variance");
  if (no_between) {
    r.ss_between = 0.0;
    r.f_value = 0.0;
    r.p_value = 1.0;
  } else {
    r.f_value = (r.ss_between / r.df_between) / (r.ss_within / r.df_within);
    r.p_value = f_sf(r.f_value, r.df_between, r.df_within);
  }
  r.decision = r.p_value <= alpha ? Decision::Reject : Decision::Accept;
  return r;
}

inline double sample_variance(std::span<const double> v) {
  const double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  double ss = 0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return ss / static_cast<double>(v.size() - 1);
}

/// Cronbach's alpha; rows are respondents, columns are items.
inline double cronbach_alpha(const std::vector<std::vector<double>>& rows) {
  if (rows.size() < 2) throw DomainError("cronbach_alpha: need at least 2 respondents");
  const std::size_t k = rows.front().size();
  if (k < 2) throw DomainError("cronbach_alpha: need at least 2 items");
  for (const auto& r : rows)
    if (r.size() != k) throw DomainError("cronbach_alpha: ragged item matrix");
  double item_var_sum = 0;
  std::vector<double> column(rows.size());
  for (std::size_t j = 0; j < k; ++j) {
    for (std::size_t i = 0; i < rows.size(); ++i) column[i] = rows[i][j];
    item_var_sum += sample_variance(column);
  }
  std::vector<double> totals;
  totals.reserve(rows.size());
  for (const auto& r : rows) totals.push_back(std::accumulate(r.begin(), r.end(), 0.0));
  const double total_var = sample_variance(totals);
  if (!(total_var > 0.0)) throw DomainError("cronbach_alpha: zero total-score variance");
  const double kd = static_cast<double>(k);
  return kd / (kd - 1.0) * (1.0 - item_var_sum / total_var);
}

struct HistogramBin {
  double lower;
  double upper;
  std::size_t count;
};

/// Equal-width bins over [min, max]; bins are [lower, upper) except the last, which is closed.
/// A constant input yields one degenerate bin holding every value.
inline std::vector<HistogramBin> histogram(std::span<const double> values, std::size_t bin_count) {
  if (values.empty()) throw DomainError("histogram of empty input");
  if (bin_count == 0) throw DomainError("histogram: bin_count must be >= 1");
  const auto [mn, mx] = std::minmax_element(values.begin(), values.end());
  const double lo = *mn, hi = *mx;
  if (!(hi > lo)) return {{lo, hi, values.size()}};

  const double width = (hi - lo) / static_cast<double>(bin_count);
  auto edge = [&](std::size_t i) { return i == bin_count ? hi : lo + static_cast<double>(i) * width; };
  std::vector<HistogramBin> bins(bin_count);
  for (std::size_t i = 0; i < bin_count; ++i) bins[i] = {edge(i), edge(i + 1), 0};
  for (double v : values) {
    auto idx = static_cast<std::size_t>(std::clamp((v - lo) / width, 0.0, double(bin_count - 1)));
    // Reconcile the division with the stored edges so membership is exactly lower <= v < upper.
    while (idx > 0 && v < bins[idx].lower) --idx;
    while (idx + 1 < bin_count && v >= bins[idx + 1].lower) ++idx;
    ++bins[idx].count;
  }
  return bins;
}

}  // namespace ergofit::stats
