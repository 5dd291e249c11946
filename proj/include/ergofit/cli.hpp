#pragma once

// Command-line front end. Exit codes: 0 success, 1 analysis error, 2 input error.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ergofit/core_model.hpp"
#include "ergofit/dataset_io.hpp"
#include "ergofit/design.hpp"
#include "ergofit/design_config.hpp"
#include "ergofit/error.hpp"
#include "ergofit/fit.hpp"
#include "ergofit/report.hpp"
#include "ergofit/service.hpp"
#include "ergofit/service_http.hpp"
#include "ergofit/stats.hpp"

namespace ergofit::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitAnalysis = 1;
inline constexpr int kExitInput = 2;

struct RunConfig {
  std::string dataset;
  std::vector<std::string> specs;
  std::string out_dir;
  std::string format = "table";
  std::optional<double> alpha;
  std::optional<double> shoe_allowance;
  std::size_t bins = 20;
  int port = 8080;
  std::string rules;
  std::string groups;
  std::string measure;
  std::string gender;
  std::string preset = "type1";

  report::Format output_format() const {
    const auto f = report::parse_format(format);
    if (!f) throw InputError("unknown format '" + format + "' (expected table, csv or json)");
    return *f;
  }

  FitConfig fit_config() const {
    FitConfig cfg;
    if (alpha) cfg.alpha_level = *alpha;
    if (shoe_allowance) cfg.shoe_allowance = *shoe_allowance;
    try {
      cfg.validate();
    } catch (const ConfigError& e) {
      throw InputError(e.what());
    }
    return cfg;
  }

  PopulationDataset load() const {
    if (dataset.empty()) throw InputError("--dataset is required");
    return load_dataset(dataset);
  }
};

/// ANOVA input: one comparison per line, `label,GROUP,GROUP[,...]` where each group is a
/// whitespace-separated list of numbers. Blank lines and '#' comments are skipped.
inline std::vector<std::pair<std::string, std::vector<std::vector<double>>>> parse_anova_groups(
    std::istream& in) {
  std::vector<std::pair<std::string, std::vector<std::vector<double>>>> out;
  std::string line;
  std::size_t no = 0;
  while (std::getline(in, line)) {
    ++no;
    if (trim(line).empty() || trim(line).front() == '#') continue;
    const auto fields = csv::split_line(line);
    if (fields.size() < 3) throw RowError(no, "expected label and at least two groups");
    std::vector<std::vector<double>> groups;
    for (std::size_t i = 1; i < fields.size(); ++i) {
      std::istringstream ss(fields[i]);
      std::vector<double> g;
      for (std::string tok; ss >> tok;) {
        const auto v = parse_double(tok);
        if (!v) throw RowError(no, "not a number: '" + tok + "'");
        g.push_back(*v);
      }
      if (g.empty()) throw RowError(no, "empty group " + std::to_string(i));
      groups.push_back(std::move(g));
    }
    out.emplace_back(std::string(trim(fields[0])), std::move(groups));
  }
  if (out.empty()) throw InputError("groups file has no comparisons");
  return out;
}

namespace detail {

inline std::string extension(report::Format f) {
  switch (f) {
    case report::Format::Csv: return ".csv";
    case report::Format::Json: return ".json";
    case report::Format::Table: return ".txt";
  }
  return ".txt";
}

// Writes to <out_dir>/<stem><ext> when an output directory is configured, else to `out`.
inline void emit(const RunConfig& cfg, std::ostream& out, const std::string& stem, const std::string& text) {
  if (cfg.out_dir.empty()) {
    out << text;
    return;
  }
  std::filesystem::create_directories(cfg.out_dir);
  const auto path = std::filesystem::path(cfg.out_dir) / (stem + extension(cfg.output_format()));
  std::ofstream f(path);
  if (!f) throw InputError("cannot write " + path.string());
  f << text;
}

inline std::string file_stem(std::string s) {
  for (char& c : s)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '-' && c != '_') c = '_';
  return s;
}

}  // namespace detail

inline int cmd_describe(const RunConfig& cfg, std::ostream& out) {
  const auto fmt = cfg.output_format();
  const auto d = cfg.load();
  detail::emit(cfg, out, "describe", report::render_describe(report::describe_dataset(d, cfg.fit_config()), fmt));
  return kExitOk;
}

inline int cmd_mismatch(const RunConfig& cfg, std::ostream& out) {
  const auto fmt = cfg.output_format();
  if (cfg.specs.empty()) throw InputError("at least one --spec is required");
  const auto fit_cfg = cfg.fit_config();
  const auto d = cfg.load();
  const auto resolve = design::file_spec_resolver(std::filesystem::current_path());
  std::vector<fit::MismatchReport> reports;
  for (const auto& s : cfg.specs) reports.push_back(fit::population_mismatch(d, resolve(s), fit_cfg));

  std::optional<std::vector<fit::DeltaRow>> deltas;
  if (reports.size() == 2) deltas = fit::compare_reports(reports[0], reports[1]);

  if (fmt == report::Format::Json && cfg.out_dir.empty() && reports.size() > 1) {
    report::Json j{{"reports", report::Json::array()}};
    for (const auto& r : reports) j["reports"].push_back(report::Json::parse(report::render_mismatch(r, fmt)));
    if (deltas)
      j["delta"] = report::Json::parse(
          report::render_deltas(*deltas, reports[0].spec_name, reports[1].spec_name, fmt));
    out << report::dump(j);
    return kExitOk;
  }
  for (std::size_t i = 0; i < reports.size(); ++i) {
    if (i && cfg.out_dir.empty()) out << '\n';
    detail::emit(cfg, out, "mismatch_" + detail::file_stem(reports[i].spec_name),
                 report::render_mismatch(reports[i], fmt));
  }
  if (deltas) {
    if (cfg.out_dir.empty()) out << '\n';
    detail::emit(cfg, out, "delta",
                 report::render_deltas(*deltas, reports[0].spec_name, reports[1].spec_name, fmt));
  }
  return kExitOk;
}

inline int cmd_anova(const RunConfig& cfg, std::ostream& out) {
  const auto fmt = cfg.output_format();
  const auto fit_cfg = cfg.fit_config();
  if (cfg.groups.empty()) throw InputError("--groups is required");
  std::ifstream in(cfg.groups);
  if (!in) throw InputError("groups file not found: " + cfg.groups);
  std::vector<report::AnovaRow> rows;
  for (const auto& [label, groups] : parse_anova_groups(in))
    rows.push_back({label, stats::one_way_anova(groups, fit_cfg.alpha_level)});
  detail::emit(cfg, out, "anova", report::render_anova(rows, fit_cfg.alpha_level, fmt));
  return kExitOk;
}

inline int cmd_propose(const RunConfig& cfg, std::ostream& out) {
  const auto fmt = cfg.output_format();
  const auto fit_cfg = cfg.fit_config();
  design::ProposalRuleset rules;
  if (!cfg.rules.empty()) {
    rules = design::load_ruleset_config(cfg.rules);
  } else {
    auto preset = design::preset_ruleset(cfg.preset);
    if (!preset) throw InputError("unknown preset '" + cfg.preset + "'");
    rules = *preset;
  }
  const PopulationDataset d = cfg.dataset.empty() ? PopulationDataset{} : cfg.load();
  detail::emit(cfg, out, "proposal", report::render_spec(design::propose_dimensions(d, rules, fit_cfg), fmt));
  return kExitOk;
}

inline int cmd_optimize(const RunConfig& cfg, std::ostream& out) {
  const auto fmt = cfg.output_format();
  const auto fit_cfg = cfg.fit_config();
  if (cfg.rules.empty()) throw InputError("--rules (optimization config) is required");
  const auto opt = design::load_optimization_config(cfg.rules);
  const auto d = cfg.load();
  detail::emit(cfg, out, "optimized", report::render_optimization(design::optimize_dimensions(d, opt, fit_cfg), fmt));
  return kExitOk;
}

inline int cmd_guidelines(const RunConfig& cfg, std::ostream& out) {
  detail::emit(cfg, out, "guidelines", report::render_guidelines(design::workstation_guidelines(), cfg.output_format()));
  return kExitOk;
}

inline int cmd_histogram(const RunConfig& cfg, std::ostream& out) {
  const auto fmt = cfg.output_format();
  if (cfg.bins == 0) throw InputError("--bins must be >= 1");
  std::vector<Measure> measures(kMeasures.begin(), kMeasures.end());
  if (!cfg.measure.empty()) {
    const auto m = parse_measure(cfg.measure);
    if (!m) throw InputError("unknown measure '" + cfg.measure + "'");
    measures = {*m};
  }
  std::vector<Gender> genders(kGenders.begin(), kGenders.end());
  if (!cfg.gender.empty()) {
    const auto g = parse_gender(cfg.gender);
    if (!g) throw InputError("unknown gender '" + cfg.gender + "'");
    genders = {*g};
  }
  const auto d = cfg.load();
  std::vector<report::HistogramSeries> series;
  for (Measure m : measures)
    for (Gender g : genders) {
      const auto sub = filter_by_gender(d, g);
      if (sub.empty()) continue;
      series.push_back({m, g, stats::histogram(sub.column(m), cfg.bins)});
    }
  detail::emit(cfg, out, "histogram", report::render_histograms(series, fmt));
  return kExitOk;
}

inline int cmd_serve(const RunConfig& cfg, std::ostream& out) {
  if (cfg.port < 1 || cfg.port > 65535) throw InputError("--port must lie in [1, 65535]");
  service::AnalysisService svc(cfg.load(), cfg.fit_config());
  httplib::Server server;
  service::bind(server, svc);
  out << "serving " << svc.dataset().size() << " records on http://0.0.0.0:" << cfg.port << std::endl;
  if (!server.listen("0.0.0.0", cfg.port)) throw InputError("cannot listen on port " + std::to_string(cfg.port));
  return kExitOk;
}

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Anthropometric furniture fit analysis"};
  app.require_subcommand(1);

  auto common = [&](CLI::App* sub) {
    sub->add_option("--format", cfg.format, "Output format: table, csv or json");
    sub->add_option("--out", cfg.out_dir, "Write output files to this directory");
    sub->add_option("--alpha", cfg.alpha, "Significance level");
    sub->add_option("--shoe-allowance", cfg.shoe_allowance, "Shoe allowance added to PH (mm)");
  };
  auto with_dataset = [&](CLI::App* sub) { sub->add_option("--dataset", cfg.dataset, "Dataset CSV"); };

  auto* describe = app.add_subcommand("describe", "Descriptive statistics per measure and gender");
  common(describe);
  with_dataset(describe);
  auto* mismatch = app.add_subcommand("mismatch", "Match/mismatch report for one or more furniture specs");
  common(mismatch);
  with_dataset(mismatch);
  mismatch->add_option("--spec", cfg.specs, "Spec JSON path or preset name (repeatable)");
  auto* anova = app.add_subcommand("anova", "One-way ANOVA on comparison groups");
  common(anova);
  anova->add_option("--groups,groups", cfg.groups, "Groups file");
  auto* propose = app.add_subcommand("propose", "Propose furniture dimensions from a ruleset");
  common(propose);
  with_dataset(propose);
  propose->add_option("--rules", cfg.rules, "Ruleset config file");
  propose->add_option("--preset", cfg.preset, "Built-in ruleset: type1, type2, anchored-type1");
  auto* optimize = app.add_subcommand("optimize", "Grid-search dimensions minimising mismatch");
  common(optimize);
  with_dataset(optimize);
  optimize->add_option("--rules", cfg.rules, "Optimization config file");
  auto* guidelines = app.add_subcommand("guidelines", "Workstation placement constants");
  common(guidelines);
  auto* histogram = app.add_subcommand("histogram", "Equal-width histograms per measure and gender");
  common(histogram);
  with_dataset(histogram);
  histogram->add_option("--bins", cfg.bins, "Number of bins");
  histogram->add_option("--measure", cfg.measure, "Only this measure");
  histogram->add_option("--gender", cfg.gender, "Only this gender (M or F)");
  auto* serve = app.add_subcommand("serve", "Run the HTTP what-if service");
  common(serve);
  with_dataset(serve);
  serve->add_option("--port", cfg.port, "TCP port");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kExitOk;
    }
    err << "error: " << e.what() << "\n";
    return kExitInput;
  }

  try {
    if (*describe) return cmd_describe(cfg, out);
    if (*mismatch) return cmd_mismatch(cfg, out);
    if (*anova) return cmd_anova(cfg, out);
    if (*propose) return cmd_propose(cfg, out);
    if (*optimize) return cmd_optimize(cfg, out);
    if (*guidelines) return cmd_guidelines(cfg, out);
    if (*histogram) return cmd_histogram(cfg, out);
    if (*serve) return cmd_serve(cfg, out);
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitAnalysis;
  }
  return kExitInput;
}

}  // namespace ergofit::cli
