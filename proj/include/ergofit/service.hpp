#pragma once

// Read-only what-if service over an immutable dataset snapshot.
//
//   GET  /health           status and record count
//   GET  /api/stats        descriptive statistics per measure and gender
//   GET  /api/correlation  Spearman matrix over all records
//   POST /api/mismatch     body: furniture spec JSON -> mismatch report
//   POST /api/propose      body: ruleset JSON -> furniture spec
//   GET  /api/guidelines   workstation placement constants
//
// CSV is returned when the Accept header asks for text/csv or the query has format=csv;
// otherwise JSON.

#include <atomic>
#include <cstdio>
#include <string>
#include <utility>

#include <json.hpp>

#include "ergofit/core_model.hpp"
#include "ergofit/design.hpp"
#include "ergofit/design_config.hpp"
#include "ergofit/error.hpp"
#include "ergofit/fit.hpp"
#include "ergofit/report.hpp"
#include "ergofit/spec_io.hpp"
#include "ergofit/stats.hpp"

namespace ergofit::service {

struct Request {
  std::string method;
  std::string path;
  std::string body;
  std::string accept;      // Accept header
  std::string format;      // ?format= query parameter
};

struct Response {
  int status = 200;
  std::string content_type = "application/json";
  std::string body;
};

class AnalysisService {
 public:
  AnalysisService(PopulationDataset dataset, FitConfig cfg = {})
      : dataset_(std::move(dataset)), cfg_(cfg) {
    cfg_.validate();
  }

  const PopulationDataset& dataset() const noexcept { return dataset_; }
  const FitConfig& config() const noexcept { return cfg_; }

  Response handle(const Request& req) const {
    try {
      return route(req);
    } catch (const SpecError& e) {
      return error(400, e.what(), e.field());
    } catch (const InputError& e) {
      return error(400, e.what(), {});
    } catch (const RuleError& e) {
      return error(400, e.what(), e.rule());
    } catch (const nlohmann::json::exception& e) {
      return error(400, std::string("malformed body: ") + e.what(), {});
    } catch (const std::exception& e) {
      return internal_error(e.what());
    }
  }

 private:
  report::Format negotiate(const Request& req) const {
    if (req.format == "csv") return report::Format::Csv;
    if (req.format == "json") return report::Format::Json;
    if (req.accept.find("text/csv") != std::string::npos) return report::Format::Csv;
    return report::Format::Json;
  }

  static Response ok(report::Format f, std::string body) {
    return {200, std::string(report::content_type(f)), std::move(body)};
  }

  static Response error(int status, const std::string& message, const std::string& field) {
    report::Json j{{"error", message}};
    if (!field.empty()) j["field"] = field;
    return {status, "application/json", report::dump(j)};
  }

  Response internal_error(const std::string& message) const {
    char id[32];
    std::snprintf(id, sizeof id, "E%06lu", static_cast<unsigned long>(++error_seq_));
    report::Json j{{"error", message}, {"error_id", id}};
    return {500, "application/json", report::dump(j)};
  }

  Response route(const Request& req) const {
    const bool get = req.method == "GET";
    const bool post = req.method == "POST";
    const auto f = negotiate(req);
    if (req.method == "OPTIONS") return {204, "text/plain", ""};

    if (req.path == "/health") {
      if (!get) return method_not_allowed();
      report::Json j{{"status", "ok"}, {"records", dataset_.size()}, {"source", dataset_.source()}};
      return ok(report::Format::Json, report::dump(j));
    }
    if (req.path == "/api/stats") {
      if (!get) return method_not_allowed();
      return ok(f, report::render_describe(report::describe_dataset(dataset_, cfg_), f));
    }
    if (req.path == "/api/correlation") {
      if (!get) return method_not_allowed();
      const std::vector<Measure> all(kMeasures.begin(), kMeasures.end());
      return ok(f, report::render_correlation(stats::correlation_matrix(dataset_, all), f));
    }
    if (req.path == "/api/guidelines") {
      if (!get) return method_not_allowed();
      return ok(f, report::render_guidelines(design::workstation_guidelines(), f));
    }
    if (req.path == "/api/mismatch") {
      if (!post) return method_not_allowed();
      const FurnitureSpec spec = parse_spec(req.body, "request");
      return ok(f, report::render_mismatch(fit::population_mismatch(dataset_, spec, cfg_), f));
    }
    if (req.path == "/api/propose") {
      if (!post) return method_not_allowed();
      nlohmann::json body;
      try {
        body = nlohmann::json::parse(req.body);
      } catch (const nlohmann::json::parse_error& e) {
        throw SpecError("", std::string("malformed JSON: ") + e.what());
      }
      const auto rules = design::ruleset_from_json(body);
      return ok(f, report::render_spec(design::propose_dimensions(dataset_, rules, cfg_), f));
    }
    return error(404, "no route for " + req.path, {});
  }

  static Response method_not_allowed() { return error(405, "method not allowed", {}); }

  PopulationDataset dataset_;
  FitConfig cfg_;
  mutable std::atomic<unsigned long> error_seq_{0};
};

}  // namespace ergofit::service
