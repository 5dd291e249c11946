#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ergofit {

// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad input data: files, CSV rows, spec payloads. The CLI maps these to exit code 2.
class InputError : public Error {
 public:
  using Error::Error;
};

// Analysis cannot proceed on otherwise well-formed input. CLI exit code 1.
class AnalysisError : public Error {
 public:
  using Error::Error;
};

class DomainError : public AnalysisError {
 public:
  using AnalysisError::AnalysisError;
};

class ConfigError : public AnalysisError {
 public:
  using AnalysisError::AnalysisError;
};

// Spearman with a constant input.
class UndefinedCorrelationError : public DomainError {
 public:
  using DomainError::DomainError;
};

// ANOVA with zero within-group variance but non-zero between-group variance.
class DegenerateVarianceError : public DomainError {
 public:
  using DomainError::DomainError;
};

class SchemaError : public InputError {
 public:
  SchemaError(std::string column, const std::string& what)
      : InputError(what), column_(std::move(column)) {}
  const std::string& column() const noexcept { return column_; }

 private:
  std::string column_;
};

class RowError : public InputError {
 public:
  RowError(std::size_t line, const std::string& what)
      : InputError("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class ValidationError : public InputError {
 public:
  ValidationError(std::size_t line, std::vector<std::string> violations)
      : InputError(compose(line, violations)),
        line_(line),
        violations_(std::move(violations)) {}
  std::size_t line() const noexcept { return line_; }
  const std::vector<std::string>& violations() const noexcept { return violations_; }

 private:
  static std::string compose(std::size_t line, const std::vector<std::string>& v) {
    std::string out = "line " + std::to_string(line) + ": invalid record: ";
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i) out += "; ";
      out += v[i];
    }
    return out;
  }

  std::size_t line_;
  std::vector<std::string> violations_;
};

// Furniture spec payload problems. `field` is the offending dimension acronym, if any.
class SpecError : public InputError {
 public:
  SpecError(std::string field, const std::string& what)
      : InputError(what), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

// A proposal rule cannot be evaluated (e.g. its anchored gender is absent).
class RuleError : public AnalysisError {
 public:
  RuleError(std::string rule, const std::string& what)
      : AnalysisError("rule " + rule + ": " + what), rule_(std::move(rule)) {}
  const std::string& rule() const noexcept { return rule_; }

 private:
  std::string rule_;
};

}  // namespace ergofit
