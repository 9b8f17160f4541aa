#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace teletwin {

/// Error category doubles as the CLI exit code.
enum class ErrorCategory { Usage = 1, Scenario = 2, Config = 3, InputLog = 4, Io = 5, Service = 6 };

class Error : public std::runtime_error {
public:
  Error(ErrorCategory category, const std::string &what) : std::runtime_error(what), category_(category) {}
  ErrorCategory category() const { return category_; }

private:
  ErrorCategory category_;
};

class ScenarioError : public Error {
public:
  enum class Kind { Syntax, MissingField, UnknownKey, UnknownShape, DanglingReference, InvalidValue, UnknownScenario };

  ScenarioError(Kind kind, std::string field, const std::string &message)
      : Error(ErrorCategory::Scenario, "scenario: " + (field.empty() ? message : field + ": " + message)), kind_(kind),
        field_(std::move(field)) {}

  Kind kind() const { return kind_; }
  const std::string &field() const { return field_; }

private:
  Kind kind_;
  std::string field_;
};

class ConfigError : public Error {
public:
  ConfigError(std::string field, const std::string &message)
      : Error(ErrorCategory::Config, "config: " + (field.empty() ? message : field + ": " + message)),
        field_(std::move(field)) {}
  const std::string &field() const { return field_; }

private:
  std::string field_;
};

class LogError : public Error {
public:
  LogError(std::size_t line, const std::string &message)
      : Error(ErrorCategory::InputLog, "input log line " + std::to_string(line) + ": " + message), line_(line) {}
  std::size_t line() const { return line_; }

private:
  std::size_t line_;
};

} // namespace teletwin
