#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace teamfit {

/// One broken rule. `rule` is a stable machine-readable id (snake_case),
/// `subject` names the offending object (criterion, profile, pair...).
struct Violation {
  std::string subject;
  std::string rule;
  std::string message;

  bool operator==(const Violation&) const = default;
};

/// Validation is reported, not thrown: operations that check invariants
/// return every violation they find.
class ValidationReport {
 public:
  bool ok() const noexcept { return violations_.empty(); }
  const std::vector<Violation>& violations() const noexcept { return violations_; }

  void add(std::string subject, std::string rule, std::string message) {
    violations_.push_back({std::move(subject), std::move(rule), std::move(message)});
  }

  void merge(const ValidationReport& other, const std::string& prefix = {}) {
    for (const auto& v : other.violations_) {
      violations_.push_back({prefix.empty() ? v.subject : prefix + "/" + v.subject, v.rule, v.message});
    }
  }

  bool has_rule(const std::string& rule) const {
    for (const auto& v : violations_)
      if (v.rule == rule) return true;
    return false;
  }

  std::string summary() const {
    std::string out;
    for (const auto& v : violations_) {
      if (!out.empty()) out += "; ";
      out += v.subject + ": " + v.message + " [" + v.rule + "]";
    }
    return out;
  }

 private:
  std::vector<Violation> violations_;
};

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Thrown when an operation receives an object that fails validation.
class ValidationError : public Error {
 public:
  ValidationError(const std::string& what, ValidationReport report)
      : Error(what + ": " + report.summary()), report_(std::move(report)) {}

  const ValidationReport& report() const noexcept { return report_; }

 private:
  ValidationReport report_;
};

/// A named object (capacity, class, profile, device...) does not exist.
class NotFoundError : public Error {
 public:
  using Error::Error;
};

}  // namespace teamfit
