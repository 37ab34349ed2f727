#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace mobmarket {

/// One broken rule, located by section (e.g. "network", "traveler") and the
/// id of the offending entity.
struct ValidationIssue {
  std::string section;
  std::string entity;
  std::string rule;

  std::string to_string() const { return section + " '" + entity + "': " + rule; }
  friend bool operator==(const ValidationIssue&, const ValidationIssue&) = default;
};

class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(std::vector<ValidationIssue> issues)
      : std::runtime_error(join(issues)), issues_(std::move(issues)) {}
  ValidationError(std::string section, std::string entity, std::string rule)
      : ValidationError(std::vector<ValidationIssue>{
            {std::move(section), std::move(entity), std::move(rule)}}) {}

  const std::vector<ValidationIssue>& issues() const noexcept { return issues_; }

 private:
  static std::string join(const std::vector<ValidationIssue>& issues) {
    std::string out;
    for (const auto& issue : issues) {
      if (!out.empty()) out += "; ";
      out += issue.to_string();
    }
    return out;
  }

  std::vector<ValidationIssue> issues_;
};

/// A (traveler, vehicle) pair was used where only compatible pairs are allowed.
class IncompatiblePairError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace mobmarket
