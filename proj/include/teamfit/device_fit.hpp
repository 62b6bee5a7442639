#pragma once

// Device functions, their minimum requirements, and how well a population
// can use them.

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "teamfit/core_model.hpp"
#include "teamfit/errors.hpp"
#include "teamfit/projection_gap.hpp"

namespace teamfit {

struct FunctionSpec {
  std::string id;
  std::string label;
  std::map<std::string, double> requirements;  // criterion id -> minimum raw score
  double importance = 1.0;

  bool operator==(const FunctionSpec&) const = default;
};

struct DeviceSpec {
  std::string device_id;
  std::vector<FunctionSpec> functions;

  bool operator==(const DeviceSpec&) const = default;
};

struct CoverageReport {
  std::map<std::string, double> per_function;
  std::map<std::string, double> per_individual;
};

struct FunctionCoverage {
  std::string id;
  double coverage = 0.0;
};

struct FunctionRecommendation {
  std::vector<FunctionCoverage> recommended;
  std::vector<FunctionCoverage> excluded;
};

inline ValidationReport validate_device(const DeviceSpec& device, const CriteriaSpec& spec) {
  ValidationReport report;
  std::set<std::string> seen;
  for (const auto& fn : device.functions) {
    const std::string subject = fn.id.empty() ? std::string("<unnamed>") : fn.id;
    if (fn.id.empty()) report.add(subject, "empty_id", "function id is empty");
    else if (!seen.insert(fn.id).second) report.add(subject, "duplicate_id", "duplicate function id '" + fn.id + "'");
    if (!(fn.importance >= 0.0) || !std::isfinite(fn.importance))
      report.add(subject, "negative_importance", "importance must be finite and >= 0");
    for (const auto& [criterion, minimum] : fn.requirements) {
      auto index = spec.index_of(criterion);
      if (!index) {
        report.add(subject, "unknown_criterion", "requirement on unknown criterion '" + criterion + "'");
        continue;
      }
      const Criterion& c = spec.criteria[*index];
      if (!(minimum >= c.scale_min && minimum <= c.scale_max))
        report.add(subject, "requirement_out_of_scale",
                   "requirement " + std::to_string(minimum) + " on '" + criterion + "' outside the scale");
    }
  }
  return report;
}

namespace detail {

inline bool meets(const Profile& projected, const CriteriaSpec& spec, const FunctionSpec& fn) {
  for (const auto& [criterion, minimum] : fn.requirements) {
    if (!spec.index_of(criterion))
      throw Error("function '" + fn.id + "' requires unknown criterion '" + criterion + "'");
    if (!(projected.scores.at(criterion) >= minimum)) return false;
  }
  return true;
}

inline double utilization(const Profile& projected, const CriteriaSpec& spec, const DeviceSpec& device) {
  double usable = 0.0;
  double total = 0.0;
  for (const auto& fn : device.functions) {
    total += fn.importance;
    if (meets(projected, spec, fn)) usable += fn.importance;
  }
  return total > 0.0 ? usable / total : 0.0;
}

}  // namespace detail

/// Capability only: the projected profile meets every minimum.
inline bool function_usable(const Profile& profile, const CriteriaSpec& spec, const FunctionSpec& fn, Horizon h) {
  return detail::meets(project(profile, spec, h), spec, fn);
}

/// Importance-weighted fraction of usable functions; 0 for a device without
/// (weighted) functions.
inline double utilization_score(const Profile& profile, const CriteriaSpec& spec, const DeviceSpec& device,
                                Horizon h) {
  return detail::utilization(project(profile, spec, h), spec, device);
}

inline CoverageReport population_coverage(std::span<const Profile> population, const CriteriaSpec& spec,
                                          const DeviceSpec& device, Horizon h) {
  if (population.empty()) throw Error("coverage of device '" + device.device_id + "' over an empty population");
  std::vector<Profile> projected;
  projected.reserve(population.size());
  for (const auto& p : population) projected.push_back(project(p, spec, h));

  CoverageReport report;
  for (const auto& fn : device.functions) {
    std::size_t able = 0;
    for (const auto& p : projected) able += detail::meets(p, spec, fn) ? 1 : 0;
    report.per_function[fn.id] = static_cast<double>(able) / static_cast<double>(projected.size());
  }
  for (const auto& p : projected) report.per_individual[p.id] = detail::utilization(p, spec, device);
  return report;
}

/// Splits the device's functions by population coverage >= min_coverage.
inline FunctionRecommendation recommend_functions(const CoverageReport& coverage, double min_coverage) {
  if (!(min_coverage >= 0.0 && min_coverage <= 1.0))
    throw Error("minimum coverage must lie in [0, 1], got " + std::to_string(min_coverage));
  FunctionRecommendation out;
  for (const auto& [id, fraction] : coverage.per_function)
    (fraction >= min_coverage ? out.recommended : out.excluded).push_back({id, fraction});
  auto order = [](const FunctionCoverage& a, const FunctionCoverage& b) {
    if (a.coverage != b.coverage) return a.coverage > b.coverage;
    return a.id < b.id;
  };
  std::sort(out.recommended.begin(), out.recommended.end(), order);
  std::sort(out.excluded.begin(), out.excluded.end(), order);
  return out;
}

inline FunctionRecommendation recommend_functions(std::span<const Profile> population, const CriteriaSpec& spec,
                                                  const DeviceSpec& device, Horizon h, double min_coverage) {
  return recommend_functions(population_coverage(population, spec, device, h), min_coverage);
}

}  // namespace teamfit
