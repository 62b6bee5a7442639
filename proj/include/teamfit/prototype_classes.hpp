#pragma once

// Prototype-centred fuzzy classes.
//
// A prototype holds the best achievable value of each quality for its class.
// Distance to it is one-sided: exceeding the prototype never counts against
// an individual. Membership degrees are absolute, so a profile may belong to
// several classes or to none.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "teamfit/core_model.hpp"
#include "teamfit/errors.hpp"

namespace teamfit {

enum class Metric { chebyshev, euclidean };
enum class PrototypeMode { ideal_point, centroid };

struct Prototype {
  std::string class_id;
  NormalizedProfile ideal;
  std::vector<double> weights;  // ordered as the CriteriaSpec

  bool operator==(const Prototype&) const = default;
};

struct ClassModel {
  std::vector<Prototype> prototypes;
  double membership_threshold = 0.5;
  Metric metric = Metric::chebyshev;

  const Prototype& prototype(const std::string& class_id) const {
    for (const auto& p : prototypes)
      if (p.class_id == class_id) return p;
    throw NotFoundError("unknown class '" + class_id + "'");
  }

  bool operator==(const ClassModel&) const = default;
};

struct MembershipReport {
  std::string profile_id;
  std::map<std::string, double> degrees;
  std::set<std::string> assigned;
  std::map<std::string, double> distances;

  double max_degree() const {
    double best = 0.0;
    for (const auto& [_, d] : degrees) best = std::max(best, d);
    return best;
  }
};

inline ValidationReport validate_prototype(const Prototype& proto, std::size_t dimension) {
  ValidationReport report;
  const std::string subject = proto.class_id.empty() ? std::string("<unnamed>") : proto.class_id;
  if (proto.class_id.empty()) report.add(subject, "empty_id", "class id is empty");
  if (proto.ideal.size() != dimension || proto.weights.size() != dimension)
    report.add(subject, "dimension_mismatch", "prototype dimension does not match the criteria");
  for (double v : proto.ideal.values)
    if (!(v >= 0.0 && v <= 1.0)) report.add(subject, "ideal_out_of_range", "ideal value outside [0, 1]");
  bool any_positive = false;
  for (double w : proto.weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) report.add(subject, "negative_weight", "weights must be finite and >= 0");
    any_positive = any_positive || w > 0.0;
  }
  if (!any_positive) report.add(subject, "zero_weights", "at least one weight must be positive");
  return report;
}

inline ValidationReport validate_class_model(const ClassModel& model, std::size_t dimension) {
  ValidationReport report;
  std::set<std::string> seen;
  for (const auto& proto : model.prototypes) {
    if (!seen.insert(proto.class_id).second)
      report.add(proto.class_id, "duplicate_id", "duplicate class id '" + proto.class_id + "'");
    report.merge(validate_prototype(proto, dimension));
  }
  if (!(model.membership_threshold > 0.0 && model.membership_threshold <= 1.0))
    report.add("membership_threshold", "threshold_out_of_range", "threshold must lie in (0, 1]");
  return report;
}

inline Prototype build_prototype(std::span<const NormalizedProfile> exemplars, PrototypeMode mode,
                                 std::string class_id, std::vector<double> weights) {
  if (exemplars.empty()) throw Error("class '" + class_id + "': cannot build a prototype from no exemplars");
  const std::size_t n = exemplars.front().size();
  for (const auto& e : exemplars)
    if (e.size() != n) throw Error("class '" + class_id + "': exemplars have mixed dimensions");

  std::vector<double> ideal(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    if (mode == PrototypeMode::ideal_point) {
      double best = exemplars.front().values[i];
      for (const auto& e : exemplars) best = std::max(best, e.values[i]);
      ideal[i] = best;
    } else {
      double sum = 0.0;
      for (const auto& e : exemplars) sum += e.values[i];
      ideal[i] = sum / static_cast<double>(exemplars.size());
    }
  }
  Prototype proto{class_id, {class_id, std::move(ideal)}, std::move(weights)};
  if (auto report = validate_prototype(proto, n); !report.ok())
    throw ValidationError("invalid prototype", std::move(report));
  return proto;
}

inline double distance(const NormalizedProfile& p, const Prototype& proto, Metric metric = Metric::chebyshev) {
  if (p.size() != proto.ideal.size() || p.size() != proto.weights.size())
    throw Error("dimension mismatch between profile '" + p.id + "' and class '" + proto.class_id + "'");
  double d = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double shortfall = proto.weights[i] * std::max(0.0, proto.ideal.values[i] - p.values[i]);
    if (metric == Metric::chebyshev) d = std::max(d, shortfall);
    else d += shortfall * shortfall;
  }
  return metric == Metric::chebyshev ? d : std::sqrt(d);
}

/// Distance of the all-zero profile: the largest distance any profile can have.
inline double max_distance(const Prototype& proto, Metric metric = Metric::chebyshev) {
  NormalizedProfile zero{"", std::vector<double>(proto.ideal.size(), 0.0)};
  return distance(zero, proto, metric);
}

inline double membership_degree(const NormalizedProfile& p, const Prototype& proto, Metric metric = Metric::chebyshev) {
  const double d_max = max_distance(proto, metric);
  if (d_max <= 0.0) return 1.0;
  return std::clamp(1.0 - distance(p, proto, metric) / d_max, 0.0, 1.0);
}

inline MembershipReport membership_degrees(const NormalizedProfile& p, const ClassModel& model) {
  MembershipReport report{p.id, {}, {}, {}};
  for (const auto& proto : model.prototypes) {
    const double degree = membership_degree(p, proto, model.metric);
    report.degrees[proto.class_id] = degree;
    report.distances[proto.class_id] = distance(p, proto, model.metric);
    if (degree >= model.membership_threshold) report.assigned.insert(proto.class_id);
  }
  return report;
}

/// Profiles no class claims, nearest-to-some-class first, ties by id.
inline std::vector<std::string> relevant_minorities(std::span<const NormalizedProfile> population,
                                                    const ClassModel& model) {
  std::vector<std::pair<double, std::string>> unassigned;
  for (const auto& p : population) {
    auto report = membership_degrees(p, model);
    if (report.assigned.empty()) unassigned.emplace_back(report.max_degree(), p.id);
  }
  std::sort(unassigned.begin(), unassigned.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });
  std::vector<std::string> ids;
  ids.reserve(unassigned.size());
  for (auto& [_, id] : unassigned) ids.push_back(std::move(id));
  return ids;
}

}  // namespace teamfit
