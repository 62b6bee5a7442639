#pragma once

// Criteria, scales, qualitative levels and individual profiles.
//
// Raw scores live on per-criterion scales; every downstream computation
// works on the affine image of those scores in [0, 1].

#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "teamfit/errors.hpp"

namespace teamfit {

struct Level {
  std::string label;
  double score = 0.0;

  bool operator==(const Level&) const = default;
};

struct Criterion {
  std::string id;
  std::string label;
  double scale_min = 0.0;
  double scale_max = 1.0;
  std::vector<Level> levels;

  double span() const noexcept { return scale_max - scale_min; }
  double normalize(double raw) const noexcept { return (raw - scale_min) / span(); }
  double denormalize(double unit) const noexcept { return scale_min + unit * span(); }

  bool operator==(const Criterion&) const = default;
};

struct CriteriaSpec {
  std::vector<Criterion> criteria;

  std::size_t size() const noexcept { return criteria.size(); }

  std::optional<std::size_t> index_of(const std::string& id) const {
    for (std::size_t i = 0; i < criteria.size(); ++i)
      if (criteria[i].id == id) return i;
    return std::nullopt;
  }

  const Criterion& at(const std::string& id) const {
    if (auto i = index_of(id)) return criteria[*i];
    throw NotFoundError("unknown criterion '" + id + "'");
  }

  bool operator==(const CriteriaSpec&) const = default;
};

/// One individual: assessed scores (competences), growth per period
/// (potential) and a global motivation factor.
struct Profile {
  std::string id;
  std::map<std::string, double> scores;
  std::map<std::string, double> growth_rates;
  double motivation = 1.0;

  double growth_rate(const std::string& criterion) const {
    auto it = growth_rates.find(criterion);
    return it == growth_rates.end() ? 0.0 : it->second;
  }

  bool operator==(const Profile&) const = default;
};

/// Unit-interval values ordered as the governing CriteriaSpec.
struct NormalizedProfile {
  std::string id;
  std::vector<double> values;

  std::size_t size() const noexcept { return values.size(); }

  bool operator==(const NormalizedProfile&) const = default;
};

inline ValidationReport validate_criteria_spec(const CriteriaSpec& spec) {
  ValidationReport report;
  std::set<std::string> seen;
  for (const auto& c : spec.criteria) {
    const std::string subject = c.id.empty() ? std::string("<unnamed>") : c.id;
    if (c.id.empty()) report.add(subject, "empty_id", "criterion id is empty");
    else if (!seen.insert(c.id).second) report.add(subject, "duplicate_id", "duplicate id '" + c.id + "'");

    if (!std::isfinite(c.scale_min) || !std::isfinite(c.scale_max) || !(c.scale_min < c.scale_max)) {
      report.add(subject, "empty_scale",
                 "empty scale [" + std::to_string(c.scale_min) + ", " + std::to_string(c.scale_max) + "]");
    }

    std::set<std::string> labels;
    for (const auto& level : c.levels) {
      if (!labels.insert(level.label).second)
        report.add(subject, "duplicate_level", "duplicate level label '" + level.label + "'");
      if (!(level.score >= c.scale_min && level.score <= c.scale_max))
        report.add(subject, "level_out_of_scale",
                   "level '" + level.label + "' score " + std::to_string(level.score) + " outside the scale");
    }
  }
  return report;
}

inline ValidationReport validate_profile(const Profile& profile, const CriteriaSpec& spec) {
  ValidationReport report;
  const std::string& who = profile.id.empty() ? std::string("<unnamed>") : profile.id;
  if (profile.id.empty()) report.add(who, "empty_id", "profile id is empty");

  for (const auto& c : spec.criteria) {
    auto it = profile.scores.find(c.id);
    if (it == profile.scores.end()) {
      report.add(who, "missing_score", "no score for criterion '" + c.id + "'");
    } else if (!(it->second >= c.scale_min && it->second <= c.scale_max)) {
      report.add(who, "score_out_of_range",
                 "score " + std::to_string(it->second) + " for criterion '" + c.id + "' outside [" +
                     std::to_string(c.scale_min) + ", " + std::to_string(c.scale_max) + "]");
    }
  }
  for (const auto& [id, _] : profile.scores)
    if (!spec.index_of(id)) report.add(who, "unknown_criterion", "score for unknown criterion '" + id + "'");
  for (const auto& [id, rate] : profile.growth_rates) {
    if (!spec.index_of(id)) report.add(who, "unknown_criterion", "growth rate for unknown criterion '" + id + "'");
    if (!(rate >= 0.0) || !std::isfinite(rate))
      report.add(who, "negative_growth_rate", "growth rate for '" + id + "' must be finite and >= 0");
  }
  if (!(profile.motivation >= 0.0 && profile.motivation <= 1.0))
    report.add(who, "motivation_out_of_range",
               "motivation " + std::to_string(profile.motivation) + " outside [0, 1]");
  return report;
}

inline NormalizedProfile normalize_profile(const Profile& profile, const CriteriaSpec& spec) {
  NormalizedProfile out{profile.id, {}};
  out.values.reserve(spec.size());
  for (const auto& c : spec.criteria) {
    auto it = profile.scores.find(c.id);
    if (it == profile.scores.end())
      throw Error("profile '" + profile.id + "': missing score for criterion '" + c.id + "'");
    const double raw = it->second;
    if (!(raw >= c.scale_min && raw <= c.scale_max))
      throw Error("profile '" + profile.id + "': score " + std::to_string(raw) + " for criterion '" + c.id +
                  "' outside [" + std::to_string(c.scale_min) + ", " + std::to_string(c.scale_max) + "]");
    out.values.push_back(c.normalize(raw));
  }
  return out;
}

/// Inverse of normalize_profile; growth rates and motivation are not carried.
inline Profile denormalize_profile(const NormalizedProfile& values, const CriteriaSpec& spec) {
  if (values.size() != spec.size()) throw Error("dimension mismatch while denormalizing '" + values.id + "'");
  Profile out;
  out.id = values.id;
  for (std::size_t i = 0; i < spec.size(); ++i)
    out.scores[spec.criteria[i].id] = spec.criteria[i].denormalize(values.values[i]);
  return out;
}

inline double score_from_level(const Criterion& criterion, const std::string& label) {
  if (criterion.levels.empty())
    throw Error("criterion '" + criterion.id + "' has no qualitative levels");
  std::string available;
  for (const auto& level : criterion.levels) {
    if (level.label == label) return level.score;
    available += available.empty() ? level.label : ", " + level.label;
  }
  throw Error("criterion '" + criterion.id + "': unknown label '" + label + "' (available: " + available + ")");
}

}  // namespace teamfit
