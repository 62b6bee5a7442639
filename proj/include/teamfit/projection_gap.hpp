#pragma once

// Diachronic projection of profiles and upgrade-effort (gap) analysis.

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <string>

#include "teamfit/core_model.hpp"
#include "teamfit/errors.hpp"
#include "teamfit/prototype_classes.hpp"

namespace teamfit {

/// Time offset from now, in abstract periods.
struct Horizon {
  double delta_t = 0.0;
};

/// Competence grows linearly at rate x motivation and saturates at the top
/// of the scale. Any callable with this signature can stand in for it.
struct LinearGrowth {
  double operator()(double score, double rate, double motivation, double delta_t, double scale_max) const {
    return std::min(scale_max, score + rate * motivation * delta_t);
  }
};

template <typename Growth = LinearGrowth>
Profile project(const Profile& profile, const CriteriaSpec& spec, Horizon h, Growth growth = {}) {
  if (!(h.delta_t >= 0.0) || !std::isfinite(h.delta_t))
    throw Error("horizon must be finite and >= 0, got " + std::to_string(h.delta_t));
  if (auto report = validate_profile(profile, spec); !report.ok())
    throw ValidationError("invalid profile '" + profile.id + "'", std::move(report));
  if (h.delta_t == 0.0) return profile;

  Profile out = profile;
  for (const auto& c : spec.criteria) {
    double& score = out.scores.at(c.id);
    score = growth(score, profile.growth_rate(c.id), profile.motivation, h.delta_t, c.scale_max);
  }
  return out;
}

struct GapReport {
  std::string profile_id;
  std::string class_id;
  double current_degree = 0.0;
  std::map<std::string, double> deficits;  // raw score units
  std::map<std::string, double> required;  // raw score units
  std::optional<double> time_to_ready;     // nullopt: unreachable at current rates
  std::optional<bool> reachable_within;    // set when a horizon was queried
  /// Raising motivation to 1 would turn a blocked or too-slow gap into a reachable one.
  bool motivation_lever = false;
};

namespace detail {

inline std::optional<double> time_to_close(const std::map<std::string, double>& deficits, const Profile& profile,
                                           double motivation) {
  double worst = 0.0;
  for (const auto& [id, deficit] : deficits) {
    if (deficit <= 0.0) continue;
    const double speed = profile.growth_rate(id) * motivation;
    if (speed <= 0.0) return std::nullopt;
    worst = std::max(worst, deficit / speed);
  }
  return worst;
}

}  // namespace detail

/// Minimal per-criterion raw-score increase that makes the profile a member
/// of `class_id`, and the time needed to get there at current growth.
///
/// Under the one-sided Chebyshev distance, degree >= theta holds iff for every
/// criterion with w_i > 0:  x_i >= ideal_i - (1 - theta) d_max / w_i.
inline GapReport gap_analysis(const Profile& profile, const CriteriaSpec& spec, const ClassModel& model,
                              const std::string& class_id, std::optional<Horizon> h = std::nullopt) {
  const Prototype& proto = model.prototype(class_id);
  if (model.metric != Metric::chebyshev)
    throw Error("gap analysis requires the chebyshev metric (class model uses euclidean)");
  if (proto.weights.size() != spec.size()) throw Error("class '" + class_id + "' does not match the criteria");

  const NormalizedProfile current = normalize_profile(profile, spec);
  const double theta = model.membership_threshold;
  const double d_max = max_distance(proto);

  GapReport report;
  report.profile_id = profile.id;
  report.class_id = class_id;
  report.current_degree = membership_degree(current, proto);
  const bool member = report.current_degree >= theta;

  for (std::size_t i = 0; i < spec.size(); ++i) {
    const Criterion& c = spec.criteria[i];
    const double w = proto.weights[i];
    const double needed = w > 0.0 ? std::max(0.0, proto.ideal.values[i] - (1.0 - theta) * d_max / w) : 0.0;
    const double required_raw = c.denormalize(needed);
    report.required[c.id] = required_raw;
    report.deficits[c.id] = member ? 0.0 : std::max(0.0, required_raw - profile.scores.at(c.id));
  }

  report.time_to_ready = detail::time_to_close(report.deficits, profile, profile.motivation);
  if (h) report.reachable_within = report.time_to_ready && *report.time_to_ready <= h->delta_t;

  const bool blocked = !report.time_to_ready || (h && !*report.reachable_within);
  if (blocked && profile.motivation < 1.0) {
    auto boosted = detail::time_to_close(report.deficits, profile, 1.0);
    report.motivation_lever = boosted && (!h || *boosted <= h->delta_t);
  }
  return report;
}

}  // namespace teamfit
