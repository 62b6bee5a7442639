#pragma once

// Analysis reports over a workspace, rendered as canonical JSON. The CLI's
// `--output json` and every HTTP 200 body come from these functions, so both
// surfaces emit the same bytes for the same parameters.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "teamfit/aggregation.hpp"
#include "teamfit/device_fit.hpp"
#include "teamfit/errors.hpp"
#include "teamfit/io_persistence.hpp"
#include "teamfit/projection_gap.hpp"
#include "teamfit/prototype_classes.hpp"
#include "teamfit/team_assembly.hpp"

namespace teamfit {

inline const char* combine_name(Combine c) { return c == Combine::coverage ? "coverage" : "mean"; }

inline Combine parse_combine(const std::string& s) {
  if (s == "coverage") return Combine::coverage;
  if (s == "mean") return Combine::mean;
  throw Error("combine must be 'coverage' or 'mean', got '" + s + "'");
}

inline const char* method_name(SelectionMethod m) {
  switch (m) {
    case SelectionMethod::exact:
      return "exact";
    case SelectionMethod::greedy:
      return "greedy";
    case SelectionMethod::automatic:
      return "auto";
  }
  return "auto";
}

inline SelectionMethod parse_method(const std::string& s) {
  if (s == "exact") return SelectionMethod::exact;
  if (s == "greedy") return SelectionMethod::greedy;
  if (s == "auto") return SelectionMethod::automatic;
  throw Error("method must be 'exact', 'greedy' or 'auto', got '" + s + "'");
}

inline Horizon checked_horizon(double t) {
  if (!(t >= 0.0) || !std::isfinite(t)) throw Error("horizon must be finite and >= 0, got " + std::to_string(t));
  return Horizon{t};
}

inline json violations_to_json(const ValidationReport& report) {
  json out = json::array();
  for (const auto& v : report.violations())
    out.push_back({{"subject", v.subject}, {"rule", v.rule}, {"message", v.message}});
  return out;
}

inline json values_by_criterion(const NormalizedProfile& p, const CriteriaSpec& spec) {
  json out = json::object();
  for (std::size_t i = 0; i < spec.size(); ++i) out[spec.criteria[i].id] = p.values[i];
  return out;
}

/// Choquet score and the Shapley-weighted mean of every profile, in population order.
inline json score_report(const Workspace& ws, const Capacity2Additive& capacity, const std::string& label, double horizon) {
  const Horizon h = checked_horizon(horizon);
  const DenseCapacity dense = DenseCapacity::bind(capacity, ws.spec);
  const ShapleyView view = shapley_view(capacity, ws.spec);
  WeightVector weights;
  for (const auto& c : ws.spec.criteria) weights.weights.push_back(view.shapley.at(c.id));

  json scores = json::array();
  for (const auto& p : ws.population) {
    const NormalizedProfile x = normalize_profile(project(p, ws.spec, h), ws.spec);
    scores.push_back({{"id", p.id}, {"choquet", choquet(x, dense)}, {"weighted_mean", weighted_mean(x, weights)}});
  }
  return {{"report", "score"}, {"capacity", label}, {"horizon", horizon}, {"scores", scores}};
}

/// Best first, ties by id. `rank` is shared by exactly equal scores.
inline json rank_report(const Workspace& ws, const Capacity2Additive& capacity, const std::string& label,
                        double horizon, std::optional<std::size_t> top = std::nullopt) {
  const auto ranking = rank_candidates(ws.population, ws.spec, capacity, checked_horizon(horizon));
  json rows = json::array();
  std::size_t rank = 0;
  for (std::size_t i = 0; i < ranking.size(); ++i) {
    if (top && i >= *top) break;
    if (i == 0 || ranking[i].score != ranking[i - 1].score) rank = i + 1;
    rows.push_back({{"rank", rank}, {"id", ranking[i].id}, {"score", ranking[i].score}});
  }
  return {{"report", "rank"}, {"capacity", label}, {"horizon", horizon}, {"ranking", rows}};
}

inline json classify_report(const Workspace& ws, const std::string& model_name, double horizon, bool minorities) {
  const ClassModel& model = ws.class_model(model_name);
  const Horizon h = checked_horizon(horizon);
  std::vector<NormalizedProfile> population;
  for (const auto& p : ws.population) population.push_back(normalize_profile(project(p, ws.spec, h), ws.spec));

  json memberships = json::array();
  for (const auto& x : population) {
    const MembershipReport m = membership_degrees(x, model);
    memberships.push_back({{"profile", m.profile_id},
                           {"degrees", m.degrees},
                           {"distances", m.distances},
                           {"assigned", std::vector<std::string>(m.assigned.begin(), m.assigned.end())}});
  }
  json out = {{"report", "classify"},
              {"model", model_name},
              {"threshold", model.membership_threshold},
              {"metric", metric_name(model.metric)},
              {"horizon", horizon},
              {"memberships", memberships}};
  if (minorities) out["minorities"] = relevant_minorities(population, model);
  return out;
}

inline json gap_report(const Workspace& ws, const std::string& model_name, const std::string& class_id,
                       const std::string& profile_id, std::optional<double> horizon) {
  const ClassModel& model = ws.class_model(model_name);
  const Profile& profile = ws.profile(profile_id);
  std::optional<Horizon> h;
  if (horizon) h = checked_horizon(*horizon);
  const GapReport gap = gap_analysis(profile, ws.spec, model, class_id, h);

  json out = {{"report", "gap"},
              {"model", model_name},
              {"class", gap.class_id},
              {"profile", gap.profile_id},
              {"threshold", model.membership_threshold},
              {"current_degree", gap.current_degree},
              {"deficits", gap.deficits},
              {"required", gap.required},
              {"time_to_ready", gap.time_to_ready ? json(*gap.time_to_ready) : json(nullptr)},
              {"motivation_lever", gap.motivation_lever}};
  if (horizon) {
    out["horizon"] = *horizon;
    out["reachable_within"] = *gap.reachable_within;
  }
  return out;
}

inline json team_report(const Workspace& ws, const Capacity2Additive& capacity, const std::string& label,
                        std::size_t k, Combine combine, SelectionMethod method, double horizon) {
  TeamQuery query{capacity, k, checked_horizon(horizon), combine, method};
  const TeamResult result = select_team(ws.population, ws.spec, query);
  return {{"report", "team"},
          {"capacity", label},
          {"k", k},
          {"combine", combine_name(combine)},
          {"method_requested", method_name(method)},
          {"method_used", method_name(result.method_used)},
          {"horizon", horizon},
          {"members", result.member_ids},
          {"team_vector", values_by_criterion(result.team_vector, ws.spec)},
          {"objective", result.objective}};
}

inline json device_report(const Workspace& ws, const std::string& device_name, double horizon, double min_coverage) {
  const DeviceSpec& device = ws.device(device_name);
  const CoverageReport coverage = population_coverage(ws.population, ws.spec, device, checked_horizon(horizon));
  const FunctionRecommendation rec = recommend_functions(coverage, min_coverage);
  auto rows = [](const std::vector<FunctionCoverage>& list) {
    json out = json::array();
    for (const auto& f : list) out.push_back({{"id", f.id}, {"coverage", f.coverage}});
    return out;
  };
  return {{"report", "device"},
          {"device", device_name},
          {"horizon", horizon},
          {"min_coverage", min_coverage},
          {"per_function", coverage.per_function},
          {"per_individual", coverage.per_individual},
          {"recommended", rows(rec.recommended)},
          {"excluded", rows(rec.excluded)}};
}

inline json shapley_report(const Workspace& ws, const std::string& capacity_name) {
  json out = shapley_to_json(shapley_view(ws.capacity(capacity_name), ws.spec));
  out["capacity"] = capacity_name;
  out["report"] = "shapley";
  return out;
}

inline json workspace_summary(const Workspace& ws) {
  json criteria = json::array();
  for (const auto& c : ws.spec.criteria) criteria.push_back(criterion_to_json(c));
  std::vector<std::string> ids;
  for (const auto& p : ws.population) ids.push_back(p.id);
  auto names = [](const auto& m) {
    std::vector<std::string> out;
    for (const auto& [name, _] : m) out.push_back(name);
    return out;
  };
  return {{"report", "workspace"},
          {"criteria", criteria},
          {"population", ids},
          {"capacities", names(ws.capacities)},
          {"class_models", names(ws.class_models)},
          {"devices", names(ws.devices)}};
}

inline json validation_report_json(const ValidationReport& report) {
  return {{"report", "validation"}, {"ok", report.ok()}, {"violations", violations_to_json(report)}};
}

}  // namespace teamfit
