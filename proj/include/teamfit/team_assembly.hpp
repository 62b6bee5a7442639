#pragma once

// Candidate ranking and team selection under a Choquet objective.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "teamfit/aggregation.hpp"
#include "teamfit/core_model.hpp"
#include "teamfit/errors.hpp"
#include "teamfit/projection_gap.hpp"

namespace teamfit {

enum class Combine { coverage, mean };
enum class SelectionMethod { exact, greedy, automatic };

inline constexpr std::uint64_t kExactSubsetLimit = 2'000'000;
inline constexpr std::uint64_t kAutoExactLimit = 100'000;

struct TeamQuery {
  Capacity2Additive capacity;
  std::size_t k = 1;
  Horizon horizon;
  Combine combine = Combine::coverage;
  SelectionMethod method = SelectionMethod::automatic;
};

struct TeamResult {
  std::vector<std::string> member_ids;  // ascending
  NormalizedProfile team_vector;
  double objective = 0.0;
  SelectionMethod method_used = SelectionMethod::exact;
};

struct RankedCandidate {
  std::string id;
  double score = 0.0;
};

/// C(n, k), saturating at UINT64_MAX.
inline std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    const std::uint64_t num = n - k + i;
    if (r > UINT64_MAX / num) return UINT64_MAX;
    r = r * num / i;  // exact: r * num is divisible by i at this step
  }
  return r;
}

inline NormalizedProfile team_vector(std::span<const NormalizedProfile> members, Combine combine) {
  if (members.empty()) throw Error("team vector of an empty team");
  const std::size_t n = members.front().size();
  NormalizedProfile out{"team", std::vector<double>(n, 0.0)};
  for (const auto& m : members) {
    if (m.size() != n) throw Error("team members have mixed dimensions");
    for (std::size_t i = 0; i < n; ++i) {
      if (combine == Combine::coverage) out.values[i] = std::max(out.values[i], m.values[i]);
      else out.values[i] += m.values[i];
    }
  }
  if (combine == Combine::mean)
    for (double& v : out.values) v /= static_cast<double>(members.size());
  return out;
}

namespace detail {

/// Projected, normalized population sorted by ascending id.
inline std::vector<NormalizedProfile> prepare_candidates(std::span<const Profile> population,
                                                         const CriteriaSpec& spec, Horizon h) {
  std::vector<NormalizedProfile> out;
  out.reserve(population.size());
  for (const auto& p : population) out.push_back(normalize_profile(project(p, spec, h), spec));
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
  for (std::size_t i = 1; i < out.size(); ++i)
    if (out[i].id == out[i - 1].id) throw Error("duplicate profile id '" + out[i].id + "'");
  return out;
}

inline double team_objective(const std::vector<NormalizedProfile>& candidates, const std::vector<std::size_t>& picks,
                             Combine combine, const DenseCapacity& capacity) {
  std::vector<NormalizedProfile> members;
  members.reserve(picks.size());
  for (std::size_t i : picks) members.push_back(candidates[i]);
  return choquet(team_vector(members, combine), capacity);
}

inline TeamResult make_result(const std::vector<NormalizedProfile>& candidates, std::vector<std::size_t> picks,
                              Combine combine, const DenseCapacity& capacity, SelectionMethod method) {
  std::sort(picks.begin(), picks.end());  // same member order, same sums, whichever method found the team
  std::vector<NormalizedProfile> members;
  TeamResult result;
  for (std::size_t i : picks) {
    members.push_back(candidates[i]);
    result.member_ids.push_back(candidates[i].id);
  }
  result.team_vector = team_vector(members, combine);
  result.objective = choquet(result.team_vector, capacity);
  result.method_used = method;
  return result;
}

inline void check_team_size(std::size_t k, std::size_t n) {
  if (k < 1) throw Error("team size k must be >= 1");
  if (k > n) throw Error("team size k = " + std::to_string(k) + " exceeds population size " + std::to_string(n));
}

}  // namespace detail

/// Choquet score of every candidate at the horizon; best first, ties by id.
inline std::vector<RankedCandidate> rank_candidates(std::span<const Profile> population, const CriteriaSpec& spec,
                                                    const Capacity2Additive& capacity, Horizon h) {
  const DenseCapacity dense = DenseCapacity::bind(capacity, spec);
  std::vector<RankedCandidate> ranking;
  for (const auto& c : detail::prepare_candidates(population, spec, h)) ranking.push_back({c.id, choquet(c, dense)});
  std::stable_sort(ranking.begin(), ranking.end(),
                   [](const RankedCandidate& a, const RankedCandidate& b) { return a.score > b.score; });
  return ranking;
}

/// Enumerates every k-subset in lexicographic order of ascending ids and
/// keeps the first best, which is the lexicographically smallest id tuple.
inline TeamResult select_team_exact(std::span<const Profile> population, const CriteriaSpec& spec,
                                    const TeamQuery& query) {
  const DenseCapacity dense = DenseCapacity::bind(query.capacity, spec);
  const auto candidates = detail::prepare_candidates(population, spec, query.horizon);
  const std::size_t n = candidates.size();
  const std::size_t k = query.k;
  detail::check_team_size(k, n);
  if (binomial(n, k) > kExactSubsetLimit)
    throw Error("C(" + std::to_string(n) + ", " + std::to_string(k) + ") exceeds " +
                std::to_string(kExactSubsetLimit) + " subsets; use the greedy method");

  std::vector<std::size_t> picks(k);
  for (std::size_t i = 0; i < k; ++i) picks[i] = i;
  std::vector<std::size_t> best = picks;
  double best_objective = detail::team_objective(candidates, picks, query.combine, dense);

  while (true) {
    std::size_t pos = k;
    while (pos > 0 && picks[pos - 1] == n - k + (pos - 1)) --pos;
    if (pos == 0) break;
    ++picks[pos - 1];
    for (std::size_t i = pos; i < k; ++i) picks[i] = picks[i - 1] + 1;
    const double objective = detail::team_objective(candidates, picks, query.combine, dense);
    if (objective > best_objective) {
      best_objective = objective;
      best = picks;
    }
  }
  return detail::make_result(candidates, best, query.combine, dense, SelectionMethod::exact);
}

/// Forward greedy: add the member that maximizes the augmented team's
/// objective, ties by ascending id, until k members.
inline TeamResult select_team_greedy(std::span<const Profile> population, const CriteriaSpec& spec,
                                     const TeamQuery& query) {
  const DenseCapacity dense = DenseCapacity::bind(query.capacity, spec);
  const auto candidates = detail::prepare_candidates(population, spec, query.horizon);
  detail::check_team_size(query.k, candidates.size());

  std::vector<std::size_t> picks;
  std::vector<bool> taken(candidates.size(), false);
  while (picks.size() < query.k) {
    std::size_t best = candidates.size();
    double best_objective = 0.0;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      if (taken[i]) continue;
      picks.push_back(i);
      const double objective = detail::team_objective(candidates, picks, query.combine, dense);
      picks.pop_back();
      if (best == candidates.size() || objective > best_objective) {
        best = i;
        best_objective = objective;
      }
    }
    taken[best] = true;
    picks.push_back(best);
  }
  return detail::make_result(candidates, picks, query.combine, dense, SelectionMethod::greedy);
}

/// Dispatches on query.method; `automatic` runs exact when C(n, k) is small enough.
inline TeamResult select_team(std::span<const Profile> population, const CriteriaSpec& spec, const TeamQuery& query) {
  switch (query.method) {
    case SelectionMethod::exact:
      return select_team_exact(population, spec, query);
    case SelectionMethod::greedy:
      return select_team_greedy(population, spec, query);
    case SelectionMethod::automatic:
      break;
  }
  return binomial(population.size(), query.k) <= kAutoExactLimit ? select_team_exact(population, spec, query)
                                                                   : select_team_greedy(population, spec, query);
}

}  // namespace teamfit
