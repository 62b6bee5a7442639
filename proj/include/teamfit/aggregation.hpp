#pragma once

// Weighted-mean and 2-additive Choquet aggregation.
//
// A 2-additive capacity is kept in Möbius form: per-criterion masses m_i and
// pairwise interaction masses m_ij. Its Choquet integral is
//
//     C(x) = sum_i m_i x_i + sum_{i<j} m_ij min(x_i, x_j)
//
// The capacity is a fuzzy measure iff
//     sum_i m_i + sum_{i<j} m_ij = 1                   (normalization)
//     m_i + sum_{j != i} min(0, m_ij) >= 0  for all i   (monotonicity)
//
// Shapley importance and interaction indices reparameterize the same object:
//     phi_i = m_i + 1/2 sum_{j != i} m_ij,   I_ij = m_ij.

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstddef>
#include <map>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "teamfit/core_model.hpp"
#include "teamfit/errors.hpp"

namespace teamfit {

inline constexpr double kCapacityTolerance = 1e-9;

/// Unordered criterion pair, stored with first < second.
struct CriterionPair {
  std::string first;
  std::string second;

  static CriterionPair of(std::string a, std::string b) {
    if (b < a) std::swap(a, b);
    return {std::move(a), std::move(b)};
  }

  std::string name() const { return first + "," + second; }

  auto operator<=>(const CriterionPair&) const = default;
  bool operator==(const CriterionPair&) const = default;
};

struct Capacity2Additive {
  std::map<std::string, double> singletons;
  std::map<CriterionPair, double> pairs;

  bool operator==(const Capacity2Additive&) const = default;
};

struct ShapleyView {
  std::map<std::string, double> shapley;
  std::map<CriterionPair, double> interactions;

  bool operator==(const ShapleyView&) const = default;
};

/// Convex weights ordered as the governing CriteriaSpec.
struct WeightVector {
  std::vector<double> weights;
};

namespace detail {

inline void check_capacity_ids(const Capacity2Additive& capacity, const CriteriaSpec& spec) {
  for (const auto& [id, _] : capacity.singletons)
    if (!spec.index_of(id)) throw Error("capacity references unknown criterion '" + id + "'");
  for (const auto& [pair, _] : capacity.pairs) {
    if (!spec.index_of(pair.first)) throw Error("capacity references unknown criterion '" + pair.first + "'");
    if (!spec.index_of(pair.second)) throw Error("capacity references unknown criterion '" + pair.second + "'");
  }
}

}  // namespace detail

/// Lists every broken capacity rule. Unknown criterion ids are an input
/// error, not a violation, and throw.
inline ValidationReport validate_capacity(const Capacity2Additive& capacity, const CriteriaSpec& spec) {
  detail::check_capacity_ids(capacity, spec);
  ValidationReport report;

  double total = 0.0;
  for (const auto& [_, m] : capacity.singletons) total += m;
  for (const auto& [pair, m] : capacity.pairs) {
    total += m;
    if (pair.first == pair.second)
      report.add(pair.name(), "pair_not_distinct", "interaction pair must join two distinct criteria");
    if (!std::isfinite(m)) report.add(pair.name(), "not_finite", "interaction mass is not finite");
  }
  if (!(std::abs(total - 1.0) <= kCapacityTolerance))
    report.add("capacity", "normalization",
               "masses sum to " + std::to_string(total) + " (residual " + std::to_string(total - 1.0) + ")");

  for (const auto& c : spec.criteria) {
    auto it = capacity.singletons.find(c.id);
    double slack = it == capacity.singletons.end() ? 0.0 : it->second;
    for (const auto& [pair, m] : capacity.pairs)
      if (pair.first != pair.second && (pair.first == c.id || pair.second == c.id)) slack += std::min(0.0, m);
    if (!(slack >= -kCapacityTolerance))
      report.add(c.id, "monotonicity",
                 "criterion " + c.id + ": m_i + sum of negative interactions = " + std::to_string(slack) + " < 0");
  }
  return report;
}

/// Index-aligned, validated capacity used for evaluation. Construction
/// through `bind` guarantees the capacity invariants hold.
class DenseCapacity {
 public:
  static DenseCapacity bind(const Capacity2Additive& capacity, const CriteriaSpec& spec) {
    if (auto report = validate_capacity(capacity, spec); !report.ok())
      throw ValidationError("invalid capacity", std::move(report));
    DenseCapacity dense(spec.size());
    for (const auto& [id, m] : capacity.singletons) dense.singletons_[*spec.index_of(id)] = m;
    for (const auto& [pair, m] : capacity.pairs) {
      const std::size_t i = *spec.index_of(pair.first);
      const std::size_t j = *spec.index_of(pair.second);
      dense.interactions_[i * dense.n_ + j] = m;
      dense.interactions_[j * dense.n_ + i] = m;
    }
    return dense;
  }

  std::size_t size() const noexcept { return n_; }
  double singleton(std::size_t i) const noexcept { return singletons_[i]; }
  double interaction(std::size_t i, std::size_t j) const noexcept { return interactions_[i * n_ + j]; }

  /// Capacity value of a coalition given as a membership mask.
  double value(const std::vector<bool>& coalition) const {
    double v = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
      if (!coalition[i]) continue;
      v += singletons_[i];
      for (std::size_t j = i + 1; j < n_; ++j)
        if (coalition[j]) v += interactions_[i * n_ + j];
    }
    return v;
  }

  /// Additive part as a weight vector (m_i), meaningful when interactions vanish.
  WeightVector additive_weights() const { return {singletons_}; }

 private:
  explicit DenseCapacity(std::size_t n) : n_(n), singletons_(n, 0.0), interactions_(n * n, 0.0) {}

  std::size_t n_;
  std::vector<double> singletons_;
  std::vector<double> interactions_;
};

inline ValidationReport validate_weights(const WeightVector& w) {
  ValidationReport report;
  double total = 0.0;
  for (std::size_t i = 0; i < w.weights.size(); ++i) {
    if (!(w.weights[i] >= 0.0)) report.add("weight " + std::to_string(i), "negative_weight", "weight must be >= 0");
    total += w.weights[i];
  }
  if (!(std::abs(total - 1.0) <= kCapacityTolerance))
    report.add("weights", "normalization", "weights sum to " + std::to_string(total));
  return report;
}

inline double weighted_mean(std::span<const double> x, const WeightVector& w) {
  if (x.size() != w.weights.size())
    throw Error("dimension mismatch: " + std::to_string(x.size()) + " values, " +
                std::to_string(w.weights.size()) + " weights");
  if (auto report = validate_weights(w); !report.ok()) throw ValidationError("invalid weights", std::move(report));
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += w.weights[i] * x[i];
  return s;
}

inline double weighted_mean(const NormalizedProfile& x, const WeightVector& w) { return weighted_mean(x.values, w); }

/// Möbius-form evaluation.
inline double choquet(std::span<const double> x, const DenseCapacity& capacity) {
  const std::size_t n = capacity.size();
  if (x.size() != n)
    throw Error("dimension mismatch: " + std::to_string(x.size()) + " values, capacity over " + std::to_string(n));
  // additive and interaction parts summed apart so mirrored profiles tie exactly
  double additive = 0.0, interactions = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    additive += capacity.singleton(i) * x[i];
    for (std::size_t j = i + 1; j < n; ++j) interactions += capacity.interaction(i, j) * std::min(x[i], x[j]);
  }
  return additive + interactions;
}

inline double choquet(const NormalizedProfile& x, const DenseCapacity& capacity) { return choquet(x.values, capacity); }

/// Sorting-based Choquet integral over the full capacity set function.
/// Independent of the Möbius shortcut; used to cross-check `choquet`.
inline double choquet_oracle(std::span<const double> x, const DenseCapacity& capacity) {
  const std::size_t n = capacity.size();
  if (x.size() != n)
    throw Error("dimension mismatch: " + std::to_string(x.size()) + " values, capacity over " + std::to_string(n));
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });

  std::vector<bool> upper(n, true);  // A_k: criteria at or above the k-th smallest
  double previous = 0.0;
  double s = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double current = x[order[k]];
    s += (current - previous) * capacity.value(upper);
    previous = current;
    upper[order[k]] = false;
  }
  return s;
}

inline double choquet_oracle(const NormalizedProfile& x, const DenseCapacity& capacity) {
  return choquet_oracle(x.values, capacity);
}

inline ShapleyView shapley_view(const Capacity2Additive& capacity, const CriteriaSpec& spec) {
  if (auto report = validate_capacity(capacity, spec); !report.ok())
    throw ValidationError("invalid capacity", std::move(report));
  ShapleyView view;
  for (const auto& c : spec.criteria) {
    auto it = capacity.singletons.find(c.id);
    view.shapley[c.id] = it == capacity.singletons.end() ? 0.0 : it->second;
  }
  for (const auto& [pair, m] : capacity.pairs) {
    view.shapley[pair.first] += 0.5 * m;
    view.shapley[pair.second] += 0.5 * m;
    view.interactions[pair] = m;
  }
  return view;
}

/// Inverse of shapley_view. A Shapley view may describe a non-monotone
/// set function; such views are rejected with the validation report.
inline Capacity2Additive capacity_from_shapley(const ShapleyView& view, const CriteriaSpec& spec) {
  for (const auto& [id, _] : view.shapley)
    if (!spec.index_of(id)) throw Error("shapley view references unknown criterion '" + id + "'");

  double phi_total = 0.0;
  for (const auto& [_, phi] : view.shapley) phi_total += phi;
  if (!(std::abs(phi_total - 1.0) <= kCapacityTolerance)) {
    ValidationReport report;
    report.add("shapley", "normalization", "Shapley values sum to " + std::to_string(phi_total));
    throw ValidationError("invalid Shapley view", std::move(report));
  }

  Capacity2Additive capacity;
  for (const auto& c : spec.criteria) {
    auto it = view.shapley.find(c.id);
    capacity.singletons[c.id] = it == view.shapley.end() ? 0.0 : it->second;
  }
  for (const auto& [pair, interaction] : view.interactions) {
    capacity.singletons[pair.first] -= 0.5 * interaction;
    capacity.singletons[pair.second] -= 0.5 * interaction;
    capacity.pairs[pair] = interaction;
  }
  if (auto report = validate_capacity(capacity, spec); !report.ok())
    throw ValidationError("Shapley view does not describe a monotone capacity", std::move(report));
  return capacity;
}

}  // namespace teamfit
