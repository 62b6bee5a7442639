#pragma once

// Workspace JSON documents and profile CSV import.
//
// Serialization is canonical: object keys are sorted, arrays keep domain
// order, numbers use the shortest representation that reads back to the
// same double. Saving the same workspace twice yields identical bytes.

#include <charconv>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <utility>
#include <vector>

#include <json.hpp>

#include "teamfit/aggregation.hpp"
#include "teamfit/core_model.hpp"
#include "teamfit/device_fit.hpp"
#include "teamfit/errors.hpp"
#include "teamfit/prototype_classes.hpp"

namespace teamfit {

using json = nlohmann::json;

inline constexpr int kFormatVersion = 1;

struct Workspace {
  CriteriaSpec spec;
  std::vector<Profile> population;
  std::map<std::string, Capacity2Additive> capacities;
  std::map<std::string, ClassModel> class_models;
  std::map<std::string, DeviceSpec> devices;

  const Profile& profile(const std::string& id) const {
    for (const auto& p : population)
      if (p.id == id) return p;
    throw NotFoundError("unknown profile '" + id + "'");
  }
  const Capacity2Additive& capacity(const std::string& name) const { return lookup(capacities, name, "capacity"); }
  const ClassModel& class_model(const std::string& name) const { return lookup(class_models, name, "class model"); }
  const DeviceSpec& device(const std::string& name) const { return lookup(devices, name, "device"); }

  bool operator==(const Workspace&) const = default;

 private:
  template <typename T>
  static const T& lookup(const std::map<std::string, T>& m, const std::string& name, const char* kind) {
    auto it = m.find(name);
    if (it == m.end()) throw NotFoundError(std::string("unknown ") + kind + " '" + name + "'");
    return it->second;
  }
};

/// Canonical text of a JSON value: two-space indent, trailing newline.
inline std::string canonical_dump(const json& j) { return j.dump(2) + "\n"; }

// ---------------------------------------------------------------------------
// Strict field access with contextual error messages.

class FieldReader {
 public:
  FieldReader(const json& object, std::string context) : object_(object), context_(std::move(context)) {
    if (!object_.is_object()) fail("expected a JSON object");
  }

  bool has(const std::string& key) const { return object_.contains(key); }

  const json& raw(const std::string& key) {
    seen_.insert(key);
    if (!object_.contains(key)) fail("missing field '" + key + "'");
    return object_.at(key);
  }

  double number(const std::string& key) {
    const json& v = raw(key);
    if (!v.is_number()) fail("field '" + key + "' must be a number");
    return v.get<double>();
  }

  double number_or(const std::string& key, double fallback) { return has(key) ? number(key) : (seen_.insert(key), fallback); }

  std::string string(const std::string& key) {
    const json& v = raw(key);
    if (!v.is_string()) fail("field '" + key + "' must be a string");
    return v.get<std::string>();
  }

  std::string string_or(const std::string& key, std::string fallback) {
    return has(key) ? string(key) : (seen_.insert(key), std::move(fallback));
  }

  std::map<std::string, double> number_map(const std::string& key) {
    const json& v = raw(key);
    if (!v.is_object()) fail("field '" + key + "' must be an object of numbers");
    std::map<std::string, double> out;
    for (auto it = v.begin(); it != v.end(); ++it) {
      if (!it.value().is_number()) fail("field '" + key + "." + it.key() + "' must be a number");
      out[it.key()] = it.value().get<double>();
    }
    return out;
  }

  std::map<std::string, double> number_map_or_empty(const std::string& key) {
    return has(key) ? number_map(key) : (seen_.insert(key), std::map<std::string, double>{});
  }

  /// Rejects any field that was never read.
  void finish() const {
    for (auto it = object_.begin(); it != object_.end(); ++it)
      if (!seen_.count(it.key())) fail("unknown field '" + it.key() + "'");
  }

  [[noreturn]] void fail(const std::string& message) const { throw Error(context_ + ": " + message); }
  const std::string& context() const { return context_; }

 private:
  const json& object_;
  std::string context_;
  std::set<std::string> seen_;
};

// ---------------------------------------------------------------------------
// Domain object <-> JSON

inline json criterion_to_json(const Criterion& c) {
  json levels = json::array();
  for (const auto& l : c.levels) levels.push_back({{"label", l.label}, {"score", l.score}});
  return {{"id", c.id}, {"label", c.label}, {"scale_min", c.scale_min}, {"scale_max", c.scale_max}, {"levels", levels}};
}

inline Criterion criterion_from_json(const json& j, const std::string& context) {
  FieldReader r(j, context);
  Criterion c;
  c.id = r.string("id");
  c.label = r.string_or("label", c.id);
  c.scale_min = r.number("scale_min");
  c.scale_max = r.number("scale_max");
  if (r.has("levels")) {
    const json& levels = r.raw("levels");
    if (!levels.is_array()) r.fail("field 'levels' must be an array");
    for (std::size_t i = 0; i < levels.size(); ++i) {
      FieldReader lr(levels[i], context + ".levels[" + std::to_string(i) + "]");
      Level level{lr.string("label"), lr.number("score")};
      lr.finish();
      c.levels.push_back(std::move(level));
    }
  }
  r.finish();
  return c;
}

inline json profile_to_json(const Profile& p) {
  return {{"id", p.id}, {"scores", p.scores}, {"growth_rates", p.growth_rates}, {"motivation", p.motivation}};
}

inline Profile profile_from_json(const json& j, const std::string& context) {
  FieldReader r(j, context);
  Profile p;
  p.id = r.string("id");
  p.scores = r.number_map("scores");
  p.growth_rates = r.number_map_or_empty("growth_rates");
  p.motivation = r.number_or("motivation", 1.0);
  r.finish();
  return p;
}

inline json pairs_to_json(const std::map<CriterionPair, double>& pairs) {
  json out = json::array();
  for (const auto& [pair, value] : pairs) out.push_back({{"criteria", {pair.first, pair.second}}, {"value", value}});
  return out;
}

inline std::map<CriterionPair, double> pairs_from_json(const json& j, const std::string& context) {
  if (!j.is_array()) throw Error(context + ": expected an array of pairs");
  std::map<CriterionPair, double> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string where = context + "[" + std::to_string(i) + "]";
    FieldReader r(j[i], where);
    const json& ids = r.raw("criteria");
    if (!ids.is_array() || ids.size() != 2 || !ids[0].is_string() || !ids[1].is_string())
      r.fail("field 'criteria' must be an array of two criterion ids");
    auto pair = CriterionPair::of(ids[0].get<std::string>(), ids[1].get<std::string>());
    const double value = r.number("value");
    r.finish();
    if (!out.emplace(pair, value).second) throw Error(where + ": pair {" + pair.name() + "} listed twice");
  }
  return out;
}

inline json capacity_to_json(const Capacity2Additive& c) {
  return {{"singletons", c.singletons}, {"pairs", pairs_to_json(c.pairs)}};
}

inline Capacity2Additive capacity_from_json(const json& j, const std::string& context) {
  FieldReader r(j, context);
  Capacity2Additive c;
  c.singletons = r.number_map("singletons");
  if (r.has("pairs")) c.pairs = pairs_from_json(r.raw("pairs"), context + ".pairs");
  r.finish();
  return c;
}

inline json shapley_to_json(const ShapleyView& v) {
  return {{"shapley", v.shapley}, {"interactions", pairs_to_json(v.interactions)}};
}

inline ShapleyView shapley_from_json(const json& j, const std::string& context) {
  FieldReader r(j, context);
  ShapleyView v;
  v.shapley = r.number_map("shapley");
  if (r.has("interactions")) v.interactions = pairs_from_json(r.raw("interactions"), context + ".interactions");
  r.finish();
  return v;
}

inline const char* metric_name(Metric m) { return m == Metric::chebyshev ? "chebyshev" : "euclidean"; }

inline json class_model_to_json(const ClassModel& model, const CriteriaSpec& spec) {
  json prototypes = json::array();
  for (const auto& proto : model.prototypes) {
    json ideal = json::object();
    json weights = json::object();
    for (std::size_t i = 0; i < spec.size() && i < proto.ideal.size(); ++i) {
      ideal[spec.criteria[i].id] = proto.ideal.values[i];
      weights[spec.criteria[i].id] = proto.weights[i];
    }
    prototypes.push_back({{"class_id", proto.class_id}, {"ideal", ideal}, {"weights", weights}});
  }
  return {{"membership_threshold", model.membership_threshold},
          {"metric", metric_name(model.metric)},
          {"prototypes", prototypes}};
}

inline ClassModel class_model_from_json(const json& j, const CriteriaSpec& spec, const std::string& context) {
  FieldReader r(j, context);
  ClassModel model;
  model.membership_threshold = r.number_or("membership_threshold", 0.5);
  const std::string metric = r.string_or("metric", "chebyshev");
  if (metric == "chebyshev") model.metric = Metric::chebyshev;
  else if (metric == "euclidean") model.metric = Metric::euclidean;
  else r.fail("field 'metric' must be 'chebyshev' or 'euclidean', got '" + metric + "'");

  const json& prototypes = r.raw("prototypes");
  if (!prototypes.is_array()) r.fail("field 'prototypes' must be an array");
  for (std::size_t k = 0; k < prototypes.size(); ++k) {
    FieldReader pr(prototypes[k], context + ".prototypes[" + std::to_string(k) + "]");
    Prototype proto;
    proto.class_id = pr.string("class_id");
    const auto ideal = pr.number_map("ideal");
    const bool has_weights = pr.has("weights");
    const auto weights = pr.number_map_or_empty("weights");
    pr.finish();
    const std::string where = pr.context() + " '" + proto.class_id + "'";
    for (const auto& [id, _] : ideal)
      if (!spec.index_of(id)) throw Error(where + ": unknown criterion '" + id + "' in ideal");
    for (const auto& [id, _] : weights)
      if (!spec.index_of(id)) throw Error(where + ": unknown criterion '" + id + "' in weights");
    proto.ideal.id = proto.class_id;
    for (const auto& c : spec.criteria) {
      auto it = ideal.find(c.id);
      if (it == ideal.end()) throw Error(where + ": ideal has no value for criterion '" + c.id + "'");
      proto.ideal.values.push_back(it->second);
      auto w = weights.find(c.id);
      proto.weights.push_back(w != weights.end() ? w->second : (has_weights ? 0.0 : 1.0));
    }
    model.prototypes.push_back(std::move(proto));
  }
  r.finish();
  return model;
}

inline json device_to_json(const DeviceSpec& d) {
  json functions = json::array();
  for (const auto& fn : d.functions)
    functions.push_back(
        {{"id", fn.id}, {"label", fn.label}, {"requirements", fn.requirements}, {"importance", fn.importance}});
  return {{"functions", functions}};
}

inline DeviceSpec device_from_json(const json& j, const std::string& name, const std::string& context) {
  FieldReader r(j, context);
  DeviceSpec d;
  d.device_id = name;
  const json& functions = r.raw("functions");
  if (!functions.is_array()) r.fail("field 'functions' must be an array");
  for (std::size_t k = 0; k < functions.size(); ++k) {
    FieldReader fr(functions[k], context + ".functions[" + std::to_string(k) + "]");
    FunctionSpec fn;
    fn.id = fr.string("id");
    fn.label = fr.string_or("label", fn.id);
    fn.requirements = fr.number_map_or_empty("requirements");
    fn.importance = fr.number_or("importance", 1.0);
    fr.finish();
    d.functions.push_back(std::move(fn));
  }
  r.finish();
  return d;
}

// ---------------------------------------------------------------------------
// Workspace

inline ValidationReport validate_workspace(const Workspace& ws) {
  ValidationReport report;
  report.merge(validate_criteria_spec(ws.spec), "criteria");

  std::set<std::string> ids;
  for (const auto& p : ws.population) {
    if (!ids.insert(p.id).second) report.add("population/" + p.id, "duplicate_id", "duplicate profile id '" + p.id + "'");
    report.merge(validate_profile(p, ws.spec), "population");
  }

  for (const auto& [name, capacity] : ws.capacities) {
    bool known = true;
    auto check = [&](const std::string& id) {
      if (!ws.spec.index_of(id)) {
        report.add("capacities/" + name, "unknown_criterion", "capacity references unknown criterion '" + id + "'");
        known = false;
      }
    };
    for (const auto& [id, _] : capacity.singletons) check(id);
    for (const auto& [pair, _] : capacity.pairs) {
      check(pair.first);
      check(pair.second);
    }
    if (known) report.merge(validate_capacity(capacity, ws.spec), "capacities/" + name);
  }

  for (const auto& [name, model] : ws.class_models)
    report.merge(validate_class_model(model, ws.spec.size()), "class_models/" + name);
  for (const auto& [name, device] : ws.devices) report.merge(validate_device(device, ws.spec), "devices/" + name);
  return report;
}

inline json workspace_to_json(const Workspace& ws) {
  json criteria = json::array();
  for (const auto& c : ws.spec.criteria) criteria.push_back(criterion_to_json(c));
  json population = json::array();
  for (const auto& p : ws.population) population.push_back(profile_to_json(p));
  json capacities = json::object();
  for (const auto& [name, c] : ws.capacities) capacities[name] = capacity_to_json(c);
  json models = json::object();
  for (const auto& [name, m] : ws.class_models) models[name] = class_model_to_json(m, ws.spec);
  json devices = json::object();
  for (const auto& [name, d] : ws.devices) devices[name] = device_to_json(d);
  return {{"format_version", kFormatVersion}, {"criteria", criteria},     {"population", population},
          {"capacities", capacities},         {"class_models", models}, {"devices", devices}};
}

inline std::string serialize_workspace(const Workspace& ws) { return canonical_dump(workspace_to_json(ws)); }

namespace detail {

inline std::string position_of(std::string_view text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t column = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(column);
}

template <typename F>
void for_each_named(FieldReader& r, const std::string& key, const std::string& context, F&& f) {
  if (!r.has(key)) return;
  const json& section = r.raw(key);
  if (!section.is_object()) r.fail("field '" + key + "' must be an object keyed by name");
  for (auto it = section.begin(); it != section.end(); ++it) f(it.key(), it.value(), context + "." + key + "." + it.key());
}

}  // namespace detail

/// Parses and fully validates a workspace document. `source` names the
/// origin (file path) in error messages.
inline Workspace parse_workspace(const std::string& text, const std::string& source = "<workspace>") {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(source + ": syntax error at " + detail::position_of(text, e.byte) + ": " + e.what());
  }

  FieldReader r(doc, source);
  const json& version = r.raw("format_version");
  if (!version.is_number_integer() || version.get<int>() != kFormatVersion)
    r.fail("unsupported format_version (expected " + std::to_string(kFormatVersion) + ")");

  Workspace ws;
  const json& criteria = r.raw("criteria");
  if (!criteria.is_array()) r.fail("field 'criteria' must be an array");
  for (std::size_t i = 0; i < criteria.size(); ++i)
    ws.spec.criteria.push_back(criterion_from_json(criteria[i], source + ": criteria[" + std::to_string(i) + "]"));
  if (auto report = validate_criteria_spec(ws.spec); !report.ok())
    throw ValidationError(source + ": invalid criteria", std::move(report));

  if (r.has("population")) {
    const json& population = r.raw("population");
    if (!population.is_array()) r.fail("field 'population' must be an array");
    for (std::size_t i = 0; i < population.size(); ++i)
      ws.population.push_back(profile_from_json(population[i], source + ": population[" + std::to_string(i) + "]"));
  }

  detail::for_each_named(r, "capacities", source, [&](const std::string& name, const json& j, const std::string& ctx) {
    ws.capacities[name] = capacity_from_json(j, ctx);
  });
  detail::for_each_named(r, "class_models", source, [&](const std::string& name, const json& j, const std::string& ctx) {
    ws.class_models[name] = class_model_from_json(j, ws.spec, ctx);
  });
  detail::for_each_named(r, "devices", source, [&](const std::string& name, const json& j, const std::string& ctx) {
    ws.devices[name] = device_from_json(j, name, ctx);
  });
  r.finish();

  if (auto report = validate_workspace(ws); !report.ok())
    throw ValidationError(source + ": invalid workspace", std::move(report));
  return ws;
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

inline Workspace load_workspace(const std::string& path) { return parse_workspace(read_text_file(path), path); }

inline void save_workspace(const Workspace& ws, const std::string& path) {
  if (auto report = validate_workspace(ws); !report.ok()) throw ValidationError("refusing to save", std::move(report));
  const std::string text = serialize_workspace(ws);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write '" + path + "'");
  out << text;
  out.flush();
  if (!out) throw Error("failed writing '" + path + "'");
}

// ---------------------------------------------------------------------------
// Profile CSV: id,score:<crit>...[,rate:<crit>...][,motivation]

namespace detail {

/// RFC 4180 records. Quoted fields may contain commas, quotes ("") and newlines.
inline std::vector<std::vector<std::string>> parse_csv_records(std::string_view text) {
  if (text.starts_with("\xEF\xBB\xBF")) text.remove_prefix(3);
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  bool quoted = false;
  bool field_started = false;
  std::size_t line = 1;

  auto end_field = [&] {
    record.push_back(std::move(field));
    field.clear();
    field_started = false;
  };
  auto end_record = [&] {
    end_field();
    if (!(record.size() == 1 && record[0].empty())) records.push_back(std::move(record));
    record.clear();
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    const char ch = text[i];
    if (quoted) {
      if (ch == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        if (ch == '\n') ++line;
        field += ch;
      }
      continue;
    }
    if (ch == '"' && !field_started && field.empty()) {
      quoted = true;
      field_started = true;
    } else if (ch == ',') {
      end_field();
    } else if (ch == '\r' && i + 1 < text.size() && text[i + 1] == '\n') {
      // CRLF: handled on '\n'
    } else if (ch == '\n') {
      end_record();
      ++line;
    } else {
      field += ch;
      field_started = true;
    }
  }
  if (quoted) throw Error("unterminated quoted field near line " + std::to_string(line));
  if (!field.empty() || !record.empty()) end_record();
  return records;
}

inline bool parse_number(const std::string& cell, double& out) {
  std::string_view s = cell;
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  if (s.empty()) return false;
  if (s.front() == '+') s.remove_prefix(1);
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size() && std::isfinite(out);
}

inline bool is_blank(const std::string& cell) { return cell.find_first_not_of(" \t") == std::string::npos; }

}  // namespace detail

inline std::vector<Profile> parse_profiles_csv(const std::string& text, const CriteriaSpec& spec,
                                               const std::string& source = "<csv>") {
  const auto records = detail::parse_csv_records(text);
  if (records.empty()) throw Error(source + ": missing header row");

  enum class Kind { id, score, rate, motivation };
  struct Column {
    Kind kind;
    std::string criterion;
  };
  std::vector<Column> columns;
  std::set<std::string> seen;
  bool has_id = false;
  for (const auto& name : records.front()) {
    if (!seen.insert(name).second) throw Error(source + ": duplicate column '" + name + "'");
    if (name == "id") {
      columns.push_back({Kind::id, {}});
      has_id = true;
    } else if (name == "motivation") {
      columns.push_back({Kind::motivation, {}});
    } else if (name.starts_with("score:") || name.starts_with("rate:")) {
      const bool score = name.starts_with("score:");
      std::string criterion = name.substr(score ? 6 : 5);
      if (!spec.index_of(criterion)) throw Error(source + ": column '" + name + "' names unknown criterion");
      columns.push_back({score ? Kind::score : Kind::rate, std::move(criterion)});
    } else {
      throw Error(source + ": unknown column '" + name + "'");
    }
  }
  if (!has_id) throw Error(source + ": missing 'id' column");
  for (const auto& c : spec.criteria)
    if (!seen.count("score:" + c.id)) throw Error(source + ": missing column 'score:" + c.id + "'");

  std::vector<Profile> profiles;
  std::set<std::string> ids;
  ValidationReport report;
  for (std::size_t row = 1; row < records.size(); ++row) {
    const auto& cells = records[row];
    const std::string where = source + ": row " + std::to_string(row + 1);
    if (cells.size() != columns.size())
      throw Error(where + ": expected " + std::to_string(columns.size()) + " cells, found " +
                  std::to_string(cells.size()));
    Profile p;
    for (std::size_t col = 0; col < columns.size(); ++col) {
      const Column& column = columns[col];
      const std::string& cell = cells[col];
      if (column.kind == Kind::id) {
        p.id = cell;
        continue;
      }
      if ((column.kind == Kind::rate || column.kind == Kind::motivation) && detail::is_blank(cell)) continue;
      double value = 0.0;
      if (!detail::parse_number(cell, value))
        throw Error(where + ", column '" + records.front()[col] + "': not a number: '" + cell + "'");
      if (column.kind == Kind::score) p.scores[column.criterion] = value;
      else if (column.kind == Kind::rate) p.growth_rates[column.criterion] = value;
      else p.motivation = value;
    }
    if (!ids.insert(p.id).second) report.add(p.id, "duplicate_id", "duplicate profile id at row " + std::to_string(row + 1));
    report.merge(validate_profile(p, spec), "row " + std::to_string(row + 1));
    profiles.push_back(std::move(p));
  }
  if (!report.ok()) throw ValidationError(source + ": invalid profiles", std::move(report));
  return profiles;
}

inline std::vector<Profile> import_profiles_csv(const std::string& path, const CriteriaSpec& spec) {
  return parse_profiles_csv(read_text_file(path), spec, path);
}

}  // namespace teamfit
