#pragma once

// Command-line front end. `run_cli` takes the full argument vector
// (program name first) and writes to the given streams, so it can be driven
// from tests as well as from main().

#include <cstdio>
#include <iostream>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "teamfit/api_service.hpp"
#include "teamfit/errors.hpp"
#include "teamfit/io_persistence.hpp"
#include "teamfit/reports.hpp"

namespace teamfit {

namespace cli_detail {

inline std::string fixed3(const json& v) {
  if (v.is_null()) return "-";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3f", v.get<double>());
  return buf;
}

inline std::string pad(std::string s, std::size_t width) {
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

inline std::string join(const json& list) {
  std::string out;
  for (const auto& v : list) out += (out.empty() ? "" : ", ") + v.get<std::string>();
  return out.empty() ? "-" : out;
}

/// Human-readable rendering of a report produced by reports.hpp.
inline void print_table(const json& r, std::ostream& out) {
  const std::string kind = r.at("report").get<std::string>();
  if (kind == "validation") {
    if (r.at("ok").get<bool>()) {
      out << "ok\n";
    } else {
      for (const auto& v : r.at("violations"))
        out << v.at("subject").get<std::string>() << ": " << v.at("message").get<std::string>() << " ["
            << v.at("rule").get<std::string>() << "]\n";
    }
  } else if (kind == "score") {
    out << "capacity " << r.at("capacity").get<std::string>() << ", horizon " << fixed3(r.at("horizon")) << "\n";
    out << pad("id", 16) << pad("choquet", 10) << "weighted_mean\n";
    for (const auto& s : r.at("scores"))
      out << pad(s.at("id").get<std::string>(), 16) << pad(fixed3(s.at("choquet")), 10) << fixed3(s.at("weighted_mean"))
          << "\n";
  } else if (kind == "rank") {
    out << "capacity " << r.at("capacity").get<std::string>() << ", horizon " << fixed3(r.at("horizon")) << "\n";
    out << pad("rank", 6) << pad("id", 16) << "score\n";
    for (const auto& s : r.at("ranking"))
      out << pad(std::to_string(s.at("rank").get<int>()), 6) << pad(s.at("id").get<std::string>(), 16)
          << fixed3(s.at("score")) << "\n";
  } else if (kind == "classify") {
    out << "model " << r.at("model").get<std::string>() << ", threshold " << fixed3(r.at("threshold"))
        << ", horizon " << fixed3(r.at("horizon")) << "\n";
    for (const auto& m : r.at("memberships")) {
      out << pad(m.at("profile").get<std::string>(), 16) << "assigned: " << join(m.at("assigned")) << "  degrees:";
      for (auto it = m.at("degrees").begin(); it != m.at("degrees").end(); ++it)
        out << " " << it.key() << "=" << fixed3(it.value());
      out << "\n";
    }
    if (r.contains("minorities")) out << "minorities: " << join(r.at("minorities")) << "\n";
  } else if (kind == "gap") {
    out << "profile " << r.at("profile").get<std::string>() << " -> class " << r.at("class").get<std::string>()
        << " (degree " << fixed3(r.at("current_degree")) << ", threshold " << fixed3(r.at("threshold")) << ")\n";
    out << pad("criterion", 16) << pad("required", 10) << "deficit\n";
    for (auto it = r.at("deficits").begin(); it != r.at("deficits").end(); ++it)
      out << pad(it.key(), 16) << pad(fixed3(r.at("required").at(it.key())), 10) << fixed3(it.value()) << "\n";
    out << "time to ready: " << (r.at("time_to_ready").is_null() ? std::string("unreachable") : fixed3(r.at("time_to_ready")))
        << "\n";
    if (r.contains("reachable_within"))
      out << "reachable within " << fixed3(r.at("horizon")) << ": " << (r.at("reachable_within").get<bool>() ? "yes" : "no")
          << "\n";
    if (r.at("motivation_lever").get<bool>()) out << "raising motivation to 1 would make this gap reachable\n";
  } else if (kind == "team") {
    out << "members: " << join(r.at("members")) << "\n";
    out << "objective: " << fixed3(r.at("objective")) << " (" << r.at("method_used").get<std::string>() << ", "
        << r.at("combine").get<std::string>() << ")\n";
    out << "team vector:";
    for (auto it = r.at("team_vector").begin(); it != r.at("team_vector").end(); ++it)
      out << " " << it.key() << "=" << fixed3(it.value());
    out << "\n";
  } else if (kind == "device") {
    out << "device " << r.at("device").get<std::string>() << ", horizon " << fixed3(r.at("horizon"))
        << ", min coverage " << fixed3(r.at("min_coverage")) << "\n";
    for (const char* part : {"recommended", "excluded"}) {
      out << part << ":\n";
      for (const auto& f : r.at(part))
        out << "  " << pad(f.at("id").get<std::string>(), 16) << fixed3(f.at("coverage")) << "\n";
    }
    out << "utilization:\n";
    for (auto it = r.at("per_individual").begin(); it != r.at("per_individual").end(); ++it)
      out << "  " << pad(it.key(), 16) << fixed3(it.value()) << "\n";
  } else {
    out << r.dump(2) << "\n";
  }
}

}  // namespace cli_detail

inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Prototype classes, Choquet ranking, team selection and device fit over a workspace"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string workspace_path;
  std::string output = "table";
  app.add_option("-w,--workspace", workspace_path, "Workspace JSON file");
  app.add_option("--output", output, "Output mode")->check(CLI::IsMember({"table", "json"}));

  double horizon = 0.0;
  std::optional<double> gap_horizon;
  std::string capacity, model, class_id, profile_id, device, combine = "coverage", method = "auto";
  std::string validate_file, addr = "127.0.0.1:8080", cors_origin = "*", static_dir;
  std::optional<std::size_t> top;
  std::size_t k = 0;
  double min_coverage = 0.0;
  bool minorities = false;

  auto horizon_opt = [&](CLI::App* sub) {
    sub->add_option("--horizon", horizon, "Evaluation horizon in periods")->check(CLI::NonNegativeNumber);
  };

  auto* validate = app.add_subcommand("validate", "Validate a workspace file");
  validate->add_option("file", validate_file, "Workspace JSON file")->required();

  auto* score = app.add_subcommand("score", "Choquet and weighted-mean score of every profile");
  score->add_option("--capacity", capacity)->required();
  horizon_opt(score);

  auto* rank = app.add_subcommand("rank", "Rank profiles by Choquet score");
  rank->add_option("--capacity", capacity)->required();
  rank->add_option("--top", top)->check(CLI::PositiveNumber);
  horizon_opt(rank);

  auto* classify = app.add_subcommand("classify", "Fuzzy class memberships");
  classify->add_option("--model", model)->required();
  classify->add_flag("--minorities", minorities, "List profiles no class claims");
  horizon_opt(classify);

  auto* gap = app.add_subcommand("gap", "Upgrade effort for a profile to join a class");
  gap->add_option("--model", model)->required();
  gap->add_option("--class", class_id)->required();
  gap->add_option("--profile", profile_id)->required();
  gap->add_option("--horizon", gap_horizon, "Check reachability within this horizon")->check(CLI::NonNegativeNumber);

  auto* team = app.add_subcommand("team", "Select a team of k members");
  team->add_option("--capacity", capacity)->required();
  team->add_option("-k", k)->required()->check(CLI::PositiveNumber);
  team->add_option("--combine", combine)->check(CLI::IsMember({"coverage", "mean"}));
  team->add_option("--method", method)->check(CLI::IsMember({"exact", "greedy", "auto"}));
  horizon_opt(team);

  auto* dev = app.add_subcommand("device", "Population coverage of a device's functions");
  dev->add_option("--device", device)->required();
  dev->add_option("--min-coverage", min_coverage)->check(CLI::Range(0.0, 1.0));
  horizon_opt(dev);

  auto* serve = app.add_subcommand("serve", "Serve the HTTP API");
  serve->add_option("--addr", addr, "HOST:PORT");
  serve->add_option("--cors-origin", cors_origin, "Allowed CORS origin; empty disables CORS headers");
  serve->add_option("--static", static_dir, "Directory of UI assets to serve at /");

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return 2;
  }

  auto emit = [&](const json& report) {
    if (output == "json") out << canonical_dump(report);
    else cli_detail::print_table(report, out);
  };

  if (validate->parsed()) {
    ValidationReport report;
    try {
      load_workspace(validate_file);
    } catch (const ValidationError& e) {
      report = e.report();
    } catch (const Error& e) {
      report.add(validate_file, "load_error", e.what());
    }
    emit(validation_report_json(report));
    return report.ok() ? 0 : 1;
  }

  if (workspace_path.empty()) {
    err << "error: --workspace is required\n" << app.help();
    return 2;
  }

  try {
    const Workspace ws = load_workspace(workspace_path);
    if (score->parsed()) emit(score_report(ws, ws.capacity(capacity), capacity, horizon));
    else if (rank->parsed()) emit(rank_report(ws, ws.capacity(capacity), capacity, horizon, top));
    else if (classify->parsed()) emit(classify_report(ws, model, horizon, minorities));
    else if (gap->parsed()) emit(gap_report(ws, model, class_id, profile_id, gap_horizon));
    else if (team->parsed())
      emit(team_report(ws, ws.capacity(capacity), capacity, k, parse_combine(combine), parse_method(method), horizon));
    else if (dev->parsed()) emit(device_report(ws, device, horizon, min_coverage));
    else if (serve->parsed()) {
      const auto colon = addr.rfind(':');
      if (colon == std::string::npos) {
        err << "error: --addr must be HOST:PORT\n";
        return 2;
      }
      int port = 0;
      try {
        port = std::stoi(addr.substr(colon + 1));
      } catch (const std::exception&) {
        err << "error: invalid port in --addr '" << addr << "'\n";
        return 2;
      }
      auto service = std::make_shared<const ApiService>(ws);
      ServiceHost host(service, {cors_origin, static_dir});
      const int bound = host.bind(addr.substr(0, colon), port);
      err << "listening on " << addr.substr(0, colon) << ":" << bound << "\n";
      host.listen();
    }
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace teamfit
