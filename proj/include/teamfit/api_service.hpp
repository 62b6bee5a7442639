#pragma once

// Read-only HTTP facade over a loaded workspace.
//
// Routing and error mapping live in ApiService::handle, which is plain
// request -> response and needs no socket. ServiceHost binds it to
// cpp-httplib.

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include <httplib.h>

#include "teamfit/errors.hpp"
#include "teamfit/io_persistence.hpp"
#include "teamfit/reports.hpp"

namespace teamfit {

struct HttpResponse {
  int status = 200;
  std::string body;
};

class ApiService {
 public:
  static constexpr std::string_view kPrefix = "/api/v1";

  explicit ApiService(Workspace ws) : ws_(std::make_shared<const Workspace>(std::move(ws))) {}

  const Workspace& workspace() const { return *ws_; }

  HttpResponse handle(const std::string& method, const std::string& path, const std::string& body = {}) const {
    try {
      return route(method, path, body);
    } catch (const ValidationError& e) {
      return {400, canonical_dump({{"error", "validation"},
                                   {"message", e.what()},
                                   {"violations", violations_to_json(e.report())}})};
    } catch (const NotFoundError& e) {
      return {404, canonical_dump({{"error", "not_found"}, {"message", e.what()}})};
    } catch (const json::exception& e) {
      return {400, canonical_dump({{"error", "bad_request"}, {"message", e.what()}})};
    } catch (const Error& e) {
      return {400, canonical_dump({{"error", "bad_request"}, {"message", e.what()}})};
    }
  }

 private:
  HttpResponse route(const std::string& method, const std::string& path, const std::string& body) const {
    if (!path.starts_with(kPrefix)) throw NotFoundError("no route for '" + path + "'");
    const std::string rest = path.substr(kPrefix.size());

    if (method == "GET") {
      if (rest == "/workspace") return ok(workspace_summary(*ws_));
      if (rest == "/profiles") {
        json profiles = json::array();
        for (const auto& p : ws_->population) profiles.push_back(profile_to_json(p));
        return ok({{"report", "profiles"}, {"profiles", profiles}});
      }
      if (rest.starts_with("/profiles/")) return ok(profile_to_json(ws_->profile(rest.substr(10))));
      if (rest.starts_with("/capacities/") && rest.ends_with("/shapley")) {
        const std::string name = rest.substr(12, rest.size() - 12 - 8);
        return ok(shapley_report(*ws_, name));
      }
    } else if (method == "POST") {
      if (rest == "/score" || rest == "/rank" || rest == "/classify" || rest == "/gap" || rest == "/team" ||
          rest == "/device-coverage" || rest == "/whatif") {
        json request;
        try {
          request = body.empty() ? json::object() : json::parse(body);
        } catch (const json::parse_error& e) {
          return {400, canonical_dump({{"error", "malformed_json"}, {"message", e.what()}})};
        }
        if (rest == "/whatif") return ok(whatif(request));
        return ok(analysis(rest.substr(1), request, std::nullopt));
      }
    }
    throw NotFoundError("no route for " + method + " '" + path + "'");
  }

  static HttpResponse ok(const json& report) { return {200, canonical_dump(report)}; }

  /// Named analyses. With `inline_capacity`, capacity parameters are taken
  /// from it instead of the workspace.
  json analysis(const std::string& kind, const json& request,
                const std::optional<Capacity2Additive>& inline_capacity, double horizon_override = -1.0) const {
    FieldReader r(request, "request");
    const double horizon = horizon_override >= 0.0 ? horizon_override : r.number_or("horizon", 0.0);
    auto capacity = [&]() -> std::pair<Capacity2Additive, std::string> {
      if (inline_capacity) return {*inline_capacity, "inline"};
      const std::string name = r.string("capacity");
      return {ws_->capacity(name), name};
    };

    json out;
    if (kind == "score") {
      auto [c, label] = capacity();
      out = score_report(*ws_, c, label, horizon);
    } else if (kind == "rank") {
      auto [c, label] = capacity();
      std::optional<std::size_t> top;
      if (r.has("top")) top = static_cast<std::size_t>(positive_integer(r, "top"));
      out = rank_report(*ws_, c, label, horizon, top);
    } else if (kind == "classify") {
      const std::string model = r.string("model");
      bool minorities = false;
      if (r.has("minorities")) {
        const json& v = r.raw("minorities");
        if (!v.is_boolean()) r.fail("field 'minorities' must be a boolean");
        minorities = v.get<bool>();
      }
      out = classify_report(*ws_, model, horizon, minorities);
    } else if (kind == "gap") {
      const std::string model = r.string("model");
      const std::string cls = r.string("class");
      const std::string profile = r.string("profile");
      std::optional<double> h;
      if (horizon_override >= 0.0) h = horizon_override;
      else if (r.has("horizon")) h = horizon;
      out = gap_report(*ws_, model, cls, profile, h);
    } else if (kind == "team") {
      auto [c, label] = capacity();
      const auto k = static_cast<std::size_t>(positive_integer(r, "k"));
      const Combine combine = parse_combine(r.string_or("combine", "coverage"));
      const SelectionMethod method = parse_method(r.string_or("method", "auto"));
      out = team_report(*ws_, c, label, k, combine, method, horizon);
    } else if (kind == "device-coverage") {
      const std::string device = r.string("device");
      out = device_report(*ws_, device, horizon, r.number_or("min_coverage", 0.0));
    } else {
      r.fail("unknown analysis '" + kind + "'");
    }
    r.finish();
    return out;
  }

  /// The capacity and horizon come from the request; the workspace is never touched.
  json whatif(const json& request) const {
    FieldReader r(request, "whatif");
    const json& inline_capacity = r.raw("capacity");
    Capacity2Additive capacity;
    if (inline_capacity.is_object() && inline_capacity.contains("shapley")) {
      capacity = capacity_from_shapley(shapley_from_json(inline_capacity, "whatif.capacity"), ws_->spec);
    } else {
      capacity = capacity_from_json(inline_capacity, "whatif.capacity");
      if (auto report = validate_capacity(capacity, ws_->spec); !report.ok())
        throw ValidationError("invalid capacity", std::move(report));
    }
    const double horizon = r.number_or("horizon", 0.0);
    if (!(horizon >= 0.0)) r.fail("field 'horizon' must be >= 0");

    const json& spec = r.raw("analysis");
    if (!spec.is_object() || !spec.contains("type") || !spec.at("type").is_string())
      r.fail("field 'analysis' must be an object with a string 'type'");
    r.finish();

    json params = spec;
    const std::string kind = params.at("type").get<std::string>();
    params.erase("type");
    if (kind != "rank" && kind != "team" && kind != "classify" && kind != "gap" && kind != "score")
      throw Error("whatif analysis must be one of rank, team, classify, gap, score; got '" + kind + "'");
    if (params.contains("capacity") || params.contains("horizon"))
      throw Error("whatif: capacity and horizon belong at the top level of the request");
    return analysis(kind, params, capacity, horizon);
  }

  static long long positive_integer(FieldReader& r, const std::string& key) {
    const json& v = r.raw(key);
    if (!v.is_number_integer() || v.get<long long>() < 1) r.fail("field '" + key + "' must be a positive integer");
    return v.get<long long>();
  }

  std::shared_ptr<const Workspace> ws_;
};

struct ServeOptions {
  std::string cors_origin = "*";  // empty disables CORS headers
  std::string static_dir;         // optional UI assets mounted at /
};

/// Binds an ApiService to a socket.
class ServiceHost {
 public:
  ServiceHost(std::shared_ptr<const ApiService> service, ServeOptions options = {})
      : service_(std::move(service)), options_(std::move(options)) {
    // SO_REUSEADDR only: a port already served by another process must fail to bind
    server_.set_socket_options([](socket_t sock) {
      int yes = 1;
      setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, reinterpret_cast<const void*>(&yes), sizeof(yes));
    });
    auto dispatch = [this](const httplib::Request& req, httplib::Response& res) {
      if (req.method == "POST") {
        const std::string type = req.get_header_value("Content-Type");
        if (!std::string_view(type).starts_with("application/json")) {
          write(res, {415, canonical_dump({{"error", "unsupported_media_type"},
                                           {"message", "request body must be application/json"}})});
          return;
        }
      }
      write(res, service_->handle(req.method, req.path, req.body));
    };
    server_.Get(R"(/api/v1/.*)", dispatch);
    server_.Post(R"(/api/v1/.*)", dispatch);
    server_.Options(R"(/api/v1/.*)", [this](const httplib::Request&, httplib::Response& res) {
      cors(res);
      res.status = 204;
    });
    if (!options_.static_dir.empty() && !server_.set_mount_point("/", options_.static_dir))
      throw Error("static directory '" + options_.static_dir + "' does not exist");
  }

  /// Returns the bound port; port 0 picks a free one.
  int bind(const std::string& host, int port) {
    const int bound = port == 0 ? server_.bind_to_any_port(host) : (server_.bind_to_port(host, port) ? port : -1);
    if (bound < 0) throw Error("cannot bind " + host + ":" + std::to_string(port) + " (address in use?)");
    return bound;
  }

  /// Blocks until stop().
  void listen() {
    if (!server_.listen_after_bind()) throw Error("server stopped with an error");
  }

  void stop() { server_.stop(); }
  void wait_until_ready() const { server_.wait_until_ready(); }

 private:
  void cors(httplib::Response& res) const {
    if (options_.cors_origin.empty()) return;
    res.set_header("Access-Control-Allow-Origin", options_.cors_origin);
    res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
    res.set_header("Access-Control-Allow-Headers", "Content-Type");
  }

  void write(httplib::Response& res, const HttpResponse& response) const {
    cors(res);
    res.status = response.status;
    res.set_content(response.body, "application/json");
  }

  std::shared_ptr<const ApiService> service_;
  ServeOptions options_;
  httplib::Server server_;
};

}  // namespace teamfit
