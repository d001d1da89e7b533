#include "confirm/service.hpp"

#include <exception>
#include <string_view>

#include "confirm/cbq.hpp"
#include "confirm/confset.hpp"
#include "confirm/etz.hpp"
#include "confirm/ingest.hpp"
#include "confirm/simprofile.hpp"
#include "json_codec.hpp"

namespace confirm::service {

using io::detail::json;
using io::detail::ObjectReader;

namespace {

constexpr std::string_view kScenarioPrefix = "/v1/scenarios/";

Response ok(const json& body, int status = 200) { return {status, body.dump(), "application/json"}; }

json parse_body(const Request& req) {
  if (req.body.empty()) throw ParseError("", "request body is empty");
  return io::detail::parse_json(req.body);
}

Response method_not_allowed(const Request& req) {
  return {405, error_body(ErrorCode::NotFound, req.method + " not supported on " + req.path), "application/json"};
}

void check_draws(const sim::SimConfig& cfg, std::uint64_t reps, std::uint64_t max_draws) {
  const std::uint64_t draws = sim::simulation_draw_count(cfg, reps);
  if (draws > max_draws) {
    throw TooLargeError("request needs " + std::to_string(draws) + " normal draws; limit is " +
                        std::to_string(max_draws));
  }
}

Response etz_decompose(const Request& req) {
  const json body = parse_body(req);
  ObjectReader r(body, "");
  const etz::VarianceTriple v = io::detail::variance_triple_from_json(r);
  io::detail::with_prefix("", [&] {
    for (double x : {v.var_baseline, v.var_milestone, v.var_change}) {
      if (x < 0.0) throw DomainError("variances must be >= 0");
    }
  });
  return ok(io::detail::etz_with_sds_to_json(etz::decompose_etz(v)));
}

struct ConfsetInput {
  confset::EndpointEstimate e1;
  confset::EndpointEstimate e2;
  confset::PartitionConfig cfg;
};

ConfsetInput confset_input(const Request& req) {
  const json body = parse_body(req);
  ObjectReader r(body, "");
  ConfsetInput in;
  ObjectReader e1 = r.object("e1");
  in.e1 = io::detail::estimate_from_json(e1);
  ObjectReader e2 = r.object("e2");
  in.e2 = io::detail::estimate_from_json(e2);
  ObjectReader cfg = r.object("config");
  in.cfg = io::detail::partition_from_json(cfg);
  r.finish();
  return in;
}

}  // namespace

int http_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::ParseError:
      return 400;
    case ErrorCode::DomainError:
    case ErrorCode::DecompositionError:
    case ErrorCode::Infeasible:
    case ErrorCode::NotApplicable:
      return 422;
    case ErrorCode::NotFound:
      return 404;
    case ErrorCode::Conflict:
      return 409;
    case ErrorCode::TooLarge:
      return 413;
    case ErrorCode::BracketError:
    case ErrorCode::Internal:
      return 500;
  }
  return 500;
}

std::string error_body(ErrorCode code, const std::string& message, const std::string& field_path) {
  // Internal conditions are reported under the Internal code on the wire.
  const ErrorCode wire = code == ErrorCode::BracketError ? ErrorCode::Internal : code;
  json err = {
      {"code", std::string(to_string(wire))},
      {"message", message},
      {"field_path", field_path.empty() ? json(nullptr) : json(field_path)},
  };
  return json{{"error", err}}.dump();
}

Service::Service(ServiceOptions options) : options_(std::move(options)) {
  if (options_.store_dir) store_ = std::make_unique<io::ScenarioStore>(*options_.store_dir);
}

Response Service::handle(const Request& request) const {
  try {
    return route(request);
  } catch (const Error& e) {
    return {http_status(e.code()), error_body(e.code(), e.what(), e.field_path()), "application/json"};
  } catch (const std::exception& e) {
    return {500, error_body(ErrorCode::Internal, e.what()), "application/json"};
  }
}

Response Service::route(const Request& req) const {
  const std::string& path = req.path;

  if (path == "/v1/etz/decompose") {
    if (req.method != "POST") return method_not_allowed(req);
    return etz_decompose(req);
  }

  if (path == "/v1/confset/transition") {
    if (req.method != "POST") return method_not_allowed(req);
    const ConfsetInput in = confset_input(req);
    confset::TransitionDecision d;
    // Inputs are already validated; what remains is the correlation range.
    io::detail::with_prefix("config", [&] { d = confset::transition_decision(in.e1, in.e2, in.cfg); });
    return ok(io::detail::transition_to_json(d));
  }

  if (path == "/v1/confset/designate") {
    if (req.method != "POST") return method_not_allowed(req);
    const ConfsetInput in = confset_input(req);
    confset::DesignationDecision d;
    io::detail::with_prefix("config", [&] { d = confset::designate_endpoint(in.e1, in.e2, in.cfg); });
    return ok(io::detail::designation_to_json(d));
  }

  if (path == "/v1/cbq/assess") {
    if (req.method != "POST") return method_not_allowed(req);
    const json body = parse_body(req);
    ObjectReader r(body, "");
    io::ScenarioRecord record;
    const bool by_id = r.has("scenario_id");
    const bool inline_record = r.has("scenario");
    if (by_id == inline_record) throw ParseError("", "supply exactly one of scenario_id, scenario");
    if (by_id) {
      const std::string id = r.string("scenario_id");
      r.finish();
      if (!store_) throw NotFoundError("no scenario store is configured");
      record = store_->load(id);
    } else {
      ObjectReader s = r.object("scenario");
      r.finish();
      record = io::detail::scenario_from_json(s);
    }
    if (static_cast<std::uint64_t>(record.design.reps) > options_.max_draws) {
      throw TooLargeError("design.reps exceeds the draw limit of " + std::to_string(options_.max_draws));
    }
    const etz::EtzComponents etz = io::scenario_etz(record);
    return ok(io::detail::report_to_json(
        cbq::transition_assessment(record.study, etz, record.plan, record.design, options_.workers)));
  }

  if (path == "/v1/sim/profiles" || path == "/v1/sim/replicability") {
    if (req.method != "POST") return method_not_allowed(req);
    const bool profiles = path == "/v1/sim/profiles";
    const json body = parse_body(req);
    ObjectReader r(body, "");
    ObjectReader fx_reader = r.object("fixed_effects");
    const sim::FixedEffects fx = io::detail::fixed_effects_from_json(fx_reader);
    ObjectReader cfg_reader = r.object("config");
    const sim::SimConfig cfg = io::detail::sim_config_from_json(cfg_reader);
    const int rep_index = profiles ? r.optional_integer("rep_index").value_or(0) : 0;
    r.finish();
    if (rep_index < 0) throw ParseError("rep_index", "rep_index must be >= 0");

    json out;
    if (profiles) {
      check_draws(cfg, 1, options_.max_draws);
      const sim::SimulatedStudy study = sim::simulate_study(fx, cfg, rep_index);
      out = {{"rep_index", rep_index},
             {"milestone_separation", study.milestone_separation()},
             {"rows", io::detail::profile_to_json(sim::profile_table(study))}};
    } else {
      check_draws(cfg, static_cast<std::uint64_t>(cfg.n_reps), options_.max_draws);
      out = io::detail::replicability_to_json(sim::replicability_metrics(fx, cfg, options_.workers));
    }
    out["warnings"] = fx.warnings(cfg.etz);
    return ok(out);
  }

  if (path == "/v1/scenarios") {
    if (req.method != "GET") return method_not_allowed(req);
    json list = json::array();
    if (store_) {
      for (const io::ScenarioRecord& rec : store_->list()) list.push_back(io::detail::scenario_to_json(rec));
    }
    return ok(json{{"scenarios", list}});
  }

  if (path.rfind(kScenarioPrefix, 0) == 0) {
    const std::string id = path.substr(kScenarioPrefix.size());
    if (req.method == "GET") {
      if (!store_) throw NotFoundError("no scenario store is configured");
      return ok(io::detail::scenario_to_json(store_->load(id)));
    }
    if (req.method == "PUT") {
      if (!store_) throw NotFoundError("no scenario store is configured");
      if (!io::is_valid_scenario_id(id)) throw ParseError("id", "invalid scenario id in path");
      json body = parse_body(req);
      if (!body.is_object()) throw ParseError("", "expected an object");
      if (!body.contains("id")) body["id"] = id;
      if (!body.contains("created_at")) body["created_at"] = io::utc_timestamp_now();
      if (!body.contains("schema_version")) body["schema_version"] = io::kSchemaVersion;
      ObjectReader r(body, "");
      const io::ScenarioRecord record = io::detail::scenario_from_json(r);
      if (record.id != id) throw ParseError("id", "body id does not match the path");
      store_->save(record);
      return ok(io::detail::scenario_to_json(record), 201);
    }
    return method_not_allowed(req);
  }

  throw NotFoundError("no route for " + req.method + " " + path);
}

}  // namespace confirm::service
