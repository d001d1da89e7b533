#include "json_codec.hpp"

#include <cmath>
#include <limits>

namespace confirm::io::detail {

namespace {

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

std::string parent_of(const std::string& path) {
  const auto dot = path.rfind('.');
  return dot == std::string::npos ? std::string{} : path.substr(0, dot);
}

double as_number(const json& v, const std::string& path) {
  if (!v.is_number()) throw ParseError(path, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ParseError(path, "expected a finite number");
  return x;
}

long long as_integer(const json& v, const std::string& path) {
  if (v.is_number_integer()) return v.get<long long>();
  if (v.is_number_float()) {
    const double x = v.get<double>();
    if (std::isfinite(x) && x == std::floor(x) && std::fabs(x) < 9.0e15) return static_cast<long long>(x);
  }
  throw ParseError(path, "expected an integer");
}

}  // namespace

json parse_json(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ParseError("", std::string("malformed document: ") + e.what());
  }
}

ObjectReader::ObjectReader(const json& j, std::string path) : j_(&j), path_(std::move(path)) {
  if (!j.is_object()) throw ParseError(path_, "expected an object");
}

const json* ObjectReader::find(const char* key) const {
  auto it = j_->find(key);
  if (it == j_->end() || it->is_null()) return nullptr;
  return &*it;
}

const json& ObjectReader::require(const char* key) {
  consumed_.insert(key);
  const json* v = find(key);
  if (!v) throw ParseError(path_of(key), "missing required field");
  return *v;
}

bool ObjectReader::has(const char* key) const { return find(key) != nullptr; }

std::string ObjectReader::path_of(const char* key) const { return join(path_, key); }

double ObjectReader::number(const char* key) { return as_number(require(key), path_of(key)); }

std::optional<double> ObjectReader::optional_number(const char* key) {
  consumed_.insert(key);
  if (!has(key)) return std::nullopt;
  return as_number(*find(key), path_of(key));
}

int ObjectReader::integer(const char* key) {
  const long long v = as_integer(require(key), path_of(key));
  if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max()) {
    throw ParseError(path_of(key), "integer out of range");
  }
  return static_cast<int>(v);
}

std::optional<int> ObjectReader::optional_integer(const char* key) {
  consumed_.insert(key);
  if (!has(key)) return std::nullopt;
  return integer(key);
}

std::uint64_t ObjectReader::unsigned64(const char* key) {
  const json& v = require(key);
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer() && v.get<long long>() >= 0) return static_cast<std::uint64_t>(v.get<long long>());
  throw ParseError(path_of(key), "expected a non-negative integer");
}

std::string ObjectReader::string(const char* key) {
  const json& v = require(key);
  if (!v.is_string()) throw ParseError(path_of(key), "expected a string");
  return v.get<std::string>();
}

std::optional<std::string> ObjectReader::optional_string(const char* key) {
  consumed_.insert(key);
  if (!has(key)) return std::nullopt;
  return string(key);
}

std::vector<double> ObjectReader::number_array(const char* key) {
  const json& v = require(key);
  if (!v.is_array()) throw ParseError(path_of(key), "expected an array");
  std::vector<double> out;
  out.reserve(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    out.push_back(as_number(v[i], path_of(key) + "[" + std::to_string(i) + "]"));
  }
  return out;
}

std::optional<std::vector<double>> ObjectReader::optional_number_array(const char* key) {
  consumed_.insert(key);
  if (!has(key)) return std::nullopt;
  return number_array(key);
}

ObjectReader ObjectReader::object(const char* key) { return ObjectReader(require(key), path_of(key)); }

std::optional<ObjectReader> ObjectReader::optional_object(const char* key) {
  consumed_.insert(key);
  if (!has(key)) return std::nullopt;
  return object(key);
}

const json& ObjectReader::value(const char* key) { return require(key); }

void ObjectReader::finish() const {
  for (auto it = j_->begin(); it != j_->end(); ++it) {
    if (!consumed_.count(it.key())) throw ParseError(join(path_, it.key()), "unknown field");
  }
}

const char* to_string(Direction d) { return d == Direction::HigherIsBetter ? "higher_is_better" : "lower_is_better"; }

Direction direction_from_string(const std::string& s, const std::string& path) {
  if (s == "higher_is_better") return Direction::HigherIsBetter;
  if (s == "lower_is_better") return Direction::LowerIsBetter;
  throw ParseError(path, "direction must be \"higher_is_better\" or \"lower_is_better\"");
}

namespace {

ArmSummary arm_from_json(ObjectReader r) {
  ArmSummary a;
  a.n_baseline = r.integer("n_baseline");
  a.mean_baseline = r.number("mean_baseline");
  a.sd_baseline = r.number("sd_baseline");
  a.n_milestone = r.integer("n_milestone");
  a.mean_milestone = r.number("mean_milestone");
  a.sd_milestone = r.number("sd_milestone");
  a.n_change = r.optional_integer("n_change");
  a.lsmean_change = r.number("lsmean_change");
  a.se_change = r.number("se_change");
  r.finish();
  return a;
}

json arm_to_json(const ArmSummary& a) {
  json j = {
      {"n_baseline", a.n_baseline},       {"mean_baseline", a.mean_baseline},   {"sd_baseline", a.sd_baseline},
      {"n_milestone", a.n_milestone},     {"mean_milestone", a.mean_milestone}, {"sd_milestone", a.sd_milestone},
      {"lsmean_change", a.lsmean_change}, {"se_change", a.se_change},
  };
  if (a.n_change) j["n_change"] = *a.n_change;
  return j;
}

void check_version(ObjectReader& r, bool required) {
  const auto v = required ? std::optional<int>(r.integer("schema_version")) : r.optional_integer("schema_version");
  if (v && *v != kSchemaVersion) {
    throw ParseError(r.path_of("schema_version"), "unsupported schema_version " + std::to_string(*v));
  }
}

}  // namespace

StudySummary study_from_json(ObjectReader& r, bool require_version) {
  check_version(r, require_version);
  StudySummary s;
  s.outcome_name = r.string("outcome_name");
  s.direction = direction_from_string(r.string("direction"), r.path_of("direction"));
  s.visit_weeks = r.number_array("visit_weeks");
  s.milestone_week = r.number("milestone_week");
  ObjectReader arms = r.object("arms");
  s.rx = arm_from_json(arms.object("rx"));
  s.control = arm_from_json(arms.object("control"));
  arms.finish();
  s.published_change_variance = r.optional_number("published_change_variance");
  r.finish();
  revalidate(r.path(), [&] { s.validate(); });
  return s;
}

json study_to_json(const StudySummary& s, bool with_version) {
  json j = {
      {"outcome_name", s.outcome_name},
      {"direction", to_string(s.direction)},
      {"visit_weeks", s.visit_weeks},
      {"milestone_week", s.milestone_week},
      {"arms", {{"rx", arm_to_json(s.rx)}, {"control", arm_to_json(s.control)}}},
  };
  if (s.published_change_variance) j["published_change_variance"] = *s.published_change_variance;
  if (with_version) j["schema_version"] = kSchemaVersion;
  return j;
}

etz::VarianceTriple variance_triple_from_json(ObjectReader& r) {
  etz::VarianceTriple v;
  v.var_baseline = r.number("var_baseline");
  v.var_milestone = r.number("var_milestone");
  v.var_change = r.number("var_change");
  r.finish();
  return v;
}

json variance_triple_to_json(const etz::VarianceTriple& v) {
  return {{"var_baseline", v.var_baseline}, {"var_milestone", v.var_milestone}, {"var_change", v.var_change}};
}

etz::EtzComponents etz_from_json(ObjectReader& r) {
  etz::EtzComponents c;
  c.var_z = r.number("var_z");
  c.var_e = r.number("var_e");
  c.var_traj = r.number("var_traj");
  r.finish();
  return c;
}

json etz_to_json(const etz::EtzComponents& c) {
  return {{"var_z", c.var_z}, {"var_e", c.var_e}, {"var_traj", c.var_traj}};
}

cbq::DiscountPlan plan_from_json(ObjectReader& r) {
  const std::string prefix = r.path();
  const double gamma = r.number("gamma");
  const auto d2 = r.optional_number("d_phase2");
  const auto d3 = r.optional_number("d_phase3");
  r.finish();
  if (!d2 && !d3) throw ParseError(r.path_of("d_phase2"), "one of d_phase2, d_phase3 is required");
  cbq::DiscountPlan plan;
  revalidate(prefix, [&] {
    if (!(gamma >= 0.0 && gamma <= 1.0)) throw DomainError("gamma must lie in [0, 1]", "gamma");
    if (d2 && d3) {
      plan.gamma = gamma;
      plan.d_phase2 = *d2;
      plan.d_phase3 = *d3;
      plan.validate();
    } else if (d2) {
      plan = cbq::complete_discount_plan(gamma, cbq::KnownDiscount::Phase2, *d2);
    } else {
      plan = cbq::complete_discount_plan(gamma, cbq::KnownDiscount::Phase3, *d3);
    }
  });
  return plan;
}

json plan_to_json(const cbq::DiscountPlan& p) {
  return {{"gamma", p.gamma.value()}, {"d_phase2", p.d_phase2}, {"d_phase3", p.d_phase3}};
}

cbq::Phase3Design design_from_json(ObjectReader& r) {
  cbq::Phase3Design d;
  d.n_rx = r.integer("n_rx");
  d.n_c = r.integer("n_c");
  d.sigma_pooled = r.optional_number("sigma_pooled").value_or(0.0);
  d.reps = r.optional_integer("reps").value_or(10000);
  d.seed = r.unsigned64("seed");
  r.finish();
  // Validation paths already carry the "design." prefix.
  revalidate(parent_of(r.path()), [&] { d.validate(); });
  return d;
}

json design_to_json(const cbq::Phase3Design& d) {
  return {{"n_rx", d.n_rx}, {"n_c", d.n_c}, {"sigma_pooled", d.sigma_pooled}, {"reps", d.reps}, {"seed", d.seed}};
}

ScenarioRecord scenario_from_json(ObjectReader& r) {
  check_version(r, r.path().empty());
  ScenarioRecord s;
  s.id = r.string("id");
  s.created_at = r.string("created_at");
  ObjectReader study = r.object("study");
  s.study = study_from_json(study, false);
  if (auto o = r.optional_object("etz_override")) s.etz_override = etz_from_json(*o);
  ObjectReader plan = r.object("plan");
  s.plan = plan_from_json(plan);
  ObjectReader design = r.object("design");
  s.design = design_from_json(design);
  s.notes = r.optional_string("notes").value_or("");
  r.finish();
  s.validate();
  return s;
}

json scenario_to_json(const ScenarioRecord& s) {
  json j = {
      {"schema_version", kSchemaVersion},
      {"id", s.id},
      {"created_at", s.created_at},
      {"study", study_to_json(s.study, false)},
      {"plan", plan_to_json(s.plan)},
      {"design", design_to_json(s.design)},
      {"notes", s.notes},
  };
  if (s.etz_override) j["etz_override"] = etz_to_json(*s.etz_override);
  return j;
}

confset::EndpointEstimate estimate_from_json(ObjectReader& r) {
  confset::EndpointEstimate e;
  e.theta_hat = r.number("theta_hat");
  e.sigma = r.number("sigma");
  r.finish();
  with_prefix(r.path(), [&] { e.validate(); });
  return e;
}

confset::PartitionConfig partition_from_json(ObjectReader& r) {
  confset::PartitionConfig c;
  const std::string prefix = r.path();
  const double alpha = r.number("alpha");
  c.c_md = r.number("c_md");
  c.rho = r.optional_number("rho").value_or(0.0);
  r.finish();
  with_prefix(prefix, [&] {
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw DomainError("alpha must lie in (0, 0.5)", "alpha");
    c.alpha = alpha;
    c.validate();
  });
  return c;
}

sim::FixedEffects fixed_effects_from_json(ObjectReader& r) {
  sim::FixedEffects fx;
  fx.alpha_common = r.number("alpha_common");
  fx.beta_rx = r.number("beta_rx");
  fx.beta_c = r.number("beta_c");
  fx.alpha_rx_display = r.optional_number("alpha_rx_display");
  fx.alpha_c_display = r.optional_number("alpha_c_display");
  r.finish();
  return fx;
}

sim::SimConfig sim_config_from_json(ObjectReader& r) {
  sim::SimConfig c;
  if (auto weeks = r.optional_number_array("visit_weeks")) c.visit_weeks = *weeks;
  c.n_rx = r.integer("n_rx");
  c.n_c = r.integer("n_c");
  ObjectReader etz = r.object("etz");
  c.etz = etz_from_json(etz);
  with_prefix(etz.path(), [&] { c.etz.validate(); });
  c.seed = r.unsigned64("seed");
  c.n_reps = r.optional_integer("n_reps").value_or(1);
  r.finish();
  // Validation paths already carry the "config." prefix.
  with_prefix(parent_of(r.path()), [&] { c.validate(); });
  return c;
}

json etz_with_sds_to_json(const etz::EtzComponents& c) {
  const etz::EtzStandardDeviations sd = etz::standard_deviations(c);
  json j = etz_to_json(c);
  j["sd_z"] = sd.sd_z;
  j["sd_e"] = sd.sd_e;
  j["sd_traj"] = sd.sd_traj;
  return j;
}

json transition_to_json(const confset::TransitionDecision& d) {
  json quadrants = json::array();
  for (confset::Quadrant q : d.eliminated_quadrants()) quadrants.push_back(confset::to_string(q));
  return {
      {"eliminated_quadrants", quadrants},
      {"transition", d.transition},
      {"critical_bound", d.critical_bound},
      {"per_endpoint_lower", {d.per_endpoint_lower[0], d.per_endpoint_lower[1]}},
  };
}

namespace {

json interval_to_json(const confset::DirectedInterval& i) {
  if (i.is_whole_line()) return {{"kind", "whole_line"}};
  return {{"kind", "lower_bounded"}, {"lower", i.lower}, {"orientation", i.orientation}};
}

}  // namespace

json designation_to_json(const confset::DesignationDecision& d) {
  return {
      {"outcome", confset::to_string(d.outcome)},
      {"avg_lower", d.avg_lower ? json(*d.avg_lower) : json(nullptr)},
      {"diff_interval", interval_to_json(d.diff_interval)},
  };
}

json report_to_json(const cbq::DecisionReport& r) {
  json histogram = json::array();
  for (const cbq::HistogramBin& b : r.quantile_histogram) {
    histogram.push_back({{"lower", b.lower}, {"upper", b.upper}, {"count", b.count}});
  }
  const cbq::ConfidentEfficacy& ce = r.confident_efficacy;
  return {
      {"confident_efficacy",
       {{"value", ce.value},
        {"level", ce.level.value()},
        {"df", ce.df},
        {"se_pooled", ce.se_pooled},
        {"theta_bar", ce.theta_bar}}},
      {"cbq", r.cbq},
      {"cbq_monte_carlo", r.cbq_monte_carlo},
      {"phase3_se", r.phase3_se},
      {"transition_recommended", r.transition_recommended},
      {"plan", plan_to_json(r.plan)},
      {"design", design_to_json(r.design)},
      {"etz", etz_with_sds_to_json(r.etz)},
      {"quantile_histogram", histogram},
  };
}

json profile_to_json(const std::vector<sim::ProfileRow>& rows) {
  json out = json::array();
  for (const sim::ProfileRow& row : rows) {
    out.push_back({{"week", row.week},
                   {"arm", sim::to_string(row.arm)},
                   {"n", row.n},
                   {"mean_y", row.mean_y},
                   {"mean_change", row.mean_change}});
  }
  return out;
}

json replicability_to_json(const sim::ReplicabilityMetrics& m) {
  return {
      {"mean_separation", m.mean_separation},
      {"sd_separation", m.sd_separation},
      {"frac_positive", m.frac_positive},
      {"per_rep", m.per_rep},
  };
}

}  // namespace confirm::io::detail
