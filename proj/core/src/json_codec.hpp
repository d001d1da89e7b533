#pragma once

// JSON mapping of the domain types. Private to the core library: the public
// headers exchange documents as strings so that consumers do not depend on
// the JSON implementation.

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "confirm/cbq.hpp"
#include "confirm/confset.hpp"
#include "confirm/error.hpp"
#include "confirm/etz.hpp"
#include "confirm/ingest.hpp"
#include "confirm/simprofile.hpp"
#include "confirm/study.hpp"

namespace confirm::io::detail {

using json = nlohmann::json;

/// Parses text; malformed input throws ParseError with an empty path.
json parse_json(std::string_view text);

/// Typed, path-tracking access to one JSON object. Every accessor marks its
/// key as consumed; finish() rejects keys nobody asked for. A null value is
/// treated as absent.
class ObjectReader {
 public:
  ObjectReader(const json& j, std::string path);

  const std::string& path() const { return path_; }
  bool has(const char* key) const;
  std::string path_of(const char* key) const;

  double number(const char* key);
  std::optional<double> optional_number(const char* key);
  int integer(const char* key);
  std::optional<int> optional_integer(const char* key);
  std::uint64_t unsigned64(const char* key);
  std::string string(const char* key);
  std::optional<std::string> optional_string(const char* key);
  std::vector<double> number_array(const char* key);
  std::optional<std::vector<double>> optional_number_array(const char* key);
  ObjectReader object(const char* key);
  std::optional<ObjectReader> optional_object(const char* key);
  const json& value(const char* key);

  void finish() const;

 private:
  const json* find(const char* key) const;
  const json& require(const char* key);

  const json* j_;
  std::string path_;
  std::set<std::string> consumed_;
};

/// Runs `f`, converting a DomainError into a ParseError at `prefix` + its
/// field path. Used for stored documents.
template <class F>
void revalidate(const std::string& prefix, F&& f) {
  try {
    f();
  } catch (const DomainError& e) {
    std::string path = prefix;
    if (!e.field_path().empty()) path += (path.empty() ? "" : ".") + e.field_path();
    throw ParseError(path, e.what());
  }
}

/// Runs `f`, re-raising a DomainError with `prefix` prepended to its field
/// path. Computation inputs keep the module's error class.
template <class F>
void with_prefix(const std::string& prefix, F&& f) {
  try {
    f();
  } catch (const DomainError& e) {
    std::string path = prefix;
    if (!e.field_path().empty()) path += (path.empty() ? "" : ".") + e.field_path();
    throw DomainError(e.what(), path);
  }
}

const char* to_string(Direction d);
Direction direction_from_string(const std::string& s, const std::string& path);

// Inputs.
StudySummary study_from_json(ObjectReader& r, bool require_version);
json study_to_json(const StudySummary& s, bool with_version);
etz::VarianceTriple variance_triple_from_json(ObjectReader& r);
json variance_triple_to_json(const etz::VarianceTriple& v);
etz::EtzComponents etz_from_json(ObjectReader& r);
json etz_to_json(const etz::EtzComponents& c);
cbq::DiscountPlan plan_from_json(ObjectReader& r);
json plan_to_json(const cbq::DiscountPlan& p);
cbq::Phase3Design design_from_json(ObjectReader& r);
json design_to_json(const cbq::Phase3Design& d);
ScenarioRecord scenario_from_json(ObjectReader& r);
json scenario_to_json(const ScenarioRecord& s);
confset::EndpointEstimate estimate_from_json(ObjectReader& r);
confset::PartitionConfig partition_from_json(ObjectReader& r);
sim::FixedEffects fixed_effects_from_json(ObjectReader& r);
sim::SimConfig sim_config_from_json(ObjectReader& r);

// Outputs.
json etz_with_sds_to_json(const etz::EtzComponents& c);
json transition_to_json(const confset::TransitionDecision& d);
json designation_to_json(const confset::DesignationDecision& d);
json report_to_json(const cbq::DecisionReport& r);
json profile_to_json(const std::vector<sim::ProfileRow>& rows);
json replicability_to_json(const sim::ReplicabilityMetrics& m);

}  // namespace confirm::io::detail
