#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "confirm/cbq.hpp"
#include "confirm/etz.hpp"
#include "confirm/study.hpp"

namespace confirm::io {

/// Version tag written into every document and required on top-level input.
inline constexpr int kSchemaVersion = 1;

/// Parses a study-summary document (JSON). Missing fields, wrong types,
/// unknown keys and invariant violations all throw ParseError carrying the
/// dotted path of the offending field, e.g. "arms.rx.se_change".
StudySummary parse_study_summary(std::string_view document);

std::string serialize_study_summary(const StudySummary& study);

/// Pooled baseline and milestone variances ((n - 1)-weighted across arms)
/// and Var(change). Var(change) is the published value when the study
/// carries one and `use_published` is set; otherwise it is derived from the
/// per-arm SEs.
etz::VarianceTriple study_to_variance_triple(const StudySummary& study, bool use_published = true);

/// A named what-if scenario as stored and exchanged over the API.
struct ScenarioRecord {
  std::string id;
  std::string created_at;  // ISO-8601 UTC, "YYYY-MM-DDTHH:MM:SSZ"
  StudySummary study;
  std::optional<etz::EtzComponents> etz_override;
  cbq::DiscountPlan plan;
  cbq::Phase3Design design;
  std::string notes;

  /// Throws ParseError naming the offending field.
  void validate() const;
  bool operator==(const ScenarioRecord&) const = default;
};

/// The override when present, else the decomposition of the study triple.
etz::EtzComponents scenario_etz(const ScenarioRecord& record);

/// Ids are 1 to 128 characters from [A-Za-z0-9._-], not starting with '.'.
bool is_valid_scenario_id(std::string_view id);

bool is_valid_timestamp(std::string_view ts);

/// Current UTC time, second resolution.
std::string utc_timestamp_now();

ScenarioRecord parse_scenario(std::string_view document);
std::string serialize_scenario(const ScenarioRecord& record);

}  // namespace confirm::io
