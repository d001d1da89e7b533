#pragma once

#include <optional>
#include <string>
#include <vector>

namespace confirm {

/// Orientation of an outcome scale. Everything downstream of ingestion works
/// on the benefit scale, where larger is better.
enum class Direction { HigherIsBetter, LowerIsBetter };

/// +1 for HigherIsBetter, -1 for LowerIsBetter.
inline double benefit_sign(Direction d) { return d == Direction::HigherIsBetter ? 1.0 : -1.0; }

/// Published per-arm summary statistics (outcome units).
struct ArmSummary {
  int n_baseline = 0;
  int n_milestone = 0;
  std::optional<int> n_change;  // defaults to the rounded baseline/milestone average
  double mean_baseline = 0.0;
  double sd_baseline = 0.0;
  double mean_milestone = 0.0;
  double sd_milestone = 0.0;
  double lsmean_change = 0.0;
  double se_change = 0.0;

  /// Sample size behind the change analysis.
  int change_n() const;

  bool operator==(const ArmSummary&) const = default;
};

struct StudySummary {
  std::string outcome_name;
  Direction direction = Direction::HigherIsBetter;
  ArmSummary rx;
  ArmSummary control;
  double milestone_week = 0.0;
  std::vector<double> visit_weeks;
  /// Var(change) as published, when a study reports it directly. Takes
  /// precedence over the SE-derived estimate.
  std::optional<double> published_change_variance;

  /// Observed mean change difference (Rx minus control) on the benefit scale.
  double benefit_difference() const {
    return benefit_sign(direction) * (rx.lsmean_change - control.lsmean_change);
  }

  /// Throws DomainError naming the offending field.
  void validate() const;

  bool operator==(const StudySummary&) const = default;
};

}  // namespace confirm
