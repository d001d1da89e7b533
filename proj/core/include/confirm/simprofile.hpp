#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "confirm/etz.hpp"
#include "confirm/study.hpp"

namespace confirm::sim {

/// Linear response profiles alpha + beta_arm * week. Both arms share one
/// intercept mean (randomization); the per-arm display intercepts are kept
/// only for annotating plots.
struct FixedEffects {
  double alpha_common = 0.0;
  double beta_rx = 0.0;  // outcome units per week
  double beta_c = 0.0;
  std::optional<double> alpha_rx_display;
  std::optional<double> alpha_c_display;

  void validate() const;
  /// Non-fatal issues, e.g. display intercepts far apart relative to SD(Z).
  std::vector<std::string> warnings(const etz::EtzComponents& etz) const;
  bool operator==(const FixedEffects&) const = default;
};

/// Shared intercept = n-weighted mean of the published baselines; slopes =
/// LS-mean change / milestone week.
FixedEffects fixed_effects_from_study(const StudySummary& study);

/// Visit schedule of the EXPEDITION3 ADCS-iADL analysis (weeks).
std::vector<double> default_visit_weeks();

struct SimConfig {
  std::vector<double> visit_weeks = default_visit_weeks();
  int n_rx = 2;
  int n_c = 2;
  etz::EtzComponents etz;
  std::uint64_t seed = 0;
  int n_reps = 1;

  double milestone_week() const { return visit_weeks.empty() ? 0.0 : visit_weeks.back(); }
  void validate() const;
};

struct RandomCoefficients {
  double sigma_a2 = 0.0;  // intercept variance
  double sigma_b2 = 0.0;  // slope variance, per week^2
  double sigma2 = 0.0;    // residual variance

  bool operator==(const RandomCoefficients&) const = default;
};

/// (Var Z, Var Traj / t_m^2, Var E) with sigma_ab fixed at zero.
RandomCoefficients etz_to_random_coefficients(const etz::EtzComponents& etz, double t_m);

enum class Arm : std::uint8_t { Rx = 0, Control = 1 };
const char* to_string(Arm arm);

/// One replication of the confirmatory study. Patients are stored Rx first,
/// then control; per-visit arrays are row-major [patient][visit].
///
///   Y[i][v] = alpha + a_i + (beta_arm + b_i) week_v + e[i][v]
struct SimulatedStudy {
  std::vector<double> visit_weeks;
  FixedEffects fixed_effects;
  RandomCoefficients coefficients;
  int rep_index = 0;
  int n_rx = 0;
  int n_c = 0;
  std::vector<double> intercept_draws;
  std::vector<double> slope_draws;
  std::vector<double> errors;
  std::vector<double> observations;

  std::size_t n_patients() const { return intercept_draws.size(); }
  std::size_t n_visits() const { return visit_weeks.size(); }
  Arm arm_of(std::size_t patient) const { return patient < static_cast<std::size_t>(n_rx) ? Arm::Rx : Arm::Control; }
  double observation(std::size_t patient, std::size_t visit) const { return observations[patient * n_visits() + visit]; }
  double error(std::size_t patient, std::size_t visit) const { return errors[patient * n_visits() + visit]; }

  /// Mean change at the milestone, Rx minus control.
  double milestone_separation() const;

  bool operator==(const SimulatedStudy&) const = default;
};

/// Stream key for one patient: draws depend only on (seed, rep, arm, index),
/// so adding patients never perturbs existing ones.
std::uint64_t patient_stream_id(int rep_index, Arm arm, int patient_index);

SimulatedStudy simulate_study(const FixedEffects& fx, const SimConfig& cfg, int rep_index);

struct EmpiricalMoments {
  etz::VarianceTriple triple;
  double cov_baseline_milestone = 0.0;
  std::size_t patients = 0;
};

/// Pooled within-group sample moments; a group is one arm of one study.
EmpiricalMoments empirical_moments(std::span<const SimulatedStudy> studies);

etz::VarianceTriple empirical_variance_triple(const SimulatedStudy& study);
etz::VarianceTriple empirical_variance_triple(std::span<const SimulatedStudy> studies);

struct ProfileRow {
  double week = 0.0;
  Arm arm = Arm::Rx;
  int n = 0;
  double mean_y = 0.0;
  double mean_change = 0.0;
};

/// Arm means per visit, ordered by week, Rx before control.
std::vector<ProfileRow> profile_table(const SimulatedStudy& study);

struct ReplicabilityMetrics {
  double mean_separation = 0.0;
  double sd_separation = 0.0;
  double frac_positive = 0.0;
  std::vector<double> per_rep;
};

/// Runs cfg.n_reps replications (rep_index 0..n_reps-1) and summarizes the
/// milestone separation. Bit-identical for any worker count.
ReplicabilityMetrics replicability_metrics(const FixedEffects& fx, const SimConfig& cfg, unsigned workers = 0);

/// Normal draws consumed by `reps` replications of cfg.
std::uint64_t simulation_draw_count(const SimConfig& cfg, std::uint64_t reps);

}  // namespace confirm::sim
