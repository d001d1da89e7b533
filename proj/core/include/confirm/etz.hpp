#pragma once

#include "confirm/study.hpp"

namespace confirm::etz {

/// The three variances a publication (or an MMRM R matrix) supplies:
/// baseline visit, milestone visit, and change from baseline. Units are
/// outcome-units squared.
struct VarianceTriple {
  double var_baseline = 0.0;
  double var_milestone = 0.0;
  double var_change = 0.0;

  bool operator==(const VarianceTriple&) const = default;
};

/// Variance of the random intercept Z, the per-visit measurement error E,
/// and the random trajectory Traj at the milestone.
struct EtzComponents {
  double var_z = 0.0;
  double var_e = 0.0;
  double var_traj = 0.0;

  void validate() const;
  bool operator==(const EtzComponents&) const = default;
};

struct EtzStandardDeviations {
  double sd_z = 0.0;
  double sd_e = 0.0;
  double sd_traj = 0.0;
};

EtzStandardDeviations standard_deviations(const EtzComponents& c);

/// Recover (Var Z, Var E, Var Traj) assuming Z and Traj are independent.
///
///   Var Z    = (baseline + milestone - change) / 2
///   Var E    = baseline - Var Z
///   Var Traj = change - 2 Var E
///
/// A component that comes out negative is reported, not clamped: it means
/// the inputs are inconsistent or the independence assumption fails.
/// Negatives within 1e-12 of the input scale are floating-point residue
/// and are read as zero.
EtzComponents decompose_etz(const VarianceTriple& v);

/// Inverse of decompose_etz. Change carries two measurement-error draws and
/// no intercept, so Var Z never reaches var_change.
VarianceTriple compose_variances(const EtzComponents& c);

/// Triple from the [1,1], [m,m] and [1,m] entries of an unstructured
/// covariance matrix: Var(change) = r11 + rmm - 2 r1m.
VarianceTriple variances_from_r_matrix(double r11, double rmm, double r1m);

/// Pooled change variance from the per-arm SEs of the LS-mean change:
/// s_t^2 = se_t^2 n_t pooled with (n - 1) weights. This is an approximation;
/// prefer a published Var(change) when available.
double change_variance_from_se(const ArmSummary& rx, const ArmSummary& control);

/// sqrt(Var Traj + 2 Var E), the SD of change.
double pooled_change_sd(const EtzComponents& c);

/// Entry-wise (n - 1)-weighted pooling of two arms' triples under the
/// equal-variance-across-arms assumption.
VarianceTriple pool_variance_triples(const VarianceTriple& rx, int n_rx, const VarianceTriple& control,
                                     int n_control);

}  // namespace confirm::etz
