#include "confirm/etz.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "confirm/error.hpp"

namespace confirm {

int ArmSummary::change_n() const {
  if (n_change) return *n_change;
  return static_cast<int>(std::lround((n_baseline + n_milestone) / 2.0));
}

namespace {

void validate_arm(const ArmSummary& arm, const std::string& prefix) {
  const auto require_count = [&](int n, const char* name) {
    if (n < 2) throw DomainError("count must be >= 2", prefix + "." + name);
  };
  require_count(arm.n_baseline, "n_baseline");
  require_count(arm.n_milestone, "n_milestone");
  if (arm.n_change) require_count(*arm.n_change, "n_change");

  const auto require_finite = [&](double v, const char* name) {
    if (!std::isfinite(v)) throw DomainError("value must be finite", prefix + "." + name);
  };
  const auto require_nonneg = [&](double v, const char* name) {
    require_finite(v, name);
    if (v < 0.0) throw DomainError("value must be >= 0", prefix + "." + name);
  };
  require_finite(arm.mean_baseline, "mean_baseline");
  require_finite(arm.mean_milestone, "mean_milestone");
  require_finite(arm.lsmean_change, "lsmean_change");
  require_nonneg(arm.sd_baseline, "sd_baseline");
  require_nonneg(arm.sd_milestone, "sd_milestone");
  require_nonneg(arm.se_change, "se_change");
}

}  // namespace

void StudySummary::validate() const {
  validate_arm(rx, "arms.rx");
  validate_arm(control, "arms.control");
  if (visit_weeks.size() < 2) throw DomainError("need at least two visits", "visit_weeks");
  if (visit_weeks.front() != 0.0) throw DomainError("first visit must be week 0", "visit_weeks");
  for (std::size_t i = 1; i < visit_weeks.size(); ++i) {
    if (!(visit_weeks[i] > visit_weeks[i - 1])) {
      throw DomainError("visit weeks must be strictly increasing", "visit_weeks");
    }
  }
  if (!(milestone_week >= 0.0) || milestone_week != visit_weeks.back()) {
    throw DomainError("milestone_week must equal the last visit week", "milestone_week");
  }
  if (published_change_variance && !(*published_change_variance >= 0.0)) {
    throw DomainError("published change variance must be >= 0", "published_change_variance");
  }
}

}  // namespace confirm

namespace confirm::etz {

namespace {

// Magnitude below which a negative component is treated as rounding residue.
double residue_floor(const VarianceTriple& v) {
  return 1e-12 * std::max({v.var_baseline, v.var_milestone, v.var_change, 1.0});
}

double settle(double value, double floor, const char* name) {
  if (value >= 0.0) return value;
  if (value >= -floor) return 0.0;
  throw DecompositionError(name, value);
}

}  // namespace

void EtzComponents::validate() const {
  const auto check = [](double v, const char* name) {
    if (!std::isfinite(v) || v < 0.0) throw DomainError("variance component must be finite and >= 0", name);
  };
  check(var_z, "var_z");
  check(var_e, "var_e");
  check(var_traj, "var_traj");
}

EtzStandardDeviations standard_deviations(const EtzComponents& c) {
  return {std::sqrt(c.var_z), std::sqrt(c.var_e), std::sqrt(c.var_traj)};
}

EtzComponents decompose_etz(const VarianceTriple& v) {
  const auto check = [](double x, const char* name) {
    if (!std::isfinite(x) || x < 0.0) throw DomainError("variance must be finite and >= 0", name);
  };
  check(v.var_baseline, "var_baseline");
  check(v.var_milestone, "var_milestone");
  check(v.var_change, "var_change");

  const double floor = residue_floor(v);
  EtzComponents c;
  c.var_z = settle((v.var_baseline + v.var_milestone - v.var_change) / 2.0, floor, "var_z");
  c.var_e = settle(v.var_baseline - c.var_z, floor, "var_e");
  c.var_traj = settle(v.var_change - 2.0 * c.var_e, floor, "var_traj");
  return c;
}

VarianceTriple compose_variances(const EtzComponents& c) {
  return {c.var_z + c.var_e, c.var_z + c.var_traj + c.var_e, c.var_traj + 2.0 * c.var_e};
}

VarianceTriple variances_from_r_matrix(double r11, double rmm, double r1m) {
  if (!(r11 >= 0.0) || !std::isfinite(r11)) throw DomainError("r11 must be >= 0", "r11");
  if (!(rmm >= 0.0) || !std::isfinite(rmm)) throw DomainError("rmm must be >= 0", "rmm");
  if (!std::isfinite(r1m)) throw DomainError("r1m must be finite", "r1m");
  const double bound = std::sqrt(r11 * rmm);
  if (std::fabs(r1m) > bound * (1.0 + 1e-12)) {
    throw DomainError("|r1m| exceeds sqrt(r11 * rmm) (Cauchy-Schwarz)", "r1m");
  }
  return {r11, rmm, std::max(0.0, r11 + rmm - 2.0 * r1m)};
}

double change_variance_from_se(const ArmSummary& rx, const ArmSummary& control) {
  const int n_rx = rx.change_n();
  const int n_c = control.change_n();
  if (n_rx < 2 || n_c < 2) throw DomainError("change sample sizes must be >= 2", "n_change");
  if (!(rx.se_change > 0.0)) throw DomainError("se_change must be > 0", "arms.rx.se_change");
  if (!(control.se_change > 0.0)) throw DomainError("se_change must be > 0", "arms.control.se_change");
  const double s2_rx = rx.se_change * rx.se_change * n_rx;
  const double s2_c = control.se_change * control.se_change * n_c;
  return ((n_rx - 1) * s2_rx + (n_c - 1) * s2_c) / (n_rx + n_c - 2);
}

double pooled_change_sd(const EtzComponents& c) { return std::sqrt(c.var_traj + 2.0 * c.var_e); }

VarianceTriple pool_variance_triples(const VarianceTriple& rx, int n_rx, const VarianceTriple& control,
                                     int n_control) {
  if (n_rx < 2 || n_control < 2) throw DomainError("pooling requires n >= 2 per arm");
  const double w_rx = n_rx - 1.0;
  const double w_c = n_control - 1.0;
  const double total = w_rx + w_c;
  return {(w_rx * rx.var_baseline + w_c * control.var_baseline) / total,
          (w_rx * rx.var_milestone + w_c * control.var_milestone) / total,
          (w_rx * rx.var_change + w_c * control.var_change) / total};
}

}  // namespace confirm::etz
