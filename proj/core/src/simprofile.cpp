#include "confirm/simprofile.hpp"

#include <cmath>
#include <sstream>

#include "confirm/error.hpp"
#include "confirm/parallel.hpp"
#include "confirm/rng.hpp"

namespace confirm::sim {

void FixedEffects::validate() const {
  if (!std::isfinite(alpha_common)) throw DomainError("alpha_common must be finite", "fixed_effects.alpha_common");
  if (!std::isfinite(beta_rx)) throw DomainError("beta_rx must be finite", "fixed_effects.beta_rx");
  if (!std::isfinite(beta_c)) throw DomainError("beta_c must be finite", "fixed_effects.beta_c");
}

std::vector<std::string> FixedEffects::warnings(const etz::EtzComponents& etz) const {
  std::vector<std::string> out;
  if (alpha_rx_display && alpha_c_display) {
    const double gap = std::fabs(*alpha_rx_display - *alpha_c_display);
    const double sd_z = std::sqrt(etz.var_z);
    if (gap > 0.25 * sd_z) {
      std::ostringstream os;
      os << "display intercepts differ by " << gap << ", large relative to SD(Z) = " << sd_z;
      out.push_back(os.str());
    }
  }
  return out;
}

FixedEffects fixed_effects_from_study(const StudySummary& study) {
  study.validate();
  if (!(study.milestone_week > 0.0)) throw DomainError("milestone_week must be > 0", "milestone_week");
  const double n_rx = study.rx.n_baseline;
  const double n_c = study.control.n_baseline;
  FixedEffects fx;
  fx.alpha_common = (n_rx * study.rx.mean_baseline + n_c * study.control.mean_baseline) / (n_rx + n_c);
  fx.beta_rx = study.rx.lsmean_change / study.milestone_week;
  fx.beta_c = study.control.lsmean_change / study.milestone_week;
  fx.alpha_rx_display = study.rx.mean_baseline;
  fx.alpha_c_display = study.control.mean_baseline;
  return fx;
}

std::vector<double> default_visit_weeks() { return {0, 12, 28, 40, 52, 64, 80}; }

void SimConfig::validate() const {
  if (visit_weeks.size() < 2) throw DomainError("need at least two visits", "config.visit_weeks");
  if (visit_weeks.front() != 0.0) throw DomainError("first visit must be week 0", "config.visit_weeks");
  for (std::size_t i = 1; i < visit_weeks.size(); ++i) {
    if (!(visit_weeks[i] > visit_weeks[i - 1])) {
      throw DomainError("visit weeks must be strictly increasing", "config.visit_weeks");
    }
  }
  if (n_rx < 2) throw DomainError("n_rx must be >= 2", "config.n_rx");
  if (n_c < 2) throw DomainError("n_c must be >= 2", "config.n_c");
  if (n_reps < 1) throw DomainError("n_reps must be >= 1", "config.n_reps");
  etz.validate();
}

RandomCoefficients etz_to_random_coefficients(const etz::EtzComponents& etz, double t_m) {
  if (!(t_m > 0.0) || !std::isfinite(t_m)) throw DomainError("milestone time must be > 0", "t_m");
  etz.validate();
  return {etz.var_z, etz.var_traj / (t_m * t_m), etz.var_e};
}

const char* to_string(Arm arm) { return arm == Arm::Rx ? "rx" : "control"; }

double SimulatedStudy::milestone_separation() const {
  const std::size_t m = n_visits() - 1;
  double sum_rx = 0.0;
  double sum_c = 0.0;
  for (std::size_t i = 0; i < n_patients(); ++i) {
    const double change = observation(i, m) - observation(i, 0);
    (arm_of(i) == Arm::Rx ? sum_rx : sum_c) += change;
  }
  return sum_rx / n_rx - sum_c / n_c;
}

std::uint64_t patient_stream_id(int rep_index, Arm arm, int patient_index) {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(rep_index)) << 32) |
         (static_cast<std::uint64_t>(arm) << 31) |
         static_cast<std::uint64_t>(static_cast<std::uint32_t>(patient_index) & 0x7FFFFFFFu);
}

SimulatedStudy simulate_study(const FixedEffects& fx, const SimConfig& cfg, int rep_index) {
  fx.validate();
  cfg.validate();
  if (rep_index < 0) throw DomainError("rep_index must be >= 0", "rep_index");

  SimulatedStudy s;
  s.visit_weeks = cfg.visit_weeks;
  s.fixed_effects = fx;
  s.coefficients = etz_to_random_coefficients(cfg.etz, cfg.milestone_week());
  s.rep_index = rep_index;
  s.n_rx = cfg.n_rx;
  s.n_c = cfg.n_c;

  const std::size_t patients = static_cast<std::size_t>(cfg.n_rx) + static_cast<std::size_t>(cfg.n_c);
  const std::size_t visits = cfg.visit_weeks.size();
  s.intercept_draws.resize(patients);
  s.slope_draws.resize(patients);
  s.errors.resize(patients * visits);
  s.observations.resize(patients * visits);

  const double sd_a = std::sqrt(s.coefficients.sigma_a2);
  const double sd_b = std::sqrt(s.coefficients.sigma_b2);
  const double sd_e = std::sqrt(s.coefficients.sigma2);

  for (std::size_t i = 0; i < patients; ++i) {
    const Arm arm = s.arm_of(i);
    const int index = arm == Arm::Rx ? static_cast<int>(i) : static_cast<int>(i) - cfg.n_rx;
    RngStream stream(cfg.seed, patient_stream_id(rep_index, arm, index));
    const double a = rng_normal(stream, 0.0, sd_a);
    const double b = rng_normal(stream, 0.0, sd_b);
    const double beta = arm == Arm::Rx ? fx.beta_rx : fx.beta_c;
    s.intercept_draws[i] = a;
    s.slope_draws[i] = b;
    for (std::size_t v = 0; v < visits; ++v) {
      const double e = rng_normal(stream, 0.0, sd_e);
      const double week = cfg.visit_weeks[v];
      s.errors[i * visits + v] = e;
      s.observations[i * visits + v] = fx.alpha_common + a + (beta + b) * week + e;
    }
  }
  return s;
}

EmpiricalMoments empirical_moments(std::span<const SimulatedStudy> studies) {
  double ss_base = 0.0;
  double ss_mile = 0.0;
  double ss_change = 0.0;
  double sp_base_mile = 0.0;
  double dof = 0.0;
  std::size_t total = 0;

  for (const SimulatedStudy& s : studies) {
    const std::size_t m = s.n_visits() - 1;
    for (Arm arm : {Arm::Rx, Arm::Control}) {
      const std::size_t begin = arm == Arm::Rx ? 0 : static_cast<std::size_t>(s.n_rx);
      const std::size_t end = arm == Arm::Rx ? static_cast<std::size_t>(s.n_rx) : s.n_patients();
      const std::size_t n = end - begin;
      if (n < 2) throw DomainError("need at least two patients per arm");
      double mean_b = 0.0, mean_m = 0.0, mean_c = 0.0;
      for (std::size_t i = begin; i < end; ++i) {
        mean_b += s.observation(i, 0);
        mean_m += s.observation(i, m);
        mean_c += s.observation(i, m) - s.observation(i, 0);
      }
      mean_b /= static_cast<double>(n);
      mean_m /= static_cast<double>(n);
      mean_c /= static_cast<double>(n);
      for (std::size_t i = begin; i < end; ++i) {
        const double db = s.observation(i, 0) - mean_b;
        const double dm = s.observation(i, m) - mean_m;
        const double dc = (s.observation(i, m) - s.observation(i, 0)) - mean_c;
        ss_base += db * db;
        ss_mile += dm * dm;
        ss_change += dc * dc;
        sp_base_mile += db * dm;
      }
      dof += static_cast<double>(n - 1);
      total += n;
    }
  }
  if (dof <= 0.0) throw DomainError("need at least two patients per arm");
  EmpiricalMoments out;
  out.triple = {ss_base / dof, ss_mile / dof, ss_change / dof};
  out.cov_baseline_milestone = sp_base_mile / dof;
  out.patients = total;
  return out;
}

etz::VarianceTriple empirical_variance_triple(std::span<const SimulatedStudy> studies) {
  return empirical_moments(studies).triple;
}

etz::VarianceTriple empirical_variance_triple(const SimulatedStudy& study) {
  return empirical_moments(std::span<const SimulatedStudy>(&study, 1)).triple;
}

std::vector<ProfileRow> profile_table(const SimulatedStudy& study) {
  std::vector<ProfileRow> rows;
  rows.reserve(study.n_visits() * 2);
  for (std::size_t v = 0; v < study.n_visits(); ++v) {
    for (Arm arm : {Arm::Rx, Arm::Control}) {
      const std::size_t begin = arm == Arm::Rx ? 0 : static_cast<std::size_t>(study.n_rx);
      const std::size_t end = arm == Arm::Rx ? static_cast<std::size_t>(study.n_rx) : study.n_patients();
      double sum_y = 0.0;
      double sum_change = 0.0;
      for (std::size_t i = begin; i < end; ++i) {
        sum_y += study.observation(i, v);
        sum_change += study.observation(i, v) - study.observation(i, 0);
      }
      const auto n = static_cast<double>(end - begin);
      rows.push_back({study.visit_weeks[v], arm, static_cast<int>(end - begin), sum_y / n, sum_change / n});
    }
  }
  return rows;
}

ReplicabilityMetrics replicability_metrics(const FixedEffects& fx, const SimConfig& cfg, unsigned workers) {
  cfg.validate();
  if (cfg.n_reps < 2) throw DomainError("replicability needs n_reps >= 2", "config.n_reps");
  ReplicabilityMetrics out;
  out.per_rep.resize(static_cast<std::size_t>(cfg.n_reps));
  parallel_for(out.per_rep.size(), workers, [&](std::size_t begin, std::size_t end) {
    for (std::size_t r = begin; r < end; ++r) {
      out.per_rep[r] = simulate_study(fx, cfg, static_cast<int>(r)).milestone_separation();
    }
  });

  const auto n = static_cast<double>(out.per_rep.size());
  double sum = 0.0;
  std::size_t positive = 0;
  for (double v : out.per_rep) {
    sum += v;
    if (v > 0.0) ++positive;
  }
  out.mean_separation = sum / n;
  double ss = 0.0;
  for (double v : out.per_rep) ss += (v - out.mean_separation) * (v - out.mean_separation);
  out.sd_separation = std::sqrt(ss / (n - 1.0));
  out.frac_positive = static_cast<double>(positive) / n;
  return out;
}

std::uint64_t simulation_draw_count(const SimConfig& cfg, std::uint64_t reps) {
  const std::uint64_t patients = static_cast<std::uint64_t>(std::max(0, cfg.n_rx)) +
                                 static_cast<std::uint64_t>(std::max(0, cfg.n_c));
  return reps * patients * (cfg.visit_weeks.size() + 2);
}

}  // namespace confirm::sim
