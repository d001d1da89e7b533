#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "confirm/etz.hpp"
#include "confirm/numerics.hpp"
#include "confirm/study.hpp"

namespace confirm::cbq {

/// Success confidence gamma split into two discounts above the 50/50 level:
/// (d_phase2 + 0.5) (d_phase3 + 0.5) = gamma.
struct DiscountPlan {
  Probability gamma = 0.25;
  double d_phase2 = 0.0;
  double d_phase3 = 0.0;

  /// Checks ranges and the product identity (to 1e-9).
  void validate() const;
  bool operator==(const DiscountPlan&) const = default;
};

enum class KnownDiscount { Phase2, Phase3 };

/// Solve the product identity for the missing discount.
/// Throws InfeasibleError when it falls outside [0, 0.5).
DiscountPlan complete_discount_plan(Probability gamma, KnownDiscount known, double value);

/// Lower confidence limit of the feeder-study efficacy at level
/// d_phase2 + 0.5, on the benefit scale.
struct ConfidentEfficacy {
  double value = 0.0;
  Probability level = 0.5;
  int df = 1;
  double se_pooled = 0.0;
  double theta_bar = 0.0;  // benefit-scale point estimate it was built from
};

/// se_pooled = sqrt(se_rx^2 + se_c^2) (the SE of the arm difference);
/// value = theta_bar - t_{d2+0.5, n_rx+n_c-2} se_pooled. For LowerIsBetter
/// the raw difference is negated first.
ConfidentEfficacy confident_efficacy(double theta_bar, double se_rx, double se_c, int n_rx, int n_c,
                                     double d_phase2, Direction direction = Direction::HigherIsBetter);

struct Phase3Design {
  int n_rx = 2;
  int n_c = 2;
  double sigma_pooled = 0.0;  // SD of change
  int reps = 10000;
  std::uint64_t seed = 0;

  void validate() const;
  /// sqrt(1/n_rx + 1/n_c)
  double contrast_factor() const;
  bool operator==(const Phase3Design&) const = default;
};

/// L - Phi^-1(d3 + 0.5) sigma sqrt(1/n_rx + 1/n_c).
double cbq_closed_form(const ConfidentEfficacy& L, const Phase3Design& design, double d_phase3);

struct HistogramBin {
  double lower = 0.0;
  double upper = 0.0;
  std::size_t count = 0;

  bool operator==(const HistogramBin&) const = default;
};

inline constexpr std::size_t kHistogramBins = 50;

struct MonteCarloCbq {
  double cbq = 0.0;
  std::vector<HistogramBin> histogram;
};

/// Replicates the confirmatory estimate design.reps times and takes the
/// nearest-rank (0.5 - d3) quantile. Replication r draws from its own stream
/// (seed, r), so the result is bit-identical for any `workers` (0 picks the
/// hardware concurrency).
MonteCarloCbq cbq_monte_carlo(const ConfidentEfficacy& L, const Phase3Design& design, double d_phase3,
                              unsigned workers = 0);

/// Smallest per-arm n (n_rx = n, n_c = round(ratio n), n >= 2) with a
/// positive closed-form CBQ. Throws InfeasibleError when L <= 0.
int min_n_for_positive_cbq(const ConfidentEfficacy& L, double sigma_pooled, double d_phase3,
                           double allocation_ratio = 1.0);

/// Conventional per-arm size 2 (z_{alpha/2} + z_beta)^2 (sigma/delta)^2
/// with upper-tail z, i.e. z_gamma = Phi^-1(1 - gamma).
int classical_sample_size(Probability alpha, Probability beta, double sigma, double delta);

struct DecisionReport {
  ConfidentEfficacy confident_efficacy;
  double cbq = 0.0;              // closed form; drives the recommendation
  double cbq_monte_carlo = 0.0;  // empirical quantile of the replicated histogram
  double phase3_se = 0.0;        // sigma sqrt(1/n_rx + 1/n_c)
  bool transition_recommended = false;
  DiscountPlan plan;
  Phase3Design design;
  etz::EtzComponents etz;
  std::vector<HistogramBin> quantile_histogram;
};

/// End-to-end transition assessment for one outcome. design.sigma_pooled is
/// filled from the ETZ components; a nonzero value that disagrees with them
/// is rejected.
DecisionReport transition_assessment(const StudySummary& study, const etz::EtzComponents& etz,
                                     const DiscountPlan& plan, const Phase3Design& design,
                                     unsigned workers = 0);

}  // namespace confirm::cbq
