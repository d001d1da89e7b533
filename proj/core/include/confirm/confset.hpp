#pragma once

#include <array>
#include <optional>
#include <vector>

#include "confirm/numerics.hpp"

namespace confirm::confset {

/// Point estimate and standard error on the benefit scale (positive means
/// the treatment helps). Lower-is-better endpoints are negated on ingestion.
struct EndpointEstimate {
  double theta_hat = 0.0;
  double sigma = 1.0;

  double z_score() const { return theta_hat / sigma; }
  void validate() const;
};

struct PartitionConfig {
  Probability alpha = 0.05;
  double c_md = 0.0;  // clinically meaningful difference; no default in documents
  double rho = 0.0;   // correlation between the two endpoint estimates

  void validate() const;
};

/// Either a one-sided interval or the non-informative whole line.
///
/// `orientation` records which way the bound points: +1 means
/// theta >= lower; -1 means -theta >= lower, i.e. theta <= -lower.
struct DirectedInterval {
  enum class Kind { LowerBounded, WholeLine };

  Kind kind = Kind::WholeLine;
  double lower = 0.0;
  int orientation = 1;

  static DirectedInterval whole_line() { return {}; }
  bool is_whole_line() const { return kind == Kind::WholeLine; }
  bool contains(double theta) const;
};

enum class Quadrant { NegNeg, PosNeg, NegPos };

struct TransitionDecision {
  bool neg_neg_eliminated = false;
  bool pos_neg_eliminated = false;
  bool neg_pos_eliminated = false;
  bool transition = false;
  double critical_bound = 0.0;
  std::array<double, 2> per_endpoint_lower{};

  std::vector<Quadrant> eliminated_quadrants() const;
};

struct DesignationDecision {
  enum class Outcome { Primary1, Primary2, Combine, Inconclusive };

  Outcome outcome = Outcome::Inconclusive;
  std::optional<double> avg_lower;  // set only for Combine
  DirectedInterval diff_interval;
};

/// Allowance d solving
///   Phi(d / sigma) - Phi((-sigma z_{1-alpha/2} - (theta_hat - d)) / sigma) = 1 - alpha
/// on [sigma z_{1-alpha}, sigma z_{1-alpha/2}]. d equals sigma z_{1-alpha/2}
/// exactly at the boundary theta_hat = sigma z_{1-alpha/2} and decreases
/// toward sigma z_{1-alpha} as theta_hat grows.
///
/// Throws NotApplicableError when theta_hat_abs < sigma z_{1-alpha/2}; the
/// confidence set is then the whole line.
double allowance_d(double theta_hat_abs, double sigma, Probability alpha);

/// Upper edge of the asymmetric acceptance region for a candidate
/// theta_diff >= 0: the value e with
///   P(-sigma z_{1-alpha/2} <= theta_hat <= e) = 1 - alpha,  theta_hat ~ N(theta_diff, sigma^2).
double acceptance_upper_edge(double theta_diff, double sigma, Probability alpha);

/// Directed confidence interval for a difference of efficacies. Whole line
/// unless |theta_hat| > sigma z_{1-alpha/2}; otherwise bounded away from zero
/// in the observed direction by |theta_hat| - d.
DirectedInterval directed_diff_interval(const EndpointEstimate& diff, Probability alpha);

/// Critical value b with P(max(Z1, Z2) > b) = alpha for standard normals with
/// correlation rho in [0, 1]. b(1) = z_{1-alpha}, b(0) = Phi^-1(sqrt(1-alpha)).
double joint_critical_bound(double rho, Probability alpha);

/// Quadrant elimination for the transition question: the neg-neg quadrant
/// needs the multiplicity-adjusted bound, the single-efficacy quadrants do
/// not.
TransitionDecision transition_decision(const EndpointEstimate& e1, const EndpointEstimate& e2,
                                       const PartitionConfig& cfg);

/// theta2 - theta1 with sigma sqrt(s1^2 + s2^2 - 2 rho s1 s2).
EndpointEstimate difference_estimate(const EndpointEstimate& e1, const EndpointEstimate& e2, double rho);

/// (theta1 + theta2) / 2 with sigma sqrt(s1^2 + s2^2 + 2 rho s1 s2) / 2.
EndpointEstimate average_estimate(const EndpointEstimate& e1, const EndpointEstimate& e2, double rho);

/// One-sided level-alpha lower bound of the average efficacy.
double combined_lower_bound(const EndpointEstimate& e1, const EndpointEstimate& e2, double rho,
                            Probability alpha);
double combined_lower_bound(const EndpointEstimate& avg, Probability alpha);

/// Designation from already-formed difference and average estimates, without
/// the transition gate. Cone checks come first; a bound equal to c_md does
/// not clear it.
DesignationDecision designate_from_contrasts(const EndpointEstimate& diff, const EndpointEstimate& avg,
                                             const PartitionConfig& cfg);

/// Full designation path: Inconclusive unless both single-efficacy quadrants
/// (and the neg-neg quadrant) are eliminated.
DesignationDecision designate_endpoint(const EndpointEstimate& e1, const EndpointEstimate& e2,
                                       const PartitionConfig& cfg);

const char* to_string(DesignationDecision::Outcome outcome);
const char* to_string(Quadrant q);

}  // namespace confirm::confset
