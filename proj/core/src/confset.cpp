#include "confirm/confset.hpp"

#include <algorithm>
#include <cmath>

#include "confirm/error.hpp"

namespace confirm::confset {

using numerics::normal_cdf;
using numerics::std_normal_quantile;

namespace {

void check_alpha(Probability alpha) {
  if (!(alpha.value() > 0.0 && alpha.value() < 0.5)) {
    throw DomainError("alpha must lie in (0, 0.5)", "alpha");
  }
}

}  // namespace

void EndpointEstimate::validate() const {
  if (!std::isfinite(theta_hat)) throw DomainError("theta_hat must be finite", "theta_hat");
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw DomainError("sigma must be > 0", "sigma");
}

void PartitionConfig::validate() const {
  check_alpha(alpha);
  if (!(c_md >= 0.0) || !std::isfinite(c_md)) throw DomainError("c_md must be >= 0", "c_md");
  if (!(rho >= -1.0 && rho <= 1.0)) throw DomainError("rho must lie in [-1, 1]", "rho");
}

bool DirectedInterval::contains(double theta) const {
  if (kind == Kind::WholeLine) return true;
  return orientation * theta >= lower;
}

std::vector<Quadrant> TransitionDecision::eliminated_quadrants() const {
  std::vector<Quadrant> out;
  if (neg_neg_eliminated) out.push_back(Quadrant::NegNeg);
  if (pos_neg_eliminated) out.push_back(Quadrant::PosNeg);
  if (neg_pos_eliminated) out.push_back(Quadrant::NegPos);
  return out;
}

double allowance_d(double theta_hat_abs, double sigma, Probability alpha) {
  check_alpha(alpha);
  if (!(sigma > 0.0)) throw DomainError("sigma must be > 0", "sigma");
  const double z_two = std_normal_quantile(1.0 - alpha / 2.0);
  const double z_one = std_normal_quantile(1.0 - alpha);
  const double t = theta_hat_abs / sigma;
  if (!(t >= z_two)) {
    throw NotApplicableError("allowance_d: |theta_hat| within sigma z_{1-alpha/2}; interval is the whole line");
  }
  // Work in sigma units. The coverage function is unimodal in u with a
  // second root above z_two, so the bracket stops exactly at z_two, where
  // gap(z_two) = alpha/2 - Phi(-t) >= 0.
  const double target = 1.0 - alpha;
  const auto gap = [t, z_two, target](double u) { return normal_cdf(u) - normal_cdf(u - z_two - t) - target; };
  if (gap(z_two) <= 0.0) return sigma * z_two;  // boundary (and its rounding neighbourhood)
  const double u = numerics::solve_root(gap, z_one, z_two, 1e-13);
  return sigma * u;
}

double acceptance_upper_edge(double theta_diff, double sigma, Probability alpha) {
  check_alpha(alpha);
  if (!(sigma > 0.0)) throw DomainError("sigma must be > 0", "sigma");
  const double z_two = std_normal_quantile(1.0 - alpha / 2.0);
  const double level = 1.0 - alpha + normal_cdf(-z_two - theta_diff / sigma);
  return theta_diff + sigma * std_normal_quantile(level);
}

DirectedInterval directed_diff_interval(const EndpointEstimate& diff, Probability alpha) {
  diff.validate();
  check_alpha(alpha);
  const double z_two = std_normal_quantile(1.0 - alpha / 2.0);
  const double magnitude = std::fabs(diff.theta_hat);
  if (magnitude <= diff.sigma * z_two) return DirectedInterval::whole_line();
  DirectedInterval out;
  out.kind = DirectedInterval::Kind::LowerBounded;
  out.orientation = diff.theta_hat > 0.0 ? 1 : -1;
  out.lower = magnitude - allowance_d(magnitude, diff.sigma, alpha);
  return out;
}

double joint_critical_bound(double rho, Probability alpha) {
  check_alpha(alpha);
  if (std::isnan(rho) || rho < 0.0) {
    throw DomainError("joint_critical_bound: negatively correlated endpoints are not supported", "rho");
  }
  if (rho > 1.0) throw DomainError("rho must lie in [0, 1]", "rho");
  const double lo = std_normal_quantile(1.0 - alpha);
  const double hi = std_normal_quantile(std::sqrt(1.0 - alpha.value()));
  if (rho == 1.0) return lo;
  if (rho == 0.0) return hi;
  const auto excess = [rho, a = alpha.value()](double b) { return 1.0 - numerics::bvn_cdf(b, b, rho) - a; };
  const double pad = 1e-6;
  return numerics::solve_root(excess, lo - pad, hi + pad, 1e-12);
}

TransitionDecision transition_decision(const EndpointEstimate& e1, const EndpointEstimate& e2,
                                       const PartitionConfig& cfg) {
  e1.validate();
  e2.validate();
  cfg.validate();
  const double bound = joint_critical_bound(cfg.rho, cfg.alpha);
  const double z_one = std_normal_quantile(1.0 - cfg.alpha);
  const double z1 = e1.z_score();
  const double z2 = e2.z_score();

  TransitionDecision out;
  out.critical_bound = bound;
  out.neg_neg_eliminated = std::max(z1, z2) > bound;
  out.pos_neg_eliminated = z2 > z_one;
  out.neg_pos_eliminated = z1 > z_one;
  out.transition = out.neg_neg_eliminated && (out.pos_neg_eliminated || out.neg_pos_eliminated);
  out.per_endpoint_lower = {e1.theta_hat - bound * e1.sigma, e2.theta_hat - bound * e2.sigma};
  return out;
}

EndpointEstimate difference_estimate(const EndpointEstimate& e1, const EndpointEstimate& e2, double rho) {
  const double var = e1.sigma * e1.sigma + e2.sigma * e2.sigma - 2.0 * rho * e1.sigma * e2.sigma;
  return {e2.theta_hat - e1.theta_hat, std::sqrt(std::max(0.0, var))};
}

EndpointEstimate average_estimate(const EndpointEstimate& e1, const EndpointEstimate& e2, double rho) {
  const double var = e1.sigma * e1.sigma + e2.sigma * e2.sigma + 2.0 * rho * e1.sigma * e2.sigma;
  return {(e1.theta_hat + e2.theta_hat) / 2.0, std::sqrt(std::max(0.0, var)) / 2.0};
}

double combined_lower_bound(const EndpointEstimate& avg, Probability alpha) {
  if (!(alpha.value() > 0.0 && alpha.value() < 1.0)) throw DomainError("alpha must lie in (0, 1)", "alpha");
  if (!(avg.sigma >= 0.0)) throw DomainError("sigma must be >= 0", "sigma");
  return avg.theta_hat - std_normal_quantile(1.0 - alpha) * avg.sigma;
}

double combined_lower_bound(const EndpointEstimate& e1, const EndpointEstimate& e2, double rho,
                            Probability alpha) {
  if (!(rho >= -1.0 && rho <= 1.0)) throw DomainError("rho must lie in [-1, 1]", "rho");
  return combined_lower_bound(average_estimate(e1, e2, rho), alpha);
}

DesignationDecision designate_from_contrasts(const EndpointEstimate& diff, const EndpointEstimate& avg,
                                             const PartitionConfig& cfg) {
  cfg.validate();
  DesignationDecision out;
  out.diff_interval = directed_diff_interval(diff, cfg.alpha);
  const auto& iv = out.diff_interval;
  if (!iv.is_whole_line() && iv.lower > cfg.c_md) {
    out.outcome = iv.orientation > 0 ? DesignationDecision::Outcome::Primary2
                                     : DesignationDecision::Outcome::Primary1;
    return out;
  }
  out.outcome = DesignationDecision::Outcome::Combine;
  out.avg_lower = combined_lower_bound(avg, cfg.alpha);
  return out;
}

DesignationDecision designate_endpoint(const EndpointEstimate& e1, const EndpointEstimate& e2,
                                       const PartitionConfig& cfg) {
  const TransitionDecision gate = transition_decision(e1, e2, cfg);
  const EndpointEstimate diff = difference_estimate(e1, e2, cfg.rho);
  const bool both_positive = gate.transition && gate.pos_neg_eliminated && gate.neg_pos_eliminated;
  if (!both_positive) {
    DesignationDecision out;
    out.outcome = DesignationDecision::Outcome::Inconclusive;
    if (diff.sigma > 0.0) out.diff_interval = directed_diff_interval(diff, cfg.alpha);
    return out;
  }
  if (!(diff.sigma > 0.0)) throw DomainError("difference has zero variance (rho = 1 with equal sigmas)", "rho");
  return designate_from_contrasts(diff, average_estimate(e1, e2, cfg.rho), cfg);
}

const char* to_string(DesignationDecision::Outcome outcome) {
  switch (outcome) {
    case DesignationDecision::Outcome::Primary1: return "Primary1";
    case DesignationDecision::Outcome::Primary2: return "Primary2";
    case DesignationDecision::Outcome::Combine: return "Combine";
    case DesignationDecision::Outcome::Inconclusive: return "Inconclusive";
  }
  return "Inconclusive";
}

const char* to_string(Quadrant q) {
  switch (q) {
    case Quadrant::NegNeg: return "NegNeg";
    case Quadrant::PosNeg: return "PosNeg";
    case Quadrant::NegPos: return "NegPos";
  }
  return "NegNeg";
}

}  // namespace confirm::confset
