#include "confirm/cbq.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "confirm/error.hpp"
#include "confirm/parallel.hpp"
#include "confirm/rng.hpp"

namespace confirm::cbq {

using numerics::std_normal_quantile;

namespace {

void check_discount(double d, const char* name) {
  if (!(d >= 0.0 && d < 0.5)) throw DomainError("discount must lie in [0, 0.5)", name);
}

}  // namespace

void DiscountPlan::validate() const {
  check_discount(d_phase2, "d_phase2");
  check_discount(d_phase3, "d_phase3");
  const double product = (d_phase2 + 0.5) * (d_phase3 + 0.5);
  if (std::fabs(product - gamma.value()) > 1e-9) {
    throw DomainError("(d_phase2 + 0.5)(d_phase3 + 0.5) must equal gamma", "gamma");
  }
}

DiscountPlan complete_discount_plan(Probability gamma, KnownDiscount known, double value) {
  if (!(gamma.value() >= 0.25 && gamma.value() < 1.0)) {
    throw DomainError("gamma must lie in [0.25, 1)", "gamma");
  }
  check_discount(value, known == KnownDiscount::Phase2 ? "d_phase2" : "d_phase3");
  const double other = gamma.value() / (value + 0.5) - 0.5;
  // The product identity can land a rounding step below zero at gamma = 0.25.
  const double settled = (other < 0.0 && other > -1e-12) ? 0.0 : other;
  if (!(settled >= 0.0 && settled < 0.5)) {
    throw InfeasibleError("no discount in [0, 0.5) satisfies the requested success confidence");
  }
  DiscountPlan plan;
  plan.gamma = gamma;
  plan.d_phase2 = known == KnownDiscount::Phase2 ? value : settled;
  plan.d_phase3 = known == KnownDiscount::Phase3 ? value : settled;
  return plan;
}

ConfidentEfficacy confident_efficacy(double theta_bar, double se_rx, double se_c, int n_rx, int n_c,
                                     double d_phase2, Direction direction) {
  if (!std::isfinite(theta_bar)) throw DomainError("theta_bar must be finite", "theta_bar");
  if (!(se_rx > 0.0)) throw DomainError("se must be > 0", "se_rx");
  if (!(se_c > 0.0)) throw DomainError("se must be > 0", "se_c");
  if (n_rx < 1 || n_c < 1 || n_rx + n_c <= 2) throw DomainError("need n_rx + n_c > 2", "n");
  check_discount(d_phase2, "d_phase2");

  ConfidentEfficacy out;
  out.theta_bar = benefit_sign(direction) * theta_bar;
  out.df = n_rx + n_c - 2;
  out.level = d_phase2 + 0.5;
  out.se_pooled = std::sqrt(se_rx * se_rx + se_c * se_c);
  out.value = out.theta_bar - numerics::student_t_quantile(out.level, out.df) * out.se_pooled;
  return out;
}

void Phase3Design::validate() const {
  if (n_rx < 2) throw DomainError("n_rx must be >= 2", "design.n_rx");
  if (n_c < 2) throw DomainError("n_c must be >= 2", "design.n_c");
  if (!(sigma_pooled >= 0.0) || !std::isfinite(sigma_pooled)) {
    throw DomainError("sigma_pooled must be >= 0", "design.sigma_pooled");
  }
  if (reps < 1000) throw DomainError("reps must be >= 1000", "design.reps");
}

double Phase3Design::contrast_factor() const { return std::sqrt(1.0 / n_rx + 1.0 / n_c); }

double cbq_closed_form(const ConfidentEfficacy& L, const Phase3Design& design, double d_phase3) {
  check_discount(d_phase3, "d_phase3");
  if (design.n_rx < 1 || design.n_c < 1) throw DomainError("sample sizes must be positive", "design");
  if (!(design.sigma_pooled >= 0.0)) throw DomainError("sigma_pooled must be >= 0", "design.sigma_pooled");
  const double z = std_normal_quantile(d_phase3 + 0.5);
  return L.value - z * design.sigma_pooled * design.contrast_factor();
}

MonteCarloCbq cbq_monte_carlo(const ConfidentEfficacy& L, const Phase3Design& design, double d_phase3,
                              unsigned workers) {
  design.validate();
  check_discount(d_phase3, "d_phase3");
  const auto reps = static_cast<std::size_t>(design.reps);
  const double sd = design.sigma_pooled * design.contrast_factor();

  std::vector<double> draws(reps);
  parallel_for(reps, workers, [&](std::size_t begin, std::size_t end) {
    for (std::size_t r = begin; r < end; ++r) {
      RngStream stream(design.seed, r);
      draws[r] = rng_normal(stream, L.value, sd);
    }
  });
  std::sort(draws.begin(), draws.end());

  const double q = 0.5 - d_phase3;
  const auto rank = static_cast<std::size_t>(std::ceil(q * static_cast<double>(reps)));
  const std::size_t index = std::clamp<std::size_t>(rank, 1, reps) - 1;

  MonteCarloCbq out;
  out.cbq = draws[index];

  const double lo = draws.front();
  const double hi = draws.back();
  if (hi == lo) {
    out.histogram.push_back({lo, hi, reps});
    return out;
  }
  const double width = (hi - lo) / static_cast<double>(kHistogramBins);
  out.histogram.resize(kHistogramBins);
  for (std::size_t b = 0; b < kHistogramBins; ++b) {
    out.histogram[b].lower = lo + width * static_cast<double>(b);
    out.histogram[b].upper = b + 1 == kHistogramBins ? hi : lo + width * static_cast<double>(b + 1);
  }
  for (double v : draws) {
    auto b = static_cast<std::size_t>((v - lo) / width);
    if (b >= kHistogramBins) b = kHistogramBins - 1;
    ++out.histogram[b].count;
  }
  return out;
}

int min_n_for_positive_cbq(const ConfidentEfficacy& L, double sigma_pooled, double d_phase3,
                           double allocation_ratio) {
  check_discount(d_phase3, "d_phase3");
  if (!(sigma_pooled >= 0.0)) throw DomainError("sigma_pooled must be >= 0", "sigma_pooled");
  if (!(allocation_ratio > 0.0)) throw DomainError("allocation_ratio must be > 0", "allocation_ratio");
  if (!(L.value > 0.0)) {
    throw InfeasibleError("confident efficacy is not positive; no sample size yields a positive CBQ");
  }
  const double z = std_normal_quantile(d_phase3 + 0.5);
  const auto positive_at = [&](long n) {
    Phase3Design d;
    d.n_rx = static_cast<int>(n);
    d.n_c = std::max(1, static_cast<int>(std::lround(allocation_ratio * static_cast<double>(n))));
    d.sigma_pooled = sigma_pooled;
    return cbq_closed_form(L, d, d_phase3) > 0.0;
  };
  const double ratio_term = (z * sigma_pooled / L.value);
  const double analytic = ratio_term * ratio_term * (1.0 + 1.0 / allocation_ratio);
  if (analytic > 1e9) throw InfeasibleError("required sample size exceeds 1e9 per arm");
  long n = std::max(2L, static_cast<long>(std::ceil(analytic)));
  // Rounding of the control arm can shift the boundary by one either way.
  while (n > 2 && positive_at(n - 1)) --n;
  while (!positive_at(n)) ++n;
  return static_cast<int>(n);
}

int classical_sample_size(Probability alpha, Probability beta, double sigma, double delta) {
  if (!(alpha.value() > 0.0 && alpha.value() < 1.0)) throw DomainError("alpha must lie in (0, 1)", "alpha");
  if (!(beta.value() > 0.0 && beta.value() < 1.0)) throw DomainError("beta must lie in (0, 1)", "beta");
  if (!(sigma > 0.0)) throw DomainError("sigma must be > 0", "sigma");
  if (delta == 0.0 || !std::isfinite(delta)) throw DomainError("delta must be nonzero", "delta");
  // Upper-tail z_gamma maps to the lower quantile Phi^-1(1 - gamma).
  const double z_alpha = std_normal_quantile(1.0 - alpha / 2.0);
  const double z_beta = std_normal_quantile(1.0 - beta);
  const double ratio = sigma / delta;
  return static_cast<int>(std::ceil(2.0 * (z_alpha + z_beta) * (z_alpha + z_beta) * ratio * ratio));
}

DecisionReport transition_assessment(const StudySummary& study, const etz::EtzComponents& etz,
                                     const DiscountPlan& plan, const Phase3Design& design, unsigned workers) {
  study.validate();
  etz.validate();
  plan.validate();

  const double sigma = etz::pooled_change_sd(etz);
  if (design.sigma_pooled != 0.0 && std::fabs(design.sigma_pooled - sigma) > 1e-9 * std::max(1.0, sigma)) {
    throw DomainError("design.sigma_pooled disagrees with the ETZ components", "design.sigma_pooled");
  }
  Phase3Design resolved = design;
  resolved.sigma_pooled = sigma;
  resolved.validate();

  DecisionReport report;
  report.plan = plan;
  report.design = resolved;
  report.etz = etz;
  report.confident_efficacy =
      confident_efficacy(study.rx.lsmean_change - study.control.lsmean_change, study.rx.se_change,
                         study.control.se_change, study.rx.change_n(), study.control.change_n(), plan.d_phase2,
                         study.direction);
  report.cbq = cbq_closed_form(report.confident_efficacy, resolved, plan.d_phase3);
  report.phase3_se = sigma * resolved.contrast_factor();
  MonteCarloCbq mc = cbq_monte_carlo(report.confident_efficacy, resolved, plan.d_phase3, workers);
  report.cbq_monte_carlo = mc.cbq;
  report.quantile_histogram = std::move(mc.histogram);
  report.transition_recommended = report.cbq > 0.0;
  return report;
}

}  // namespace confirm::cbq
