#include "cli_app.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "confirm/cbq.hpp"
#include "confirm/confset.hpp"
#include "confirm/error.hpp"
#include "confirm/etz.hpp"
#include "confirm/ingest.hpp"
#include "confirm/parallel.hpp"
#include "confirm/simprofile.hpp"

namespace confirm::cli {

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("--scenario", "cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

/// Shortest text that parses back to the same double.
std::string exact(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string fixed3(double v) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(3) << v;
  return os.str();
}

std::pair<double, double> parse_estimate(const std::string& text, const char* flag) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) throw ParseError(flag, "expected EST,SE");
  try {
    std::size_t used = 0;
    const std::string a = text.substr(0, comma);
    const std::string b = text.substr(comma + 1);
    const double est = std::stod(a, &used);
    if (used != a.size()) throw std::invalid_argument(a);
    const double se = std::stod(b, &used);
    if (used != b.size()) throw std::invalid_argument(b);
    return {est, se};
  } catch (const std::logic_error&) {
    throw ParseError(flag, "expected EST,SE with two numbers, got '" + text + "'");
  }
}

void print_row(std::ostream& out, const std::string& label, const std::string& value) {
  out << "  " << std::left << std::setw(28) << label << value << "\n";
}

struct EtzArgs {
  double baseline = 0.0;
  double milestone = 0.0;
  double change = 0.0;
};

int cmd_etz(const EtzArgs& a, std::ostream& out) {
  const etz::EtzComponents c = etz::decompose_etz({a.baseline, a.milestone, a.change});
  const etz::EtzStandardDeviations sd = etz::standard_deviations(c);
  out << std::left << std::setw(10) << "" << std::right << std::setw(18) << "Random Intercept" << std::setw(20)
      << "Measurement Error" << std::setw(20) << "Random Trajectory" << "\n";
  out << std::left << std::setw(10) << "Var" << std::right << std::setw(18) << fixed3(c.var_z) << std::setw(20)
      << fixed3(c.var_e) << std::setw(20) << fixed3(c.var_traj) << "\n";
  out << std::left << std::setw(10) << "SD" << std::right << std::setw(18) << fixed3(sd.sd_z) << std::setw(20)
      << fixed3(sd.sd_e) << std::setw(20) << fixed3(sd.sd_traj) << "\n";
  return kExitOk;
}

struct AssessArgs {
  std::string scenario;
  std::optional<int> n3_rx;
  std::optional<int> n3_c;
  std::optional<double> gamma;
  std::optional<double> d2;
  unsigned workers = 0;
};

int cmd_assess(const AssessArgs& a, std::ostream& out) {
  io::ScenarioRecord rec = io::parse_scenario(read_file(a.scenario));
  if (a.n3_rx) rec.design.n_rx = *a.n3_rx;
  if (a.n3_c) rec.design.n_c = *a.n3_c;
  if (a.gamma || a.d2) {
    const double gamma = a.gamma.value_or(rec.plan.gamma.value());
    const double d2 = a.d2.value_or(rec.plan.d_phase2);
    rec.plan = cbq::complete_discount_plan(gamma, cbq::KnownDiscount::Phase2, d2);
  }
  const etz::EtzComponents etz = io::scenario_etz(rec);
  const cbq::DecisionReport r = cbq::transition_assessment(rec.study, etz, rec.plan, rec.design, a.workers);

  out << "Transition assessment: " << rec.study.outcome_name << " (scenario " << rec.id << ")\n";
  print_row(out, "success confidence gamma", fixed3(r.plan.gamma.value()));
  print_row(out, "discounts d2 / d3", fixed3(r.plan.d_phase2) + " / " + fixed3(r.plan.d_phase3));
  print_row(out, "Phase 3 n (rx / control)", std::to_string(r.design.n_rx) + " / " + std::to_string(r.design.n_c));
  print_row(out, "SD(change)", fixed3(r.design.sigma_pooled));
  print_row(out, "observed benefit", fixed3(r.confident_efficacy.theta_bar));
  print_row(out, "confident efficacy L",
            fixed3(r.confident_efficacy.value) + "  (t level " + fixed3(r.confident_efficacy.level.value()) +
                ", df " + std::to_string(r.confident_efficacy.df) + ")");
  print_row(out, "Phase 3 SE", fixed3(r.phase3_se));
  print_row(out, "CBQ (closed form)", fixed3(r.cbq));
  print_row(out, "CBQ (Monte Carlo)",
            fixed3(r.cbq_monte_carlo) + "  (" + std::to_string(r.design.reps) + " reps, seed " +
                std::to_string(r.design.seed) + ")");
  print_row(out, "recommendation", r.transition_recommended ? "TRANSITION" : "DO NOT TRANSITION");
  return r.transition_recommended ? kExitOk : kExitNotRecommended;
}

struct SimulateArgs {
  std::string scenario;
  int reps = 1;
  std::uint64_t seed = 0;
  std::optional<double> sd_e;
  std::optional<double> sd_traj;
  std::optional<double> sd_z;
  std::optional<int> n_rx;
  std::optional<int> n_c;
  std::string out_path;
  unsigned workers = 0;
};

int cmd_simulate(const SimulateArgs& a, std::ostream& out) {
  const io::ScenarioRecord rec = io::parse_scenario(read_file(a.scenario));
  etz::EtzComponents etz = io::scenario_etz(rec);
  if (a.sd_e) etz.var_e = *a.sd_e * *a.sd_e;
  if (a.sd_traj) etz.var_traj = *a.sd_traj * *a.sd_traj;
  if (a.sd_z) etz.var_z = *a.sd_z * *a.sd_z;

  sim::SimConfig cfg;
  cfg.visit_weeks = rec.study.visit_weeks;
  cfg.n_rx = a.n_rx.value_or(rec.study.rx.n_baseline);
  cfg.n_c = a.n_c.value_or(rec.study.control.n_baseline);
  cfg.etz = etz;
  cfg.seed = a.seed;
  cfg.n_reps = a.reps;
  cfg.validate();
  const sim::FixedEffects fx = sim::fixed_effects_from_study(rec.study);

  std::vector<std::vector<sim::ProfileRow>> tables(static_cast<std::size_t>(a.reps));
  parallel_for(tables.size(), a.workers, [&](std::size_t begin, std::size_t end) {
    for (std::size_t r = begin; r < end; ++r) {
      tables[r] = sim::profile_table(sim::simulate_study(fx, cfg, static_cast<int>(r)));
    }
  });

  std::ostringstream csv;
  csv << "rep,week,arm,mean_y,mean_change\n";
  for (std::size_t r = 0; r < tables.size(); ++r) {
    for (const sim::ProfileRow& row : tables[r]) {
      csv << r << ',' << exact(row.week) << ',' << sim::to_string(row.arm) << ',' << exact(row.mean_y) << ','
          << exact(row.mean_change) << '\n';
    }
  }

  if (a.out_path == "-") {
    out << csv.str();
  } else {
    std::ofstream file(a.out_path, std::ios::binary | std::ios::trunc);
    file << csv.str();
    file.flush();
    if (!file) throw ParseError("--out", "cannot write " + a.out_path);
    out << "wrote " << tables.size() << " replication(s) to " << a.out_path << "\n";
  }
  return kExitOk;
}

struct DesignateArgs {
  std::string e1;
  std::string e2;
  double rho = 0.0;
  double alpha = 0.05;
  double c_md = 0.0;
};

int cmd_designate(const DesignateArgs& a, std::ostream& out) {
  const auto [t1, s1] = parse_estimate(a.e1, "--e1");
  const auto [t2, s2] = parse_estimate(a.e2, "--e2");
  const confset::EndpointEstimate e1{t1, s1};
  const confset::EndpointEstimate e2{t2, s2};
  confset::PartitionConfig cfg;
  cfg.alpha = a.alpha;
  cfg.c_md = a.c_md;
  cfg.rho = a.rho;
  cfg.validate();

  const confset::TransitionDecision t = confset::transition_decision(e1, e2, cfg);
  const confset::DesignationDecision d = confset::designate_endpoint(e1, e2, cfg);

  std::string eliminated;
  for (confset::Quadrant q : t.eliminated_quadrants()) {
    eliminated += (eliminated.empty() ? "" : ", ") + std::string(confset::to_string(q));
  }
  out << "Endpoint designation\n";
  print_row(out, "critical bound b", fixed3(t.critical_bound));
  print_row(out, "eliminated quadrants", eliminated.empty() ? "none" : eliminated);
  print_row(out, "per-endpoint lower bounds", fixed3(t.per_endpoint_lower[0]) + " / " + fixed3(t.per_endpoint_lower[1]));
  print_row(out, "transition", t.transition ? "yes" : "no");
  if (d.diff_interval.is_whole_line()) {
    print_row(out, "difference interval", "whole line");
  } else if (d.diff_interval.orientation > 0) {
    print_row(out, "difference interval", "theta2 - theta1 >= " + fixed3(d.diff_interval.lower));
  } else {
    print_row(out, "difference interval", "theta2 - theta1 <= " + fixed3(-d.diff_interval.lower));
  }
  if (d.avg_lower) print_row(out, "average lower bound", fixed3(*d.avg_lower));
  print_row(out, "designation", confset::to_string(d.outcome));
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Confirmability decision engine"};
  app.name("confirm");
  app.require_subcommand(1);

  EtzArgs etz_args;
  CLI::App* etz = app.add_subcommand("etz", "Decompose a variance triple into Z / E / Traj components");
  etz->add_option("--baseline-var", etz_args.baseline, "Variance at baseline")->required();
  etz->add_option("--milestone-var", etz_args.milestone, "Variance at the milestone visit")->required();
  etz->add_option("--change-var", etz_args.change, "Variance of change from baseline")->required();

  AssessArgs assess_args;
  CLI::App* assess = app.add_subcommand("assess", "Phase 2 to Phase 3 transition assessment (exit 0 go, 1 no-go)");
  assess->add_option("--scenario", assess_args.scenario, "Scenario document")->required();
  assess->add_option("--n3-rx", assess_args.n3_rx, "Phase 3 treatment arm size");
  assess->add_option("--n3-c", assess_args.n3_c, "Phase 3 control arm size");
  assess->add_option("--gamma", assess_args.gamma, "Success confidence");
  assess->add_option("--d2", assess_args.d2, "Phase 2 discount");
  assess->add_option("--workers", assess_args.workers, "Worker threads (0 = all cores)");

  SimulateArgs sim_args;
  CLI::App* simulate = app.add_subcommand("simulate", "Simulate confirmatory replications and write profile CSV");
  simulate->add_option("--scenario", sim_args.scenario, "Scenario document")->required();
  simulate->add_option("--reps", sim_args.reps, "Replications")->required()->check(CLI::PositiveNumber);
  simulate->add_option("--seed", sim_args.seed, "Random seed")->required();
  simulate->add_option("--sd-e", sim_args.sd_e, "Override SD(E)")->check(CLI::NonNegativeNumber);
  simulate->add_option("--sd-traj", sim_args.sd_traj, "Override SD(Traj)")->check(CLI::NonNegativeNumber);
  simulate->add_option("--sd-z", sim_args.sd_z, "Override SD(Z)")->check(CLI::NonNegativeNumber);
  simulate->add_option("--n-rx", sim_args.n_rx, "Treatment arm size (default: baseline n)");
  simulate->add_option("--n-c", sim_args.n_c, "Control arm size (default: baseline n)");
  simulate->add_option("--out", sim_args.out_path, "Output CSV path, - for stdout")->required();
  simulate->add_option("--workers", sim_args.workers, "Worker threads (0 = all cores)");

  DesignateArgs des_args;
  CLI::App* designate = app.add_subcommand("designate", "Two-endpoint transition and designation decision");
  designate->add_option("--e1", des_args.e1, "Endpoint 1 as EST,SE")->required();
  designate->add_option("--e2", des_args.e2, "Endpoint 2 as EST,SE")->required();
  designate->add_option("--rho", des_args.rho, "Correlation of the two estimates");
  designate->add_option("--alpha", des_args.alpha, "Significance level")->required();
  designate->add_option("--cmd", des_args.c_md, "Clinically meaningful difference")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitError;
  }

  try {
    if (etz->parsed()) return cmd_etz(etz_args, out);
    if (assess->parsed()) return cmd_assess(assess_args, out);
    if (simulate->parsed()) return cmd_simulate(sim_args, out);
    if (designate->parsed()) return cmd_designate(des_args, out);
  } catch (const confirm::Error& e) {
    err << "error [" << to_string(e.code()) << "]";
    if (!e.field_path().empty()) err << " at " << e.field_path();
    err << ": " << e.what() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}

}  // namespace confirm::cli
