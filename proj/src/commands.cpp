#include "pairinfo/commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>
#include <random>
#include <sstream>
#include <vector>

#include "pairinfo/csv.hpp"
#include "pairinfo/information.hpp"
#include "pairinfo/oracle.hpp"
#include "pairinfo/scenario.hpp"

namespace pairinfo::cli {

namespace {

void write_eval_csv(std::ostream& out, const ScenarioConfig& config,
                    const InfoReport& report, double key_bits) {
  out << "source,mean_pairs,eta,dark_q,outcome_count,mutual_info_bits,"
         "info_per_generated_bits,info_per_detected_bits,key_bits\n";
  out << to_string(report.source.kind) << ',' << format_double(report.source.mean_pairs)
      << ',' << format_double(report.link.eta) << ',' << format_double(report.link.q)
      << ',' << config.outcome_count << ',' << format_double(report.mutual_info_bits)
      << ',' << format_double(report.info_per_generated_bits) << ','
      << format_double(report.info_per_detected_bits) << ','
      << format_double(key_bits) << '\n';
}

}  // namespace

int run_eval(const EvalOptions& options, std::ostream& out, std::ostream& err) {
  ScenarioConfig config;
  try {
    config = parse_scenario_file(options.config);
  } catch (const ScenarioParseError& e) {
    err << options.config.string() << ": " << e.what() << '\n';
    return kExitUsage;
  }
  try {
    const PairDistribution dist = make_distribution(config);
    const LinkParams link = make_link(config, dist);
    const InfoReport report = make_info_report(dist, link);
    const double key_bits =
        key_bits_for_slots(report.mutual_info_bits, config.outcome_count);
    if (!options.csv_only) {
      out << "source:                 " << to_string(report.source.kind)
          << " (mean pairs " << format_double(report.source.mean_pairs) << ")\n"
          << "link efficiency eta:    " << format_double(report.link.eta) << '\n'
          << "dark-count prob q:      " << format_double(report.link.q) << '\n'
          << "outcome slots M:        " << config.outcome_count << '\n'
          << "H(A:B) bits/slot:       " << format_double(report.mutual_info_bits) << '\n'
          << "I_g bits/generated:     " << format_double(report.info_per_generated_bits)
          << '\n'
          << "I_d bits/detected:      " << format_double(report.info_per_detected_bits)
          << '\n'
          << "key bits over M slots:  " << format_double(key_bits) << '\n';
    }
    write_eval_csv(out, config, report, key_bits);
    return kExitOk;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
}

int run_figure(const FigureCommandOptions& options, std::ostream& err) {
  if (!is_figure_name(options.name)) {
    err << "unknown figure '" << options.name << "'; known:";
    for (auto name : figure_names()) err << ' ' << name;
    err << '\n';
    return kExitUsage;
  }
  try {
    std::ostringstream buffer;
    write_figure_csv(options.name, buffer, options.figure);
    std::ofstream file(options.output, std::ios::binary);
    if (!file) {
      err << "cannot open output file: " << options.output.string() << '\n';
      return kExitRuntime;
    }
    file << buffer.str();
    file.flush();
    if (!file) {
      err << "failed writing output file: " << options.output.string() << '\n';
      return kExitRuntime;
    }
    return kExitOk;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
}

int run_optimize(const OptimizeOptions& options, std::ostream& out, std::ostream& err) {
  ScenarioConfig config;
  try {
    config = parse_scenario_file(options.config);
  } catch (const ScenarioParseError& e) {
    err << options.config.string() << ": " << e.what() << '\n';
    return kExitUsage;
  }
  try {
    if (config.source == SourceKind::Empirical) {
      err << "error: an empirical source has no brightness parameter to optimize; "
             "use a poissonian or thermal source\n";
      return kExitRuntime;
    }
    const PairDistribution dist = make_distribution(config);
    const LinkParams link = make_link(config, dist);
    const Objective objective = options.objective.value_or(config.objective);
    const OptimizationResult result = maximize_lambda(
        config.source, link.eta, link.q, objective, options.log10_bracket);
    if (!options.csv_only) {
      out << "objective:        " << to_string(result.objective) << '\n'
          << "optimal lambda:   " << format_double(result.lambda_star) << '\n'
          << "objective value:  " << format_double(result.objective_value) << '\n'
          << "iterations:       " << result.iterations << '\n'
          << "log10 bracket:    [" << format_double(result.log10_bracket.first) << ", "
          << format_double(result.log10_bracket.second) << "]\n";
    }
    out << "objective,eta,dark_q,lambda_star,objective_value,iterations\n"
        << to_string(result.objective) << ',' << format_double(link.eta) << ','
        << format_double(link.q) << ',' << format_double(result.lambda_star) << ','
        << format_double(result.objective_value) << ',' << result.iterations << '\n';
    return kExitOk;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
}

namespace {

struct VerifyState {
  std::ostream& out;
  int failures = 0;

  void check(bool pass, const std::string& label, const std::string& detail) {
    out << (pass ? "[ok]   " : "[FAIL] ") << label;
    if (!detail.empty()) out << "  " << detail;
    out << '\n';
    if (!pass) ++failures;
  }
};

double relative_gap(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  if (scale == 0.0) return 0.0;
  return std::abs(a - b) / scale;
}

void verify_closed_form(VerifyState& state, double tolerance) {
  const double lams[] = {1e-6, 1e-3, 0.1, 1.0, 5.0, 10.0};
  const double qs[] = {0.0, 3.9e-8, 1e-3, 0.1};
  double worst = 0.0;
  std::string worst_cell;
  for (double lam : lams) {
    for (int i = 1; i <= 20; ++i) {
      const double eta = 0.05 * i;
      for (double q : qs) {
        const double closed = mutual_information_poisson(lam, eta, q);
        const double pipeline = mutual_information(joint_click_distribution(
            PairDistribution::poissonian(lam), LinkParams(eta, q)));
        const double gap = relative_gap(closed, pipeline);
        if (gap >= worst) {
          worst = gap;
          worst_cell = "(lam=" + format_double(lam) + ", eta=" + format_double(eta) +
                       ", q=" + format_double(q) + ")";
        }
      }
    }
  }
  state.check(worst <= tolerance, "closed form vs generic pipeline",
              "worst rel gap " + format_double(worst) + " at " + worst_cell +
                  ", tolerance " + format_double(tolerance));
}

void verify_truncated_sum(VerifyState& state, double tolerance) {
  const double lams[] = {0.01, 1.0, 10.0};
  const double etas[] = {0.4, 0.8};
  const double qs[] = {0.0, 3.9e-8};
  double worst = 0.0;
  double worst_tail = 0.0;
  std::string worst_cell;
  for (int kind = 0; kind < 2; ++kind) {
    for (double lam : lams) {
      const PairDistribution dist = kind == 0 ? PairDistribution::poissonian(lam)
                                              : PairDistribution::thermal(lam);
      for (double eta : etas) {
        for (double q : qs) {
          const auto oracle = joint_by_truncated_sum(dist, eta, q, 2000);
          const auto analytic = joint_click_distribution(dist, LinkParams(eta, q));
          worst_tail = std::max(worst_tail, oracle.tail_mass);
          const double gap = std::max(
              {std::abs(oracle.joint.p00() - analytic.p00()),
               std::abs(oracle.joint.p0c() - analytic.p0c()),
               std::abs(oracle.joint.pcc() - analytic.pcc())});
          if (gap >= worst) {
            worst = gap;
            worst_cell = std::string("(") + to_string(dist.kind()) +
                         ", lam=" + format_double(lam) + ", eta=" + format_double(eta) +
                         ", q=" + format_double(q) + ")";
          }
        }
      }
    }
  }
  if (worst_tail > 1e-12) {
    state.out << "[warn] truncated-sum tail mass " << format_double(worst_tail) << '\n';
  }
  state.check(worst <= tolerance, "truncated sum vs analytic pipeline",
              "worst abs gap " + format_double(worst) + " at " + worst_cell +
                  ", tolerance " + format_double(tolerance));
}

void verify_series_identity(VerifyState& state, std::uint64_t seed) {
  // pi(c,0) as the term-by-term derivative series of the moment generating
  // function, against the closed difference M(1,0) - M(1,1)
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  for (int round = 0; round < 20; ++round) {
    const int terms = 2 + static_cast<int>(rng() % 49);
    std::vector<double> probs(static_cast<std::size_t>(terms));
    double sum = 0.0;
    for (double& p : probs) {
      p = static_cast<double>(rng() >> 11) * 0x1.0p-53;
      sum += p;
    }
    for (double& p : probs) p /= sum;
    const PairDistribution dist = PairDistribution::empirical(probs);
    const auto support = dist.probabilities();
    for (int step = 1; step <= 10; ++step) {
      const double eta = 0.1 * step;
      long double series = 0.0L;
      for (std::size_t l = 1; l < support.size(); ++l) {
        // binomial(m, l) eta^l (1-eta)^{m-l} summed over the support
        long double inner = 0.0L;
        for (std::size_t m = l; m < support.size(); ++m) {
          long double binom = 1.0L;
          for (std::size_t k = 0; k < l; ++k) {
            binom *= static_cast<long double>(m - k) / static_cast<long double>(l - k);
          }
          inner += static_cast<long double>(support[m]) *
                   std::pow(1.0L - static_cast<long double>(eta),
                            static_cast<long double>(2 * m - l)) *
                   std::pow(static_cast<long double>(eta), static_cast<long double>(l)) *
                   binom;
        }
        series += inner;
      }
      const double closed = dist.mgf_lossy(eta, 1.0, 0.0) - dist.mgf_lossy(eta, 1.0, 1.0);
      worst = std::max(worst, std::abs(static_cast<double>(series) - closed));
    }
  }
  state.check(worst <= 1e-10, "derivative series identity for pi(c,0)",
              "worst abs gap " + format_double(worst) + ", tolerance 1e-10");
}

void verify_monte_carlo(VerifyState& state, const VerifyOptions& options) {
  const double etas[] = {0.4, 0.8};
  const double qs[] = {0.0, 1e-3};
  const PairDistribution dist = PairDistribution::poissonian(1.0);
  bool all_pass = true;
  std::string detail;
  for (double eta : etas) {
    for (double q : qs) {
      const auto analytic = joint_click_distribution(dist, LinkParams(eta, q));
      SimulateOptions sim;
      sim.jobs = options.jobs;
      const auto report =
          simulate_events(dist, eta, q, options.trials, options.seed, sim);
      const double expected[4] = {analytic.p00(), analytic.p0c(), analytic.pc0(),
                                  analytic.pcc()};
      const std::uint64_t observed[4] = {report.n00, report.n0c, report.nc0,
                                         report.ncc};
      for (int cell = 0; cell < 4; ++cell) {
        const double p = expected[cell];
        const double sigma =
            std::sqrt(p * (1.0 - p) / static_cast<double>(options.trials));
        const double gap =
            std::abs(static_cast<double>(observed[cell]) /
                         static_cast<double>(options.trials) -
                     p);
        if (gap > 5.0 * sigma) {
          all_pass = false;
          detail += " cell " + std::to_string(cell) + " at (eta=" +
                    format_double(eta) + ", q=" + format_double(q) + ") gap " +
                    format_double(gap) + " > 5 sigma " + format_double(5.0 * sigma) + ";";
        }
      }
    }
  }
  state.check(all_pass, "Monte Carlo within 5 sigma of analytic",
              detail.empty() ? "trials " + std::to_string(options.trials) : detail);

  const auto first = simulate_events(dist, 0.8, 1e-3, options.trials, options.seed);
  const auto second = simulate_events(dist, 0.8, 1e-3, options.trials, options.seed);
  const bool reproducible = first.n00 == second.n00 && first.n0c == second.n0c &&
                            first.nc0 == second.nc0 && first.ncc == second.ncc;
  state.check(reproducible, "Monte Carlo reproducible for fixed seed",
              "seed " + std::to_string(options.seed));
}

}  // namespace

int run_verify(const VerifyOptions& options, std::ostream& out) {
  VerifyState state{out};
  verify_closed_form(state, options.tolerance);
  verify_truncated_sum(state, options.tolerance);
  verify_series_identity(state, options.seed);
  verify_monte_carlo(state, options);
  if (state.failures > 0) {
    out << state.failures << " check(s) failed\n";
    return kExitVerifyFailed;
  }
  out << "all checks passed\n";
  return kExitOk;
}

}  // namespace pairinfo::cli
