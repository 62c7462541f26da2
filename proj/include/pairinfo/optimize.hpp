#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pairinfo/pair_distribution.hpp"

namespace pairinfo {

enum class Objective { MutualInfo, PerGenerated, PerDetected };

const char* to_string(Objective objective);

/// The chosen figure of merit as a function of lambda, for an analytic
/// source kind. Rejects empirical sources (no scalar brightness knob).
double objective_value(SourceKind kind, Objective objective, double lam, double eta,
                       double q);

struct OptimizationResult {
  double lambda_star;
  double objective_value;
  Objective objective;
  int iterations;
  std::pair<double, double> log10_bracket;
};

/// Golden-section search for the brightness that maximizes the objective,
/// over x = log10(lambda) to absolute tolerance 1e-6 in x. The objectives
/// are empirically unimodal in x over the supported regimes; the grid-scan
/// property test validates this assumption.
OptimizationResult maximize_lambda(SourceKind kind, double eta, double q,
                                   Objective objective,
                                   std::pair<double, double> log10_bracket = {-12.0, 2.0});

/// One swept parameter and the objective value at each grid point.
/// Parameter values are strictly increasing.
struct SweepCurve {
  SweepCurve(std::string parameter_name, std::vector<std::pair<double, double>> points);

  std::string parameter_name;
  std::vector<std::pair<double, double>> points;
};

/// Objective evaluated on `points` logarithmically spaced lambdas over
/// 10^log10_range. Deterministic.
SweepCurve sweep_lambda(SourceKind kind, double eta, double q, Objective objective,
                        std::pair<double, double> log10_range, int points);

/// For each efficiency in the grid, the optimal objective value over lambda
/// (Poissonian source, default bracket).
SweepCurve sweep_efficiency_optimum(double q, std::span<const double> eta_grid,
                                    Objective objective);

}  // namespace pairinfo
