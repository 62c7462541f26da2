#include "pairinfo/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "pairinfo/information.hpp"

namespace pairinfo {

const char* to_string(Objective objective) {
  switch (objective) {
    case Objective::MutualInfo: return "H";
    case Objective::PerGenerated: return "Ig";
    case Objective::PerDetected: return "Id";
  }
  return "?";
}

double objective_value(SourceKind kind, Objective objective, double lam, double eta,
                       double q) {
  double h;
  switch (kind) {
    case SourceKind::Poissonian:
      h = mutual_information_poisson(lam, eta, q);
      break;
    case SourceKind::Thermal:
      h = mutual_information_thermal(lam, eta, q);
      break;
    default:
      throw std::invalid_argument(
          "empirical sources have no brightness parameter to optimize");
  }
  switch (objective) {
    case Objective::MutualInfo: return h;
    case Objective::PerGenerated: return info_per_generated(h, lam);
    case Objective::PerDetected: return info_per_detected(h, lam, eta, q);
  }
  throw std::invalid_argument("unknown objective");
}

OptimizationResult maximize_lambda(SourceKind kind, double eta, double q,
                                   Objective objective,
                                   std::pair<double, double> log10_bracket) {
  const auto [lo, hi] = log10_bracket;
  if (!(lo < hi)) {
    throw std::domain_error("inverted log10 bracket [" + std::to_string(lo) + ", " +
                            std::to_string(hi) + "]");
  }
  const auto f = [&](double x) {
    const double value = objective_value(kind, objective, std::pow(10.0, x), eta, q);
    if (!std::isfinite(value)) {
      throw std::runtime_error("objective not finite at log10 lambda = " +
                               std::to_string(x));
    }
    return value;
  };
  f(lo);
  f(hi);

  constexpr double kInvPhi = 0.61803398874989484820;
  constexpr double kTolX = 1e-6;
  double a = lo;
  double b = hi;
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = f(c);
  double fd = f(d);
  int iterations = 0;
  while (b - a > kTolX) {
    ++iterations;
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = f(d);
    }
  }
  const double x_star = fc > fd ? c : d;
  return {std::pow(10.0, x_star), std::max(fc, fd), objective, iterations,
          log10_bracket};
}

SweepCurve::SweepCurve(std::string name, std::vector<std::pair<double, double>> pts)
    : parameter_name(std::move(name)), points(std::move(pts)) {
  for (std::size_t i = 1; i < points.size(); ++i) {
    if (!(points[i - 1].first < points[i].first)) {
      throw std::domain_error("sweep parameter values must be strictly increasing");
    }
  }
}

SweepCurve sweep_lambda(SourceKind kind, double eta, double q, Objective objective,
                        std::pair<double, double> log10_range, int points) {
  const auto [lo, hi] = log10_range;
  if (points < 2) {
    throw std::domain_error("sweep needs at least 2 points");
  }
  if (!(lo < hi)) {
    throw std::domain_error("empty or inverted sweep range [" + std::to_string(lo) +
                            ", " + std::to_string(hi) + "]");
  }
  std::vector<std::pair<double, double>> values;
  values.reserve(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) {
    const double x = lo + (hi - lo) * static_cast<double>(i) /
                              static_cast<double>(points - 1);
    const double lam = std::pow(10.0, x);
    values.emplace_back(lam, objective_value(kind, objective, lam, eta, q));
  }
  return {"lambda", std::move(values)};
}

SweepCurve sweep_efficiency_optimum(double q, std::span<const double> eta_grid,
                                    Objective objective) {
  if (eta_grid.empty()) {
    throw std::domain_error("efficiency grid is empty");
  }
  for (std::size_t i = 0; i < eta_grid.size(); ++i) {
    if (!(eta_grid[i] > 0.0 && eta_grid[i] <= 1.0)) {
      throw std::domain_error("efficiency grid values must lie in (0, 1]");
    }
    if (i > 0 && !(eta_grid[i - 1] < eta_grid[i])) {
      throw std::domain_error("efficiency grid must be strictly increasing");
    }
  }
  std::vector<std::pair<double, double>> values;
  values.reserve(eta_grid.size());
  for (double eta : eta_grid) {
    const auto best = maximize_lambda(SourceKind::Poissonian, eta, q, objective);
    values.emplace_back(eta, best.objective_value);
  }
  return {"eta", std::move(values)};
}

}  // namespace pairinfo
