#include "pairinfo/pair_distribution.hpp"

#include <cmath>
#include <fstream>
#include <numeric>
#include <stdexcept>
#include <string>

namespace pairinfo {

namespace {

void require_unit_interval(double value, const char* name) {
  if (!(value >= 0.0 && value <= 1.0)) {
    throw std::domain_error(std::string(name) + " must lie in [0, 1], got " +
                            std::to_string(value));
  }
}

double require_mean(double mean_pairs) {
  if (!(mean_pairs >= 0.0) || !std::isfinite(mean_pairs)) {
    throw std::domain_error("mean pair number must be finite and >= 0");
  }
  return mean_pairs;
}

}  // namespace

const char* to_string(SourceKind kind) {
  switch (kind) {
    case SourceKind::Poissonian: return "poissonian";
    case SourceKind::Thermal: return "thermal";
    case SourceKind::Empirical: return "empirical";
  }
  return "?";
}

PairDistribution::PairDistribution(SourceKind kind, double lambda,
                                   std::vector<double> probs)
    : kind_(kind), lambda_(lambda), probs_(std::move(probs)) {}

PairDistribution PairDistribution::poissonian(double mean_pairs) {
  return {SourceKind::Poissonian, require_mean(mean_pairs), {}};
}

PairDistribution PairDistribution::thermal(double mean_pairs) {
  return {SourceKind::Thermal, require_mean(mean_pairs), {}};
}

PairDistribution PairDistribution::empirical(std::vector<double> probs) {
  if (probs.empty()) {
    throw std::invalid_argument("empirical distribution needs at least one entry");
  }
  if (probs.size() > kMaxEmpiricalTerms) {
    probs.resize(kMaxEmpiricalTerms);
  }
  for (std::size_t m = 0; m < probs.size(); ++m) {
    if (!(probs[m] >= 0.0 && probs[m] <= 1.0)) {
      throw std::domain_error("empirical probability at m=" + std::to_string(m) +
                              " outside [0, 1]");
    }
  }
  const double sum = std::accumulate(probs.begin(), probs.end(), 0.0);
  if (std::abs(sum - 1.0) > 1e-9) {
    throw std::domain_error("empirical probabilities sum to " + std::to_string(sum) +
                            ", expected 1 within 1e-9");
  }
  for (double& p : probs) p /= sum;
  return {SourceKind::Empirical, 0.0, std::move(probs)};
}

PairDistribution PairDistribution::empirical_from_file(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) {
    throw std::runtime_error("cannot open probability file: " + file.string());
  }
  std::vector<double> probs;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto last = line.find_last_not_of(" \t\r");
    const std::string token = line.substr(first, last - first + 1);
    std::size_t consumed = 0;
    double value = 0.0;
    try {
      value = std::stod(token, &consumed);
    } catch (const std::exception&) {
      consumed = 0;
    }
    if (consumed != token.size()) {
      throw std::runtime_error(file.string() + ":" + std::to_string(lineno) +
                               ": not a probability: '" + token + "'");
    }
    probs.push_back(value);
  }
  if (probs.empty()) {
    throw std::runtime_error(file.string() + ": no probabilities found");
  }
  return empirical(std::move(probs));
}

double PairDistribution::mean_pairs() const {
  if (kind_ != SourceKind::Empirical) return lambda_;
  double mean = 0.0;
  for (std::size_t m = 0; m < probs_.size(); ++m) {
    mean += static_cast<double>(m) * probs_[m];
  }
  return mean;
}

double PairDistribution::pair_probability(unsigned m) const {
  switch (kind_) {
    case SourceKind::Poissonian:
      if (lambda_ == 0.0) return m == 0 ? 1.0 : 0.0;
      // exp(m ln(lam) - lam - ln m!); m! overflows a double near m = 171
      return std::exp(static_cast<double>(m) * std::log(lambda_) - lambda_ -
                      std::lgamma(static_cast<double>(m) + 1.0));
    case SourceKind::Thermal:
      if (lambda_ == 0.0) return m == 0 ? 1.0 : 0.0;
      // lam^m / (lam+1)^{m+1}
      return std::exp(static_cast<double>(m) * std::log(lambda_) -
                      (static_cast<double>(m) + 1.0) * std::log1p(lambda_));
    case SourceKind::Empirical:
      return m < probs_.size() ? probs_[m] : 0.0;
  }
  return 0.0;
}

double PairDistribution::mgf_lossy(double eta, double mu, double xi) const {
  require_unit_interval(eta, "eta");
  require_unit_interval(mu, "mu");
  require_unit_interval(xi, "xi");
  const double s = mu + xi - eta * mu * xi;
  switch (kind_) {
    case SourceKind::Poissonian:
      return std::exp(-eta * lambda_ * s);
    case SourceKind::Thermal:
      return 1.0 / (1.0 + eta * lambda_ * s);
    case SourceKind::Empirical: {
      const double factor = (1.0 - eta * mu) * (1.0 - eta * xi);
      double power = 1.0;
      double sum = 0.0;
      for (double p : probs_) {
        sum += p * power;
        power *= factor;
      }
      return sum;
    }
  }
  return 0.0;
}

double pair_probability(const PairDistribution& dist, unsigned m) {
  return dist.pair_probability(m);
}

double mean_pairs(const PairDistribution& dist) { return dist.mean_pairs(); }

double mgf_lossy(const PairDistribution& dist, double eta, double mu, double xi) {
  return dist.mgf_lossy(eta, mu, xi);
}

PairDistribution truncated_empirical(const PairDistribution& dist, double tail_bound) {
  if (!(tail_bound > 0.0 && tail_bound < 1.0)) {
    throw std::domain_error("tail_bound must lie in (0, 1)");
  }
  if (dist.kind() == SourceKind::Empirical) {
    return PairDistribution::empirical(
        {dist.probabilities().begin(), dist.probabilities().end()});
  }
  std::vector<double> probs;
  double cumulative = 0.0;
  for (unsigned m = 0; m < PairDistribution::kMaxEmpiricalTerms; ++m) {
    const double p = dist.pair_probability(m);
    probs.push_back(p);
    cumulative += p;
    if (cumulative > 1.0 - tail_bound) break;
  }
  return PairDistribution::empirical(std::move(probs));
}

}  // namespace pairinfo
