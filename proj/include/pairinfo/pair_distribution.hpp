#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <vector>

namespace pairinfo {

enum class SourceKind { Poissonian, Thermal, Empirical };

const char* to_string(SourceKind kind);

/// Photon-pair-number statistics of a source: the probability P(m) that m
/// pairs are emitted into one outcome slot (time bin or spatial mode). Both
/// arms carry the same pair count, so a single index m describes the slot.
///
/// Immutable after construction; every operation is a pure function, so
/// values can be shared freely across threads.
class PairDistribution {
 public:
  static constexpr std::size_t kMaxEmpiricalTerms = 10'000;

  static PairDistribution poissonian(double mean_pairs);
  static PairDistribution thermal(double mean_pairs);

  /// Probabilities indexed by pair count from m = 0. The sum must lie within
  /// 1e-9 of one; the stored sequence is then renormalized to sum to one.
  /// Sequences longer than kMaxEmpiricalTerms are truncated first.
  static PairDistribution empirical(std::vector<double> probs);

  /// One probability per line, '#' starts a comment, m = data-line order.
  static PairDistribution empirical_from_file(const std::filesystem::path& file);

  SourceKind kind() const { return kind_; }

  /// Mean pair number: the lambda parameter for the analytic kinds,
  /// sum_m m P(m) for empirical sequences.
  double mean_pairs() const;

  /// P(m). Zero beyond an empirical sequence. Evaluated in the log domain
  /// for the analytic kinds so large m cannot overflow.
  double pair_probability(unsigned m) const;

  /// Lossy moment generating function
  ///   M(mu, xi) = sum_m P(m) (1 - eta*mu)^m (1 - eta*xi)^m
  /// with eta, mu, xi all in [0, 1]. Closed form for the analytic kinds,
  /// direct finite sum for empirical sequences.
  double mgf_lossy(double eta, double mu, double xi) const;

  /// Empty unless Empirical.
  std::span<const double> probabilities() const { return probs_; }

 private:
  PairDistribution(SourceKind kind, double lambda, std::vector<double> probs);

  SourceKind kind_;
  double lambda_ = 0.0;        // analytic kinds only
  std::vector<double> probs_;  // empirical only
};

double pair_probability(const PairDistribution& dist, unsigned m);
double mean_pairs(const PairDistribution& dist);
double mgf_lossy(const PairDistribution& dist, double eta, double mu, double xi);

/// The analytic P(m) frozen into an empirical sequence, truncated where the
/// cumulative probability first exceeds 1 - tail_bound (hard cap
/// kMaxEmpiricalTerms). Copies an empirical input unchanged.
PairDistribution truncated_empirical(const PairDistribution& dist, double tail_bound = 1e-15);

}  // namespace pairinfo
