#pragma once

#include <cstdint>

#include "pairinfo/detection.hpp"
#include "pairinfo/pair_distribution.hpp"

namespace pairinfo {

struct TruncatedSumJoint {
  JointClickDistribution joint;
  double tail_mass;  // source probability beyond max_m, renormalized away
};

/// Direct term-by-term evaluation of the click table over m <= max_m,
/// accumulated in long double, with dark counts applied afterwards. Does not
/// touch the moment-generating-function code paths; this is the independent
/// reference the analytic pipeline is verified against. Tail mass above
/// 1e-12 is worth a diagnostic at the call site.
TruncatedSumJoint joint_by_truncated_sum(const PairDistribution& dist, double eta,
                                         double q, int max_m);

/// Mutual information in bits from the same truncated direct sums, with the
/// entropy sum also carried in long double end to end.
double info_by_truncated_sum(const PairDistribution& dist, double eta, double q,
                             int max_m);

struct SimulationReport {
  std::uint64_t n00 = 0;
  std::uint64_t n0c = 0;
  std::uint64_t nc0 = 0;
  std::uint64_t ncc = 0;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  /// counts / trials; the off-diagonal cells are averaged so the table
  /// satisfies the symmetric-arm invariant. Use the raw counts for
  /// per-cell statistics.
  JointClickDistribution empirical{1.0, 0.0, 0.0};
};

struct SimulateOptions {
  int jobs = 1;
  /// Sample each photon's survival individually instead of using the
  /// aggregated per-slot survival probability 1-(1-eta)^m. Statistically
  /// identical; kept for cross-checking the aggregation.
  bool per_photon = false;
};

/// Monte-Carlo simulation of the source/loss/dark-count chain. Trials are
/// processed in fixed-size blocks with block seeds derived from (seed, block
/// index), so the counts are reproducible for a fixed seed and independent
/// of the job count.
SimulationReport simulate_events(const PairDistribution& dist, double eta, double q,
                                 std::uint64_t trials, std::uint64_t seed,
                                 const SimulateOptions& options = {});

}  // namespace pairinfo
