#pragma once

#include "pairinfo/detection.hpp"
#include "pairinfo/pair_distribution.hpp"

namespace pairinfo {

/// Binary entropy H2(x) in bits, with 0 log 0 = 0.
double binary_entropy(double x);

/// Shannon mutual information of the joint click table, in bits per outcome
/// slot. Clamped to [0, min of the marginal entropies]; a clamp farther than
/// 1e-12 from the boundary indicates an inconsistent table and throws.
double mutual_information(const JointClickDistribution& joint);

/// Closed form for a Poissonian source with per-arm efficiency eta and
/// dark-count probability q. Evaluated in a cancellation-free arrangement
/// that stays accurate down to lambda ~ 1e-12 and q ~ 1e-12.
double mutual_information_poisson(double lam, double eta, double q);

/// Closed form for a thermal source, via its rational moment generating
/// function and the dark-count fold.
double mutual_information_thermal(double lam, double eta, double q);

/// Bits per generated pair: h / lambda. The lambda -> 0 limit is not
/// defined; lambda must be positive.
double info_per_generated(double h_bits, double lam);

/// Bits per detected pair: h / (eta^2 lambda + q^2).
double info_per_detected(double h_bits, double lam, double eta, double q);

/// Shared bits accumulated over M outcome slots: M * h.
double key_bits_for_slots(double h_bits, long long slot_count);

struct SourceSummary {
  SourceKind kind;
  double mean_pairs;
};

struct InfoReport {
  double mutual_info_bits;
  double info_per_generated_bits;
  double info_per_detected_bits;
  SourceSummary source;
  LinkParams link;
};

/// Full evaluation of one source/link combination.
InfoReport make_info_report(const PairDistribution& dist, const LinkParams& link);

}  // namespace pairinfo
