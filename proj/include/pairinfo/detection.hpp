#pragma once

#include <optional>

#include "pairinfo/pair_distribution.hpp"

namespace pairinfo {

/// Per-arm link budget. eta is the total efficiency (detector times
/// transmission), q the dark-count probability per outcome slot. Both arms
/// of the link share the same parameters.
struct LinkParams {
  LinkParams(double eta, double q);

  static LinkParams from_components(double detector_efficiency,
                                    double transmission_efficiency,
                                    double dark_rate, double bin_width);

  double eta;
  double q;
};

/// q = dark_rate * bin_width. Domain error if the product exceeds one.
double dark_count_probability(double rate, double bin_width);

/// Folds crosstalk between spatial modes into the link budget: a fraction of
/// the signal leaks out of the mode (eta shrinks by that fraction) and
/// photons from one equally bright neighbouring mode leak in (the effective
/// dark-count probability grows by fraction*eta*lam, clamped to one).
LinkParams fold_crosstalk(double eta, double q, double crosstalk_fraction, double lam);

/// 2x2 joint probability table over {no-click, click} x {no-click, click}
/// for (Alice, Bob). Arms are symmetric, so p0c == pc0 by construction and
/// only three cells are stored.
class JointClickDistribution {
 public:
  JointClickDistribution(double p00, double p0c, double pcc);

  double p00() const { return p00_; }
  double p0c() const { return p0c_; }
  double pc0() const { return p0c_; }
  double pcc() const { return pcc_; }

  /// Exact correlation structure of the table: the per-arm marginals and the
  /// coincidence excess p00 - no_click^2. Carried by the analytic pipeline,
  /// where it can be evaluated without cancellation, so the entropy sums
  /// downstream stay accurate when the excess is many orders of magnitude
  /// below the cell values. Absent on tables built from raw cells.
  struct Moments {
    double no_click;  // per-arm probability of no click
    double click;     // 1 - no_click, evaluated stably
    double excess;    // p00 - no_click^2 >= 0
  };

  static JointClickDistribution with_moments(double p00, double p0c, double pcc,
                                             const Moments& moments);

  const std::optional<Moments>& moments() const { return moments_; }

 private:
  double p00_;
  double p0c_;
  double pcc_;
  std::optional<Moments> moments_;
};

struct ClickMarginals {
  double no_click;
  double click;
};

/// Probability that a lossless threshold detector fires: 1 - P(0).
double ideal_click_probability(const PairDistribution& dist);

/// Joint click table of the two lossy arms before dark counts.
JointClickDistribution click_probabilities_no_dark(const PairDistribution& dist, double eta);

/// Adds independent dark counts with probability q on each arm.
JointClickDistribution apply_dark_counts(const JointClickDistribution& pi, double q);

/// Full chain: source statistics -> lossy click table -> dark counts.
JointClickDistribution joint_click_distribution(const PairDistribution& dist,
                                                const LinkParams& link);

/// Per-arm marginals (identical for Alice and Bob by symmetry).
ClickMarginals marginal_click_probabilities(const JointClickDistribution& joint);

}  // namespace pairinfo
