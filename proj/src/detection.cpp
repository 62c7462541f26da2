#include "pairinfo/detection.hpp"

#include <algorithm>
#include <cmath>
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

// Snap up to 1e-12 of rounding residue back into [0, 1]; anything worse
// (including NaN) is a real invariant violation.
double checked_probability(double value, const char* name) {
  if (!(value >= -1e-12 && value <= 1.0 + 1e-12)) {
    throw std::domain_error(std::string(name) + " outside [0, 1]: " +
                            std::to_string(value));
  }
  return std::clamp(value, 0.0, 1.0);
}

// Per-arm statistics of the lossy link with no dark counts, evaluated per
// source kind so differences that cancel catastrophically in the plain
// moment-generating-function forms are computed directly:
//   no_click     = M(1,0)
//   click        = 1 - M(1,0)
//   coincidence  = M(1,1)                (both arms silent)
//   discordance  = M(1,0) - M(1,1)       (one arm clicks, one silent)
//   excess       = M(1,1) - M(1,0)^2     (correlation above independence)
struct ClickStats {
  double no_click;
  double click;
  double coincidence;
  double discordance;
  double excess;
};

ClickStats click_stats(const PairDistribution& dist, double eta) {
  ClickStats s{};
  switch (dist.kind()) {
    case SourceKind::Poissonian: {
      const double lam = dist.mean_pairs();
      const double le = lam * eta;
      s.no_click = std::exp(-le);
      s.click = -std::expm1(-le);
      s.coincidence = std::exp(-le * (2.0 - eta));
      s.discordance = s.no_click * -std::expm1(-le * (1.0 - eta));
      if (lam * eta * eta < 0.5) {
        s.excess = std::exp(-2.0 * le) * std::expm1(lam * eta * eta);
      } else {
        s.excess = s.coincidence - s.no_click * s.no_click;
      }
      break;
    }
    case SourceKind::Thermal: {
      const double lam = dist.mean_pairs();
      const double le = lam * eta;
      const double d2 = 1.0 + le;
      const double d1 = 1.0 + le * (2.0 - eta);
      s.no_click = 1.0 / d2;
      s.click = le / d2;
      s.coincidence = 1.0 / d1;
      s.discordance = le * (1.0 - eta) / (d1 * d2);
      s.excess = eta * eta * lam * (1.0 + lam) / (d1 * d2 * d2);
      break;
    }
    case SourceKind::Empirical: {
      const auto probs = dist.probabilities();
      const double log_x = std::log1p(-eta);  // ln(1 - eta), -inf at eta = 1
      for (std::size_t m = 0; m < probs.size(); ++m) {
        const double xm = m == 0 ? 1.0 : std::exp(static_cast<double>(m) * log_x);
        const double cm = m == 0 ? 0.0 : -std::expm1(static_cast<double>(m) * log_x);
        s.no_click += probs[m] * xm;
        s.click += probs[m] * cm;
        s.coincidence += probs[m] * xm * xm;
        s.discordance += probs[m] * xm * cm;
      }
      for (std::size_t m = 0; m < probs.size(); ++m) {
        const double xm = m == 0 ? 1.0 : std::exp(static_cast<double>(m) * log_x);
        const double d = xm - s.no_click;
        s.excess += probs[m] * d * d;
      }
      break;
    }
  }
  return s;
}

}  // namespace

LinkParams::LinkParams(double eta_, double q_) : eta(eta_), q(q_) {
  require_unit_interval(eta, "eta");
  require_unit_interval(q, "q");
}

LinkParams LinkParams::from_components(double detector_efficiency,
                                       double transmission_efficiency,
                                       double dark_rate, double bin_width) {
  require_unit_interval(detector_efficiency, "detector efficiency");
  require_unit_interval(transmission_efficiency, "transmission efficiency");
  return {detector_efficiency * transmission_efficiency,
          dark_count_probability(dark_rate, bin_width)};
}

double dark_count_probability(double rate, double bin_width) {
  if (!(rate >= 0.0) || !(bin_width >= 0.0)) {
    throw std::domain_error("dark rate and bin width must be >= 0");
  }
  const double q = rate * bin_width;
  if (!(q <= 1.0)) {
    throw std::domain_error("dark rate x bin width = " + std::to_string(q) +
                            " exceeds 1");
  }
  return q;
}

LinkParams fold_crosstalk(double eta, double q, double crosstalk_fraction, double lam) {
  require_unit_interval(eta, "eta");
  require_unit_interval(q, "q");
  require_unit_interval(crosstalk_fraction, "crosstalk fraction");
  if (!(lam >= 0.0)) {
    throw std::domain_error("mean pair number must be >= 0");
  }
  return {eta * (1.0 - crosstalk_fraction),
          std::min(1.0, q + crosstalk_fraction * eta * lam)};
}

JointClickDistribution::JointClickDistribution(double p00, double p0c, double pcc)
    : p00_(checked_probability(p00, "p00")),
      p0c_(checked_probability(p0c, "p0c")),
      pcc_(checked_probability(pcc, "pcc")) {
  const double sum = p00_ + 2.0 * p0c_ + pcc_;
  if (!(std::abs(sum - 1.0) <= 1e-12)) {
    throw std::domain_error("joint click table sums to " + std::to_string(sum) +
                            ", expected 1 within 1e-12");
  }
}

JointClickDistribution JointClickDistribution::with_moments(double p00, double p0c,
                                                            double pcc,
                                                            const Moments& moments) {
  JointClickDistribution joint(p00, p0c, pcc);
  // rounding in empirical sums can push the marginals an ulp past [0, 1]
  joint.moments_ = Moments{checked_probability(moments.no_click, "no_click marginal"),
                           checked_probability(moments.click, "click marginal"),
                           std::max(0.0, moments.excess)};
  return joint;
}

double ideal_click_probability(const PairDistribution& dist) {
  switch (dist.kind()) {
    case SourceKind::Poissonian:
      return -std::expm1(-dist.mean_pairs());
    case SourceKind::Thermal: {
      const double lam = dist.mean_pairs();
      return lam / (1.0 + lam);
    }
    case SourceKind::Empirical:
      return 1.0 - dist.probabilities()[0];
  }
  return 0.0;
}

JointClickDistribution click_probabilities_no_dark(const PairDistribution& dist,
                                                   double eta) {
  require_unit_interval(eta, "eta");
  const ClickStats s = click_stats(dist, eta);
  // pi(c,c) = 1 - 2 M(1,0) + M(1,1) = (1 - M(1,0))^2 + excess
  const double pcc = s.click * s.click + s.excess;
  return JointClickDistribution::with_moments(
      s.coincidence, s.discordance, pcc, {s.no_click, s.click, s.excess});
}

JointClickDistribution apply_dark_counts(const JointClickDistribution& pi, double q) {
  require_unit_interval(q, "q");
  const double keep = 1.0 - q;
  const double p00 = keep * keep * pi.p00();
  const double p0c = keep * pi.p0c() + keep * q * pi.p00();
  const double pcc = pi.pcc() + 2.0 * q * pi.p0c() + q * q * pi.p00();
  if (const auto& m = pi.moments()) {
    // dark counts rescale the marginal and the excess by (1-q), (1-q)^2
    return JointClickDistribution::with_moments(
        p00, p0c, pcc,
        {keep * m->no_click, q + keep * m->click, keep * keep * m->excess});
  }
  return {p00, p0c, pcc};
}

JointClickDistribution joint_click_distribution(const PairDistribution& dist,
                                                const LinkParams& link) {
  return apply_dark_counts(click_probabilities_no_dark(dist, link.eta), link.q);
}

ClickMarginals marginal_click_probabilities(const JointClickDistribution& joint) {
  const double no_click = joint.p00() + joint.p0c();
  return {no_click, 1.0 - no_click};
}

}  // namespace pairinfo
