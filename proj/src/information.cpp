#include "pairinfo/information.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace pairinfo {

namespace {

constexpr double kLn2 = 0.693147180559945309417232121458;

void require_unit_interval(double value, const char* name) {
  if (!(value >= 0.0 && value <= 1.0)) {
    throw std::domain_error(std::string(name) + " must lie in [0, 1], got " +
                            std::to_string(value));
  }
}

// h(x) = (1+x) ln(1+x) - x for x >= -1. Nonnegative, h(0) = 0, h(-1) = 1.
// The series x^2/2 - x^3/6 + x^4/12 - ... = sum_{k>=2} (-x)^k / (k(k-1))
// avoids the subtraction for small |x|, where the direct form loses all
// significant digits.
double h_xlnx(double x) {
  if (x <= -1.0) return 1.0;
  if (std::abs(x) < 0.5) {
    double term = 0.5 * x * x;
    double sum = term;
    for (int k = 2; k < 80 && std::abs(term) > std::abs(sum) * 1e-17; ++k) {
      term *= -x * static_cast<double>(k - 1) / static_cast<double>(k + 1);
      sum += term;
    }
    return sum;
  }
  return (1.0 + x) * std::log1p(x) - x;
}

// One cell of the mutual-information sum, written against the independent
// table: with p = m + e the cell contributes p ln(p/m) = e + g(m, e) where
// g(m, e) = m h(e/m) >= 0. The linear parts cancel exactly across the table
// (the excesses sum to zero), so the mutual information is the sum of the
// g terms alone, each nonnegative -- no cancellation between cells.
double cell_divergence(double m, double e) {
  const double p = m + e;
  if (p <= 0.0) return -e;  // p ln p -> 0
  if (m <= 0.0) return std::numeric_limits<double>::infinity();
  return m * h_xlnx(e / m);
}

// Mutual information in bits of the symmetric binary table with per-arm
// no-click marginal a, click marginal ca = 1 - a and coincidence excess e:
// p00 = a^2 + e, p0c = a ca - e, pcc = ca^2 + e.
double mi_from_moments(double a, double ca, double e) {
  const double nats = cell_divergence(a * a, e) +
                      2.0 * cell_divergence(a * ca, -e) +
                      cell_divergence(ca * ca, e);
  return nats / kLn2;
}

double clamp_mutual_information(double mi, double upper) {
  if (mi < 0.0) {
    if (mi < -1e-12) {
      throw std::domain_error("mutual information " + std::to_string(mi) +
                              " below 0 beyond tolerance");
    }
    return 0.0;
  }
  if (mi > upper) {
    if (mi > upper + 1e-12) {
      throw std::domain_error("mutual information " + std::to_string(mi) +
                              " above the marginal entropy beyond tolerance");
    }
    return upper;
  }
  return mi;
}

}  // namespace

double binary_entropy(double x) {
  if (!(x >= 0.0 && x <= 1.0)) {
    throw std::domain_error("binary entropy argument must lie in [0, 1]");
  }
  if (x == 0.0 || x == 1.0) return 0.0;
  return -(x * std::log(x) + (1.0 - x) * std::log1p(-x)) / kLn2;
}

double mutual_information(const JointClickDistribution& joint) {
  if (const auto& m = joint.moments()) {
    const double mi = mi_from_moments(m->no_click, m->click, m->excess);
    return clamp_mutual_information(mi, binary_entropy(m->no_click));
  }
  const double cells[2][2] = {{joint.p00(), joint.p0c()},
                              {joint.pc0(), joint.pcc()}};
  // cell rounding can leave a marginal an ulp outside [0, 1]
  const double pa[2] = {std::clamp(joint.p00() + joint.p0c(), 0.0, 1.0),
                        std::clamp(joint.pc0() + joint.pcc(), 0.0, 1.0)};
  const double pb[2] = {std::clamp(joint.p00() + joint.pc0(), 0.0, 1.0),
                        std::clamp(joint.p0c() + joint.pcc(), 0.0, 1.0)};
  double mi = 0.0;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      const double pij = cells[i][j];
      if (pij > 0.0 && pa[i] > 0.0 && pb[j] > 0.0) {
        mi += pij * std::log2(pij / (pa[i] * pb[j]));
      }
    }
  }
  const double upper = std::min(binary_entropy(pa[0]), binary_entropy(pb[0]));
  return clamp_mutual_information(mi, upper);
}

double mutual_information_poisson(double lam, double eta, double q) {
  if (!(lam >= 0.0) || !std::isfinite(lam)) {
    throw std::domain_error("lambda must be finite and >= 0");
  }
  require_unit_interval(eta, "eta");
  require_unit_interval(q, "q");
  // Marginal A = (1-q) e^{-lam eta}; excess = A^2 (e^{lam eta^2} - 1). The
  // click complement 1 - A = q + (1-q)(1 - e^{-lam eta}) is assembled from
  // nonnegative pieces so it keeps full relative accuracy for tiny lam, q.
  const double a = std::exp(std::log1p(-q) - lam * eta);
  const double ca = q + (1.0 - q) * -std::expm1(-lam * eta);
  double excess;
  if (lam * eta * eta < 0.5) {
    excess = a * a * std::expm1(lam * eta * eta);
  } else {
    excess = std::exp(2.0 * std::log1p(-q) - lam * eta * (2.0 - eta)) - a * a;
  }
  const double mi = mi_from_moments(a, ca, excess);
  return clamp_mutual_information(mi, binary_entropy(a));
}

double mutual_information_thermal(double lam, double eta, double q) {
  if (!(lam >= 0.0) || !std::isfinite(lam)) {
    throw std::domain_error("lambda must be finite and >= 0");
  }
  return mutual_information(
      joint_click_distribution(PairDistribution::thermal(lam), LinkParams(eta, q)));
}

double info_per_generated(double h_bits, double lam) {
  if (!(lam > 0.0)) {
    throw std::domain_error("information per generated pair needs lambda > 0");
  }
  return h_bits / lam;
}

double info_per_detected(double h_bits, double lam, double eta, double q) {
  if (!(lam >= 0.0)) {
    throw std::domain_error("lambda must be >= 0");
  }
  require_unit_interval(eta, "eta");
  require_unit_interval(q, "q");
  const double detected = eta * eta * lam + q * q;
  if (!(detected > 0.0)) {
    throw std::domain_error("information per detected pair needs eta^2 lambda + q^2 > 0");
  }
  return h_bits / detected;
}

double key_bits_for_slots(double h_bits, long long slot_count) {
  if (slot_count < 0) {
    throw std::domain_error("slot count must be >= 0");
  }
  return static_cast<double>(slot_count) * h_bits;
}

InfoReport make_info_report(const PairDistribution& dist, const LinkParams& link) {
  const double h = mutual_information(joint_click_distribution(dist, link));
  const double lam = mean_pairs(dist);
  return {h,
          info_per_generated(h, lam),
          info_per_detected(h, lam, link.eta, link.q),
          {dist.kind(), lam},
          link};
}

}  // namespace pairinfo
