#include "pairinfo/oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "parallel_for.hpp"

namespace pairinfo {

namespace {

void require_unit_interval(double value, const char* name) {
  if (!(value >= 0.0 && value <= 1.0)) {
    throw std::domain_error(std::string(name) + " must lie in [0, 1]");
  }
}

struct RawSums {
  long double pi00 = 0;
  long double pi0c = 0;
  long double picc = 0;
  long double mass = 0;
};

RawSums truncated_pi_sums(const PairDistribution& dist, double eta, int max_m) {
  RawSums s;
  const long double x = 1.0L - static_cast<long double>(eta);
  long double xm = 1.0L;
  for (int m = 0; m <= max_m; ++m) {
    const long double p = dist.pair_probability(static_cast<unsigned>(m));
    const long double cm = 1.0L - xm;
    s.pi00 += p * xm * xm;
    s.pi0c += p * xm * cm;
    s.picc += p * cm * cm;
    s.mass += p;
    xm *= x;
  }
  return s;
}

struct DarkenedCells {
  long double p00;
  long double p0c;
  long double pcc;
};

DarkenedCells darkened(const RawSums& s, double q) {
  const long double keep = 1.0L - static_cast<long double>(q);
  const long double qd = q;
  const long double pi00 = s.pi00 / s.mass;
  const long double pi0c = s.pi0c / s.mass;
  const long double picc = s.picc / s.mass;
  return {keep * keep * pi00,
          keep * pi0c + keep * qd * pi00,
          picc + 2.0L * qd * pi0c + qd * qd * pi00};
}

// splitmix64 finalizer; used to derive well-separated block seeds
std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Inverse-CDF tables over the truncated support: cumulative probabilities
// and the per-slot survival probability 1 - (1-eta)^m for each pair count.
struct SamplingTables {
  std::vector<double> cumulative;
  std::vector<double> survival;
};

SamplingTables make_tables(const PairDistribution& dist, double eta) {
  SamplingTables t;
  const double log_x = std::log1p(-eta);
  double cum = 0.0;
  for (unsigned m = 0; m < PairDistribution::kMaxEmpiricalTerms; ++m) {
    cum += dist.pair_probability(m);
    t.cumulative.push_back(cum);
    t.survival.push_back(m == 0 ? 0.0
                                : -std::expm1(static_cast<double>(m) * log_x));
    if (cum > 1.0 - 1e-15) break;
  }
  return t;
}

}  // namespace

TruncatedSumJoint joint_by_truncated_sum(const PairDistribution& dist, double eta,
                                         double q, int max_m) {
  require_unit_interval(eta, "eta");
  require_unit_interval(q, "q");
  if (max_m < 1) {
    throw std::domain_error("max_m must be >= 1");
  }
  const RawSums s = truncated_pi_sums(dist, eta, max_m);
  const DarkenedCells cells = darkened(s, q);
  const double tail = std::max(0.0, static_cast<double>(1.0L - s.mass));
  return {JointClickDistribution(static_cast<double>(cells.p00),
                                 static_cast<double>(cells.p0c),
                                 static_cast<double>(cells.pcc)),
          tail};
}

double info_by_truncated_sum(const PairDistribution& dist, double eta, double q,
                             int max_m) {
  require_unit_interval(eta, "eta");
  require_unit_interval(q, "q");
  if (max_m < 1) {
    throw std::domain_error("max_m must be >= 1");
  }
  const DarkenedCells cells = darkened(truncated_pi_sums(dist, eta, max_m), q);
  const long double table[2][2] = {{cells.p00, cells.p0c}, {cells.p0c, cells.pcc}};
  const long double pa0 = cells.p00 + cells.p0c;
  const long double marg[2] = {pa0, 1.0L - pa0};
  const long double ln2 = 0.693147180559945309417232121458L;
  long double mi = 0;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      const long double pij = table[i][j];
      if (pij > 0) mi += pij * std::log(pij / (marg[i] * marg[j]));
    }
  }
  return static_cast<double>(mi / ln2);
}

SimulationReport simulate_events(const PairDistribution& dist, double eta, double q,
                                 std::uint64_t trials, std::uint64_t seed,
                                 const SimulateOptions& options) {
  require_unit_interval(eta, "eta");
  require_unit_interval(q, "q");
  if (trials < 1) {
    throw std::domain_error("trials must be >= 1");
  }
  const SamplingTables tables = make_tables(dist, eta);

  constexpr std::uint64_t kBlockTrials = 1u << 16;
  const std::uint64_t blocks = (trials + kBlockTrials - 1) / kBlockTrials;
  std::vector<std::array<std::uint64_t, 4>> block_counts(blocks, {0, 0, 0, 0});

  detail::parallel_for(options.jobs, blocks, [&](std::size_t block) {
    const std::uint64_t begin = block * kBlockTrials;
    const std::uint64_t end = std::min(trials, begin + kBlockTrials);
    std::mt19937_64 rng(mix64(seed ^ mix64(block)));
    auto& counts = block_counts[block];
    for (std::uint64_t t = begin; t < end; ++t) {
      const double u = uniform01(rng);
      const auto it = std::upper_bound(tables.cumulative.begin(),
                                       tables.cumulative.end(), u);
      std::size_t m = static_cast<std::size_t>(it - tables.cumulative.begin());
      if (m >= tables.cumulative.size()) m = tables.cumulative.size() - 1;
      bool alice_signal, bob_signal;
      if (options.per_photon) {
        alice_signal = false;
        bob_signal = false;
        for (std::size_t photon = 0; photon < m; ++photon) {
          if (uniform01(rng) < eta) alice_signal = true;
        }
        for (std::size_t photon = 0; photon < m; ++photon) {
          if (uniform01(rng) < eta) bob_signal = true;
        }
      } else {
        alice_signal = uniform01(rng) < tables.survival[m];
        bob_signal = uniform01(rng) < tables.survival[m];
      }
      const bool alice = alice_signal || uniform01(rng) < q;
      const bool bob = bob_signal || uniform01(rng) < q;
      ++counts[(alice ? 2u : 0u) | (bob ? 1u : 0u)];
    }
  });

  SimulationReport report;
  report.trials = trials;
  report.seed = seed;
  for (const auto& counts : block_counts) {
    report.n00 += counts[0];
    report.n0c += counts[1];
    report.nc0 += counts[2];
    report.ncc += counts[3];
  }
  const double total = static_cast<double>(trials);
  report.empirical = JointClickDistribution(
      static_cast<double>(report.n00) / total,
      static_cast<double>(report.n0c + report.nc0) / (2.0 * total),
      static_cast<double>(report.ncc) / total);
  return report;
}

}  // namespace pairinfo
