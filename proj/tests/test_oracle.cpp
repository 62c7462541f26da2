#include "pairinfo/oracle.hpp"

#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "pairinfo/information.hpp"
#include "test_support.hpp"

using namespace pairinfo;
using testsup::check_close;

TEST_CASE("joint_by_truncated_sum basics") {
  SUBCASE("lossless arms never disagree") {
    const auto result =
        joint_by_truncated_sum(PairDistribution::poissonian(1.0), 1.0, 0.0, 100);
    CHECK(result.joint.p0c() == 0.0);
    check_close(result.joint.p00(), std::exp(-1.0), 1e-13);
    CHECK(result.tail_mass < 1e-15);
  }
  SUBCASE("single-term hand evaluation") {
    const auto result = joint_by_truncated_sum(
        PairDistribution::empirical({0.5, 0.5}), 0.5, 0.0, 10);
    check_close(result.joint.pcc(), 0.125, 1e-15);
    check_close(result.joint.p0c(), 0.125, 1e-15);
    check_close(result.joint.p00(), 0.625, 1e-15);
    CHECK(result.tail_mass == 0.0);
  }
  CHECK_THROWS_AS(
      joint_by_truncated_sum(PairDistribution::poissonian(1.0), 0.8, 0.0, 0),
      std::domain_error);
  CHECK_THROWS_AS(
      joint_by_truncated_sum(PairDistribution::poissonian(1.0), 1.2, 0.0, 10),
      std::domain_error);
}

TEST_CASE("truncated sums agree with the analytic pipeline") {
  for (double lam : {0.01, 1.0, 10.0}) {
    for (int kind = 0; kind < 2; ++kind) {
      const PairDistribution dist = kind == 0 ? PairDistribution::poissonian(lam)
                                              : PairDistribution::thermal(lam);
      for (double eta : {0.4, 0.8}) {
        for (double q : {0.0, 3.9e-8}) {
          const auto oracle = joint_by_truncated_sum(dist, eta, q, 2000);
          const auto analytic = joint_click_distribution(dist, LinkParams(eta, q));
          CHECK(oracle.tail_mass <= 1e-12);
          check_close(oracle.joint.p00(), analytic.p00(), 0.0, 1e-12);
          check_close(oracle.joint.p0c(), analytic.p0c(), 0.0, 1e-12);
          check_close(oracle.joint.pcc(), analytic.pcc(), 0.0, 1e-12);
        }
      }
    }
  }
}

TEST_CASE("info_by_truncated_sum") {
  SUBCASE("benign regime matches the closed form") {
    check_close(info_by_truncated_sum(PairDistribution::poissonian(1.0), 0.8, 3.9e-8,
                                      200),
                mutual_information_poisson(1.0, 0.8, 3.9e-8), 1e-12);
  }
  SUBCASE("stable-difference regime at lambda = 1e-10") {
    const double closed = mutual_information_poisson(1e-10, 0.8, 0.0);
    const double oracle =
        info_by_truncated_sum(PairDistribution::poissonian(1e-10), 0.8, 0.0, 60);
    CHECK(std::isfinite(closed));
    CHECK(closed >= 0.0);
    check_close(closed, oracle, 1e-6);
  }
}

TEST_CASE("simulate_events degenerate links") {
  const auto blind =
      simulate_events(PairDistribution::poissonian(1.0), 0.0, 0.0, 20000, 7);
  CHECK(blind.n00 == blind.trials);

  const auto perfect = simulate_events(PairDistribution::poissonian(std::log(2.0)),
                                       1.0, 0.0, 1000000, 11);
  CHECK(perfect.n0c == 0);
  CHECK(perfect.nc0 == 0);
  const double sigma = std::sqrt(0.25 / 1e6);
  check_close(static_cast<double>(perfect.n00) / 1e6, 0.5, 0.0, 5.0 * sigma);

  CHECK_THROWS_AS(simulate_events(PairDistribution::poissonian(1.0), 0.8, 0.0, 0, 1),
                  std::domain_error);
}

TEST_CASE("simulate_events counts sum to trials and table is normalized") {
  const auto report =
      simulate_events(PairDistribution::thermal(0.8), 0.7, 1e-3, 123456, 99);
  CHECK(report.n00 + report.n0c + report.nc0 + report.ncc == report.trials);
  const double sum = report.empirical.p00() + 2.0 * report.empirical.p0c() +
                     report.empirical.pcc();
  check_close(sum, 1.0, 0.0, 1e-12);
}

TEST_CASE("simulate_events is reproducible and partition independent") {
  const auto dist = PairDistribution::poissonian(1.0);
  const auto one = simulate_events(dist, 0.8, 1e-3, 300000, 2718);
  const auto two = simulate_events(dist, 0.8, 1e-3, 300000, 2718);
  CHECK(one.n00 == two.n00);
  CHECK(one.n0c == two.n0c);
  CHECK(one.nc0 == two.nc0);
  CHECK(one.ncc == two.ncc);

  SimulateOptions parallel;
  parallel.jobs = 3;
  const auto three = simulate_events(dist, 0.8, 1e-3, 300000, 2718, parallel);
  CHECK(one.n00 == three.n00);
  CHECK(one.n0c == three.n0c);
  CHECK(one.nc0 == three.nc0);
  CHECK(one.ncc == three.ncc);

  const auto other_seed = simulate_events(dist, 0.8, 1e-3, 300000, 2719);
  CHECK(one.n00 != other_seed.n00);
}

TEST_CASE("simulated counts track the analytic table within 5 sigma") {
  const auto dist = PairDistribution::poissonian(1.0);
  constexpr std::uint64_t kTrials = 1000000;
  for (double eta : {0.4, 0.8}) {
    for (double q : {0.0, 1e-3}) {
      const auto analytic = joint_click_distribution(dist, LinkParams(eta, q));
      const auto report = simulate_events(dist, eta, q, kTrials, 31337);
      const double expected[4] = {analytic.p00(), analytic.p0c(), analytic.pc0(),
                                  analytic.pcc()};
      const std::uint64_t observed[4] = {report.n00, report.n0c, report.nc0,
                                         report.ncc};
      for (int cell = 0; cell < 4; ++cell) {
        const double sigma =
            std::sqrt(expected[cell] * (1.0 - expected[cell]) / kTrials);
        INFO("eta " << eta << " q " << q << " cell " << cell);
        check_close(static_cast<double>(observed[cell]) / kTrials, expected[cell],
                    0.0, 5.0 * sigma);
      }
    }
  }
}

TEST_CASE("per-photon sampling mode agrees with the aggregated mode") {
  const auto dist = PairDistribution::poissonian(1.0);
  const auto analytic = joint_click_distribution(dist, LinkParams(0.6, 0.0));
  SimulateOptions options;
  options.per_photon = true;
  constexpr std::uint64_t kTrials = 200000;
  const auto report = simulate_events(dist, 0.6, 0.0, kTrials, 5150, options);
  const double expected[4] = {analytic.p00(), analytic.p0c(), analytic.pc0(),
                              analytic.pcc()};
  const std::uint64_t observed[4] = {report.n00, report.n0c, report.nc0, report.ncc};
  for (int cell = 0; cell < 4; ++cell) {
    const double sigma =
        std::sqrt(expected[cell] * (1.0 - expected[cell]) / kTrials);
    check_close(static_cast<double>(observed[cell]) / kTrials, expected[cell], 0.0,
                5.0 * sigma);
  }
}
