#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>

#include "pairinfo/figures.hpp"
#include "pairinfo/optimize.hpp"

namespace pairinfo::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitVerifyFailed = 3;

struct EvalOptions {
  std::filesystem::path config;
  bool csv_only = false;
};

/// Evaluates a scenario file and reports H(A:B), I_g, I_d and the key bits
/// over M slots, human-readable plus one machine-readable CSV row.
int run_eval(const EvalOptions& options, std::ostream& out, std::ostream& err);

struct FigureCommandOptions {
  std::string name;
  std::filesystem::path output;
  FigureOptions figure;
};

int run_figure(const FigureCommandOptions& options, std::ostream& err);

struct OptimizeOptions {
  std::filesystem::path config;
  std::optional<Objective> objective;  // overrides the config objective
  std::pair<double, double> log10_bracket{-12.0, 2.0};
  bool csv_only = false;
};

int run_optimize(const OptimizeOptions& options, std::ostream& out, std::ostream& err);

struct VerifyOptions {
  /// Tolerance of the deterministic agreement checks (closed form vs
  /// pipeline, truncated sum vs pipeline). The Monte-Carlo check always
  /// uses a 5 sigma band and the series identity 1e-10.
  double tolerance = 1e-12;
  std::uint64_t trials = 1'000'000;
  std::uint64_t seed = 1;
  int jobs = 1;
};

/// Runs the analytic-vs-oracle verification suites, printing one line per
/// check. Returns kExitOk when everything passes, kExitVerifyFailed
/// otherwise, listing each offending grid cell.
int run_verify(const VerifyOptions& options, std::ostream& out);

}  // namespace pairinfo::cli
