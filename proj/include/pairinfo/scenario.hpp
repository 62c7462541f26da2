#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>

#include "pairinfo/detection.hpp"
#include "pairinfo/optimize.hpp"
#include "pairinfo/pair_distribution.hpp"

namespace pairinfo::cli {

/// Raised on malformed or out-of-range scenario files. Carries the offending
/// line (0 if not tied to one) and field name for diagnostics.
class ScenarioParseError : public std::runtime_error {
 public:
  ScenarioParseError(int line, std::string field, const std::string& message);

  int line() const { return line_; }
  const std::string& field() const { return field_; }

 private:
  int line_;
  std::string field_;
};

/// Named experiment description, parsed from a flat key = value file.
/// Recognized keys: source, mean_pairs, probability_file,
/// detector_efficiency, transmission_efficiency, dark_rate, bin_width,
/// crosstalk_fraction, outcome_count, objective. Unknown keys are errors.
struct ScenarioConfig {
  SourceKind source = SourceKind::Poissonian;
  std::optional<double> mean_pairs;
  std::optional<std::filesystem::path> probability_file;  // resolved against the config dir
  double detector_efficiency = 1.0;
  double transmission_efficiency = 1.0;
  double dark_rate = 0.0;   // counts per second
  double bin_width = 0.0;   // seconds
  double crosstalk_fraction = 0.0;
  long long outcome_count = 1;
  Objective objective = Objective::MutualInfo;

  double eta() const { return detector_efficiency * transmission_efficiency; }
  double dark_q() const;
};

ScenarioConfig parse_scenario_file(const std::filesystem::path& path);
ScenarioConfig parse_scenario_stream(std::istream& in,
                                     const std::filesystem::path& base_dir);

PairDistribution make_distribution(const ScenarioConfig& config);

/// eta and q from the config components, with crosstalk folded in.
LinkParams make_link(const ScenarioConfig& config, const PairDistribution& dist);

}  // namespace pairinfo::cli
