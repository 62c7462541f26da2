#include "pairinfo/scenario.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>

namespace pairinfo::cli {

namespace {

struct RawEntry {
  std::string value;
  int line;
};

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_double(const RawEntry& entry, const std::string& field) {
  double value = 0.0;
  const char* begin = entry.value.data();
  const char* end = begin + entry.value.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc{} || ptr != end) {
    throw ScenarioParseError(entry.line, field, "not a number: '" + entry.value + "'");
  }
  return value;
}

long long parse_integer(const RawEntry& entry, const std::string& field) {
  long long value = 0;
  const char* begin = entry.value.data();
  const char* end = begin + entry.value.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc{} || ptr != end) {
    throw ScenarioParseError(entry.line, field, "not an integer: '" + entry.value + "'");
  }
  return value;
}

}  // namespace

ScenarioParseError::ScenarioParseError(int line, std::string field,
                                       const std::string& message)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ", field '" +
                                        field + "': " + message
                         : field.empty()
                             ? message
                             : "field '" + field + "': " + message),
      line_(line),
      field_(std::move(field)) {}

double ScenarioConfig::dark_q() const {
  return dark_count_probability(dark_rate, bin_width);
}

ScenarioConfig parse_scenario_stream(std::istream& in,
                                     const std::filesystem::path& base_dir) {
  std::map<std::string, RawEntry> entries;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string stripped = trim(line);
    if (stripped.empty()) continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw ScenarioParseError(lineno, "", "expected 'key = value', got '" + stripped + "'");
    }
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    if (key.empty()) {
      throw ScenarioParseError(lineno, "", "missing key before '='");
    }
    if (value.empty()) {
      throw ScenarioParseError(lineno, key, "missing value");
    }
    if (!entries.emplace(key, RawEntry{value, lineno}).second) {
      throw ScenarioParseError(lineno, key, "duplicate key");
    }
  }

  ScenarioConfig config;
  auto take = [&](const char* key) {
    auto it = entries.find(key);
    if (it == entries.end()) return std::optional<RawEntry>{};
    std::optional<RawEntry> entry(std::move(it->second));
    entries.erase(it);
    return entry;
  };

  const auto source = take("source");
  if (!source) {
    throw ScenarioParseError(0, "source", "required key missing");
  }
  if (source->value == "poissonian") {
    config.source = SourceKind::Poissonian;
  } else if (source->value == "thermal") {
    config.source = SourceKind::Thermal;
  } else if (source->value == "empirical") {
    config.source = SourceKind::Empirical;
  } else {
    throw ScenarioParseError(source->line, "source",
                             "expected poissonian, thermal or empirical, got '" +
                                 source->value + "'");
  }

  if (const auto entry = take("mean_pairs")) {
    config.mean_pairs = parse_double(*entry, "mean_pairs");
    if (!(*config.mean_pairs >= 0.0) || !std::isfinite(*config.mean_pairs)) {
      throw ScenarioParseError(entry->line, "mean_pairs", "must be finite and >= 0");
    }
  }
  if (const auto entry = take("probability_file")) {
    std::filesystem::path file(entry->value);
    config.probability_file = file.is_absolute() ? file : base_dir / file;
  }

  struct UnitField {
    const char* key;
    double* slot;
  };
  for (const auto& [key, slot] : {UnitField{"detector_efficiency", &config.detector_efficiency},
                                  UnitField{"transmission_efficiency", &config.transmission_efficiency},
                                  UnitField{"crosstalk_fraction", &config.crosstalk_fraction}}) {
    if (const auto entry = take(key)) {
      *slot = parse_double(*entry, key);
      if (!(*slot >= 0.0 && *slot <= 1.0)) {
        throw ScenarioParseError(entry->line, key, "must lie in [0, 1]");
      }
    }
  }

  int dark_line = 0;
  if (const auto entry = take("dark_rate")) {
    config.dark_rate = parse_double(*entry, "dark_rate");
    dark_line = entry->line;
    if (!(config.dark_rate >= 0.0)) {
      throw ScenarioParseError(entry->line, "dark_rate", "must be >= 0");
    }
  }
  if (const auto entry = take("bin_width")) {
    config.bin_width = parse_double(*entry, "bin_width");
    dark_line = entry->line;
    if (!(config.bin_width >= 0.0)) {
      throw ScenarioParseError(entry->line, "bin_width", "must be >= 0");
    }
  }
  if (config.dark_rate * config.bin_width > 1.0) {
    throw ScenarioParseError(dark_line, "dark_rate",
                             "dark_rate x bin_width exceeds 1");
  }

  if (const auto entry = take("outcome_count")) {
    config.outcome_count = parse_integer(*entry, "outcome_count");
    if (config.outcome_count < 1) {
      throw ScenarioParseError(entry->line, "outcome_count", "must be >= 1");
    }
  }

  if (const auto entry = take("objective")) {
    if (entry->value == "H") {
      config.objective = Objective::MutualInfo;
    } else if (entry->value == "Ig") {
      config.objective = Objective::PerGenerated;
    } else if (entry->value == "Id") {
      config.objective = Objective::PerDetected;
    } else {
      throw ScenarioParseError(entry->line, "objective",
                               "expected H, Ig or Id, got '" + entry->value + "'");
    }
  }

  if (!entries.empty()) {
    const auto& [key, entry] = *entries.begin();
    throw ScenarioParseError(entry.line, key, "unknown key");
  }

  if (config.source == SourceKind::Empirical) {
    if (!config.probability_file) {
      throw ScenarioParseError(0, "probability_file",
                               "required for an empirical source");
    }
    if (config.mean_pairs) {
      throw ScenarioParseError(0, "mean_pairs",
                               "not allowed for an empirical source");
    }
  } else {
    if (!config.mean_pairs) {
      throw ScenarioParseError(0, "mean_pairs", "required key missing");
    }
    if (config.probability_file) {
      throw ScenarioParseError(0, "probability_file",
                               "only allowed for an empirical source");
    }
  }
  return config;
}

ScenarioConfig parse_scenario_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ScenarioParseError(0, "", "cannot open config file: " + path.string());
  }
  return parse_scenario_stream(in, path.has_parent_path()
                                       ? path.parent_path()
                                       : std::filesystem::path("."));
}

PairDistribution make_distribution(const ScenarioConfig& config) {
  switch (config.source) {
    case SourceKind::Poissonian:
      return PairDistribution::poissonian(*config.mean_pairs);
    case SourceKind::Thermal:
      return PairDistribution::thermal(*config.mean_pairs);
    case SourceKind::Empirical:
      return PairDistribution::empirical_from_file(*config.probability_file);
  }
  throw std::logic_error("unreachable source kind");
}

LinkParams make_link(const ScenarioConfig& config, const PairDistribution& dist) {
  return fold_crosstalk(config.eta(), config.dark_q(), config.crosstalk_fraction,
                        mean_pairs(dist));
}

}  // namespace pairinfo::cli
