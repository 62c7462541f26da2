#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>

namespace pairinfo::cli {

struct FigureOptions {
  std::optional<double> lambda_min;  // override the per-figure default range
  std::optional<double> lambda_max;
  int jobs = 1;
};

std::span<const std::string_view> figure_names();
bool is_figure_name(std::string_view name);

/// Writes the named figure as CSV: header row, comma delimiter, LF line
/// endings, 15 significant digits. Lambda sweeps use 200 log-spaced points
/// over the documented default range unless overridden.
void write_figure_csv(std::string_view name, std::ostream& out,
                      const FigureOptions& options = {});

}  // namespace pairinfo::cli
