#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "webcorpus/store/datasheet.hpp"

namespace webcorpus {

enum class Variable {
  kUrlLength,
  kTimeMs,
  kSizeKb,
  kImages,
  kScripts,
  kCssFiles,
  kTables,
  kIframes,
  kStyleTags,
  kImgSizeKb,
  kImgWidth,
  kImgHeight,
};

std::span<const Variable> all_variables();
std::string_view to_string(Variable v);  // snake_case id, used in file names
std::string_view label(Variable v);      // report label, e.g. "URL length"
bool is_webshot_variable(Variable v);

struct VariableSeries {
  Variable variable;
  Technique technique;
  std::vector<double> values;
};

// Values of one variable for one technique. Rows with any -1 metric are left
// out of every series; webshot variables also need a webshot. URL length is
// counted in code points, sizes in KB of 1024 bytes.
VariableSeries build_series(std::span<const DatasetRow> rows, Variable variable,
                            Technique technique);

// Linear interpolation between order statistics (R type 7) on sorted input.
double quantile(std::span<const double> sorted, double p);

// Keeps x with Q1 - 1.5 IQR <= x <= Q3 + 1.5 IQR, in input order. Throws
// Error(kEmptyInput) for an empty input.
std::vector<double> iqr_filter(std::span<const double> values);

struct Indicators {
  std::size_t n = 0;
  double min = 0;
  double max = 0;
  double mean = 0;
  double std_dev = 0;  // sample (n - 1); 0 for a single value
};

// Throws Error(kEmptyAfterFilter) for an empty series.
Indicators summarize_variable(std::span<const double> values);

// "URL length | 14 | 161 | 31.73 | 12.59"
std::string format_indicator_row(std::string_view row_label, const Indicators& ind);

enum class Field { kCategory, kContinent, kTechnique };

struct LevelCount {
  std::string level;
  std::size_t count = 0;
  double percent = 0;
};

// Levels with at least one row, by descending count, ties by level name.
std::vector<LevelCount> categorical_distribution(std::span<const DatasetRow> rows, Field field);

struct Histogram {
  std::vector<double> edges;  // bins + 1 edges
  std::vector<std::size_t> counts;
};

// Equal-width bins over [min, max]; left-closed, the last bin also closed.
// A constant series spans [v, v + 1]. Throws Error(kEmptyInput) for an empty
// series and Error(kInvalidArgument) for bins < 1.
Histogram histogram(std::span<const double> values, int bins);
// Bins of the given width starting at the minimum.
Histogram histogram_width(std::span<const double> values, double width);

struct StatsOptions {
  int bins = 20;
};

// Writes indicators.csv, categories.csv, continents.csv and one
// hist_<variable>_<technique>.csv per non-empty series into `out_dir`.
// Returns the paths written.
std::vector<std::filesystem::path> write_reports(std::span<const DatasetRow> rows,
                                                 const std::filesystem::path& out_dir,
                                                 const StatsOptions& options = {});

}  // namespace webcorpus
