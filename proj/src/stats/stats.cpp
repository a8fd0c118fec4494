#include "webcorpus/stats/stats.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include <spdlog/spdlog.h>

#include "webcorpus/csv.hpp"
#include "webcorpus/error.hpp"
#include "webcorpus/text.hpp"

namespace fs = std::filesystem;

namespace webcorpus {

namespace {

constexpr Variable kVariables[] = {
    Variable::kUrlLength, Variable::kTimeMs,    Variable::kSizeKb,    Variable::kImages,
    Variable::kScripts,   Variable::kCssFiles,  Variable::kTables,    Variable::kIframes,
    Variable::kStyleTags, Variable::kImgSizeKb, Variable::kImgWidth,  Variable::kImgHeight,
};

constexpr Technique kTechniques[] = {Technique::kBrowsing, Technique::kSearching};

}  // namespace

std::span<const Variable> all_variables() { return kVariables; }

std::string_view to_string(Variable v) {
  switch (v) {
    case Variable::kUrlLength: return "url_length";
    case Variable::kTimeMs: return "time_ms";
    case Variable::kSizeKb: return "size_kb";
    case Variable::kImages: return "images";
    case Variable::kScripts: return "scripts";
    case Variable::kCssFiles: return "css_files";
    case Variable::kTables: return "tables";
    case Variable::kIframes: return "iframes";
    case Variable::kStyleTags: return "style_tags";
    case Variable::kImgSizeKb: return "img_size_kb";
    case Variable::kImgWidth: return "img_width";
    case Variable::kImgHeight: return "img_height";
  }
  return "";
}

std::string_view label(Variable v) {
  switch (v) {
    case Variable::kUrlLength: return "URL length";
    case Variable::kTimeMs: return "Time (ms)";
    case Variable::kSizeKb: return "Size (KB)";
    case Variable::kImages: return "Images";
    case Variable::kScripts: return "Scripts";
    case Variable::kCssFiles: return "CSS files";
    case Variable::kTables: return "Tables";
    case Variable::kIframes: return "iFrames";
    case Variable::kStyleTags: return "Style tags";
    case Variable::kImgSizeKb: return "Webshot size (KB)";
    case Variable::kImgWidth: return "Width (px)";
    case Variable::kImgHeight: return "Height (px)";
  }
  return "";
}

bool is_webshot_variable(Variable v) {
  return v == Variable::kImgSizeKb || v == Variable::kImgWidth || v == Variable::kImgHeight;
}

VariableSeries build_series(std::span<const DatasetRow> rows, Variable variable,
                            Technique technique) {
  VariableSeries series{variable, technique, {}};
  for (const auto& row : rows) {
    if (row.record.technique != technique || !row.metrics.is_complete()) continue;
    if (is_webshot_variable(variable) && !row.webshot) continue;
    const PageMetrics& m = row.metrics;
    double v = 0;
    switch (variable) {
      case Variable::kUrlLength: v = static_cast<double>(utf8_length(row.record.url)); break;
      case Variable::kTimeMs: v = m.time_ms; break;
      case Variable::kSizeKb: v = static_cast<double>(m.bytes) / 1024.0; break;
      case Variable::kImages: v = static_cast<double>(m.images); break;
      case Variable::kScripts: v = static_cast<double>(m.script_files); break;
      case Variable::kCssFiles: v = static_cast<double>(m.css_files); break;
      case Variable::kTables: v = static_cast<double>(m.tables); break;
      case Variable::kIframes: v = static_cast<double>(m.iframes); break;
      case Variable::kStyleTags: v = static_cast<double>(m.style_tags); break;
      case Variable::kImgSizeKb: v = static_cast<double>(row.webshot->img_bytes) / 1024.0; break;
      case Variable::kImgWidth: v = row.webshot->img_width; break;
      case Variable::kImgHeight: v = row.webshot->img_height; break;
    }
    if (v < 0) continue;
    series.values.push_back(v);
  }
  return series;
}

double quantile(std::span<const double> sorted, double p) {
  if (sorted.empty()) throw Error(ErrorCode::kEmptyInput, "quantile of an empty series");
  double h = (static_cast<double>(sorted.size()) - 1) * p;
  auto lo = static_cast<std::size_t>(std::floor(h));
  std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

std::vector<double> iqr_filter(std::span<const double> values) {
  if (values.empty()) throw Error(ErrorCode::kEmptyInput, "iqr_filter needs values");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  double q1 = quantile(sorted, 0.25);
  double q3 = quantile(sorted, 0.75);
  double iqr = q3 - q1;
  double low = q1 - 1.5 * iqr;
  double high = q3 + 1.5 * iqr;
  std::vector<double> kept;
  kept.reserve(values.size());
  for (double x : values) {
    if (x >= low && x <= high) kept.push_back(x);
  }
  return kept;
}

Indicators summarize_variable(std::span<const double> values) {
  if (values.empty()) throw Error(ErrorCode::kEmptyAfterFilter, "no values left to summarize");
  Indicators ind;
  ind.n = values.size();
  auto [mn, mx] = std::minmax_element(values.begin(), values.end());
  ind.min = *mn;
  ind.max = *mx;
  double sum = 0;
  for (double x : values) sum += x;
  ind.mean = sum / static_cast<double>(ind.n);
  if (ind.n > 1) {
    double ss = 0;
    for (double x : values) ss += (x - ind.mean) * (x - ind.mean);
    ind.std_dev = std::sqrt(ss / static_cast<double>(ind.n - 1));
  }
  // Summation order can nudge the mean just outside a constant range.
  ind.mean = std::clamp(ind.mean, ind.min, ind.max);
  return ind;
}

std::string format_indicator_row(std::string_view row_label, const Indicators& ind) {
  return std::string(row_label) + " | " + format_trimmed(ind.min) + " | " +
         format_trimmed(ind.max) + " | " + format_trimmed(ind.mean) + " | " +
         format_trimmed(ind.std_dev);
}

std::vector<LevelCount> categorical_distribution(std::span<const DatasetRow> rows, Field field) {
  std::map<std::string, std::size_t> counts;
  for (const auto& row : rows) {
    const UrlRecord& r = row.record;
    switch (field) {
      case Field::kCategory: ++counts[std::string(category(r.category_id).title)]; break;
      case Field::kContinent: ++counts[std::string(to_string(r.continent))]; break;
      case Field::kTechnique: ++counts[std::string(to_string(r.technique))]; break;
    }
  }
  std::vector<LevelCount> out;
  for (const auto& [level, count] : counts) {
    out.push_back({level, count, 100.0 * static_cast<double>(count) /
                                     static_cast<double>(rows.size())});
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const LevelCount& a, const LevelCount& b) { return a.count > b.count; });
  return out;
}

namespace {

Histogram bin_values(std::span<const double> values, double lo, double width, int bins) {
  Histogram h;
  h.counts.assign(static_cast<std::size_t>(bins), 0);
  for (int i = 0; i <= bins; ++i) h.edges.push_back(lo + width * i);
  for (double x : values) {
    auto idx = static_cast<long>(std::floor((x - lo) / width));
    idx = std::clamp<long>(idx, 0, bins - 1);
    // Settle rounding at the edges against the stored edge values.
    while (idx > 0 && x < h.edges[static_cast<std::size_t>(idx)]) --idx;
    while (idx < bins - 1 && x >= h.edges[static_cast<std::size_t>(idx) + 1]) ++idx;
    ++h.counts[static_cast<std::size_t>(idx)];
  }
  return h;
}

}  // namespace

Histogram histogram(std::span<const double> values, int bins) {
  if (values.empty()) throw Error(ErrorCode::kEmptyInput, "histogram of an empty series");
  if (bins < 1) throw Error(ErrorCode::kInvalidArgument, "histogram needs at least one bin");
  auto [mn, mx] = std::minmax_element(values.begin(), values.end());
  double lo = *mn;
  double hi = *mx > *mn ? *mx : *mn + 1;
  Histogram h = bin_values(values, lo, (hi - lo) / bins, bins);
  h.edges.back() = hi;
  return h;
}

Histogram histogram_width(std::span<const double> values, double width) {
  if (values.empty()) throw Error(ErrorCode::kEmptyInput, "histogram of an empty series");
  if (!(width > 0)) throw Error(ErrorCode::kInvalidArgument, "bin width must be positive");
  auto [mn, mx] = std::minmax_element(values.begin(), values.end());
  int bins = std::max(1, static_cast<int>(std::ceil((*mx - *mn) / width)));
  return bin_values(values, *mn, width, bins);
}

std::vector<fs::path> write_reports(std::span<const DatasetRow> rows, const fs::path& out_dir,
                                    const StatsOptions& options) {
  fs::create_directories(out_dir);
  std::vector<fs::path> written;
  auto emit = [&](const std::string& file, const std::string& text) {
    fs::path p = out_dir / file;
    write_file_atomic(p, text);
    written.push_back(p);
  };

  std::string indicators = "variable,label,technique,n_raw,n,min,max,mean,std_dev\n";
  for (Variable v : kVariables) {
    for (Technique t : kTechniques) {
      VariableSeries series = build_series(rows, v, t);
      if (series.values.empty()) {
        spdlog::info("stats: no {} values for {}", to_string(v), to_string(t));
        continue;
      }
      std::vector<double> kept = iqr_filter(series.values);
      Indicators ind = summarize_variable(kept);
      indicators += csv_line({std::string(to_string(v)), std::string(label(v)),
                              std::string(to_string(t)), std::to_string(series.values.size()),
                              std::to_string(ind.n), format_trimmed(ind.min, 6),
                              format_trimmed(ind.max, 6), format_trimmed(ind.mean, 6),
                              format_trimmed(ind.std_dev, 6)});
      Histogram h = histogram(kept, options.bins);
      std::string hist = "bin_start,bin_end,count\n";
      for (std::size_t i = 0; i < h.counts.size(); ++i) {
        hist += csv_line({format_trimmed(h.edges[i], 6), format_trimmed(h.edges[i + 1], 6),
                          std::to_string(h.counts[i])});
      }
      emit("hist_" + std::string(to_string(v)) + "_" + std::string(to_string(t)) + ".csv", hist);
    }
  }
  emit("indicators.csv", indicators);

  auto distribution = [&](Field field) {
    std::string text = "technique,level,count,percent\n";
    auto block = [&](std::string_view group, std::span<const DatasetRow> subset) {
      if (subset.empty()) return;
      for (const auto& lc : categorical_distribution(subset, field)) {
        text += csv_line({std::string(group), lc.level, std::to_string(lc.count),
                          format_trimmed(lc.percent, 2)});
      }
    };
    for (Technique t : kTechniques) {
      std::vector<DatasetRow> subset;
      for (const auto& r : rows) {
        if (r.record.technique == t) subset.push_back(r);
      }
      block(to_string(t), subset);
    }
    block("All", rows);
    return text;
  };
  emit("categories.csv", distribution(Field::kCategory));
  emit("continents.csv", distribution(Field::kContinent));
  return written;
}

}  // namespace webcorpus
