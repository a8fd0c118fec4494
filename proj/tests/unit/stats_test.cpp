#include <gtest/gtest.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <random>

#include <unistd.h>

#include "iqr_oracle.hpp"
#include "webcorpus/csv.hpp"
#include "webcorpus/error.hpp"
#include "webcorpus/stats/stats.hpp"

namespace fs = std::filesystem;

namespace webcorpus {
namespace {

template <typename Fn>
ErrorCode code_of(Fn fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorCode::kInvalidArgument;
}

using testing::reference_iqr_filter;
using testing::reference_quantile;

std::vector<double> random_array(std::mt19937_64& rng) {
  std::size_t n = 4 + rng() % 497;
  std::vector<double> v(n);
  switch (rng() % 4) {
    case 0: {
      std::uniform_real_distribution<double> d(0, 1);
      for (auto& x : v) x = d(rng);
      break;
    }
    case 1: {
      std::lognormal_distribution<double> d(3, 1.2);
      for (auto& x : v) x = d(rng);
      break;
    }
    case 2:
      for (auto& x : v) x = static_cast<double>(rng() % 8);
      break;
    default: {
      std::normal_distribution<double> d(50, 10);
      for (auto& x : v) x = d(rng);
      for (int k = 0; k < 3; ++k) v[rng() % n] = 1e6 * static_cast<double>(rng() % 5);
    }
  }
  return v;
}

TEST(Quantile, Type7Values) {
  std::vector<double> v{1, 2, 3, 100};
  EXPECT_DOUBLE_EQ(quantile(v, 0.25), 1.75);
  EXPECT_DOUBLE_EQ(quantile(v, 0.75), 27.25);
  EXPECT_DOUBLE_EQ(quantile(v, 0), 1);
  EXPECT_DOUBLE_EQ(quantile(v, 1), 100);
  EXPECT_DOUBLE_EQ(quantile(v, 0.5), 2.5);
  EXPECT_DOUBLE_EQ(reference_quantile(v, 0.25), 1.75);
  EXPECT_DOUBLE_EQ(reference_quantile(v, 0.75), 27.25);
}

TEST(IqrFilter, Examples) {
  EXPECT_EQ(iqr_filter(std::vector<double>{5, 5, 5, 5}), (std::vector<double>{5, 5, 5, 5}));
  EXPECT_EQ(iqr_filter(std::vector<double>{1, 2, 3, 100}), (std::vector<double>{1, 2, 3}));
  EXPECT_EQ(iqr_filter(std::vector<double>{100, 1, 3, 2}), (std::vector<double>{1, 3, 2}));
  EXPECT_EQ(code_of([] { iqr_filter(std::vector<double>{}); }), ErrorCode::kEmptyInput);
}

TEST(IqrFilter, MatchesReference) {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<double> v = random_array(rng);
    ASSERT_EQ(iqr_filter(v), reference_iqr_filter(v)) << "trial " << trial;
  }
}

TEST(IqrFilter, SecondPassIsSubset) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<double> once = iqr_filter(random_array(rng));
    std::vector<double> twice = iqr_filter(once);
    std::vector<double> a = once, b = twice;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    EXPECT_TRUE(std::includes(a.begin(), a.end(), b.begin(), b.end()));
  }
}

TEST(IqrFilter, SecondPassIdentityOnTightData) {
  // Evenly spaced values have no points beyond the fences, before or after.
  std::vector<double> v;
  for (int i = 0; i < 101; ++i) v.push_back(i);
  v.push_back(1000);
  std::vector<double> once = iqr_filter(v);
  EXPECT_EQ(once.size(), 101u);
  EXPECT_EQ(iqr_filter(once), once);
}

TEST(Summary, Examples) {
  Indicators flat = summarize_variable(std::vector<double>{10, 10, 10});
  EXPECT_EQ(flat.n, 3u);
  EXPECT_EQ(flat.min, 10);
  EXPECT_EQ(flat.max, 10);
  EXPECT_EQ(flat.mean, 10);
  EXPECT_EQ(flat.std_dev, 0);

  Indicators four = summarize_variable(std::vector<double>{1, 2, 3, 4});
  EXPECT_DOUBLE_EQ(four.mean, 2.5);
  EXPECT_NEAR(four.std_dev, std::sqrt(5.0 / 3.0), 1e-12);
  EXPECT_NEAR(four.std_dev, 1.2909944, 1e-7);

  EXPECT_EQ(summarize_variable(std::vector<double>{7}).std_dev, 0);
  EXPECT_EQ(code_of([] { summarize_variable(std::vector<double>{}); }),
            ErrorCode::kEmptyAfterFilter);
}

TEST(Summary, RowFormat) {
  Indicators ind{100, 14, 161, 31.7312, 12.5888};
  EXPECT_EQ(format_indicator_row("URL length", ind), "URL length | 14 | 161 | 31.73 | 12.59");
  Indicators t{5, 1.25, 72.9, 18.72, 17.39};
  EXPECT_EQ(format_indicator_row("Time (ms)", t), "Time (ms) | 1.25 | 72.9 | 18.72 | 17.39");
}

TEST(Summary, OrderAndScaling) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<double> v = random_array(rng);
    Indicators a = summarize_variable(v);
    EXPECT_LE(a.min, a.mean);
    EXPECT_LE(a.mean, a.max);
    EXPECT_GE(a.std_dev, 0);
    // Powers of two keep the scaling exact in floating point.
    double c = std::ldexp(1.0, static_cast<int>(rng() % 9) - 4);
    std::vector<double> scaled = v;
    for (auto& x : scaled) x *= c;
    Indicators b = summarize_variable(scaled);
    EXPECT_EQ(b.min, a.min * c);
    EXPECT_EQ(b.max, a.max * c);
    EXPECT_EQ(b.mean, a.mean * c);
    EXPECT_EQ(b.std_dev, a.std_dev * c);
  }
}

TEST(Histogram, HandBinning) {
  std::vector<double> v{0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
  Histogram h = histogram(v, 2);
  EXPECT_EQ(h.edges, (std::vector<double>{0, 4.5, 9}));
  EXPECT_EQ(h.counts, (std::vector<std::size_t>{5, 5}));

  Histogram single = histogram(std::vector<double>{3}, 3);
  EXPECT_EQ(single.counts, (std::vector<std::size_t>{1, 0, 0}));

  Histogram w = histogram_width(std::vector<double>{0, 4.99, 5, 10}, 5);
  EXPECT_EQ(w.edges, (std::vector<double>{0, 5, 10}));
  EXPECT_EQ(w.counts, (std::vector<std::size_t>{2, 2}));

  EXPECT_EQ(code_of([] { histogram(std::vector<double>{}, 3); }), ErrorCode::kEmptyInput);
  EXPECT_EQ(code_of([] { histogram(std::vector<double>{1}, 0); }), ErrorCode::kInvalidArgument);
}

TEST(Histogram, Conservation) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<double> v = random_array(rng);
    int bins = 1 + static_cast<int>(rng() % 40);
    Histogram h = histogram(v, bins);
    std::size_t sum = 0;
    for (auto c : h.counts) sum += c;
    EXPECT_EQ(sum, v.size());
    EXPECT_EQ(h.edges.size(), static_cast<std::size_t>(bins) + 1);
    for (std::size_t i = 0; i < v.size(); i += 7) {
      EXPECT_GE(v[i], h.edges.front());
      EXPECT_LE(v[i], h.edges.back());
    }
  }
}

// --- series from datasheet rows --------------------------------------------

DatasetRow row(const std::string& url, Technique t, bool fetched, bool shot, int cat = 1,
               Continent cont = Continent::kEurope) {
  PageMetrics m;
  if (fetched) m = PageMetrics{25.5, 2048, 3, 2, 1, 0, 0, 1};
  std::optional<WebshotMeta> w;
  if (shot) w = WebshotMeta{"B1X_" + std::to_string(url.size()) + ".jpg", 4096, 992, 744};
  return make_row({url, "Spain", cont, cat, t}, m, w);
}

TEST(Series, SentinelRowsNeverReachSeries) {
  std::vector<DatasetRow> rows;
  for (int i = 0; i < 7; ++i) rows.push_back(row("https://ok" + std::to_string(i) + ".es/",
                                                 Technique::kBrowsing, true, false));
  for (int i = 0; i < 3; ++i) rows.push_back(row("https://bad.es/", Technique::kBrowsing, false,
                                                 false));
  for (Variable v : all_variables()) {
    std::size_t expected = is_webshot_variable(v) ? 0 : 7;
    EXPECT_EQ(build_series(rows, v, Technique::kBrowsing).values.size(), expected)
        << to_string(v);
    EXPECT_TRUE(build_series(rows, v, Technique::kSearching).values.empty());
  }
  // A half-sentineled row is dropped too.
  rows[0].metrics.tables = kSentinel;
  EXPECT_EQ(build_series(rows, Variable::kTables, Technique::kBrowsing).values.size(), 6u);
}

TEST(Series, Derivations) {
  std::vector<DatasetRow> rows{row("https://b\xC3\xA9.es/", Technique::kSearching, true, true)};
  EXPECT_EQ(build_series(rows, Variable::kUrlLength, Technique::kSearching).values,
            (std::vector<double>{14}));
  EXPECT_EQ(build_series(rows, Variable::kSizeKb, Technique::kSearching).values,
            (std::vector<double>{2}));
  EXPECT_EQ(build_series(rows, Variable::kImgSizeKb, Technique::kSearching).values,
            (std::vector<double>{4}));
  EXPECT_EQ(build_series(rows, Variable::kImgHeight, Technique::kSearching).values,
            (std::vector<double>{744}));
}

TEST(Distribution, OnePerCategory) {
  std::vector<DatasetRow> rows;
  for (int c = 1; c <= 6; ++c) rows.push_back(row("https://x/", Technique::kBrowsing, true, false, c));
  auto d = categorical_distribution(rows, Field::kCategory);
  ASSERT_EQ(d.size(), 6u);
  for (const auto& lc : d) {
    EXPECT_EQ(lc.count, 1u);
    EXPECT_NEAR(lc.percent, 16.67, 0.005);
  }
}

TEST(Distribution, SortedAndSparse) {
  std::vector<DatasetRow> rows;
  for (int i = 0; i < 3182; ++i) rows.push_back(row("u", Technique::kBrowsing, false, true));
  for (int i = 0; i < 1000; ++i) {
    rows.push_back(row("u", Technique::kSearching, false, true, 2, Continent::kAsia));
  }
  auto tech = categorical_distribution(rows, Field::kTechnique);
  ASSERT_EQ(tech.size(), 2u);
  EXPECT_EQ(tech[0].level, "Browsing");
  EXPECT_EQ(tech[0].count, 3182u);
  auto cont = categorical_distribution(rows, Field::kContinent);
  ASSERT_EQ(cont.size(), 2u);  // levels without rows are absent
  EXPECT_EQ(cont[0].level, "Europe");
  EXPECT_EQ(cont[1].level, "Asia");
}

TEST(Reports, FilesWritten) {
  fs::path out = fs::temp_directory_path() / ("webcorpus_stats_" + std::to_string(::getpid()));
  fs::remove_all(out);
  std::vector<DatasetRow> rows;
  for (int i = 0; i < 7; ++i) {
    rows.push_back(row("https://ok" + std::string(i, 'x') + ".es/", Technique::kBrowsing, true,
                       true, 1 + i % 6));
  }
  rows.push_back(row("https://bad.es/", Technique::kBrowsing, false, false));
  write_reports(rows, out);
  for (const char* f : {"indicators.csv", "categories.csv", "continents.csv",
                        "hist_url_length_Browsing.csv", "hist_img_height_Browsing.csv"}) {
    EXPECT_TRUE(fs::exists(out / f)) << f;
  }
  EXPECT_FALSE(fs::exists(out / "hist_url_length_Searching.csv"));
  CsvTable ind = read_csv_file(out / "indicators.csv");
  ASSERT_EQ(ind.rows.size(), 12u);
  for (const auto& r : ind.rows) EXPECT_EQ(r[ind.require_column("n_raw")], "7");
  fs::remove_all(out);
}

}  // namespace
}  // namespace webcorpus
