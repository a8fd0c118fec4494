#include "webcorpus/cli/cli.hpp"

#include <charconv>
#include <cmath>
#include <iostream>
#include <set>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "webcorpus/collector/collector.hpp"
#include "webcorpus/curator/curator.hpp"
#include "webcorpus/error.hpp"
#include "webcorpus/fetcher/fetcher.hpp"
#include "webcorpus/stats/stats.hpp"
#include "webcorpus/store/datasheet.hpp"
#include "webcorpus/store/dataset.hpp"
#include "webcorpus/text.hpp"
#include "webcorpus/webshot/batch.hpp"

namespace fs = std::filesystem;

namespace webcorpus {

std::chrono::milliseconds parse_duration(std::string_view text) {
  std::string_view s = trim(text);
  double value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  std::string_view unit(ptr, static_cast<std::size_t>(s.data() + s.size() - ptr));
  double ms = 0;
  if (ec != std::errc() || !(value >= 0)) {
    throw Error(ErrorCode::kInvalidArgument, "bad duration '" + std::string(text) + "'");
  } else if (unit.empty() || unit == "s") {
    ms = value * 1000;
  } else if (unit == "ms") {
    ms = value;
  } else if (unit == "m" || unit == "min") {
    ms = value * 60000;
  } else {
    throw Error(ErrorCode::kInvalidArgument, "bad duration unit in '" + std::string(text) + "'");
  }
  return std::chrono::milliseconds(static_cast<long long>(std::llround(ms)));
}

namespace {

Viewport parse_viewport(const std::string& text) {
  auto parts = split(to_lower(text), 'x');
  Viewport vp;
  if (parts.size() != 2 || std::from_chars(parts[0].data(), parts[0].data() + parts[0].size(),
                                            vp.width).ec != std::errc() ||
      std::from_chars(parts[1].data(), parts[1].data() + parts[1].size(), vp.height).ec !=
          std::errc() ||
      vp.width < 1 || vp.height < 1) {
    throw Error(ErrorCode::kInvalidArgument, "viewport must look like 992x744, got " + text);
  }
  return vp;
}

Technique require_technique(const std::string& text) {
  auto t = parse_technique(text);
  if (!t) throw Error(ErrorCode::kInvalidArgument, "unknown technique '" + text + "'");
  return *t;
}

void configure_logging(bool verbose, bool quiet) {
  static bool installed = false;
  if (!installed) {
    spdlog::set_default_logger(spdlog::stderr_color_mt("webcorpus"));
    spdlog::set_pattern("[%H:%M:%S.%e] [%^%l%$] %v");
    installed = true;
  }
  spdlog::set_level(quiet ? spdlog::level::err
                          : verbose ? spdlog::level::debug : spdlog::level::info);
}

struct CollectArgs {
  std::string countries;
  std::string technique = "Searching";
  std::vector<int> categories;
  std::string out = "urls.csv";
  std::string backend = "fixture";
  std::string fixtures;
  int limit = 100;
  int max_in_flight = 1;
  std::string search_template;
  std::string timeout = "30s";
};

int run_collect(const CollectArgs& a, std::ostream& out) {
  std::vector<Country> countries = read_countries_file(a.countries);
  std::vector<int> ids = a.categories;
  if (ids.empty()) {
    for (const auto& c : categories()) ids.push_back(c.id);
  }
  std::unique_ptr<ResultsBackend> backend;
  if (a.backend == "fixture") {
    if (a.fixtures.empty()) {
      throw Error(ErrorCode::kInvalidArgument, "--fixtures is required with --backend fixture");
    }
    backend = std::make_unique<FixtureBackend>(a.fixtures);
  } else {
    LiveBackendOptions live;
    if (!a.search_template.empty()) live.search_template = a.search_template;
    live.timeout = parse_duration(a.timeout);
    backend = std::make_unique<LiveBackend>(live);
  }
  CollectOptions options;
  options.limit = a.limit;
  options.max_in_flight = a.max_in_flight;
  CollectResult result =
      collect(countries, ids, require_technique(a.technique), *backend, options);
  append_url_list(a.out, result.records);
  out << "collected " << result.records.size() << " urls into " << a.out << ", "
      << result.failures.size() << " failed pairs\n";
  for (const auto& f : result.failures) {
    out << "  failed: " << f.country << " / " << category(f.category_id).label << ": "
        << f.message << "\n";
  }
  return result.records.empty() && !result.failures.empty() ? 1 : 0;
}

struct FetchArgs {
  std::string in;
  std::string out = "datasheet.csv";
  std::string timeout = "30s";
  int workers = 8;
  std::string user_agent;
};

int run_fetch(const FetchArgs& a, std::ostream& out) {
  std::vector<UrlRecord> records = read_url_list(a.in);
  FetchOptions options;
  options.timeout = parse_duration(a.timeout);
  options.user_agent = a.user_agent;
  std::vector<PageMetrics> metrics = measure_all(records, options, a.workers);
  std::vector<DatasetRow> rows;
  std::size_t failed = 0;
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (metrics[i].is_sentinel()) ++failed;
    rows.push_back(make_row(records[i], metrics[i]));
  }
  append_rows(a.out, rows);
  out << "fetched " << records.size() << " urls into " << a.out << ": "
      << records.size() - failed << " complete, " << failed << " sentineled\n";
  return 0;
}

struct ShootArgs {
  std::string in;
  std::string out_dir;
  std::string datasheet;
  std::string webdriver = "http://127.0.0.1:4444";
  std::string viewport = "992x744";
  std::string timeout = "60s";
  int sessions = 2;
  int max_height = 50000;
  int quality = 90;
};

int run_shoot(const ShootArgs& a, std::ostream& out) {
  std::vector<DatasetRow> input = parse_datasheet(read_csv_file(a.in));
  fs::path sheet = a.datasheet.empty() ? fs::path(a.out_dir) / kDatasheetFile : fs::path(a.datasheet);
  CaptureOptions options;
  options.viewport = parse_viewport(a.viewport);
  options.timeout = parse_duration(a.timeout);
  options.max_height = a.max_height;
  options.jpeg_quality = a.quality;

  std::vector<UrlRecord> records;
  std::size_t unmeasured = 0;
  for (const auto& row : input) {
    records.push_back(row.record);
    if (row.metrics.is_sentinel()) ++unmeasured;
  }
  if (unmeasured) {
    spdlog::warn("shoot: {} of {} input rows carry no page metrics", unmeasured, input.size());
  }

  SequenceBook seqs = scan_sequences(a.out_dir);
  for (const auto& row : read_datasheet(sheet)) {
    if (auto name = parse_name(row.name)) seqs.observe(*name);
  }
  fs::create_directories(a.out_dir);
  auto outcomes = capture_batch(
      records, a.out_dir, seqs,
      [&] { return std::make_unique<WebDriverSession>(a.webdriver, options); }, a.sessions);

  std::vector<DatasetRow> rows;
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    if (outcomes[i].meta) rows.push_back(make_row(input[i].record, input[i].metrics,
                                                  outcomes[i].meta));
  }
  append_rows(sheet, rows);
  out << "captured " << rows.size() << " of " << records.size() << " urls into " << a.out_dir
      << "\n";
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    if (outcomes[i].failure) {
      out << "  failed: " << records[i].url << ": " << to_string(outcomes[i].failure->kind)
          << " " << outcomes[i].failure->message << "\n";
    }
  }
  return 0;
}

struct SplitArgs {
  std::string in;
  std::string out;
  double ratio = 0.8;
  std::uint64_t seed = 1337;
  bool move = false;
};

int run_split(const SplitArgs& a, std::ostream& out) {
  SplitPlan plan = split_directory(a.in, a.out, {a.ratio, a.seed},
                                   a.move ? SplitMode::kMove : SplitMode::kCopy);
  std::size_t train = 0, val = 0;
  for (const auto& [label, s] : plan) {
    out << label << " | " << s.train.size() << " | " << s.val.size() << "\n";
    train += s.train.size();
    val += s.val.size();
  }
  out << "Total | " << train << " | " << val << "\n";
  return 0;
}

int run_curate(const std::string& preds, const std::string& root, const std::string& error_dir,
               std::ostream& out) {
  std::vector<Prediction> predictions = read_predictions(preds);
  fs::create_directories(error_dir);
  QuarantineReport r = quarantine(predictions, root, error_dir);
  out << "moved " << r.moved << ", already quarantined " << r.already << ", kept " << r.kept
      << ", missing " << r.missing.size() << "\n";
  for (const auto& m : r.missing) out << "  MissingFile: " << m << "\n";
  return 0;
}

int run_evaluate(const std::string& truth, const std::string& preds, const std::string& matrix,
                 std::ostream& out) {
  ConfusionMatrix m = confusion(read_truth(truth), read_predictions(preds));
  if (!matrix.empty()) write_file_atomic(matrix, format_matrix(m));
  out << "real\\predicted | Error | Valid\n"
      << "Error | " << m.at(0, 0) << " | " << m.at(0, 1) << "\n"
      << "Valid | " << m.at(1, 0) << " | " << m.at(1, 1) << "\n"
      << "accuracy " << format_percent(accuracy(m)) << "%\n";
  return 0;
}

int run_stats(const std::string& datasheet, const std::string& out_dir, int bins,
              std::ostream& out) {
  std::vector<DatasetRow> rows = read_datasheet(datasheet);
  if (rows.empty()) throw Error(ErrorCode::kEmptyInput, "datasheet has no rows: " + datasheet);
  StatsOptions options;
  options.bins = bins;
  auto written = write_reports(rows, out_dir, options);
  for (Technique t : {Technique::kBrowsing, Technique::kSearching}) {
    bool header = false;
    for (Variable v : all_variables()) {
      VariableSeries s = build_series(rows, v, t);
      if (s.values.empty()) continue;
      if (!header) {
        out << to_string(t) << ": Parameter | Min. | Max. | Mean | Std. Dev.\n";
        header = true;
      }
      out << format_indicator_row(label(v), summarize_variable(iqr_filter(s.values))) << "\n";
    }
  }
  out << "wrote " << written.size() << " files to " << out_dir << "\n";
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Build and analyze a corpus of web page screenshots and metrics.", "webcorpus"};
  app.require_subcommand(1);
  bool verbose = false;
  bool quiet = false;
  app.add_flag("-v,--verbose", verbose, "Debug logging");
  app.add_flag("-q,--quiet", quiet, "Only log errors");

  CollectArgs collect_args;
  auto* collect_cmd = app.add_subcommand("collect", "Gather URLs per country and category");
  collect_cmd->add_option("--countries", collect_args.countries, "Countries file (TSV)")
      ->required();
  collect_cmd->add_option("--technique", collect_args.technique, "Browsing or Searching");
  collect_cmd->add_option("--categories", collect_args.categories, "Category ids (default all)")
      ->delimiter(',')
      ->check(CLI::Range(1, 6));
  collect_cmd->add_option("--out", collect_args.out, "URL list to append to");
  collect_cmd->add_option("--backend", collect_args.backend, "fixture or live")
      ->check(CLI::IsMember({"fixture", "live"}));
  collect_cmd->add_option("--fixtures", collect_args.fixtures, "Fixture pages directory");
  collect_cmd->add_option("--limit", collect_args.limit, "Links kept per pair")
      ->check(CLI::PositiveNumber);
  collect_cmd->add_option("--max-in-flight", collect_args.max_in_flight,
                          "Pairs requested concurrently")
      ->check(CLI::PositiveNumber);
  collect_cmd->add_option("--search-template", collect_args.search_template,
                          "Live search URL with {query} and {limit}");
  collect_cmd->add_option("--timeout", collect_args.timeout, "Live request timeout");

  FetchArgs fetch_args;
  auto* fetch_cmd = app.add_subcommand("fetch", "Download pages and measure their structure");
  fetch_cmd->add_option("--in", fetch_args.in, "URL list")->required();
  fetch_cmd->add_option("--out", fetch_args.out, "Datasheet to append to");
  fetch_cmd->add_option("--timeout", fetch_args.timeout, "Per-request timeout");
  fetch_cmd->add_option("--workers", fetch_args.workers, "Concurrent fetches")
      ->check(CLI::PositiveNumber);
  fetch_cmd->add_option("--user-agent", fetch_args.user_agent, "User-Agent header");

  ShootArgs shoot_args;
  auto* shoot_cmd = app.add_subcommand("shoot", "Capture full-page webshots over WebDriver");
  shoot_cmd->add_option("--in", shoot_args.in, "URL list or fetched datasheet")->required();
  shoot_cmd->add_option("--out-dir", shoot_args.out_dir, "Dataset root")->required();
  shoot_cmd->add_option("--datasheet", shoot_args.datasheet,
                        "Datasheet to append to (default <out-dir>/datasheet.csv)");
  shoot_cmd->add_option("--webdriver", shoot_args.webdriver, "WebDriver endpoint");
  shoot_cmd->add_option("--viewport", shoot_args.viewport, "WIDTHxHEIGHT");
  shoot_cmd->add_option("--timeout", shoot_args.timeout, "Page load timeout");
  shoot_cmd->add_option("--sessions", shoot_args.sessions, "Parallel browser sessions")
      ->check(CLI::PositiveNumber);
  shoot_cmd->add_option("--max-height", shoot_args.max_height, "Image height cap in pixels")
      ->check(CLI::PositiveNumber);
  shoot_cmd->add_option("--quality", shoot_args.quality, "JPEG quality")
      ->check(CLI::Range(1, 100));

  SplitArgs split_args;
  auto* split_cmd = app.add_subcommand("split", "Split class folders into train and val");
  split_cmd->add_option("--in", split_args.in, "Folder of class folders")->required();
  split_cmd->add_option("--out", split_args.out, "Split root")->required();
  split_cmd->add_option("--ratio", split_args.ratio, "Train fraction");
  split_cmd->add_option("--seed", split_args.seed, "Shuffle seed");
  split_cmd->add_flag("--move", split_args.move, "Move files instead of copying");

  std::string root;
  auto* verify_cmd = app.add_subcommand("verify", "Cross-check the datasheet and the images");
  verify_cmd->add_option("--root", root, "Dataset root")->required()->check(CLI::ExistingDirectory);
  auto* summarize_cmd = app.add_subcommand("summarize", "Count webshots per category");
  summarize_cmd->add_option("--root", root, "Dataset root")
      ->required()
      ->check(CLI::ExistingDirectory);

  std::string predictions, error_dir, truth, matrix_out;
  auto* curate_cmd = app.add_subcommand("curate", "Quarantine webshots predicted as errors");
  curate_cmd->add_option("--predictions", predictions, "CSV name,score")->required();
  curate_cmd->add_option("--root", root, "Dataset root")->required();
  curate_cmd->add_option("--error-dir", error_dir, "Quarantine folder")->required();
  auto* evaluate_cmd = app.add_subcommand("evaluate", "Confusion matrix against ground truth");
  evaluate_cmd->add_option("--truth", truth, "CSV name,label")->required();
  evaluate_cmd->add_option("--predictions", predictions, "CSV name,score")->required();
  evaluate_cmd->add_option("--out", matrix_out, "Matrix CSV to write");

  std::string datasheet, out_dir;
  int bins = 20;
  auto* stats_cmd = app.add_subcommand("stats", "Indicators, distributions and histograms");
  stats_cmd->add_option("--datasheet", datasheet, "Datasheet CSV")->required();
  stats_cmd->add_option("--out-dir", out_dir, "Report folder")->required();
  stats_cmd->add_option("--bins", bins, "Histogram bins")->check(CLI::PositiveNumber);

  std::string key;
  auto* key_cmd = app.add_subcommand("fixture-key", "File name a fixture page is stored under");
  key_cmd->add_option("key", key, "Search query or directory URL")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? 0 : 2;
  }
  configure_logging(verbose, quiet);

  try {
    if (*collect_cmd) return run_collect(collect_args, out);
    if (*fetch_cmd) return run_fetch(fetch_args, out);
    if (*shoot_cmd) return run_shoot(shoot_args, out);
    if (*split_cmd) return run_split(split_args, out);
    if (*verify_cmd) {
      VerifyReport r = verify(root);
      out << r.describe();
      return r.clean() ? 0 : 1;
    }
    if (*summarize_cmd) {
      out << summarize(root).format();
      return 0;
    }
    if (*curate_cmd) return run_curate(predictions, root, error_dir, out);
    if (*evaluate_cmd) return run_evaluate(truth, predictions, matrix_out, out);
    if (*stats_cmd) return run_stats(datasheet, out_dir, bins, out);
    if (*key_cmd) {
      out << fixture_key(key) << ".html\n";
      return 0;
    }
  } catch (const Error& e) {
    err << "error: " << to_string(e.code()) << ": " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace webcorpus
