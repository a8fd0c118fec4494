#include "webcorpus/curator/curator.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>

#include <spdlog/spdlog.h>

#include "webcorpus/collector/taxonomy.hpp"
#include "webcorpus/error.hpp"
#include "webcorpus/text.hpp"
#include "webcorpus/webshot/naming.hpp"

namespace fs = std::filesystem;

namespace webcorpus {

std::string_view to_string(PageClass c) { return c == PageClass::kError ? "Error" : "Valid"; }

std::optional<PageClass> parse_page_class(std::string_view s) {
  s = trim(s);
  if (iequals(s, "error")) return PageClass::kError;
  if (iequals(s, "valid")) return PageClass::kValid;
  return std::nullopt;
}

std::vector<Prediction> parse_predictions(const CsvTable& table) {
  std::size_t name_col = table.require_column("name");
  std::size_t score_col = table.require_column("score");
  std::vector<Prediction> out;
  std::set<std::string> seen;
  std::size_t line = 1;
  for (const auto& row : table.rows) {
    ++line;
    auto fail = [&](const std::string& what) {
      return Error(ErrorCode::kParse, "predictions line " + std::to_string(line) + ": " + what);
    };
    Prediction p;
    p.name = std::string(trim(row[name_col]));
    if (p.name.empty()) throw fail("blank name");
    if (!seen.insert(p.name).second) throw fail("repeated name " + p.name);
    std::string_view s = trim(row[score_col]);
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), p.score);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
      throw fail("score '" + std::string(s) + "' is not a number");
    }
    if (!(p.score >= 0 && p.score <= 1)) {
      throw fail("score " + std::string(s) + " outside [0, 1]");
    }
    out.push_back(std::move(p));
  }
  return out;
}

std::vector<Prediction> read_predictions(const fs::path& path) {
  return parse_predictions(read_csv_file(path));
}

std::string format_predictions(std::span<const Prediction> predictions) {
  std::string out = "name,score\n";
  char buf[64];
  for (const auto& p : predictions) {
    std::snprintf(buf, sizeof buf, "%.9g", p.score);
    out += csv_line({p.name, buf});
  }
  return out;
}

std::map<std::string, std::string> parse_truth(const CsvTable& table) {
  std::size_t name_col = table.require_column("name");
  std::size_t label_col = table.require_column("label");
  std::map<std::string, std::string> out;
  std::size_t line = 1;
  for (const auto& row : table.rows) {
    ++line;
    std::string name(trim(row[name_col]));
    if (name.empty()) {
      throw Error(ErrorCode::kParse, "truth line " + std::to_string(line) + ": blank name");
    }
    out[name] = std::string(trim(row[label_col]));
  }
  return out;
}

std::map<std::string, std::string> read_truth(const fs::path& path) {
  return parse_truth(read_csv_file(path));
}

namespace {

// Journal lines: "move\t<from>\t<to>" before a rename, "done\t<to>" after.
struct Journal {
  fs::path path;
  std::ofstream out;

  explicit Journal(fs::path p) : path(std::move(p)) {}

  void record(const std::string& line) {
    if (!out.is_open()) {
      out.open(path, std::ios::binary | std::ios::app);
      if (!out) throw Error(ErrorCode::kIo, "cannot open journal " + path.string());
    }
    out << line << '\n';
    out.flush();
  }
};

// Finishes moves a previous run started but did not mark done.
void replay_journal(const fs::path& path) {
  std::error_code ec;
  if (!fs::exists(path, ec)) return;
  std::map<std::string, std::string> pending;  // to -> from
  for (const auto& line : split(read_file(path), '\n')) {
    auto parts = split(line, '\t');
    if (parts.size() == 3 && parts[0] == "move") pending[parts[2]] = parts[1];
    if (parts.size() == 2 && parts[0] == "done") pending.erase(parts[1]);
  }
  for (const auto& [to, from] : pending) {
    if (!fs::exists(to, ec) && fs::exists(from, ec)) {
      fs::rename(from, to);
      spdlog::info("quarantine: finished interrupted move {} -> {}", from, to);
    }
  }
  // Every recorded move is now settled.
  fs::remove(path, ec);
}

}  // namespace

QuarantineReport quarantine(std::span<const Prediction> predictions, const fs::path& image_root,
                            const fs::path& error_dir) {
  if (!fs::is_directory(error_dir)) {
    throw Error(ErrorCode::kIo, "error dir does not exist: " + error_dir.string());
  }
  fs::path journal_path = error_dir / kJournalFile;
  replay_journal(journal_path);
  Journal journal(journal_path);

  QuarantineReport report;
  std::error_code ec;
  for (const auto& p : predictions) {
    if (p.predicted() == PageClass::kValid) {
      ++report.kept;
      continue;
    }
    fs::path to = error_dir / p.name;
    fs::path from = image_root / p.name;
    if (!fs::is_regular_file(from, ec)) {
      if (auto parsed = parse_name(p.name)) {
        from = image_root / std::string(category(parsed->category_id).label) / p.name;
      }
    }
    bool source = fs::is_regular_file(from, ec);
    if (!source) {
      if (fs::is_regular_file(to, ec)) {
        ++report.already;
      } else {
        spdlog::warn("quarantine: MissingFile {}", p.name);
        report.missing.push_back(p.name);
      }
      continue;
    }
    if (fs::exists(to, ec)) {
      spdlog::warn("quarantine: {} already present in {}, leaving source in place", p.name,
                   error_dir.string());
      ++report.already;
      continue;
    }
    journal.record("move\t" + from.string() + "\t" + to.string());
    fs::rename(from, to);
    journal.record("done\t" + to.string());
    spdlog::info("quarantine: {} -> {} (score {})", from.string(), to.string(), p.score);
    ++report.moved;
  }
  return report;
}

ConfusionMatrix::ConfusionMatrix(std::vector<std::string> labels)
    : labels_(std::move(labels)),
      counts_(labels_.size(), std::vector<std::int64_t>(labels_.size(), 0)) {}

ConfusionMatrix::ConfusionMatrix(std::vector<std::string> labels,
                                 std::vector<std::vector<std::int64_t>> counts)
    : labels_(std::move(labels)), counts_(std::move(counts)) {
  if (counts_.size() != labels_.size()) {
    throw Error(ErrorCode::kInvalidArgument, "matrix rows do not match the labels");
  }
  for (const auto& row : counts_) {
    if (row.size() != labels_.size()) {
      throw Error(ErrorCode::kInvalidArgument, "matrix is not square");
    }
    for (auto v : row) {
      if (v < 0) throw Error(ErrorCode::kInvalidArgument, "negative matrix count");
    }
  }
}

ConfusionMatrix ConfusionMatrix::binary(std::int64_t ee, std::int64_t ev, std::int64_t ve,
                                        std::int64_t vv) {
  return ConfusionMatrix({"Error", "Valid"}, {{ee, ev}, {ve, vv}});
}

std::int64_t ConfusionMatrix::at(std::size_t real, std::size_t predicted) const {
  return counts_.at(real).at(predicted);
}

void ConfusionMatrix::add(std::size_t real, std::size_t predicted, std::int64_t n) {
  counts_.at(real).at(predicted) += n;
}

std::int64_t ConfusionMatrix::total() const {
  std::int64_t t = 0;
  for (const auto& row : counts_) {
    for (auto v : row) t += v;
  }
  return t;
}

std::int64_t ConfusionMatrix::trace() const {
  std::int64_t t = 0;
  for (std::size_t i = 0; i < counts_.size(); ++i) t += counts_[i][i];
  return t;
}

ConfusionMatrix confusion(const std::map<std::string, std::string>& truth,
                          std::span<const Prediction> predictions) {
  ConfusionMatrix m({"Error", "Valid"});
  std::vector<std::string> unlabeled;
  for (const auto& p : predictions) {
    auto it = truth.find(p.name);
    if (it == truth.end()) {
      unlabeled.push_back(p.name);
      continue;
    }
    auto real = parse_page_class(it->second);
    if (!real) {
      throw Error(ErrorCode::kParse, "truth label '" + it->second + "' for " + p.name +
                                         " is neither Error nor Valid");
    }
    m.add(static_cast<std::size_t>(*real), static_cast<std::size_t>(p.predicted()));
  }
  if (!unlabeled.empty()) {
    std::string list;
    for (std::size_t i = 0; i < unlabeled.size() && i < 10; ++i) {
      list += (i ? ", " : "") + unlabeled[i];
    }
    if (unlabeled.size() > 10) list += ", ...";
    throw Error(ErrorCode::kUnlabeledName,
                std::to_string(unlabeled.size()) + " predictions without truth: " + list);
  }
  return m;
}

double accuracy(const ConfusionMatrix& m) {
  std::int64_t total = m.total();
  if (total <= 0) throw Error(ErrorCode::kEmptyMatrix, "confusion matrix is empty");
  return 100.0 * static_cast<double>(m.trace()) / static_cast<double>(total);
}

std::string format_percent(double percent) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", percent);
  return buf;
}

std::string format_matrix(const ConfusionMatrix& m) {
  std::string out = csv_line(m.labels());
  for (const auto& row : m.counts()) {
    CsvRecord fields;
    for (auto v : row) fields.push_back(std::to_string(v));
    out += csv_line(fields);
  }
  return out;
}

ConfusionMatrix parse_matrix(std::string_view csv) {
  auto records = parse_csv(csv);
  if (records.empty()) throw Error(ErrorCode::kParse, "matrix CSV is empty");
  std::vector<std::string> labels;
  for (const auto& l : records[0]) labels.emplace_back(trim(l));
  if (records.size() != labels.size() + 1) {
    throw Error(ErrorCode::kParse, "matrix CSV needs one row per label");
  }
  std::vector<std::vector<std::int64_t>> counts;
  for (std::size_t i = 1; i < records.size(); ++i) {
    if (records[i].size() != labels.size()) {
      throw Error(ErrorCode::kParse, "matrix row " + std::to_string(i) + " has the wrong width");
    }
    auto& row = counts.emplace_back();
    for (const auto& cell : records[i]) {
      std::string_view s = trim(cell);
      std::int64_t v = 0;
      auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
      if (ec != std::errc() || ptr != s.data() + s.size() || v < 0) {
        throw Error(ErrorCode::kParse, "matrix cell '" + std::string(s) + "' is not a count");
      }
      row.push_back(v);
    }
  }
  return ConfusionMatrix(std::move(labels), std::move(counts));
}

}  // namespace webcorpus
