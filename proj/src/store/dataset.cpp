#include "webcorpus/store/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include <spdlog/spdlog.h>

#include "webcorpus/error.hpp"
#include "webcorpus/store/datasheet.hpp"
#include "webcorpus/text.hpp"

namespace fs = std::filesystem;

namespace webcorpus {

std::size_t train_count(double ratio, std::size_t n) {
  return static_cast<std::size_t>(std::floor(ratio * static_cast<double>(n) + 1e-9));
}

SplitPlan plan_split(const std::map<std::string, std::vector<std::string>>& class_files,
                     const SplitSpec& spec) {
  if (!(spec.ratio_train > 0 && spec.ratio_train < 1)) {
    throw Error(ErrorCode::kInvalidArgument, "train ratio must be in (0, 1)");
  }
  SplitPlan plan;
  for (const auto& [label, files] : class_files) {
    if (files.empty()) throw Error(ErrorCode::kEmptyClass, "class '" + label + "' has no files");
    std::vector<std::string> order = files;
    std::sort(order.begin(), order.end());
    std::mt19937_64 rng(spec.seed);
    for (std::size_t i = order.size() - 1; i > 0; --i) {
      std::swap(order[i], order[rng() % (i + 1)]);
    }
    std::size_t cut = train_count(spec.ratio_train, order.size());
    ClassSplit& out = plan[label];
    out.train.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(cut));
    out.val.assign(order.begin() + static_cast<std::ptrdiff_t>(cut), order.end());
  }
  return plan;
}

SplitPlan split_directory(const fs::path& in_root, const fs::path& out_root,
                          const SplitSpec& spec, SplitMode mode) {
  if (!fs::is_directory(in_root)) {
    throw Error(ErrorCode::kIo, "not a directory: " + in_root.string());
  }
  std::map<std::string, std::vector<std::string>> classes;
  for (const auto& entry : fs::directory_iterator(in_root)) {
    std::string label = entry.path().filename().string();
    if (!entry.is_directory() || label.starts_with('.')) continue;
    if (fs::weakly_canonical(entry.path()) == fs::weakly_canonical(out_root)) continue;
    auto& files = classes[label];
    for (const auto& f : fs::directory_iterator(entry.path())) {
      std::string file = f.path().filename().string();
      if (f.is_regular_file() && !file.starts_with('.')) files.push_back(file);
    }
  }
  if (classes.empty()) {
    throw Error(ErrorCode::kEmptyClass, "no class folders under " + in_root.string());
  }
  SplitPlan plan = plan_split(classes, spec);

  auto place = [&](const std::string& label, const std::vector<std::string>& files,
                   const char* subset) {
    fs::path dir = out_root / subset / label;
    fs::create_directories(dir);
    for (const auto& file : files) {
      fs::path from = in_root / label / file;
      fs::path to = dir / file;
      if (mode == SplitMode::kMove) {
        fs::rename(from, to);
      } else {
        fs::copy_file(from, to, fs::copy_options::overwrite_existing);
      }
    }
  };
  for (const auto& [label, split] : plan) {
    place(label, split.train, "train");
    place(label, split.val, "val");
    spdlog::info("split {}: {} train, {} val", label, split.train.size(), split.val.size());
  }
  return plan;
}

std::vector<StoredWebshot> census(const fs::path& root) {
  std::vector<StoredWebshot> out;
  std::error_code ec;
  for (const auto& cat : categories()) {
    fs::path dir = root / std::string(cat.label);
    if (!fs::is_directory(dir, ec)) continue;
    for (const auto& entry : fs::directory_iterator(dir, ec)) {
      if (!entry.is_regular_file(ec) || entry.path().extension() != ".jpg") continue;
      StoredWebshot s;
      s.path = entry.path();
      s.folder = std::string(cat.label);
      s.name = parse_name(entry.path().filename().string());
      s.bytes = static_cast<std::int64_t>(entry.file_size(ec));
      out.push_back(std::move(s));
    }
  }
  std::sort(out.begin(), out.end(),
            [](const StoredWebshot& a, const StoredWebshot& b) { return a.path < b.path; });
  return out;
}

std::size_t VerifyReport::problems() const {
  return orphan_files.size() + orphan_rows.size() + duplicate_names.size() +
         sentinel_violations.size() + size_mismatches.size() + misplaced.size();
}

std::string VerifyReport::describe() const {
  std::string out = std::to_string(rows) + " rows, " + std::to_string(files) + " files, " +
                    std::to_string(problems()) + " problems\n";
  auto section = [&](const char* title, const std::vector<std::string>& items) {
    for (const auto& item : items) out += std::string(title) + ": " + item + "\n";
  };
  section("orphan-file", orphan_files);
  section("orphan-row", orphan_rows);
  section("duplicate-name", duplicate_names);
  section("sentinel-violation", sentinel_violations);
  section("size-mismatch", size_mismatches);
  section("misplaced", misplaced);
  return out;
}

VerifyReport verify(const fs::path& root) {
  VerifyReport report;
  std::vector<DatasetRow> rows = read_datasheet(root / kDatasheetFile);
  std::vector<StoredWebshot> files = census(root);
  report.rows = rows.size();
  report.files = files.size();

  std::map<std::string, const StoredWebshot*> on_disk;
  for (const auto& f : files) {
    std::string file = f.path.filename().string();
    on_disk.emplace(file, &f);
    if (f.name && std::string(category(f.name->category_id).label) != f.folder) {
      report.misplaced.push_back(f.folder + "/" + file);
    }
  }

  std::set<std::string> seen;
  std::size_t line = 1;
  for (const auto& row : rows) {
    ++line;
    std::string where = row.name.empty() ? "row " + std::to_string(line) + " " + row.record.url
                                         : row.name;
    if (!row.metrics.is_consistent()) report.sentinel_violations.push_back(where);
    if (row.name.empty()) {
      report.orphan_rows.push_back(where);
      continue;
    }
    if (!seen.insert(row.name).second) {
      report.duplicate_names.push_back(row.name);
      continue;
    }
    auto it = on_disk.find(row.name);
    if (it == on_disk.end() || !row.webshot) {
      report.orphan_rows.push_back(row.name);
      continue;
    }
    if (row.webshot->img_bytes != it->second->bytes) {
      report.size_mismatches.push_back(row.name + " (sheet " +
                                       std::to_string(row.webshot->img_bytes) + ", file " +
                                       std::to_string(it->second->bytes) + ")");
    }
  }
  for (const auto& f : files) {
    std::string file = f.path.filename().string();
    if (!seen.count(file)) report.orphan_files.push_back(f.folder + "/" + file);
  }
  return report;
}

Tally DatasetSummary::category_total(int category_id) const {
  Tally t = cells.at(static_cast<std::size_t>(category_id - 1))[0];
  t += cells.at(static_cast<std::size_t>(category_id - 1))[1];
  return t;
}

Tally DatasetSummary::technique_total(Technique technique) const {
  Tally t;
  for (const auto& row : cells) t += row[static_cast<std::size_t>(technique)];
  return t;
}

Tally DatasetSummary::total() const {
  Tally t = technique_total(Technique::kBrowsing);
  t += technique_total(Technique::kSearching);
  return t;
}

std::string DatasetSummary::format() const {
  auto cell = [](const Tally& t) {
    return std::to_string(t.files) + " (" + format_size(t.bytes) + ")";
  };
  std::string out = "Category | Browsing | Searching | Total\n";
  for (const auto& cat : categories()) {
    const auto& row = cells[static_cast<std::size_t>(cat.id - 1)];
    out += std::string(cat.title) + " | " + cell(row[0]) + " | " + cell(row[1]) + " | " +
           std::to_string(category_total(cat.id).files) + "\n";
  }
  out += "Total | " + cell(technique_total(Technique::kBrowsing)) + " | " +
         cell(technique_total(Technique::kSearching)) + " | " + std::to_string(total().files) +
         "\n";
  return out;
}

DatasetSummary summarize(const fs::path& root) {
  DatasetSummary summary;
  for (const auto& f : census(root)) {
    if (!f.name) continue;
    Tally& t = summary.cells[static_cast<std::size_t>(f.name->category_id - 1)]
                            [static_cast<std::size_t>(f.name->technique)];
    t += Tally{1, f.bytes};
  }
  return summary;
}

std::string format_size(std::int64_t bytes) {
  static const char* units[] = {"B", "KB", "MB", "GB", "TB"};
  double v = static_cast<double>(bytes);
  std::size_t u = 0;
  while (v >= 1024 && u + 1 < std::size(units)) {
    v /= 1024;
    ++u;
  }
  return format_trimmed(v, 2) + " " + units[u];
}

}  // namespace webcorpus
