#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "webcorpus/collector/taxonomy.hpp"
#include "webcorpus/webshot/naming.hpp"

namespace webcorpus {

inline constexpr std::string_view kDatasheetFile = "datasheet.csv";

// --- split ------------------------------------------------------------------

struct SplitSpec {
  double ratio_train = 0.8;
  std::uint64_t seed = 1337;
};

struct ClassSplit {
  std::vector<std::string> train;
  std::vector<std::string> val;
};

using SplitPlan = std::map<std::string, ClassSplit>;

// floor(ratio * n), robust to products like 0.29 * 100 landing just below an
// integer.
std::size_t train_count(double ratio, std::size_t n);

// Per class: sort the names, run a Fisher-Yates shuffle driven by a fresh
// mt19937_64(seed) with j = rng() % (i + 1), then put the first train_count
// names in train and the rest in val. Throws Error(kEmptyClass) for a class
// without files and Error(kInvalidArgument) for a ratio outside (0, 1).
SplitPlan plan_split(const std::map<std::string, std::vector<std::string>>& class_files,
                     const SplitSpec& spec);

enum class SplitMode { kCopy, kMove };

// Every subdirectory of `in_root` is a class; its regular files are the items.
// Hidden entries are skipped. Files land in <out_root>/{train,val}/<class>/.
SplitPlan split_directory(const std::filesystem::path& in_root,
                          const std::filesystem::path& out_root, const SplitSpec& spec,
                          SplitMode mode = SplitMode::kCopy);

// --- census, verify, summarize ------------------------------------------

struct StoredWebshot {
  std::filesystem::path path;
  std::string folder;  // category label the file sits under
  std::optional<WebshotName> name;
  std::int64_t bytes = 0;
};

// The .jpg files directly inside <root>/<CategoryLabel>/ for the six labels,
// sorted by path.
std::vector<StoredWebshot> census(const std::filesystem::path& root);

struct VerifyReport {
  std::size_t rows = 0;
  std::size_t files = 0;
  std::vector<std::string> orphan_files;         // on disk, not in the sheet
  std::vector<std::string> orphan_rows;          // in the sheet, no file (or no name)
  std::vector<std::string> duplicate_names;
  std::vector<std::string> sentinel_violations;  // partially sentineled rows
  std::vector<std::string> size_mismatches;      // img_bytes differs from the file
  std::vector<std::string> misplaced;            // file under the wrong category folder

  std::size_t problems() const;
  bool clean() const { return problems() == 0; }
  std::string describe() const;
};

// Cross-checks <root>/datasheet.csv against the census. Report only; a missing
// sheet counts as empty.
VerifyReport verify(const std::filesystem::path& root);

struct Tally {
  std::size_t files = 0;
  std::int64_t bytes = 0;

  Tally& operator+=(const Tally& o) {
    files += o.files;
    bytes += o.bytes;
    return *this;
  }
};

struct DatasetSummary {
  // [category_id - 1][technique]
  std::array<std::array<Tally, 2>, 6> cells{};

  Tally category_total(int category_id) const;
  Tally technique_total(Technique t) const;
  Tally total() const;
  // Pipe-separated table: one line per category, then totals, e.g.
  // "Education | 2 (200 KB) | 0 (0 B) | 2".
  std::string format() const;
};

// Files whose names do not parse are left out.
DatasetSummary summarize(const std::filesystem::path& root);

// Binary units (1 KB = 1024 bytes), at most two decimals: "200 KB", "2.58 GB".
std::string format_size(std::int64_t bytes);

}  // namespace webcorpus
