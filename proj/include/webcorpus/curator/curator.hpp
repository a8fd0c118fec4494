#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "webcorpus/csv.hpp"

namespace webcorpus {

// Binary label order follows the published matrices: Error first, Valid second.
enum class PageClass { kError = 0, kValid = 1 };

std::string_view to_string(PageClass c);
// "Error"/"Valid" in any case.
std::optional<PageClass> parse_page_class(std::string_view s);

inline constexpr double kValidThreshold = 0.5;

// Valid iff score > 0.5; exactly 0.5 is Error.
inline PageClass classify(double score) {
  return score > kValidThreshold ? PageClass::kValid : PageClass::kError;
}

struct Prediction {
  std::string name;
  double score = 0;

  PageClass predicted() const { return classify(score); }
};

// Predictions interchange: CSV `name,score`, one row per image. Scores outside
// [0, 1], blank or repeated names raise Error(kParse) with the line number.
std::vector<Prediction> parse_predictions(const CsvTable& table);
std::vector<Prediction> read_predictions(const std::filesystem::path& path);
std::string format_predictions(std::span<const Prediction> predictions);

// Ground truth: CSV `name,label`.
std::map<std::string, std::string> read_truth(const std::filesystem::path& path);
std::map<std::string, std::string> parse_truth(const CsvTable& table);

struct QuarantineReport {
  std::size_t moved = 0;
  std::size_t already = 0;  // predicted Error and already in the error dir
  std::size_t kept = 0;     // predicted Valid
  std::vector<std::string> missing;
};

inline constexpr std::string_view kJournalFile = ".quarantine.journal";

// Moves every image predicted Error into `error_dir`. An image is looked up as
// <image_root>/<name>, then <image_root>/<CategoryLabel>/<name>. Each move is
// journaled in <error_dir>/.quarantine.journal before the rename and marked
// done after it, so an interrupted run finishes on the next call. Missing
// files are logged and skipped. Throws Error(kIo) if `error_dir` is not a
// directory.
QuarantineReport quarantine(std::span<const Prediction> predictions,
                            const std::filesystem::path& image_root,
                            const std::filesystem::path& error_dir);

// Rows are the real class, columns the predicted class.
class ConfusionMatrix {
 public:
  explicit ConfusionMatrix(std::vector<std::string> labels);
  ConfusionMatrix(std::vector<std::string> labels, std::vector<std::vector<std::int64_t>> counts);
  // Error/Valid layout: [[ee, ev], [ve, vv]].
  static ConfusionMatrix binary(std::int64_t ee, std::int64_t ev, std::int64_t ve,
                                std::int64_t vv);

  const std::vector<std::string>& labels() const { return labels_; }
  std::size_t size() const { return labels_.size(); }
  std::int64_t at(std::size_t real, std::size_t predicted) const;
  void add(std::size_t real, std::size_t predicted, std::int64_t n = 1);
  std::int64_t total() const;
  std::int64_t trace() const;
  const std::vector<std::vector<std::int64_t>>& counts() const { return counts_; }

  bool operator==(const ConfusionMatrix&) const = default;

 private:
  std::vector<std::string> labels_;
  std::vector<std::vector<std::int64_t>> counts_;
};

// Binary matrix from truth labels (Error/Valid) and predictions. Throws
// Error(kUnlabeledName) listing predictions without a truth entry, and
// Error(kParse) for a truth label that is neither Error nor Valid.
ConfusionMatrix confusion(const std::map<std::string, std::string>& truth,
                          std::span<const Prediction> predictions);

// trace / total as a percentage. Throws Error(kEmptyMatrix) when total is 0.
double accuracy(const ConfusionMatrix& m);
// Two decimals: 94.678... -> "94.68".
std::string format_percent(double percent);

// Header row of class labels, then one row of counts per real class.
std::string format_matrix(const ConfusionMatrix& m);
ConfusionMatrix parse_matrix(std::string_view csv);

}  // namespace webcorpus
