#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "webcorpus/collector/collector.hpp"
#include "webcorpus/csv.hpp"
#include "webcorpus/fetcher/fetcher.hpp"
#include "webcorpus/webshot/batch.hpp"

namespace webcorpus {

inline constexpr std::string_view kDatasheetHeader =
    "name,url,country,continent,category_id,technique,time_ms,bytes,images,script_files,"
    "css_files,tables,iframes,style_tags,img_bytes,img_width,img_height";

// One page of the dataset. `name` is empty until the page has a webshot; the
// img_ columns then hold -1.
struct DatasetRow {
  std::string name;
  UrlRecord record;
  PageMetrics metrics;
  std::optional<WebshotMeta> webshot;

  bool operator==(const DatasetRow&) const = default;
};

DatasetRow make_row(const UrlRecord& record, const PageMetrics& metrics,
                    const std::optional<WebshotMeta>& webshot = std::nullopt);

CsvRecord to_csv_record(const DatasetRow& row);
std::string format_datasheet(std::span<const DatasetRow> rows);  // header included

// Throws Error(kParse) on missing columns or malformed values. The metric and
// img_ columns are optional, so a plain url list also parses (as sentinel rows
// without webshots).
std::vector<DatasetRow> parse_datasheet(const CsvTable& table);
// A missing file reads as an empty sheet.
std::vector<DatasetRow> read_datasheet(const std::filesystem::path& path);

// Appends rows by rewriting the sheet to a temporary and renaming it over the
// old one. Throws Error(kDuplicateName) listing every non-empty name that
// already exists or repeats within `rows`; nothing is written then.
std::size_t append_rows(const std::filesystem::path& path, std::span<const DatasetRow> rows);

}  // namespace webcorpus
