#include "webcorpus/store/datasheet.hpp"

#include <charconv>
#include <set>

#include "webcorpus/error.hpp"
#include "webcorpus/text.hpp"

namespace fs = std::filesystem;

namespace webcorpus {

namespace {

constexpr std::string_view kMetricColumns[] = {"time_ms",   "bytes",     "images",
                                               "script_files", "css_files", "tables",
                                               "iframes",   "style_tags"};
constexpr std::string_view kImageColumns[] = {"img_bytes", "img_width", "img_height"};

std::int64_t parse_int(std::string_view s, std::size_t line, std::string_view column) {
  s = trim(s);
  std::int64_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size() || v < kSentinel) {
    throw Error(ErrorCode::kParse, "row " + std::to_string(line) + ": bad " +
                                       std::string(column) + " '" + std::string(s) + "'");
  }
  return v;
}

double parse_real(std::string_view s, std::size_t line, std::string_view column) {
  s = trim(s);
  double v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size() || !(v >= kSentinel)) {
    throw Error(ErrorCode::kParse, "row " + std::to_string(line) + ": bad " +
                                       std::string(column) + " '" + std::string(s) + "'");
  }
  return v;
}

}  // namespace

DatasetRow make_row(const UrlRecord& record, const PageMetrics& metrics,
                    const std::optional<WebshotMeta>& webshot) {
  DatasetRow row;
  row.record = record;
  row.metrics = metrics;
  row.webshot = webshot;
  if (webshot) row.name = webshot->name;
  return row;
}

CsvRecord to_csv_record(const DatasetRow& row) {
  const PageMetrics& m = row.metrics;
  const UrlRecord& r = row.record;
  CsvRecord out{row.name,
                r.url,
                r.country,
                std::string(to_string(r.continent)),
                std::to_string(r.category_id),
                std::string(to_string(r.technique)),
                format_trimmed(m.time_ms, 3),
                std::to_string(m.bytes),
                std::to_string(m.images),
                std::to_string(m.script_files),
                std::to_string(m.css_files),
                std::to_string(m.tables),
                std::to_string(m.iframes),
                std::to_string(m.style_tags)};
  if (row.webshot) {
    out.push_back(std::to_string(row.webshot->img_bytes));
    out.push_back(std::to_string(row.webshot->img_width));
    out.push_back(std::to_string(row.webshot->img_height));
  } else {
    out.insert(out.end(), 3, "-1");
  }
  return out;
}

std::string format_datasheet(std::span<const DatasetRow> rows) {
  std::string out(kDatasheetHeader);
  out += '\n';
  for (const auto& row : rows) out += csv_line(to_csv_record(row));
  return out;
}

std::vector<DatasetRow> parse_datasheet(const CsvTable& table) {
  std::vector<UrlRecord> records = url_records_from_table(table);
  auto name_col = table.column("name");
  std::vector<std::size_t> metric_cols;
  if (table.column("time_ms")) {
    for (auto c : kMetricColumns) metric_cols.push_back(table.require_column(c));
  }
  std::vector<std::size_t> image_cols;
  if (table.column("img_bytes")) {
    for (auto c : kImageColumns) image_cols.push_back(table.require_column(c));
  }

  std::vector<DatasetRow> out;
  out.reserve(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    const CsvRecord& fields = table.rows[i];
    std::size_t line = i + 2;
    DatasetRow row;
    row.record = std::move(records[i]);
    if (name_col) row.name = std::string(trim(fields[*name_col]));
    if (!metric_cols.empty()) {
      PageMetrics& m = row.metrics;
      m.time_ms = parse_real(fields[metric_cols[0]], line, kMetricColumns[0]);
      std::int64_t* ints[] = {&m.bytes,  &m.images,  &m.script_files, &m.css_files,
                              &m.tables, &m.iframes, &m.style_tags};
      for (std::size_t k = 0; k < std::size(ints); ++k) {
        *ints[k] = parse_int(fields[metric_cols[k + 1]], line, kMetricColumns[k + 1]);
      }
    }
    if (!image_cols.empty()) {
      std::int64_t bytes = parse_int(fields[image_cols[0]], line, kImageColumns[0]);
      std::int64_t width = parse_int(fields[image_cols[1]], line, kImageColumns[1]);
      std::int64_t height = parse_int(fields[image_cols[2]], line, kImageColumns[2]);
      if (bytes != kSentinel || width != kSentinel || height != kSentinel) {
        if (row.name.empty()) {
          throw Error(ErrorCode::kParse,
                      "row " + std::to_string(line) + ": webshot columns without a name");
        }
        row.webshot = WebshotMeta{row.name, bytes, static_cast<int>(width),
                                  static_cast<int>(height)};
      }
    }
    out.push_back(std::move(row));
  }
  return out;
}

std::vector<DatasetRow> read_datasheet(const fs::path& path) {
  std::error_code ec;
  if (!fs::exists(path, ec)) return {};
  return parse_datasheet(read_csv_file(path));
}

std::size_t append_rows(const fs::path& path, std::span<const DatasetRow> rows) {
  if (rows.empty()) return 0;
  std::error_code ec;
  bool exists = fs::exists(path, ec);
  std::string existing = exists ? read_file(path) : std::string();

  std::set<std::string> taken;
  if (!existing.empty()) {
    for (const auto& row : parse_datasheet(parse_csv_table(existing))) {
      if (!row.name.empty()) taken.insert(row.name);
    }
  }
  std::set<std::string> offenders;
  for (const auto& row : rows) {
    if (row.name.empty()) continue;
    if (!taken.insert(row.name).second) offenders.insert(row.name);
  }
  if (!offenders.empty()) {
    std::string list;
    for (const auto& n : offenders) list += (list.empty() ? "" : ", ") + n;
    throw Error(ErrorCode::kDuplicateName, "duplicate names: " + list);
  }

  std::string text = existing;
  if (trim(text).empty()) {
    text = std::string(kDatasheetHeader) + '\n';
  } else if (text.back() != '\n') {
    text += '\n';
  }
  for (const auto& row : rows) text += csv_line(to_csv_record(row));
  if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
  write_file_atomic(path, text);
  return rows.size();
}

}  // namespace webcorpus
