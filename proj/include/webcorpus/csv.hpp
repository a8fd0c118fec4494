#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace webcorpus {

// RFC 4180 style CSV: comma separated, double-quote escaping, CRLF or LF.
using CsvRecord = std::vector<std::string>;

std::string csv_escape(std::string_view field);
std::string csv_line(const CsvRecord& fields);  // terminated with '\n'
std::vector<CsvRecord> parse_csv(std::string_view text);

struct CsvTable {
  CsvRecord header;
  std::vector<CsvRecord> rows;

  std::optional<std::size_t> column(std::string_view name) const;
  // Throws Error(kParse) naming the missing column.
  std::size_t require_column(std::string_view name) const;
};

// First record becomes the header. Throws Error(kIo) if unreadable.
CsvTable read_csv_file(const std::filesystem::path& path);
CsvTable parse_csv_table(std::string_view text);

std::string read_file(const std::filesystem::path& path);
// Writes to a sibling temporary and renames over `path`, so readers observe
// either the old or the new contents.
void write_file_atomic(const std::filesystem::path& path, std::string_view data);

}  // namespace webcorpus
