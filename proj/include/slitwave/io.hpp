#pragma once

#include <span>
#include <string>
#include <vector>

#include "json.hpp"

namespace slitwave {

/// Write `content` to `path` through a temporary file in the same directory
/// and a rename, so readers never see a partial file.
void write_file_atomic(const std::string& path, const std::string& content);

void write_json_atomic(const std::string& path, const nlohmann::json& j);

/// CSV with one header line; every number printed with 17 significant digits.
void write_csv_atomic(const std::string& path, const std::vector<std::string>& header,
                      const std::vector<std::span<const double>>& columns);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> columns;

  /// Column by name; Error(validation) if absent.
  const std::vector<double>& column(const std::string& name) const;
  std::size_t rows() const { return columns.empty() ? 0 : columns.front().size(); }
};

CsvTable read_csv(const std::string& path);

/// "%.17g"
std::string format_double(double v);

/// Short, filename-safe rendering of a plane or time value ("0.001", "60").
std::string format_label(double v);

/// Join directory and file name; creates the directory if needed.
std::string output_path(const std::string& dir, const std::string& name);

}  // namespace slitwave
