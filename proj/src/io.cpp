#include "slitwave/io.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "slitwave/error.hpp"

namespace slitwave {

namespace fs = std::filesystem;

namespace {

[[noreturn]] void fail_io(const std::string& what) { throw Error(ErrorKind::io, what); }

std::string temp_name(const fs::path& target) {
  static thread_local std::mt19937_64 rng{std::random_device{}()};
  char suffix[32];
  std::snprintf(suffix, sizeof suffix, ".tmp%016llx", static_cast<unsigned long long>(rng()));
  return target.string() + suffix;
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string format_label(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string output_path(const std::string& dir, const std::string& name) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) fail_io("cannot create output directory '" + dir + "': " + ec.message());
  return (fs::path(dir) / name).string();
}

void write_file_atomic(const std::string& path, const std::string& content) {
  const fs::path target(path);
  const std::string tmp = temp_name(target);
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail_io("cannot open '" + tmp + "' for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      out.close();
      std::remove(tmp.c_str());
      fail_io("write to '" + tmp + "' failed");
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    std::remove(tmp.c_str());
    fail_io("cannot rename '" + tmp + "' to '" + path + "': " + ec.message());
  }
}

void write_json_atomic(const std::string& path, const nlohmann::json& j) {
  write_file_atomic(path, j.dump(2) + "\n");
}

void write_csv_atomic(const std::string& path, const std::vector<std::string>& header,
                      const std::vector<std::span<const double>>& columns) {
  if (header.size() != columns.size()) fail_validation("csv: header and column counts differ");
  const std::size_t rows = columns.empty() ? 0 : columns.front().size();
  for (const auto& c : columns)
    if (c.size() != rows) fail_validation("csv: columns have different lengths");

  std::string out;
  out.reserve((rows + 1) * columns.size() * 25);
  for (std::size_t j = 0; j < header.size(); ++j) {
    if (j) out += ',';
    out += header[j];
  }
  out += '\n';
  char buf[40];
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < columns.size(); ++j) {
      if (j) out += ',';
      const int n = std::snprintf(buf, sizeof buf, "%.17g", columns[j][i]);
      out.append(buf, static_cast<std::size_t>(n));
    }
    out += '\n';
  }
  write_file_atomic(path, out);
}

const std::vector<double>& CsvTable::column(const std::string& name) const {
  for (std::size_t j = 0; j < header.size(); ++j)
    if (header[j] == name) return columns[j];
  fail_validation("csv has no column '" + name + "'");
}

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail_io("cannot open '" + path + "'");
  CsvTable table;
  std::string line;
  if (!std::getline(in, line)) fail_validation(path + ": empty file");
  {
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) table.header.push_back(cell);
  }
  table.columns.resize(table.header.size());
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::size_t col = 0;
    const char* p = line.c_str();
    while (true) {
      char* end = nullptr;
      errno = 0;
      const double v = std::strtod(p, &end);
      if (end == p || col >= table.columns.size())
        fail_validation(path + ":" + std::to_string(line_no) + ": malformed row");
      table.columns[col++].push_back(v);
      if (*end == ',') p = end + 1;
      else if (*end == '\0' || *end == '\r') break;
      else fail_validation(path + ":" + std::to_string(line_no) + ": malformed row");
    }
    if (col != table.columns.size())
      fail_validation(path + ":" + std::to_string(line_no) + ": expected " +
                      std::to_string(table.columns.size()) + " columns");
  }
  return table;
}

}  // namespace slitwave
