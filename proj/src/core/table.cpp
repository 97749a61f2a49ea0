#include "core/table.hpp"

#include <cstdio>

#include "core/common.hpp"
#include "core/strings.hpp"

namespace ng {

Table::RowBuilder& Table::RowBuilder::str(std::string v) {
  values_.push_back(std::move(v));
  return *this;
}

Table::RowBuilder& Table::RowBuilder::num(double v) {
  values_.push_back(format_double(v));
  return *this;
}

Table::RowBuilder& Table::RowBuilder::num(std::int64_t v) {
  values_.push_back(format_int(v));
  return *this;
}

Table::RowBuilder::~RowBuilder() { table_.add_row(std::move(values_)); }

void Table::add_row(std::vector<std::string> values) {
  if (values.size() != columns_.size())
    fail(Errc::state, "table row width mismatch");
  for (auto& v : values) cells_.push_back(std::move(v));
}

std::string csv_escape(const std::string& field) {
  bool needs = false;
  for (char c : field) {
    if (c == ',' || c == '"' || c == '\n' || c == '\r') {
      needs = true;
      break;
    }
  }
  if (!needs) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += "\"\"";
    else out.push_back(c);
  }
  out += '"';
  return out;
}

std::string Table::to_csv(const std::vector<std::string>& header_comments) const {
  std::string out;
  for (const auto& line : header_comments) {
    out += "# ";
    out += line;
    out += '\n';
  }
  for (std::size_t c = 0; c < columns_.size(); ++c) {
    if (c) out += ',';
    out += csv_escape(columns_[c]);
  }
  out += '\n';
  const std::size_t n = rows();
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < columns_.size(); ++c) {
      if (c) out += ',';
      out += csv_escape(cell(r, c));
    }
    out += '\n';
  }
  return out;
}

void Table::save_csv(const std::string& path,
                     const std::vector<std::string>& header_comments) const {
  write_file(path, to_csv(header_comments));
}

void write_file(const std::string& path, std::string_view content) {
  std::FILE* f = std::fopen(path.c_str(), "wb");
  if (!f) fail(Errc::io, "cannot open for writing: " + path);
  const std::size_t written = std::fwrite(content.data(), 1, content.size(), f);
  const bool bad = written != content.size() || std::fclose(f) != 0;
  if (bad) fail(Errc::io, "write failed: " + path);
}

std::string read_file(const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "rb");
  if (!f) fail(Errc::io, "cannot open file: " + path);
  std::string out;
  char buf[1 << 16];
  std::size_t got;
  while ((got = std::fread(buf, 1, sizeof buf, f)) > 0) out.append(buf, got);
  const bool bad = std::ferror(f) != 0;
  std::fclose(f);
  if (bad) fail(Errc::io, "read failed: " + path);
  return out;
}

}  // namespace ng
