#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace ng {

// Generic tabular result. Cells are pre-formatted strings so that CSV output
// is byte-stable; numeric helpers use the shortest round-trip formatting.
class Table {
 public:
  explicit Table(std::vector<std::string> columns)
      : columns_(std::move(columns)) {}

  std::size_t cols() const { return columns_.size(); }
  std::size_t rows() const { return cells_.size() / (columns_.empty() ? 1 : columns_.size()); }
  const std::vector<std::string>& columns() const { return columns_; }
  const std::string& cell(std::size_t row, std::size_t col) const {
    return cells_[row * columns_.size() + col];
  }

  class RowBuilder {
   public:
    RowBuilder(Table& table) : table_(table) {}
    RowBuilder& str(std::string v);
    RowBuilder& num(double v);
    RowBuilder& num(std::int64_t v);
    RowBuilder& num(int v) { return num(static_cast<std::int64_t>(v)); }
    RowBuilder& empty() { return str(""); }
    ~RowBuilder();

   private:
    Table& table_;
    std::vector<std::string> values_;
  };

  RowBuilder row() { return RowBuilder(*this); }
  void add_row(std::vector<std::string> values);

  // CSV with LF line endings; header_comment lines (if any) are written first
  // prefixed with "# ".
  std::string to_csv(const std::vector<std::string>& header_comments = {}) const;
  void save_csv(const std::string& path,
                const std::vector<std::string>& header_comments = {}) const;

 private:
  std::vector<std::string> columns_;
  std::vector<std::string> cells_;
};

// Writes a whole buffer to path (binary, so LF stays LF). Throws Error on
// failure.
void write_file(const std::string& path, std::string_view content);

// Reads a whole file. Throws Error if missing/unreadable.
std::string read_file(const std::string& path);

// Escapes a CSV field if it contains separators/quotes.
std::string csv_escape(const std::string& field);

}  // namespace ng
