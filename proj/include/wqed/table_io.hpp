#pragma once

#include <string>
#include <utility>
#include <vector>

namespace wqed {

// '#'-prefixed key=value metadata lines, one comma-separated column-name row,
// then one comma-separated row per record. Numbers round-trip exactly.
struct Table {
  std::vector<std::pair<std::string, std::string>> meta;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  void add_meta(const std::string& key, const std::string& value);
  void add_meta(const std::string& key, double value);
  const std::string* find_meta(const std::string& key) const;
  std::vector<double> column(const std::string& name) const;
};

std::string format_number(double v);

void write_table(const std::string& path, const Table& t);
Table read_table(const std::string& path);

}  // namespace wqed
