#include "wqed/table_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "wqed/errors.hpp"

namespace wqed {

void Table::add_meta(const std::string& key, const std::string& value) {
  if (key.find('=') != std::string::npos || key.find('\n') != std::string::npos ||
      value.find('\n') != std::string::npos)
    throw ValidationError("table metadata must be single-line key=value");
  meta.emplace_back(key, value);
}

void Table::add_meta(const std::string& key, double value) { add_meta(key, format_number(value)); }

const std::string* Table::find_meta(const std::string& key) const {
  for (const auto& [k, v] : meta)
    if (k == key) return &v;
  return nullptr;
}

std::vector<double> Table::column(const std::string& name) const {
  for (std::size_t c = 0; c < columns.size(); ++c)
    if (columns[c] == name) {
      std::vector<double> out;
      out.reserve(rows.size());
      for (const auto& r : rows) out.push_back(r[c]);
      return out;
    }
  throw ValidationError("table has no column '" + name + "'");
}

std::string format_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void write_table(const std::string& path, const Table& t) {
  std::ofstream os(path);
  if (!os) throw ValidationError("cannot open '" + path + "' for writing");
  for (const auto& [k, v] : t.meta) os << "# " << k << '=' << v << '\n';
  for (std::size_t c = 0; c < t.columns.size(); ++c) os << (c ? "," : "") << t.columns[c];
  os << '\n';
  for (const auto& r : t.rows) {
    if (r.size() != t.columns.size()) throw DimensionError("table row width differs from column count");
    for (std::size_t c = 0; c < r.size(); ++c) os << (c ? "," : "") << format_number(r[c]);
    os << '\n';
  }
  if (!os) throw ValidationError("write to '" + path + "' failed");
}

Table read_table(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ValidationError("cannot open '" + path + "'");
  Table t;
  std::string line;
  bool have_header = false;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto eq = line.find('=');
      if (eq == std::string::npos) throw ValidationError("metadata line without '=' in " + path);
      std::size_t k0 = 1;
      while (k0 < eq && line[k0] == ' ') ++k0;
      t.meta.emplace_back(line.substr(k0, eq - k0), line.substr(eq + 1));
      continue;
    }
    std::stringstream ss(line);
    std::string cell;
    if (!have_header) {
      while (std::getline(ss, cell, ',')) t.columns.push_back(cell);
      have_header = true;
      continue;
    }
    std::vector<double> row;
    while (std::getline(ss, cell, ',')) {
      double v = 0.0;
      const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (res.ec != std::errc() || res.ptr != cell.data() + cell.size())
        throw ValidationError("bad number '" + cell + "' in " + path);
      row.push_back(v);
    }
    if (row.size() != t.columns.size()) throw DimensionError("row width mismatch in " + path);
    t.rows.push_back(std::move(row));
  }
  if (!have_header) throw ValidationError("no column row in " + path);
  return t;
}

}  // namespace wqed
