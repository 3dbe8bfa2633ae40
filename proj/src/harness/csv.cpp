#include "convgp/harness/csv.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace convgp::harness {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

int CsvTable::column_index(const std::string& name) const {
  const auto it = std::find(columns.begin(), columns.end(), name);
  return it == columns.end() ? -1 : static_cast<int>(it - columns.begin());
}

namespace {

// Numeric-aware cell comparison: numbers sort by value, everything else by
// bytes; numbers sort before non-numbers.
int compare_cells(const std::string& a, const std::string& b) {
  char* enda = nullptr;
  char* endb = nullptr;
  const double va = a.empty() ? 0.0 : std::strtod(a.c_str(), &enda);
  const double vb = b.empty() ? 0.0 : std::strtod(b.c_str(), &endb);
  const bool na = !a.empty() && enda == a.c_str() + a.size();
  const bool nb = !b.empty() && endb == b.c_str() + b.size();
  if (na && nb) return va < vb ? -1 : (va > vb ? 1 : 0);
  if (na != nb) return na ? -1 : 1;
  return a.compare(b);
}

}  // namespace

void CsvTable::sort_rows() {
  std::stable_sort(rows.begin(), rows.end(),
                   [](const std::vector<std::string>& a, const std::vector<std::string>& b) {
                     const std::size_t n = std::min(a.size(), b.size());
                     for (std::size_t i = 0; i < n; ++i) {
                       const int c = compare_cells(a[i], b[i]);
                       if (c != 0) return c < 0;
                     }
                     return a.size() < b.size();
                   });
}

std::string render_csv(const CsvTable& table) {
  std::string out;
  for (const auto& c : table.comments) {
    out += "# ";
    out += c;
    out += "\n";
  }
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    if (i) out += ",";
    out += table.columns[i];
  }
  out += "\n";
  for (const auto& row : table.rows) {
    if (row.size() != table.columns.size())
      throw SchemaMismatch("render_csv: row width does not match header");
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ",";
      out += row[i];
    }
    out += "\n";
  }
  return out;
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw SchemaMismatch("read_csv: cannot open " + path.string());
  CsvTable table;
  std::string line;
  bool have_header = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      table.comments.push_back(line.size() > 2 ? line.substr(2) : "");
      continue;
    }
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (line.back() == ',') cells.push_back("");
    if (!have_header) {
      table.columns = cells;
      have_header = true;
    } else {
      if (cells.size() != table.columns.size())
        throw SchemaMismatch("read_csv: row width mismatch in " + path.string());
      table.rows.push_back(cells);
    }
  }
  if (!have_header) throw SchemaMismatch("read_csv: no header in " + path.string());
  return table;
}

void write_atomic(const std::filesystem::path& path, const std::string& content) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw SchemaMismatch("write_atomic: cannot open " + tmp.string());
    out << content;
    if (!out) throw SchemaMismatch("write_atomic: write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace convgp::harness
