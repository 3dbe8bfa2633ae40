#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "convgp/errors.hpp"

namespace convgp::harness {

// Deterministic float formatting shared by every CSV/SVG writer.
std::string format_double(double v);

struct CsvTable {
  std::vector<std::string> comments;  // metadata, rendered as leading `# ` lines
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  int column_index(const std::string& name) const;  // -1 when absent
  // Lexicographic sort over all columns, numeric-aware per cell, so the
  // byte output is independent of worker scheduling.
  void sort_rows();
};

std::string render_csv(const CsvTable& table);

// Parses a CSV written by render_csv; `# ` comment lines are skipped.
CsvTable read_csv(const std::filesystem::path& path);

// Writes via temp file + rename in the destination directory.
void write_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace convgp::harness
