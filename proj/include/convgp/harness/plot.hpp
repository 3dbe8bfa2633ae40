#pragma once

#include <string>
#include <vector>

#include "convgp/harness/csv.hpp"

namespace convgp::harness {

struct PlotSpec {
  std::string csv;
  std::string x_column;
  std::string y_column;
  std::vector<std::string> group_columns;  // one curve per distinct tuple
  std::string aggregate = "median";        // median | mean | none
  std::string title;
  std::string out_name = "plot.svg";
};

// Deterministic line/scatter SVG: a pure function of the table bytes and the
// spec. Rows whose x or y cell is empty or non-numeric are skipped; an empty
// result raises SchemaMismatch.
std::string render_svg(const CsvTable& table, const PlotSpec& spec);

}  // namespace convgp::harness
