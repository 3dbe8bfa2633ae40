#include "convgp/inputs.hpp"

#include <Eigen/Eigenvalues>
#include <fstream>
#include <sstream>

namespace convgp::inputs {

bool is_stationary(const Eigen::VectorXd& coeffs) {
  const int p = static_cast<int>(coeffs.size());
  if (p == 0) return true;
  if (!coeffs.allFinite()) return false;
  if (coeffs.cwiseAbs().maxCoeff() == 0.0) return true;
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(p, p);
  companion.row(0) = coeffs.transpose();
  for (int i = 1; i < p; ++i) companion(i, i - 1) = 1.0;
  const auto eigenvalues = companion.eigenvalues();
  return eigenvalues.cwiseAbs().maxCoeff() < 1.0;
}

InputSeries gen_iid_gaussian(int d, linalg::RngStream& rng) {
  if (d < 1) throw DimensionMismatch("gen_iid_gaussian: need d >= 1");
  InputSeries out;
  out.values = rng.gaussian_vector(d);
  out.law = InputLaw::iid_gaussian;
  out.meta = "iid_gaussian";
  return out;
}

InputSeries gen_ar(const ArSpec& spec, int d, linalg::RngStream& rng) {
  if (d < 1) throw DimensionMismatch("gen_ar: need d >= 1");
  if (!is_stationary(spec.coeffs))
    throw NonStationary("gen_ar: AR coefficients violate the root condition");
  const int p = static_cast<int>(spec.coeffs.size());
  const int total = spec.burn_in + d;
  Eigen::VectorXd x = Eigen::VectorXd::Zero(total);
  for (int t = 0; t < total; ++t) {
    double v = spec.noise_sd * rng.gaussian();
    for (int j = 0; j < p; ++j)
      if (t - 1 - j >= 0) v += spec.coeffs(j) * x(t - 1 - j);
    x(t) = v;
  }
  InputSeries out;
  out.values = x.tail(d);
  out.law = InputLaw::ar;
  std::ostringstream meta;
  meta << "ar(p=" << p << ",noise_sd=" << spec.noise_sd << ",burn_in=" << spec.burn_in << ")";
  out.meta = meta.str();
  return out;
}

WindowedDataset make_windows(const InputSeries& series, int W, int horizon) {
  const int d = series.length();
  if (W < 1 || horizon < 1) throw WindowTooLong("make_windows: W and horizon must be >= 1");
  if (W + horizon > d) throw WindowTooLong("make_windows: W + horizon exceeds series length");
  WindowedDataset out;
  out.horizon = horizon;
  const int count = d - W - horizon + 1;
  out.targets.resize(count);
  out.windows.reserve(count);
  for (int start = 0; start < count; ++start) {
    out.windows.push_back(series.values.segment(start, W));
    out.targets(start) = series.values(start + W - 1 + horizon);
  }
  return out;
}

InputSeries load_series_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaMismatch("load_series_csv: cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw SchemaMismatch("load_series_csv: empty file " + path);
  // Tolerate a UTF-8 BOM and surrounding whitespace in the header.
  while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
  if (line.size() >= 3 && static_cast<unsigned char>(line[0]) == 0xEF) line = line.substr(3);
  if (line != "value") throw SchemaMismatch("load_series_csv: expected header `value`, got `" + line + "`");
  std::vector<double> vals;
  while (std::getline(in, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
    if (line.empty()) continue;
    std::size_t pos = 0;
    double v;
    try {
      v = std::stod(line, &pos);
    } catch (const std::exception&) {
      throw SchemaMismatch("load_series_csv: non-numeric row `" + line + "`");
    }
    if (pos != line.size()) throw SchemaMismatch("load_series_csv: trailing characters in `" + line + "`");
    vals.push_back(v);
  }
  if (vals.empty()) throw SchemaMismatch("load_series_csv: no data rows in " + path);
  InputSeries out;
  out.values = Eigen::Map<Eigen::VectorXd>(vals.data(), static_cast<int>(vals.size()));
  out.law = InputLaw::iid_gaussian;
  out.meta = "csv:" + path;
  return out;
}

}  // namespace convgp::inputs
