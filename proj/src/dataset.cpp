#include "symclu/dataset.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace symclu {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

double parse_cell(const std::string& cell, int line_no) {
  const std::string t = trim(cell);
  if (t.empty()) {
    throw std::runtime_error("load_dataset: empty cell at line " +
                             std::to_string(line_no));
  }
  std::size_t pos = 0;
  double value;
  try {
    value = std::stod(t, &pos);
  } catch (const std::exception&) {
    throw std::runtime_error("load_dataset: non-numeric cell '" + t +
                             "' at line " + std::to_string(line_no));
  }
  if (pos != t.size()) {
    throw std::runtime_error("load_dataset: non-numeric cell '" + t +
                             "' at line " + std::to_string(line_no));
  }
  if (!std::isfinite(value)) {
    throw std::runtime_error("load_dataset: non-finite value at line " +
                             std::to_string(line_no));
  }
  return value;
}

}  // namespace

DatasetFormat format_from_string(const std::string& name) {
  if (name == "label-last") return DatasetFormat::kLabelLast;
  if (name == "features-only") return DatasetFormat::kFeaturesOnly;
  throw std::invalid_argument("unknown dataset format: " + name);
}

std::string format_name(DatasetFormat format) {
  return format == DatasetFormat::kLabelLast ? "label-last" : "features-only";
}

DataMatrix load_dataset(const std::string& path, DatasetFormat format) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("load_dataset: cannot open " + path);
  }

  std::vector<std::vector<double>> rows;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      row.push_back(parse_cell(cell, line_no));
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw std::runtime_error("load_dataset: ragged row at line " +
                               std::to_string(line_no));
    }
    rows.push_back(std::move(row));
  }

  if (rows.size() < 2) {
    throw std::runtime_error("load_dataset: need at least 2 samples");
  }
  const int n = static_cast<int>(rows.size());
  const int total_cols = static_cast<int>(rows.front().size());
  const bool labeled = format == DatasetFormat::kLabelLast;
  const int m = labeled ? total_cols - 1 : total_cols;
  if (m < 1) {
    throw std::runtime_error("load_dataset: no feature columns");
  }

  DataMatrix data;
  data.values.resize(n, m);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < m; ++j) data.values(i, j) = rows[i][j];
  }
  if (labeled) {
    Eigen::VectorXi labels(n);
    for (int i = 0; i < n; ++i) {
      const double v = rows[i][total_cols - 1];
      const long long rounded = std::llround(v);
      if (std::abs(v - static_cast<double>(rounded)) > 1e-9) {
        throw std::runtime_error("load_dataset: non-integer label in row " +
                                 std::to_string(i + 1));
      }
      labels[i] = static_cast<int>(rounded);
    }
    data.labels = std::move(labels);
  }
  data.validate();
  return data;
}

}  // namespace symclu
