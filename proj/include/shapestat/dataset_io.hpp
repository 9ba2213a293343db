#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "shapestat/means.hpp"

namespace shapestat {

/// On-disk collection of landmark configurations with optional names and
/// weights (weights sum to 1 when present).
struct DatasetFile {
  int m = 0;
  int k = 0;
  std::vector<std::string> names;                // empty when absent
  std::vector<Eigen::MatrixXd> configurations;   // each m x k
  std::vector<double> weights;                   // empty when absent

  int size() const { return static_cast<int>(configurations.size()); }
};

enum class DatasetFormat { Json, Csv };

/// Picks the format from the file extension (.json / .csv).
DatasetFormat format_from_path(const std::string& path);

DatasetFile load_dataset(const std::string& path, DatasetFormat format);
DatasetFile parse_dataset(std::istream& in, DatasetFormat format);
void write_dataset(const DatasetFile& dataset, std::ostream& out, DatasetFormat format);

/// Converts every configuration to its pre-shape; weights carry over.
Sample dataset_sample(const DatasetFile& dataset);

}  // namespace shapestat
