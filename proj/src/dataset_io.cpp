#include "shapestat/dataset_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace shapestat {

namespace {

void validate(const DatasetFile& d) {
  if (d.m < 1 || d.k <= d.m) {
    throw DimensionMismatch("dataset requires k > m >= 1, got m=" + std::to_string(d.m) +
                            ", k=" + std::to_string(d.k));
  }
  if (d.configurations.empty()) {
    throw ParseError("dataset contains no configuration");
  }
  for (std::size_t i = 0; i < d.configurations.size(); ++i) {
    const auto& c = d.configurations[i];
    if (c.rows() != d.m || c.cols() != d.k) {
      throw DimensionMismatch("configuration " + std::to_string(i) + " is " +
                              std::to_string(c.rows()) + "x" + std::to_string(c.cols()) +
                              ", expected " + std::to_string(d.m) + "x" +
                              std::to_string(d.k));
    }
  }
  if (!d.names.empty() && d.names.size() != d.configurations.size()) {
    throw DimensionMismatch("name count does not match configuration count");
  }
  if (!d.weights.empty()) {
    if (d.weights.size() != d.configurations.size()) {
      throw DimensionMismatch("weight count does not match configuration count");
    }
    double total = 0;
    for (double w : d.weights) {
      if (w < 0) {
        throw ParseError("negative weight in dataset");
      }
      total += w;
    }
    if (std::abs(total - 1.0) > 1e-9) {
      throw ParseError("weights must sum to 1, got " + std::to_string(total));
    }
  }
}

DatasetFile parse_json(std::istream& in) {
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("JSON parse error: ") + e.what());
  }
  DatasetFile d;
  try {
    d.m = j.at("m").get<int>();
    d.k = j.at("k").get<int>();
    if (j.contains("names")) {
      d.names = j["names"].get<std::vector<std::string>>();
    }
    for (const auto& cfg : j.at("configurations")) {
      const auto rows = cfg.get<std::vector<std::vector<double>>>();
      Eigen::MatrixXd mat(rows.size(), rows.empty() ? 0 : rows.front().size());
      for (std::size_t r = 0; r < rows.size(); ++r) {
        if (static_cast<Eigen::Index>(rows[r].size()) != mat.cols()) {
          throw DimensionMismatch("configuration " +
                                  std::to_string(d.configurations.size()) +
                                  " has ragged rows");
        }
        for (std::size_t c = 0; c < rows[r].size(); ++c) {
          mat(r, c) = rows[r][c];
        }
      }
      d.configurations.push_back(std::move(mat));
    }
    if (j.contains("weights")) {
      d.weights = j["weights"].get<std::vector<double>>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("JSON field error: ") + e.what());
  }
  validate(d);
  return d;
}

DatasetFile parse_csv(std::istream& in) {
  DatasetFile d;
  std::vector<std::string> lines;
  std::string raw;
  while (std::getline(in, raw)) {
    lines.push_back(raw);
  }
  if (lines.empty()) {
    throw ParseError("empty CSV file");
  }
  {
    std::stringstream header(lines[0]);
    char comma = 0;
    if (!(header >> d.m >> comma >> d.k) || comma != ',') {
      throw ParseError("line 1: expected header 'm,k'");
    }
  }

  auto blank = [](const std::string& s) {
    return s.find_first_not_of(" \t\r") == std::string::npos;
  };
  auto parse_row = [&](const std::string& text, Eigen::MatrixXd& mat, int row, int line_no) {
    std::stringstream ss(text);
    std::string field;
    int col = 0;
    while (std::getline(ss, field, ',')) {
      if (col >= d.k) {
        throw DimensionMismatch("line " + std::to_string(line_no) + ": configuration " +
                                std::to_string(d.configurations.size()) + " has more than " +
                                std::to_string(d.k) + " columns");
      }
      try {
        mat(row, col) = std::stod(field);
      } catch (const std::exception&) {
        throw ParseError("line " + std::to_string(line_no) + ", field " +
                         std::to_string(col + 1) + ": not a number: '" + field + "'");
      }
      ++col;
    }
    if (col != d.k) {
      throw DimensionMismatch("line " + std::to_string(line_no) + ": configuration " +
                              std::to_string(d.configurations.size()) + " row has " +
                              std::to_string(col) + " columns, expected " +
                              std::to_string(d.k));
    }
  };

  std::size_t i = 1;
  while (i < lines.size()) {
    if (blank(lines[i])) {
      ++i;
      continue;
    }
    Eigen::MatrixXd mat(d.m, d.k);
    for (int r = 0; r < d.m; ++r) {
      if (i >= lines.size() || blank(lines[i])) {
        throw DimensionMismatch("configuration " + std::to_string(d.configurations.size()) +
                                " has only " + std::to_string(r) + " of " +
                                std::to_string(d.m) + " rows (near line " +
                                std::to_string(i) + ")");
      }
      parse_row(lines[i], mat, r, static_cast<int>(i + 1));
      ++i;
    }
    d.configurations.push_back(std::move(mat));
  }
  validate(d);
  return d;
}

void write_json(const DatasetFile& d, std::ostream& out) {
  nlohmann::json j;
  j["m"] = d.m;
  j["k"] = d.k;
  if (!d.names.empty()) {
    j["names"] = d.names;
  }
  nlohmann::json configs = nlohmann::json::array();
  for (const auto& c : d.configurations) {
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index r = 0; r < c.rows(); ++r) {
      nlohmann::json row = nlohmann::json::array();
      for (Eigen::Index col = 0; col < c.cols(); ++col) {
        row.push_back(c(r, col));
      }
      rows.push_back(std::move(row));
    }
    configs.push_back(std::move(rows));
  }
  j["configurations"] = std::move(configs);
  if (!d.weights.empty()) {
    j["weights"] = d.weights;
  }
  out << j.dump(2) << "\n";
}

void write_csv(const DatasetFile& d, std::ostream& out) {
  out << d.m << "," << d.k << "\n";
  out.precision(17);
  for (std::size_t i = 0; i < d.configurations.size(); ++i) {
    const auto& c = d.configurations[i];
    for (Eigen::Index r = 0; r < c.rows(); ++r) {
      for (Eigen::Index col = 0; col < c.cols(); ++col) {
        if (col > 0) out << ",";
        out << c(r, col);
      }
      out << "\n";
    }
    if (i + 1 < d.configurations.size()) {
      out << "\n";
    }
  }
}

}  // namespace

DatasetFormat format_from_path(const std::string& path) {
  const auto dot = path.rfind('.');
  const std::string ext = dot == std::string::npos ? "" : path.substr(dot);
  if (ext == ".csv") {
    return DatasetFormat::Csv;
  }
  return DatasetFormat::Json;
}

DatasetFile load_dataset(const std::string& path, DatasetFormat format) {
  std::ifstream in(path);
  if (!in) {
    throw ParseError("cannot open file: " + path);
  }
  return parse_dataset(in, format);
}

DatasetFile parse_dataset(std::istream& in, DatasetFormat format) {
  return format == DatasetFormat::Json ? parse_json(in) : parse_csv(in);
}

void write_dataset(const DatasetFile& dataset, std::ostream& out, DatasetFormat format) {
  validate(dataset);
  if (format == DatasetFormat::Json) {
    write_json(dataset, out);
  } else {
    write_csv(dataset, out);
  }
}

Sample dataset_sample(const DatasetFile& dataset) {
  validate(dataset);
  std::vector<PreShape> points;
  points.reserve(dataset.configurations.size());
  for (const auto& c : dataset.configurations) {
    points.push_back(to_preshape(Configuration(c)));
  }
  if (dataset.weights.empty()) {
    return Sample(std::move(points));
  }
  return Sample(std::move(points), dataset.weights);
}

}  // namespace shapestat
