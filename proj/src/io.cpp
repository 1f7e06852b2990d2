#include "miv/io.hpp"

#include <cstring>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace miv {

Matrix read_csv(const std::string& path, bool expect_header) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("read_csv: cannot open " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (first && expect_header) {
      first = false;
      continue;
    }
    first = false;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
    if (!rows.empty() && row.size() != rows.front().size())
      throw std::runtime_error("read_csv: ragged rows in " + path);
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw std::runtime_error("read_csv: empty file " + path);
  Matrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows[0].size()));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      m(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  return m;
}

void write_csv(const std::string& path, const Matrix& m,
               const std::vector<std::string>& column_names) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_csv: cannot open " + path);
  out << std::setprecision(17);
  if (!column_names.empty()) {
    if (static_cast<Eigen::Index>(column_names.size()) != m.cols())
      throw std::invalid_argument("write_csv: header width mismatch");
    for (std::size_t j = 0; j < column_names.size(); ++j)
      out << column_names[j] << (j + 1 < column_names.size() ? "," : "\n");
  }
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      out << m(i, j) << (j + 1 < m.cols() ? "," : "\n");
}

nlohmann::json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("read_json: cannot open " + path);
  nlohmann::json j;
  in >> j;
  return j;
}

void write_json(const std::string& path, const nlohmann::json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_json: cannot open " + path);
  out << j.dump(2) << "\n";
}

std::uint64_t dataset_hash(const Matrix& m) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](const unsigned char* p, std::size_t len) {
    for (std::size_t i = 0; i < len; ++i) {
      h ^= p[i];
      h *= 0x100000001b3ULL;
    }
  };
  std::uint64_t dims[2] = {static_cast<std::uint64_t>(m.rows()),
                           static_cast<std::uint64_t>(m.cols())};
  mix(reinterpret_cast<const unsigned char*>(dims), sizeof(dims));
  mix(reinterpret_cast<const unsigned char*>(m.data()),
      sizeof(double) * static_cast<std::size_t>(m.size()));
  return h;
}

}  // namespace miv
