#include "qlbm/field_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace qlbm {

std::string to_csv(Field<double> const &f)
{
  std::string out;
  char        buf[32];
  for (Eigen::Index y = 0; y < f.rows(); ++y) {
    for (Eigen::Index x = 0; x < f.cols(); ++x) {
      std::snprintf(buf, sizeof buf, "%.17g", f(y, x));
      if (x > 0) { out += ','; }
      out += buf;
    }
    out += '\n';
  }
  return out;
}

void write_csv(std::filesystem::path const &path, Field<double> const &f)
{
  std::ofstream os(path, std::ios::binary);
  if (!os) { throw std::runtime_error("cannot write " + path.string()); }
  os << to_csv(f);
  if (!os) { throw std::runtime_error("write failed: " + path.string()); }
}

Field<double> read_csv(std::filesystem::path const &path)
{
  std::ifstream is(path);
  if (!is) { throw std::runtime_error("cannot read " + path.string()); }
  std::vector<std::vector<double>> rows;
  std::string                      line;
  while (std::getline(is, line)) {
    if (line.empty()) { continue; }
    std::vector<double> row;
    std::stringstream   ss(line);
    std::string         cell;
    while (std::getline(ss, cell, ',')) { row.push_back(std::stod(cell)); }
    if (!rows.empty() && row.size() != rows.front().size()) { throw std::runtime_error("ragged csv: " + path.string()); }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) { return {}; }
  Field<double> f(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
  for (Eigen::Index y = 0; y < f.rows(); ++y) {
    for (Eigen::Index x = 0; x < f.cols(); ++x) {
      f(y, x) = rows[static_cast<std::size_t>(y)][static_cast<std::size_t>(x)];
    }
  }
  return f;
}

} // namespace qlbm
