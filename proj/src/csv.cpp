#include "fracepi/csv.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "fracepi/errors.hpp"

namespace fracepi {

std::string format_double(double v) {
  char buf[64];
  const auto res =
      std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

std::string csv_row(const std::vector<std::string>& cells) {
  std::string out;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out += ',';
    out += cells[i];
  }
  return out;
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj,
                          const std::vector<std::string>& columns) {
  if (static_cast<Eigen::Index>(columns.size()) != traj.states.cols()) {
    throw ValidationError("column names do not match the state dimension");
  }
  os << "t";
  for (const auto& c : columns) os << ',' << c;
  os << '\n';
  for (Eigen::Index j = 0; j < traj.nodes(); ++j) {
    os << format_double(traj.times[j]);
    for (Eigen::Index c = 0; c < traj.states.cols(); ++c) {
      os << ',' << format_double(traj.states(j, c));
    }
    os << '\n';
  }
}

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_cell(const std::string& s, std::size_t line_no) {
  double v = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc() || res.ptr != last) {
    throw ValidationError("csv line " + std::to_string(line_no) +
                          ": cannot parse number '" + s + "'");
  }
  return v;
}

}  // namespace

Trajectory read_trajectory_csv(std::istream& is) {
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(is, line)) throw ValidationError("csv: empty input");
  ++line_no;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = split(line);
  if (header.size() < 2 || header[0] != "t") {
    throw ValidationError("csv line 1: header must start with 't'");
  }
  const std::size_t dim = header.size() - 1;

  std::vector<double> times;
  std::vector<double> values;
  while (std::getline(is, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto cells = split(line);
    if (cells.size() != dim + 1) {
      throw ValidationError("csv line " + std::to_string(line_no) + ": expected " +
                            std::to_string(dim + 1) + " fields");
    }
    times.push_back(parse_cell(cells[0], line_no));
    for (std::size_t c = 1; c <= dim; ++c) {
      values.push_back(parse_cell(cells[c], line_no));
    }
  }

  Trajectory traj;
  const auto n = static_cast<Eigen::Index>(times.size());
  traj.times = Eigen::Map<const Eigen::VectorXd>(times.data(), n);
  traj.states = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic,
                                               Eigen::Dynamic, Eigen::RowMajor>>(
      values.data(), n, static_cast<Eigen::Index>(dim));
  traj.alpha = std::numeric_limits<double>::quiet_NaN();
  traj.step = n >= 2 ? traj.times[1] - traj.times[0] : 0.0;
  return traj;
}

}  // namespace fracepi
