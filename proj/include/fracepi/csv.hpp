#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "fracepi/fode_solver.hpp"

namespace fracepi {

// Shortest decimal with 17 significant digits; parses back to the same
// double.
std::string format_double(double v);

// Header `t,<columns...>`, one row per node, LF line endings.
void write_trajectory_csv(std::ostream& os, const Trajectory& traj,
                          const std::vector<std::string>& columns = {"S", "I",
                                                                     "P"});

// Inverse of write_trajectory_csv. alpha/step are not stored in the file:
// step is recovered from the first two times, alpha is left NaN.
// Throws ValidationError with a line number on malformed input.
Trajectory read_trajectory_csv(std::istream& is);

// Comma-joined row of already formatted cells.
std::string csv_row(const std::vector<std::string>& cells);

}  // namespace fracepi
