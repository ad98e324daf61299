#pragma once

#include <string>
#include <vector>

#include "crnctl/sim/trajectory.hpp"

namespace crnctl::io {

/// %.15g, with "nan", "inf" and "-inf" for non-finite values.
std::string format_number(double x);

/// Header "t,<names...>" then one row per sample; LF line endings.
std::string trajectory_csv(const sim::Trajectory& traj);
void write_trajectory_csv(const sim::Trajectory& traj, const std::string& path);

/// Generic table: header row then rows of preformatted cells.
std::string table_csv(const std::vector<std::string>& header, const std::vector<std::vector<std::string>>& rows);

}  // namespace crnctl::io
