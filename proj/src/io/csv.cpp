#include "crnctl/io/csv.hpp"

#include <cmath>
#include <cstdio>

#include "crnctl/error.hpp"
#include "json_util.hpp"

namespace crnctl::io {

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.15g", x);
  return buf;
}

std::string trajectory_csv(const sim::Trajectory& traj) {
  std::string out = "t";
  for (const auto& n : traj.names) out += "," + n;
  out += "\n";
  for (std::size_t k = 0; k < traj.size(); ++k) {
    out += format_number(traj.times[k]);
    for (Eigen::Index i = 0; i < traj.states[k].size(); ++i) {
      out += ",";
      out += format_number(traj.states[k][i]);
    }
    out += "\n";
  }
  return out;
}

void write_trajectory_csv(const sim::Trajectory& traj, const std::string& path) {
  detail::write_file(path, trajectory_csv(traj));
}

std::string table_csv(const std::vector<std::string>& header, const std::vector<std::vector<std::string>>& rows) {
  auto line = [](const std::vector<std::string>& cells) {
    std::string s;
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) s += ",";
      s += cells[i];
    }
    return s + "\n";
  };
  std::string out = line(header);
  for (const auto& r : rows) {
    if (r.size() != header.size()) throw Error("table row width does not match the header");
    out += line(r);
  }
  return out;
}

}  // namespace crnctl::io
