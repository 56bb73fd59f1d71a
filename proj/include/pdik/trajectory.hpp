#ifndef PDIK_TRAJECTORY_HPP_
#define PDIK_TRAJECTORY_HPP_

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "pdik/filter.hpp"
#include "pdik/model.hpp"

namespace pdik {

/// Keypoint samples sharing one timestamp.
struct TrajectoryFrame {
  double t = 0.0;
  std::vector<Keypoint> samples;
};

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  return out;
}

inline double parse_csv_double(const std::string& cell, int line_no) {
  try {
    size_t used = 0;
    const double v = std::stod(cell, &used);
    while (used < cell.size() && std::isspace(static_cast<unsigned char>(cell[used]))) ++used;
    if (used != cell.size()) throw std::invalid_argument(cell);
    return v;
  } catch (const std::exception&) {
    throw Error("trajectory line " + std::to_string(line_no) + ": bad number '" + cell + "'");
  }
}

}  // namespace detail

/**
 * @brief Reads a keypoint trajectory CSV.
 *
 * Header: `t,body_id,point_id,x,y,z,confidence`. Rows must be sorted by t;
 * the NaN literal is allowed in x,y,z. Rows with equal t form one frame.
 */
inline std::vector<TrajectoryFrame> load_trajectory(std::istream& in) {
  std::vector<TrajectoryFrame> frames;
  std::string line;
  int line_no = 0;
  bool header_seen = false;
  double prev_t = -std::numeric_limits<double>::infinity();
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      header_seen = true;
      if (line.rfind("t,", 0) != 0)
        throw Error("trajectory line 1: expected header 't,body_id,point_id,x,y,z,confidence'");
      continue;
    }
    const auto cells = detail::split_csv_line(line);
    if (cells.size() != 7)
      throw Error("trajectory line " + std::to_string(line_no) + ": expected 7 columns, got " +
                  std::to_string(cells.size()));
    Keypoint kp;
    kp.timestamp = detail::parse_csv_double(cells[0], line_no);
    kp.body_id = static_cast<int>(detail::parse_csv_double(cells[1], line_no));
    kp.point_id = cells[2];
    kp.position = Vec3(detail::parse_csv_double(cells[3], line_no),
                       detail::parse_csv_double(cells[4], line_no),
                       detail::parse_csv_double(cells[5], line_no));
    kp.confidence = detail::parse_csv_double(cells[6], line_no);
    if (kp.confidence < 0.0 || kp.confidence > 1.0)
      throw Error("trajectory line " + std::to_string(line_no) + ": confidence outside [0,1]");
    if (kp.timestamp < prev_t)
      throw Error("trajectory line " + std::to_string(line_no) + ": rows must be sorted by t");
    if (frames.empty() || kp.timestamp > prev_t) frames.push_back({kp.timestamp, {}});
    prev_t = kp.timestamp;
    frames.back().samples.push_back(std::move(kp));
  }
  return frames;
}

inline std::vector<TrajectoryFrame> load_trajectory_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open trajectory file '" + path + "'");
  return load_trajectory(in);
}

}  // namespace pdik

#endif  // PDIK_TRAJECTORY_HPP_
