// Text output with stable formatting: every double is written as %.17g so
// identical runs produce byte-identical files.

#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "landau/kac.hpp"

namespace landau {

// Round-trip decimal form of x (%.17g; nan/inf spelled out).
std::string format_double(double x);

// Minimal CSV assembler: fixed column count defined by the header, rows
// appended as pre-formatted cells or doubles.
class CsvTable {
 public:
  explicit CsvTable(const std::string& header);
  void add_row(const std::vector<std::string>& cells);
  void add_numeric_row(const std::vector<double>& cells);
  int columns() const { return columns_; }
  std::string str() const;
  void write(const std::string& path) const;

 private:
  std::string header_;
  int columns_ = 0;
  std::vector<std::string> rows_;
};

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

// Snapshot table `t,particle,vx,vy,vz` (columns v1..vd when d != 3).
std::string snapshot_csv(const std::vector<double>& times,
                         const std::vector<Eigen::MatrixXd>& snapshots);

// Collision event log `t,i,j,theta,phi`.
std::string event_csv(const std::vector<CollisionEvent>& events);

}  // namespace landau
