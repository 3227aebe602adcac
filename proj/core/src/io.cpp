#include "landau/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace landau {

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

CsvTable::CsvTable(const std::string& header) : header_(header), columns_(1) {
  for (char c : header)
    if (c == ',') ++columns_;
}

void CsvTable::add_row(const std::vector<std::string>& cells) {
  if (int(cells.size()) != columns_)
    throw std::invalid_argument("CsvTable: row width does not match header");
  std::string row;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) row += ',';
    row += cells[i];
  }
  rows_.push_back(std::move(row));
}

void CsvTable::add_numeric_row(const std::vector<double>& cells) {
  std::vector<std::string> formatted;
  formatted.reserve(cells.size());
  for (double x : cells) formatted.push_back(format_double(x));
  add_row(formatted);
}

std::string CsvTable::str() const {
  std::string out = header_;
  out += '\n';
  for (const auto& row : rows_) {
    out += row;
    out += '\n';
  }
  return out;
}

void CsvTable::write(const std::string& path) const { write_text_file(path, str()); }

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out.write(content.data(), std::streamsize(content.size()));
  if (!out) throw std::runtime_error("write failed: " + path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

static std::string snapshot_header(int d) {
  if (d == 3) return "t,particle,vx,vy,vz";
  std::string h = "t,particle";
  for (int a = 1; a <= d; ++a) h += ",v" + std::to_string(a);
  return h;
}

std::string snapshot_csv(const std::vector<double>& times,
                         const std::vector<Eigen::MatrixXd>& snapshots) {
  if (times.size() != snapshots.size())
    throw std::invalid_argument("snapshot_csv: times/snapshots length mismatch");
  if (snapshots.empty()) return "t,particle\n";
  const int d = int(snapshots.front().rows());
  CsvTable table(snapshot_header(d));
  for (std::size_t s = 0; s < snapshots.size(); ++s) {
    const Eigen::MatrixXd& v = snapshots[s];
    for (int i = 0; i < v.cols(); ++i) {
      std::vector<std::string> cells;
      cells.reserve(std::size_t(d) + 2);
      cells.push_back(format_double(times[s]));
      cells.push_back(std::to_string(i));
      for (int a = 0; a < d; ++a) cells.push_back(format_double(v(a, i)));
      table.add_row(cells);
    }
  }
  return table.str();
}

std::string event_csv(const std::vector<CollisionEvent>& events) {
  CsvTable table("t,i,j,theta,phi");
  for (const auto& ev : events) {
    table.add_row({format_double(ev.time), std::to_string(ev.i), std::to_string(ev.j),
                   format_double(ev.theta), format_double(ev.phi)});
  }
  return table.str();
}

}  // namespace landau
