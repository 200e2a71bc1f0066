#include "flagsurge/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "flagsurge/error.hpp"

namespace flagsurge {

namespace {

constexpr const char* kHeader = "px,py,pz,nx,ny,nz";

}  // namespace

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string format_vec(const Vec3& v) {
  return format_double(v[0]) + " " + format_double(v[1]) + " " + format_double(v[2]);
}

std::string format_csv(const std::vector<Flag>& pts) {
  std::string out = kHeader;
  out += '\n';
  for (const Flag& x : pts) {
    const std::array<double, 6> row{x.p.v[0], x.p.v[1], x.p.v[2], x.d.n[0], x.d.n[1], x.d.n[2]};
    for (std::size_t i = 0; i < 6; ++i) {
      if (i) out += ',';
      out += format_double(row[i]);
    }
    out += '\n';
  }
  return out;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorKind::InvalidArgument, "cannot write " + path.string());
  f << text;
}

void write_csv(const std::filesystem::path& path, const std::vector<Flag>& pts) { write_text(path, format_csv(pts)); }

std::vector<Flag> parse_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<Flag> out;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (lineno == 1 && line == kHeader) continue;
    std::array<double, 6> v{};
    std::istringstream row(line);
    std::string cell;
    std::size_t k = 0;
    while (std::getline(row, cell, ',')) {
      if (k == 6) break;
      try {
        std::size_t used = 0;
        v[k] = std::stod(cell, &used);
        if (used != cell.size()) throw std::invalid_argument(cell);
      } catch (const std::exception&) {
        throw Error(ErrorKind::InvalidArgument, "line " + std::to_string(lineno) + ": bad number '" + cell + "'");
      }
      ++k;
    }
    if (k != 6 || row.rdbuf()->in_avail() > 0)
      throw Error(ErrorKind::InvalidArgument, "line " + std::to_string(lineno) + ": expected 6 columns");
    out.push_back(make_flag({v[0], v[1], v[2]}, {v[3], v[4], v[5]}));
  }
  return out;
}

std::vector<Flag> read_csv(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorKind::InvalidArgument, "cannot read " + path.string());
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_csv(ss.str());
}

void write_ply(const std::filesystem::path& path, const std::vector<Flag>& pts) {
  std::string out = "ply\nformat ascii 1.0\n";
  out += "comment chart: vertex = point direction on S^2, normal = line normal on S^2\n";
  out += "element vertex " + std::to_string(pts.size()) + "\n";
  out += "property double x\nproperty double y\nproperty double z\n";
  out += "property double nx\nproperty double ny\nproperty double nz\nend_header\n";
  for (const Flag& x : pts) out += format_vec(x.p.v) + " " + format_vec(x.d.n) + "\n";
  write_text(path, out);
}

std::string format_report(const ReportLines& lines) {
  std::string out;
  for (const auto& [k, v] : lines) out += k + ": " + v + "\n";
  return out;
}

}  // namespace flagsurge
