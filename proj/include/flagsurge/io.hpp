#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "flagsurge/flag.hpp"

namespace flagsurge {

/// `px,py,pz,nx,ny,nz` header then one canonical flag per row at %.17g.
std::string format_csv(const std::vector<Flag>& pts);
void write_csv(const std::filesystem::path& path, const std::vector<Flag>& pts);

/// Throws InvalidArgument on a malformed row, ZeroVector or NonIncident on a bad flag.
std::vector<Flag> parse_csv(const std::string& text);
std::vector<Flag> read_csv(const std::filesystem::path& path);

/// ASCII PLY: the point direction as position and the line normal as normal.
void write_ply(const std::filesystem::path& path, const std::vector<Flag>& pts);

using ReportLines = std::vector<std::pair<std::string, std::string>>;

/// `KEY: value` per line.
std::string format_report(const ReportLines& lines);
void write_text(const std::filesystem::path& path, const std::string& text);

std::string format_double(double x);
std::string format_vec(const Vec3& v);

}  // namespace flagsurge
