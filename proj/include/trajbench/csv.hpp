#pragma once

#include "trajbench/dataset.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace trajbench::csv {

inline constexpr std::string_view trajectory_header = "traj_id,seq,x,y";

/// Shortest decimal text that parses back to exactly `v`.
std::string format_double(double v);

/// Writes `traj_id,seq,x,y` rows, LF line endings, one row per vertex.
void write_trajectories(std::ostream& out, const Dataset& ds);
void write_trajectories(const std::filesystem::path& path, const Dataset& ds);

/// Parses the trajectory format. Rows must be grouped by traj_id with seq
/// increasing by exactly one, and every trajectory needs at least two rows.
/// Any violation throws ParseError naming the offending line. Numeric
/// traj_ids are kept as ids; otherwise ids are assigned in order of first
/// appearance and the original text is kept in Dataset::labels.
Dataset read_trajectories(std::istream& in, std::string name = "dataset");
Dataset read_trajectories(const std::filesystem::path& path);

/// Splits one CSV line on ',' (no quoting; none of our formats need it).
std::vector<std::string_view> split_fields(std::string_view line);

} // namespace trajbench::csv
