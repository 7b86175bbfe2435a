#include "trajbench/csv.hpp"

#include "trajbench/error.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <unordered_set>

namespace trajbench::csv {

std::string format_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
}

void write_trajectories(std::ostream& out, const Dataset& ds) {
    out << trajectory_header << '\n';
    for (std::size_t t = 0; t < ds.size(); ++t) {
        const Trajectory& traj = ds.trajectories[t];
        const std::string id = ds.labels.empty() ? std::to_string(traj.id) : ds.labels[t];
        for (std::size_t i = 0; i < traj.points.size(); ++i) {
            out << id << ',' << i << ',' << format_double(traj.points[i].x) << ','
                << format_double(traj.points[i].y) << '\n';
        }
    }
}

void write_trajectories(const std::filesystem::path& path, const Dataset& ds) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::IoError, "cannot open " + path.string() + " for writing");
    write_trajectories(out, ds);
    out.flush();
    if (!out) throw Error(ErrorCode::IoError, "failed writing " + path.string());
}

namespace {

template <typename T>
std::optional<T> parse_number(std::string_view s) {
    T value{};
    if (s.empty()) return std::nullopt;
    // from_chars rejects a leading '+', which we accept for decimals.
    if constexpr (std::is_floating_point_v<T>) {
        if (s.front() == '+') s.remove_prefix(1);
    }
    const auto res = std::from_chars(s.data(), s.data() + s.size(), value);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size()) return std::nullopt;
    return value;
}

[[noreturn]] void parse_fail(std::size_t line, const std::string& what) {
    throw Error(ErrorCode::ParseError, "line " + std::to_string(line) + ": " + what);
}

} // namespace

Dataset read_trajectories(std::istream& in, std::string name) {
    Dataset ds;
    ds.name = std::move(name);
    ds.source = "csv";

    std::string line;
    std::size_t line_no = 0;
    if (!std::getline(in, line)) parse_fail(1, "missing header");
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != trajectory_header) {
        parse_fail(line_no, "expected header '" + std::string(trajectory_header) + "'");
    }

    std::vector<std::string> labels;
    std::unordered_set<std::string> seen;
    std::uint64_t last_seq = 0;
    std::size_t group_start_line = 0;
    auto close_group = [&] {
        if (!ds.trajectories.empty() && ds.trajectories.back().points.size() < 2) {
            parse_fail(group_start_line, "trajectory '" + labels.back() + "' has a single point");
        }
    };

    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) {
            if (in.peek() == std::char_traits<char>::eof()) break;
            parse_fail(line_no, "empty line");
        }
        const auto fields = split_fields(line);
        if (fields.size() != 4) {
            parse_fail(line_no, "expected 4 fields, found " + std::to_string(fields.size()));
        }
        if (fields[0].empty()) parse_fail(line_no, "empty traj_id");
        const auto seq = parse_number<std::uint64_t>(fields[1]);
        if (!seq) parse_fail(line_no, "seq is not a non-negative integer");
        const auto x = parse_number<double>(fields[2]);
        const auto y = parse_number<double>(fields[3]);
        if (!x || !y) parse_fail(line_no, "coordinate is not a decimal number");
        if (!std::isfinite(*x) || !std::isfinite(*y)) parse_fail(line_no, "non-finite coordinate");

        const std::string id(fields[0]);
        if (labels.empty() || labels.back() != id) {
            close_group();
            if (!seen.insert(id).second) {
                parse_fail(line_no, "traj_id '" + id + "' reappears; rows must be grouped");
            }
            labels.push_back(id);
            ds.trajectories.push_back({static_cast<TrajId>(ds.trajectories.size()), {}});
            group_start_line = line_no;
        } else if (*seq != last_seq + 1) {
            parse_fail(line_no, "seq " + std::to_string(*seq) + " does not follow " +
                                    std::to_string(last_seq));
        }
        last_seq = *seq;
        ds.trajectories.back().points.push_back({*x, *y});
    }
    close_group();

    bool numeric = true;
    std::vector<TrajId> ids;
    ids.reserve(labels.size());
    for (const auto& l : labels) {
        const auto v = parse_number<std::uint64_t>(l);
        if (!v || std::to_string(*v) != l) {
            numeric = false;
            break;
        }
        ids.push_back(*v);
    }
    if (numeric) {
        for (std::size_t i = 0; i < ids.size(); ++i) ds.trajectories[i].id = ids[i];
    } else {
        ds.labels = std::move(labels);
    }
    return ds;
}

Dataset read_trajectories(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
    return read_trajectories(in, path.stem().string());
}

} // namespace trajbench::csv
