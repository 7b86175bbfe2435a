#pragma once

#include "trajbench/backend.hpp"
#include "trajbench/engine.hpp"

#include <array>
#include <cstdint>
#include <iosfwd>
#include <vector>

namespace trajbench {

/// Query-shape and batch parameters. Lengths are fractions of the dataset
/// bounding-box width (height for the vertical rect side).
struct WorkloadSpec {
    std::size_t configs_per_type = 50;
    double rect_side_fraction = 0.05;
    std::size_t k = 10;
    double proximity_fraction = 0.02;
    std::size_t batch_insert_size = 100;
    double batch_mutation_fraction = 0.01;
    std::size_t max_rejects = 1000;
    std::uint64_t seed = 1;
    ContainsMode contains_mode = ContainsMode::Partial;
    double step_fraction = 0.002;  ///< step length of generated inserts and update offsets
    std::size_t insert_segments = 0; ///< 0: median segment count of the dataset

    friend bool operator==(const WorkloadSpec&, const WorkloadSpec&) = default;
};

/// Throws InvalidParams when a fraction is outside (0,1] or a count is zero.
void validate(const WorkloadSpec& spec);

/// `key = value` lines; `#` starts a comment.
void write_workload_spec(std::ostream& out, const WorkloadSpec& spec);
/// Unknown keys and malformed values throw ParseError.
WorkloadSpec read_workload_spec(std::istream& in);

inline constexpr std::array<QueryKind, 4> all_query_kinds{
    QueryKind::Intersection, QueryKind::Contains, QueryKind::Knn, QueryKind::Proximity};

/// configs_per_type distinct specs per query kind, indexed by QueryKind.
struct ReadConfigs {
    std::array<std::vector<QuerySpec>, 4> by_kind;

    const std::vector<QuerySpec>& of(QueryKind k) const { return by_kind[static_cast<std::size_t>(k)]; }
    std::size_t total() const;
};

/// Contains rects lie inside the dataset bbox; targets come from the dataset.
/// Contains, Intersection and Proximity configs are re-drawn until the
/// oracle returns at least one match (at most max_rejects draws per config);
/// duplicates are re-drawn too. Throws UnsatisfiableWorkload when the budget
/// runs out.
ReadConfigs make_read_configs(const Dataset& ds, const Backend& oracle, const WorkloadSpec& spec);

enum class WriteKind { Insert, Update, Delete };
const char* to_string(WriteKind k);
inline constexpr std::array<WriteKind, 3> all_write_kinds{WriteKind::Insert, WriteKind::Update,
                                                          WriteKind::Delete};

struct WriteConfig {
    WriteKind kind = WriteKind::Insert;
    bool batch = false;
    std::vector<Trajectory> inserts;
    std::vector<Replacement> updates;
    std::vector<TrajId> deletes;

    friend bool operator==(const WriteConfig&, const WriteConfig&) = default;
};

/// configs_per_type single and batch configs per write kind. Inserted
/// trajectories carry fresh ids. Delete targets are disjoint across all
/// delete configs when the dataset is large enough, and update targets never
/// overlap delete targets, so a plan can be replayed on one backend.
struct WritePlan {
    std::array<std::vector<WriteConfig>, 3> single;
    std::array<std::vector<WriteConfig>, 3> batch;

    const std::vector<WriteConfig>& of(WriteKind k, bool is_batch) const {
        return (is_batch ? batch : single)[static_cast<std::size_t>(k)];
    }
};

WritePlan make_write_configs(const Dataset& ds, const WorkloadSpec& spec);

struct MixedOp {
    bool read = true;
    QueryKind query = QueryKind::Intersection;
    WriteKind write = WriteKind::Insert;
    std::size_t ordinal = 0; ///< position among operations of the same kind

    friend bool operator==(const MixedOp&, const MixedOp&) = default;
};

/// round(read_ratio * total_ops) reads cycling through the four query kinds,
/// the rest writes cycling through the three write kinds, in a seeded shuffle.
std::vector<MixedOp> make_mixed_sequence(double read_ratio, std::size_t total_ops, std::uint64_t seed);

/// Human-readable dump of generated configs, used to check replayability.
void write_read_configs(std::ostream& out, const ReadConfigs& configs);

} // namespace trajbench
