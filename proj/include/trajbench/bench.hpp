#pragma once

#include "trajbench/backend.hpp"
#include "trajbench/workload.hpp"

#include <string>
#include <vector>

namespace trajbench {

/// One timed operation. `op_kind` is a query kind, a write kind (suffixed
/// `_batch` for batch variants) or `mixed@<ratio>:<kind>` inside a mixed run.
struct BenchRecord {
    std::string dataset;
    StorageFormat format = StorageFormat::Whole;
    IndexKind index = IndexKind::SeqScan;
    std::string op_kind;
    std::size_t config_id = 0;
    std::size_t run_id = 0;
    double elapsed_us = 0.0;
    QueryStats stats;
    std::size_t result_size = 0;
};

struct SuiteOptions {
    std::vector<StorageFormat> formats{StorageFormat::Segmented, StorageFormat::Whole};
    std::vector<IndexKind> indexes{IndexKind::RTree, IndexKind::QuadTree, IndexKind::BlockRange,
                                   IndexKind::SeqScan};
    bool reads = true;
    bool writes = false;
    std::vector<double> read_ratios; ///< one mixed run per ratio
    std::size_t mixed_ops = 200;
    std::size_t repetitions = 3;
    std::size_t warmup = 1;
    BackendConfig backend; ///< tuning knobs; format/index are taken from the matrix
};

struct BenchWorkload {
    ReadConfigs reads;
    WritePlan writes;
};

/// Builds read configs against a SeqScan/Whole oracle and a write plan large
/// enough for every mixed sequence requested in `options`.
BenchWorkload make_bench_workload(const Dataset& ds, const WorkloadSpec& spec, const SuiteOptions& options);

struct SuiteResult {
    std::vector<BenchRecord> records;
    std::vector<std::string> errors; ///< one entry per aborted cell
};

/// Runs every (format x index) cell. Each cell starts from a fresh bulk
/// load. Reads get `warmup` untimed passes before `repetitions` timed ones.
/// Write and mixed runs reload the backend before every repetition so
/// mutations never compound across repetitions. A backend error aborts its
/// cell and is recorded in `errors`.
SuiteResult run_suite(const Dataset& ds, const SuiteOptions& options, const WorkloadSpec& spec,
                      const BenchWorkload& workload);

std::string mixed_op_kind(double ratio, std::string_view kind);

} // namespace trajbench
