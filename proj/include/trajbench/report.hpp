#pragma once

#include "trajbench/bench.hpp"

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace trajbench {

struct SummaryStat {
    double mean = 0.0;
    double median = 0.0;
    double p95 = 0.0;      ///< nearest rank
    double ci95_low = 0.0; ///< mean - 1.96 s / sqrt(count)
    double ci95_high = 0.0;
    std::size_t count = 0;
};

/// Throws EmptyGroup for no values.
SummaryStat summarize(std::span<const double> values);

enum class GroupField { Dataset, Format, Index, OpKind };

using GroupKey = std::vector<std::string>;

/// Elapsed-time statistics per distinct combination of the chosen fields.
std::map<GroupKey, SummaryStat> summarize(std::span<const BenchRecord> records,
                                          std::span<const GroupField> keys);

/// Pearson correlation; NaN when either side has zero variance.
double pearson_r(std::span<const double> x, std::span<const double> y);
/// r * sqrt((n-2) / (1-r^2))
double correlation_t(double r, std::size_t n);

struct DatasetSpeedup {
    std::string dataset;
    double speedup = 0.0; ///< mean over read kinds of mean(segmented) / mean(whole)
    std::map<std::string, double> per_kind;
};

/// Per-dataset format speedup for one index over the read query kinds
/// present in both formats. Datasets lacking either format are skipped.
std::vector<DatasetSpeedup> format_speedups(std::span<const BenchRecord> records, IndexKind index);

struct FormatComparison {
    std::vector<DatasetSpeedup> speedups;
    std::vector<double> goc; ///< parallel to speedups
    double r = 0.0;
    double t = 0.0;
};

/// Speedups plus the Pearson r (and t statistic) between dataset GOC and
/// speedup. Throws InsufficientPoints with fewer than three datasets that
/// have both formats and a known GOC.
FormatComparison compare_formats(std::span<const BenchRecord> records, IndexKind index,
                                 const std::map<std::string, double>& goc_by_dataset);

namespace csv {

inline constexpr std::string_view records_header =
    "dataset,format,index,op_kind,config_id,run_id,elapsed_us,nodes_visited,ranges_scanned,"
    "candidates,exact_tests,rows_touched,result_size";

void write_records(std::ostream& out, std::span<const BenchRecord> records);
std::vector<BenchRecord> read_records(std::istream& in);

} // namespace csv

/// Per-dataset characterization carried alongside the records file.
struct DatasetInfo {
    std::string dataset;
    double goc = 0.0;
    double ann = 0.0;
    std::size_t trajectories = 0;
    std::size_t segments = 0;
};

void write_dataset_info(std::ostream& out, std::span<const DatasetInfo> info);
std::vector<DatasetInfo> read_dataset_info(std::istream& in);

/// Markdown summary: metadata, per-cell tables, format speedups and the
/// GOC-speedup correlation (when at least three datasets are present).
void write_summary(std::ostream& out, std::span<const BenchRecord> records,
                   std::span<const DatasetInfo> datasets,
                   const std::vector<std::pair<std::string, std::string>>& metadata,
                   std::span<const std::string> errors = {});

/// Plot-ready table of the per-cell statistics.
void write_summary_csv(std::ostream& out, std::span<const BenchRecord> records);

struct ReportPaths {
    std::filesystem::path records_csv;
    std::filesystem::path summary_md;
    std::filesystem::path summary_csv;
};

/// Writes the records CSV, the summary document and the plot-ready summary
/// table. Throws IoError when a file cannot be written.
void emit_report(std::span<const BenchRecord> records, std::span<const DatasetInfo> datasets,
                 const std::vector<std::pair<std::string, std::string>>& metadata,
                 std::span<const std::string> errors, const ReportPaths& paths);

} // namespace trajbench
