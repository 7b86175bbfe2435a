#include "trajbench/report.hpp"

#include "trajbench/csv.hpp"
#include "trajbench/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>

namespace trajbench {

SummaryStat summarize(std::span<const double> values) {
    if (values.empty()) throw Error(ErrorCode::EmptyGroup, "no values to summarize");
    std::vector<double> v(values.begin(), values.end());
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    SummaryStat s;
    s.count = n;
    s.mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(n);
    s.median = n % 2 ? v[n / 2] : (v[n / 2 - 1] + v[n / 2]) / 2;
    const auto rank = static_cast<std::size_t>(std::ceil(0.95 * static_cast<double>(n)));
    s.p95 = v[std::max<std::size_t>(rank, 1) - 1];
    double ss = 0.0;
    for (double x : v) ss += (x - s.mean) * (x - s.mean);
    const double sd = n > 1 ? std::sqrt(ss / static_cast<double>(n - 1)) : 0.0;
    const double half = 1.96 * sd / std::sqrt(static_cast<double>(n));
    s.ci95_low = s.mean - half;
    s.ci95_high = s.mean + half;
    return s;
}

namespace {

std::string field_of(const BenchRecord& r, GroupField f) {
    switch (f) {
    case GroupField::Dataset: return r.dataset;
    case GroupField::Format: return to_string(r.format);
    case GroupField::Index: return to_string(r.index);
    case GroupField::OpKind: return r.op_kind;
    }
    return {};
}

bool is_read_kind(const std::string& op) { return parse_query_kind(op).has_value(); }

} // namespace

std::map<GroupKey, SummaryStat> summarize(std::span<const BenchRecord> records, std::span<const GroupField> keys) {
    std::map<GroupKey, std::vector<double>> groups;
    for (const auto& r : records) {
        GroupKey key;
        for (GroupField f : keys) key.push_back(field_of(r, f));
        groups[key].push_back(r.elapsed_us);
    }
    std::map<GroupKey, SummaryStat> out;
    for (const auto& [key, values] : groups) out.emplace(key, summarize(values));
    return out;
}

double pearson_r(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.empty()) {
        throw Error(ErrorCode::InvalidParams, "pearson_r needs equal, non-empty samples");
    }
    const double n = static_cast<double>(x.size());
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxy = 0.0;
    double sxx = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx == 0.0 || syy == 0.0) return std::numeric_limits<double>::quiet_NaN();
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

double correlation_t(double r, std::size_t n) {
    if (std::abs(r) == 1.0) return std::copysign(std::numeric_limits<double>::infinity(), r);
    return r * std::sqrt((static_cast<double>(n) - 2.0) / (1.0 - r * r));
}

std::vector<DatasetSpeedup> format_speedups(std::span<const BenchRecord> records, IndexKind index) {
    // dataset -> kind -> format -> (sum, count)
    std::map<std::string, std::map<std::string, std::map<StorageFormat, std::pair<double, std::size_t>>>> acc;
    for (const auto& r : records) {
        if (r.index != index || !is_read_kind(r.op_kind)) continue;
        auto& cell = acc[r.dataset][r.op_kind][r.format];
        cell.first += r.elapsed_us;
        ++cell.second;
    }
    std::vector<DatasetSpeedup> out;
    for (const auto& [dataset, kinds] : acc) {
        DatasetSpeedup ds{dataset, 0.0, {}};
        for (const auto& [kind, formats] : kinds) {
            auto seg = formats.find(StorageFormat::Segmented);
            auto whole = formats.find(StorageFormat::Whole);
            if (seg == formats.end() || whole == formats.end()) continue;
            const double seg_mean = seg->second.first / static_cast<double>(seg->second.second);
            const double whole_mean = whole->second.first / static_cast<double>(whole->second.second);
            ds.per_kind[kind] = seg_mean / whole_mean;
        }
        if (ds.per_kind.empty()) continue;
        double sum = 0.0;
        for (const auto& [kind, s] : ds.per_kind) sum += s;
        ds.speedup = sum / static_cast<double>(ds.per_kind.size());
        out.push_back(std::move(ds));
    }
    return out;
}

FormatComparison compare_formats(std::span<const BenchRecord> records, IndexKind index,
                                 const std::map<std::string, double>& goc_by_dataset) {
    FormatComparison cmp;
    for (auto& s : format_speedups(records, index)) {
        auto it = goc_by_dataset.find(s.dataset);
        if (it == goc_by_dataset.end()) continue;
        cmp.goc.push_back(it->second);
        cmp.speedups.push_back(std::move(s));
    }
    if (cmp.speedups.size() < 3) {
        throw Error(ErrorCode::InsufficientPoints, "GOC-speedup correlation needs at least 3 datasets, have " +
                                                       std::to_string(cmp.speedups.size()));
    }
    std::vector<double> y;
    for (const auto& s : cmp.speedups) y.push_back(s.speedup);
    cmp.r = pearson_r(cmp.goc, y);
    cmp.t = correlation_t(cmp.r, y.size());
    return cmp;
}

namespace csv {

void write_records(std::ostream& out, std::span<const BenchRecord> records) {
    out << records_header << '\n';
    for (const auto& r : records) {
        out << r.dataset << ',' << to_string(r.format) << ',' << to_string(r.index) << ',' << r.op_kind << ','
            << r.config_id << ',' << r.run_id << ',' << format_double(r.elapsed_us) << ','
            << r.stats.nodes_visited << ',' << r.stats.ranges_scanned << ',' << r.stats.candidates_returned << ','
            << r.stats.exact_tests << ',' << r.stats.rows_touched << ',' << r.result_size << '\n';
    }
}

namespace {

template <typename T>
T field(std::string_view s, std::size_t line, const char* name) {
    T v{};
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size()) {
        throw Error(ErrorCode::ParseError, "line " + std::to_string(line) + ": bad " + name);
    }
    return v;
}

} // namespace

std::vector<BenchRecord> read_records(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != records_header) {
        throw Error(ErrorCode::ParseError, "line 1: expected records header");
    }
    std::vector<BenchRecord> out;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto f = split_fields(line);
        if (f.size() != 13) throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": expected 13 fields");
        BenchRecord r;
        r.dataset = std::string(f[0]);
        const auto fmt = parse_format(f[1]);
        const auto idx = parse_index(f[2]);
        if (!fmt || !idx) throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": bad format/index");
        r.format = *fmt;
        r.index = *idx;
        r.op_kind = std::string(f[3]);
        r.config_id = field<std::size_t>(f[4], line_no, "config_id");
        r.run_id = field<std::size_t>(f[5], line_no, "run_id");
        r.elapsed_us = field<double>(f[6], line_no, "elapsed_us");
        r.stats.nodes_visited = field<std::uint64_t>(f[7], line_no, "nodes_visited");
        r.stats.ranges_scanned = field<std::uint64_t>(f[8], line_no, "ranges_scanned");
        r.stats.candidates_returned = field<std::uint64_t>(f[9], line_no, "candidates");
        r.stats.exact_tests = field<std::uint64_t>(f[10], line_no, "exact_tests");
        r.stats.rows_touched = field<std::uint64_t>(f[11], line_no, "rows_touched");
        r.result_size = field<std::size_t>(f[12], line_no, "result_size");
        out.push_back(std::move(r));
    }
    return out;
}

} // namespace csv

void write_dataset_info(std::ostream& out, std::span<const DatasetInfo> info) {
    out << "dataset,goc,ann,trajectories,segments\n";
    for (const auto& d : info) {
        out << d.dataset << ',' << csv::format_double(d.goc) << ',' << csv::format_double(d.ann) << ','
            << d.trajectories << ',' << d.segments << '\n';
    }
}

std::vector<DatasetInfo> read_dataset_info(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != "dataset,goc,ann,trajectories,segments") {
        throw Error(ErrorCode::ParseError, "line 1: expected dataset info header");
    }
    std::vector<DatasetInfo> out;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto f = csv::split_fields(line);
        if (f.size() != 5) throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": expected 5 fields");
        DatasetInfo d;
        d.dataset = std::string(f[0]);
        d.goc = csv::field<double>(f[1], line_no, "goc");
        d.ann = csv::field<double>(f[2], line_no, "ann");
        d.trajectories = csv::field<std::size_t>(f[3], line_no, "trajectories");
        d.segments = csv::field<std::size_t>(f[4], line_no, "segments");
        out.push_back(std::move(d));
    }
    return out;
}

namespace {

std::string fixed(double v, int digits = 2) {
    if (std::isnan(v)) return "undefined";
    std::ostringstream os;
    os << std::fixed << std::setprecision(digits) << v;
    return os.str();
}

} // namespace

void write_summary(std::ostream& out, std::span<const BenchRecord> records, std::span<const DatasetInfo> datasets,
                   const std::vector<std::pair<std::string, std::string>>& metadata,
                   std::span<const std::string> errors) {
    out << "# Benchmark summary\n\n## Run metadata\n\n";
    for (const auto& [k, v] : metadata) out << "- " << k << ": " << v << '\n';
    out << "- records: " << records.size() << "\n\n";

    if (!errors.empty()) {
        out << "## Aborted cells\n\n";
        for (const auto& e : errors) out << "- " << e << '\n';
        out << '\n';
    }

    if (!datasets.empty()) {
        out << "## Datasets\n\n| dataset | trajectories | segments | GOC | ANN |\n|---|---|---|---|---|\n";
        for (const auto& d : datasets) {
            out << "| " << d.dataset << " | " << d.trajectories << " | " << d.segments << " | " << fixed(d.goc, 4)
                << " | " << fixed(d.ann, 4) << " |\n";
        }
        out << '\n';
    }

    const GroupField cell_keys[] = {GroupField::Format, GroupField::Index};
    out << "## Cells\n\n| format | index | operations | mean us | median us | p95 us |\n|---|---|---|---|---|---|\n";
    for (const auto& [key, s] : summarize(records, cell_keys)) {
        out << "| " << key[0] << " | " << key[1] << " | " << s.count << " | " << fixed(s.mean) << " | "
            << fixed(s.median) << " | " << fixed(s.p95) << " |\n";
    }
    out << '\n';

    const GroupField op_keys[] = {GroupField::Dataset, GroupField::Format, GroupField::Index, GroupField::OpKind};
    out << "## Operations per cell\n\n"
        << "| dataset | format | index | op | count | mean us | median us | p95 us | ci95 low | ci95 high |\n"
        << "|---|---|---|---|---|---|---|---|---|---|\n";
    for (const auto& [key, s] : summarize(records, op_keys)) {
        out << "| " << key[0] << " | " << key[1] << " | " << key[2] << " | " << key[3] << " | " << s.count << " | "
            << fixed(s.mean) << " | " << fixed(s.median) << " | " << fixed(s.p95) << " | " << fixed(s.ci95_low)
            << " | " << fixed(s.ci95_high) << " |\n";
    }
    out << '\n';

    std::map<std::string, double> goc;
    for (const auto& d : datasets) goc[d.dataset] = d.goc;
    std::set<IndexKind> indexes;
    for (const auto& r : records) indexes.insert(r.index);

    out << "## Format speedup (mean segmented / mean whole, read queries)\n\n";
    for (IndexKind index : indexes) {
        const auto speedups = format_speedups(records, index);
        if (speedups.empty()) continue;
        out << "### " << to_string(index) << "\n\n| dataset | GOC | speedup |";
        std::set<std::string> kinds;
        for (const auto& s : speedups) {
            for (const auto& [k, v] : s.per_kind) kinds.insert(k);
        }
        for (const auto& k : kinds) out << ' ' << k << " |";
        out << "\n|---|---|---|";
        for (std::size_t i = 0; i < kinds.size(); ++i) out << "---|";
        out << '\n';
        for (const auto& s : speedups) {
            auto g = goc.find(s.dataset);
            out << "| " << s.dataset << " | " << (g == goc.end() ? "n/a" : fixed(g->second, 4)) << " | "
                << fixed(s.speedup, 3) << " |";
            for (const auto& k : kinds) {
                auto it = s.per_kind.find(k);
                out << ' ' << (it == s.per_kind.end() ? "n/a" : fixed(it->second, 3)) << " |";
            }
            out << '\n';
        }
        out << '\n';
    }

    out << "## GOC vs. speedup\n\n";
    for (IndexKind index : indexes) {
        try {
            const FormatComparison cmp = compare_formats(records, index, goc);
            out << "- " << to_string(index) << ": Pearson r = " << fixed(cmp.r, 4) << ", t = " << fixed(cmp.t, 4)
                << " (n = " << cmp.speedups.size() << "); pairs:";
            for (std::size_t i = 0; i < cmp.speedups.size(); ++i) {
                out << " (" << fixed(cmp.goc[i], 4) << ", " << fixed(cmp.speedups[i].speedup, 3) << ")";
            }
            out << '\n';
        } catch (const Error& e) {
            out << "- " << to_string(index) << ": " << e.what() << '\n';
        }
    }
}

void write_summary_csv(std::ostream& out, std::span<const BenchRecord> records) {
    out << "dataset,format,index,op_kind,count,mean_us,median_us,p95_us,ci95_low_us,ci95_high_us\n";
    const GroupField keys[] = {GroupField::Dataset, GroupField::Format, GroupField::Index, GroupField::OpKind};
    for (const auto& [key, s] : summarize(records, keys)) {
        out << key[0] << ',' << key[1] << ',' << key[2] << ',' << key[3] << ',' << s.count << ','
            << csv::format_double(s.mean) << ',' << csv::format_double(s.median) << ','
            << csv::format_double(s.p95) << ',' << csv::format_double(s.ci95_low) << ','
            << csv::format_double(s.ci95_high) << '\n';
    }
}

namespace {

template <typename Writer>
void write_file(const std::filesystem::path& path, Writer&& writer) {
    if (path.empty()) return;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::IoError, "cannot open " + path.string() + " for writing");
    writer(out);
    out.flush();
    if (!out) throw Error(ErrorCode::IoError, "failed writing " + path.string());
}

} // namespace

void emit_report(std::span<const BenchRecord> records, std::span<const DatasetInfo> datasets,
                 const std::vector<std::pair<std::string, std::string>>& metadata,
                 std::span<const std::string> errors, const ReportPaths& paths) {
    if (records.empty()) throw Error(ErrorCode::EmptyGroup, "no benchmark records to report");
    write_file(paths.records_csv, [&](std::ostream& o) { csv::write_records(o, records); });
    write_file(paths.summary_md, [&](std::ostream& o) { write_summary(o, records, datasets, metadata, errors); });
    write_file(paths.summary_csv, [&](std::ostream& o) { write_summary_csv(o, records); });
}

} // namespace trajbench
