#include "trajbench/bench.hpp"

#include "trajbench/csv.hpp"
#include "trajbench/error.hpp"
#include "trajbench/random.hpp"

#include <algorithm>
#include <cmath>

namespace trajbench {

std::string mixed_op_kind(double ratio, std::string_view kind) {
    return "mixed@" + csv::format_double(ratio) + ":" + std::string(kind);
}

BenchWorkload make_bench_workload(const Dataset& ds, const WorkloadSpec& spec, const SuiteOptions& options) {
    BenchWorkload w;
    const bool mixed = !options.read_ratios.empty();
    if (options.reads || mixed) {
        BackendConfig oracle_cfg = options.backend;
        oracle_cfg.format = StorageFormat::Whole;
        oracle_cfg.index = IndexKind::SeqScan;
        const Backend oracle = Backend::bulk_load(ds, oracle_cfg);
        w.reads = make_read_configs(ds, oracle, spec);
    }
    if (options.writes || mixed) {
        WorkloadSpec wspec = spec;
        std::size_t most_writes = 0;
        for (double r : options.read_ratios) {
            const auto reads = static_cast<std::size_t>(std::llround(r * static_cast<double>(options.mixed_ops)));
            most_writes = std::max(most_writes, options.mixed_ops - reads);
        }
        wspec.configs_per_type = std::max(spec.configs_per_type, (most_writes + 2) / 3);
        w.writes = make_write_configs(ds, wspec);
    }
    return w;
}

namespace {

double micros(std::chrono::nanoseconds ns) { return static_cast<double>(ns.count()) / 1000.0; }

struct Cell {
    const Dataset& ds;
    BackendConfig cfg;
    std::vector<BenchRecord>& out;

    BenchRecord record(std::string op_kind, std::size_t config_id, std::size_t run_id) const {
        BenchRecord r;
        r.dataset = ds.name;
        r.format = cfg.format;
        r.index = cfg.index;
        r.op_kind = std::move(op_kind);
        r.config_id = config_id;
        r.run_id = run_id;
        return r;
    }

    Backend load() const { return Backend::bulk_load(ds, cfg); }
};

// Applies one write config, reloading first if an earlier mutation removed
// one of its targets.
WriteResult apply_write(Backend& h, const WriteConfig& wc, const Cell& cell) {
    const auto missing = [&](TrajId id) { return !h.contains(id); };
    const bool stale =
        std::any_of(wc.deletes.begin(), wc.deletes.end(), missing) ||
        std::any_of(wc.updates.begin(), wc.updates.end(), [&](const Replacement& r) { return missing(r.id); }) ||
        std::any_of(wc.inserts.begin(), wc.inserts.end(), [&](const Trajectory& t) { return h.contains(t.id); });
    if (stale) h = cell.load();
    switch (wc.kind) {
    case WriteKind::Insert: return w_insert(h, wc.inserts);
    case WriteKind::Update: return w_update(h, wc.updates);
    case WriteKind::Delete: return w_delete(h, wc.deletes);
    }
    throw Error(ErrorCode::InvalidParams, "unknown write kind");
}

void run_reads(const Cell& cell, const SuiteOptions& opt, const ReadConfigs& reads) {
    const Backend h = cell.load();
    for (std::size_t w = 0; w < opt.warmup; ++w) {
        for (QueryKind kind : all_query_kinds) {
            for (const auto& q : reads.of(kind)) (void)run_query(h, q);
        }
    }
    for (std::size_t rep = 0; rep < opt.repetitions; ++rep) {
        for (QueryKind kind : all_query_kinds) {
            const auto& list = reads.of(kind);
            for (std::size_t c = 0; c < list.size(); ++c) {
                const QueryResult res = run_query(h, list[c]);
                BenchRecord r = cell.record(to_string(kind), c, rep);
                r.elapsed_us = micros(res.elapsed);
                r.stats = res.stats;
                r.result_size = res.ids.size();
                cell.out.push_back(std::move(r));
            }
        }
    }
}

void run_writes(const Cell& cell, const SuiteOptions& opt, const WritePlan& plan) {
    for (std::size_t rep = 0; rep < opt.repetitions; ++rep) {
        Backend h = cell.load();
        for (bool batch : {false, true}) {
            for (WriteKind kind : all_write_kinds) {
                const auto& list = plan.of(kind, batch);
                const std::string op = std::string(to_string(kind)) + (batch ? "_batch" : "");
                for (std::size_t c = 0; c < list.size(); ++c) {
                    const WriteResult res = apply_write(h, list[c], cell);
                    BenchRecord r = cell.record(op, c, rep);
                    r.elapsed_us = micros(res.elapsed);
                    r.stats = res.stats;
                    r.result_size = res.rows;
                    cell.out.push_back(std::move(r));
                }
            }
        }
    }
}

void run_mixed(const Cell& cell, const SuiteOptions& opt, const WorkloadSpec& spec, const BenchWorkload& w,
               double ratio) {
    const auto ops = make_mixed_sequence(ratio, opt.mixed_ops, derive_seed(spec.seed, 300));
    for (std::size_t rep = 0; rep < opt.repetitions; ++rep) {
        Backend h = cell.load();
        for (std::size_t i = 0; i < ops.size(); ++i) {
            const MixedOp& op = ops[i];
            BenchRecord r;
            if (op.read) {
                const auto& list = w.reads.of(op.query);
                const QueryResult res = run_query(h, list[op.ordinal % list.size()]);
                r = cell.record(mixed_op_kind(ratio, to_string(op.query)), i, rep);
                r.elapsed_us = micros(res.elapsed);
                r.stats = res.stats;
                r.result_size = res.ids.size();
            } else {
                const auto& list = w.writes.of(op.write, false);
                const WriteResult res = apply_write(h, list[op.ordinal % list.size()], cell);
                r = cell.record(mixed_op_kind(ratio, to_string(op.write)), i, rep);
                r.elapsed_us = micros(res.elapsed);
                r.stats = res.stats;
                r.result_size = res.rows;
            }
            cell.out.push_back(std::move(r));
        }
    }
}

} // namespace

SuiteResult run_suite(const Dataset& ds, const SuiteOptions& options, const WorkloadSpec& spec,
                      const BenchWorkload& workload) {
    SuiteResult result;
    for (StorageFormat format : options.formats) {
        for (IndexKind index : options.indexes) {
            BackendConfig cfg = options.backend;
            cfg.format = format;
            cfg.index = index;
            std::vector<BenchRecord> cell_records;
            const Cell cell{ds, cfg, cell_records};
            try {
                if (options.reads) run_reads(cell, options, workload.reads);
                if (options.writes) run_writes(cell, options, workload.writes);
                for (double ratio : options.read_ratios) run_mixed(cell, options, spec, workload, ratio);
            } catch (const Error& e) {
                result.errors.push_back(ds.name + "/" + to_string(format) + "/" + to_string(index) + ": " +
                                        e.what());
                continue;
            }
            result.records.insert(result.records.end(), std::make_move_iterator(cell_records.begin()),
                                  std::make_move_iterator(cell_records.end()));
        }
    }
    return result;
}

} // namespace trajbench
