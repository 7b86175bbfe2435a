#include "trajbench/workload.hpp"

#include "trajbench/csv.hpp"
#include "trajbench/datagen.hpp"
#include "trajbench/error.hpp"
#include "trajbench/random.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>
#include <istream>
#include <map>
#include <numbers>
#include <ostream>
#include <set>
#include <string>

namespace trajbench {

void validate(const WorkloadSpec& spec) {
    auto fraction = [](double v, const char* name) {
        if (!(v > 0.0 && v <= 1.0)) {
            throw Error(ErrorCode::InvalidParams, std::string(name) + " must lie in (0,1]");
        }
    };
    fraction(spec.rect_side_fraction, "rect_side_fraction");
    fraction(spec.proximity_fraction, "proximity_fraction");
    fraction(spec.batch_mutation_fraction, "batch_mutation_fraction");
    fraction(spec.step_fraction, "step_fraction");
    if (spec.configs_per_type < 1 || spec.k < 1 || spec.batch_insert_size < 1 || spec.max_rejects < 1) {
        throw Error(ErrorCode::InvalidParams, "workload counts must be >= 1");
    }
}

void write_workload_spec(std::ostream& out, const WorkloadSpec& s) {
    using csv::format_double;
    out << "# trajbench workload\n"
        << "configs_per_type = " << s.configs_per_type << '\n'
        << "rect_side_fraction = " << format_double(s.rect_side_fraction) << '\n'
        << "k = " << s.k << '\n'
        << "proximity_fraction = " << format_double(s.proximity_fraction) << '\n'
        << "batch_insert_size = " << s.batch_insert_size << '\n'
        << "batch_mutation_fraction = " << format_double(s.batch_mutation_fraction) << '\n'
        << "max_rejects = " << s.max_rejects << '\n'
        << "seed = " << s.seed << '\n'
        << "contains_mode = " << to_string(s.contains_mode) << '\n'
        << "step_fraction = " << format_double(s.step_fraction) << '\n'
        << "insert_segments = " << s.insert_segments << '\n';
}

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

template <typename T>
T parse_value(const std::string& text, std::size_t line) {
    T v{};
    const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (text.empty() || res.ec != std::errc() || res.ptr != text.data() + text.size()) {
        throw Error(ErrorCode::ParseError, "line " + std::to_string(line) + ": bad value '" + text + "'");
    }
    return v;
}

} // namespace

WorkloadSpec read_workload_spec(std::istream& in) {
    WorkloadSpec s;
    std::map<std::string, std::function<void(const std::string&, std::size_t)>> setters{
        {"configs_per_type", [&](auto& v, auto l) { s.configs_per_type = parse_value<std::size_t>(v, l); }},
        {"rect_side_fraction", [&](auto& v, auto l) { s.rect_side_fraction = parse_value<double>(v, l); }},
        {"k", [&](auto& v, auto l) { s.k = parse_value<std::size_t>(v, l); }},
        {"proximity_fraction", [&](auto& v, auto l) { s.proximity_fraction = parse_value<double>(v, l); }},
        {"batch_insert_size", [&](auto& v, auto l) { s.batch_insert_size = parse_value<std::size_t>(v, l); }},
        {"batch_mutation_fraction",
         [&](auto& v, auto l) { s.batch_mutation_fraction = parse_value<double>(v, l); }},
        {"max_rejects", [&](auto& v, auto l) { s.max_rejects = parse_value<std::size_t>(v, l); }},
        {"seed", [&](auto& v, auto l) { s.seed = parse_value<std::uint64_t>(v, l); }},
        {"contains_mode",
         [&](auto& v, auto l) {
             if (v == "partial") {
                 s.contains_mode = ContainsMode::Partial;
             } else if (v == "complete") {
                 s.contains_mode = ContainsMode::Complete;
             } else {
                 throw Error(ErrorCode::ParseError, "line " + std::to_string(l) + ": contains_mode must be partial|complete");
             }
         }},
        {"step_fraction", [&](auto& v, auto l) { s.step_fraction = parse_value<double>(v, l); }},
        {"insert_segments", [&](auto& v, auto l) { s.insert_segments = parse_value<std::size_t>(v, l); }},
    };
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        const std::string body = trim(std::string_view(line).substr(0, hash));
        if (body.empty()) continue;
        const auto eq = body.find('=');
        if (eq == std::string::npos) {
            throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": expected key = value");
        }
        const std::string key = trim(std::string_view(body).substr(0, eq));
        const std::string value = trim(std::string_view(body).substr(eq + 1));
        auto it = setters.find(key);
        if (it == setters.end()) {
            throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": unknown key '" + key + "'");
        }
        it->second(value, line_no);
    }
    validate(s);
    return s;
}

std::size_t ReadConfigs::total() const {
    std::size_t n = 0;
    for (const auto& v : by_kind) n += v.size();
    return n;
}

namespace {

std::size_t median_segments(const Dataset& ds) {
    if (ds.trajectories.empty()) return 1;
    std::vector<std::size_t> counts;
    counts.reserve(ds.size());
    for (const auto& t : ds.trajectories) counts.push_back(t.segment_count());
    auto mid = counts.begin() + static_cast<std::ptrdiff_t>((counts.size() - 1) / 2);
    std::nth_element(counts.begin(), mid, counts.end());
    return std::max<std::size_t>(*mid, 1);
}

Rect sample_rect(Rng& rng, const Rect& bbox, double fraction) {
    const double w = bbox.width() * fraction;
    const double h = bbox.height() * fraction;
    const double x = bbox.width() > w ? uniform(rng, bbox.min_x, bbox.max_x - w) : bbox.min_x;
    const double y = bbox.height() > h ? uniform(rng, bbox.min_y, bbox.max_y - h) : bbox.min_y;
    return {x, y, std::min(x + w, bbox.max_x), std::min(y + h, bbox.max_y)};
}

template <typename Draw>
std::vector<QuerySpec> draw_configs(std::size_t count, std::size_t max_rejects, const char* what, Draw&& draw) {
    std::vector<QuerySpec> out;
    while (out.size() < count) {
        std::size_t attempts = 0;
        while (true) {
            if (attempts++ >= max_rejects) {
                throw Error(ErrorCode::UnsatisfiableWorkload,
                            std::string("no acceptable ") + what + " config after " +
                                std::to_string(max_rejects) + " draws");
            }
            std::optional<QuerySpec> q = draw();
            if (!q) continue;
            if (std::find(out.begin(), out.end(), *q) != out.end()) continue;
            out.push_back(std::move(*q));
            break;
        }
    }
    return out;
}

} // namespace

ReadConfigs make_read_configs(const Dataset& ds, const Backend& oracle, const WorkloadSpec& spec) {
    validate(spec);
    if (ds.trajectories.empty()) throw Error(ErrorCode::UnsatisfiableWorkload, "empty dataset");
    const Rect bbox = extent_of(ds);
    const double proximity = spec.proximity_fraction * bbox.width();
    ReadConfigs rc;

    for (QueryKind kind : all_query_kinds) {
        Rng rng = stream_rng(spec.seed, static_cast<std::uint64_t>(kind));
        auto random_target = [&]() -> const Trajectory& {
            return ds.trajectories[uniform_index(rng, ds.size())];
        };
        std::vector<QuerySpec>& out = rc.by_kind[static_cast<std::size_t>(kind)];
        switch (kind) {
        case QueryKind::Contains:
            out = draw_configs(spec.configs_per_type, spec.max_rejects, "contains", [&]() -> std::optional<QuerySpec> {
                const Rect r = sample_rect(rng, bbox, spec.rect_side_fraction);
                if (q_contains(oracle, r, spec.contains_mode).ids.empty()) return std::nullopt;
                return QuerySpec::contains(r, spec.contains_mode);
            });
            break;
        case QueryKind::Intersection:
            out = draw_configs(spec.configs_per_type, spec.max_rejects, "intersection", [&]() -> std::optional<QuerySpec> {
                const Trajectory& t = random_target();
                if (q_intersection(oracle, t).ids.empty()) return std::nullopt;
                return QuerySpec::intersection(t);
            });
            break;
        case QueryKind::Knn:
            if (ds.size() < spec.k + 1) {
                throw Error(ErrorCode::UnsatisfiableWorkload, "dataset too small for K=" + std::to_string(spec.k));
            }
            out = draw_configs(spec.configs_per_type, spec.max_rejects, "knn", [&]() -> std::optional<QuerySpec> {
                return QuerySpec::knn(random_target(), spec.k);
            });
            break;
        case QueryKind::Proximity:
            out = draw_configs(spec.configs_per_type, spec.max_rejects, "proximity", [&]() -> std::optional<QuerySpec> {
                const Trajectory& t = random_target();
                if (q_proximity(oracle, t, proximity).ids.empty()) return std::nullopt;
                return QuerySpec::proximity(t, proximity);
            });
            break;
        }
    }
    return rc;
}

const char* to_string(WriteKind k) {
    switch (k) {
    case WriteKind::Insert: return "insert";
    case WriteKind::Update: return "update";
    case WriteKind::Delete: return "delete";
    }
    return "?";
}

WritePlan make_write_configs(const Dataset& ds, const WorkloadSpec& spec) {
    validate(spec);
    WritePlan plan;
    const Rect bbox = extent_of(ds);
    const double step = spec.step_fraction * (bbox.is_empty() ? 1.0 : bbox.width());
    const std::size_t segments = spec.insert_segments ? spec.insert_segments : median_segments(ds);
    const std::size_t per = spec.configs_per_type;
    const std::size_t mutation_batch =
        static_cast<std::size_t>(std::ceil(spec.batch_mutation_fraction * static_cast<double>(ds.size())));
    TrajId next_id = next_free_id(ds);

    // Inserts.
    {
        Rng rng = stream_rng(spec.seed, 100);
        auto fresh = [&]() {
            const Rect r = sample_rect(rng, bbox, spec.rect_side_fraction);
            const Point start{uniform(rng, r.min_x, r.max_x), uniform(rng, r.min_y, r.max_y)};
            return random_walk(next_id++, start, segments, step, bbox, rng);
        };
        for (std::size_t c = 0; c < per; ++c) {
            plan.single[0].push_back({WriteKind::Insert, false, {fresh()}, {}, {}});
        }
        for (std::size_t c = 0; c < per; ++c) {
            WriteConfig wc{WriteKind::Insert, true, {}, {}, {}};
            for (std::size_t i = 0; i < spec.batch_insert_size; ++i) wc.inserts.push_back(fresh());
            plan.batch[0].push_back(std::move(wc));
        }
    }

    std::vector<TrajId> ids;
    ids.reserve(ds.size());
    for (const auto& t : ds.trajectories) ids.push_back(t.id);
    if (ids.empty()) return plan;

    // Deletes: carve disjoint target sets from one shuffled permutation when possible.
    Rng del_rng = stream_rng(spec.seed, 101);
    std::vector<TrajId> order = ids;
    std::shuffle(order.begin(), order.end(), del_rng);
    const std::size_t batch_n = std::min(mutation_batch, ids.size());
    const bool disjoint = per + per * batch_n < ids.size();
    std::size_t cursor = 0;
    std::set<TrajId> deleted;
    auto take = [&](std::size_t count) {
        std::vector<TrajId> out;
        if (disjoint) {
            out.assign(order.begin() + static_cast<std::ptrdiff_t>(cursor),
                       order.begin() + static_cast<std::ptrdiff_t>(cursor + count));
            cursor += count;
        } else {
            for (auto i : sample_without_replacement(del_rng, ids.size(), count)) out.push_back(ids[i]);
        }
        deleted.insert(out.begin(), out.end());
        return out;
    };
    for (std::size_t c = 0; c < per; ++c) plan.single[2].push_back({WriteKind::Delete, false, {}, {}, take(1)});
    for (std::size_t c = 0; c < per; ++c) {
        plan.batch[2].push_back({WriteKind::Delete, true, {}, {}, take(batch_n)});
    }

    // Updates: targets outside every delete set (falls back to all ids).
    std::vector<const Trajectory*> pool;
    for (const auto& t : ds.trajectories) {
        if (!deleted.count(t.id)) pool.push_back(&t);
    }
    if (pool.empty()) {
        for (const auto& t : ds.trajectories) pool.push_back(&t);
    }
    Rng upd_rng = stream_rng(spec.seed, 102);
    auto replacements = [&](std::size_t count) {
        std::vector<Replacement> out;
        for (auto i : sample_without_replacement(upd_rng, pool.size(), std::min(count, pool.size()))) {
            const Trajectory& src = *pool[i];
            const double heading = uniform(upd_rng, 0.0, 2.0 * std::numbers::pi);
            const double len = uniform(upd_rng, 0.0, step);
            Replacement r{src.id, src};
            for (Point& p : r.geometry.points) {
                p.x += len * std::cos(heading);
                p.y += len * std::sin(heading);
            }
            out.push_back(std::move(r));
        }
        return out;
    };
    for (std::size_t c = 0; c < per; ++c) {
        plan.single[1].push_back({WriteKind::Update, false, {}, replacements(1), {}});
    }
    for (std::size_t c = 0; c < per; ++c) {
        plan.batch[1].push_back({WriteKind::Update, true, {}, replacements(batch_n), {}});
    }
    return plan;
}

std::vector<MixedOp> make_mixed_sequence(double read_ratio, std::size_t total_ops, std::uint64_t seed) {
    if (!(read_ratio >= 0.0 && read_ratio <= 1.0)) {
        throw Error(ErrorCode::InvalidParams, "read ratio must lie in [0,1]");
    }
    const auto reads = static_cast<std::size_t>(std::llround(read_ratio * static_cast<double>(total_ops)));
    std::vector<MixedOp> ops;
    ops.reserve(total_ops);
    for (std::size_t i = 0; i < reads; ++i) {
        ops.push_back({true, all_query_kinds[i % 4], WriteKind::Insert, i / 4});
    }
    for (std::size_t i = 0; i < total_ops - reads; ++i) {
        ops.push_back({false, QueryKind::Intersection, all_write_kinds[i % 3], i / 3});
    }
    Rng rng = stream_rng(seed, 200);
    std::shuffle(ops.begin(), ops.end(), rng);
    return ops;
}

void write_read_configs(std::ostream& out, const ReadConfigs& configs) {
    using csv::format_double;
    for (QueryKind kind : all_query_kinds) {
        const auto& list = configs.of(kind);
        for (std::size_t i = 0; i < list.size(); ++i) {
            const QuerySpec& q = list[i];
            out << to_string(kind) << ' ' << i;
            if (kind == QueryKind::Contains) {
                out << " rect=" << format_double(q.rect.min_x) << ',' << format_double(q.rect.min_y) << ','
                    << format_double(q.rect.max_x) << ',' << format_double(q.rect.max_y)
                    << " mode=" << to_string(q.mode);
            } else {
                out << " target=" << q.target.id;
            }
            if (kind == QueryKind::Knn) out << " k=" << q.k;
            if (kind == QueryKind::Proximity) out << " dist=" << format_double(q.dist);
            out << '\n';
        }
    }
}

} // namespace trajbench
