#include "oracles.hpp"
#include "trajbench/backend.hpp"
#include "trajbench/datagen.hpp"
#include "trajbench/error.hpp"
#include "trajbench/index/block_range.hpp"

#include <doctest.h>

#include <functional>

using namespace trajbench;

namespace {

constexpr IndexKind all_indexes[] = {IndexKind::RTree, IndexKind::QuadTree, IndexKind::BlockRange,
                                     IndexKind::SeqScan};
constexpr StorageFormat all_formats[] = {StorageFormat::Whole, StorageFormat::Segmented};

BackendConfig cfg_of(StorageFormat f, IndexKind k) {
    BackendConfig c;
    c.format = f;
    c.index = k;
    return c;
}

Dataset generated(GenKind kind, std::size_t m, std::size_t k, std::uint64_t seed) {
    GenSpec s;
    s.kind = kind;
    s.m = m;
    s.k = k;
    s.seed = seed;
    return generate(s);
}

ErrorCode code_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an error");
    return ErrorCode::IoError;
}

} // namespace

TEST_CASE("bulk_load row layout") {
    const Dataset ds = generated(GenKind::Random, 3, 10, 1);
    for (IndexKind k : all_indexes) {
        const Backend whole = Backend::bulk_load(ds, cfg_of(StorageFormat::Whole, k));
        const Backend seg = Backend::bulk_load(ds, cfg_of(StorageFormat::Segmented, k));
        CHECK(whole.row_count() == 3);
        CHECK(seg.row_count() == 30);
        CHECK(whole.trajectory_count() == 3);
        CHECK(seg.trajectory_count() == 3);
        CHECK(seg.index().size() == 30);
        for (const auto& t : ds.trajectories) {
            CHECK(whole.trajectory(t.id) == t);
            CHECK(seg.trajectory(t.id) == t);
        }
        CHECK(whole.extent() == extent_of(ds));
        CHECK(seg.extent() == extent_of(ds));
    }
}

TEST_CASE("block ranges over 300 rows") {
    const Dataset ds = generated(GenKind::Random, 300, 3, 2);
    const Backend h = Backend::bulk_load(ds, cfg_of(StorageFormat::Whole, IndexKind::BlockRange));
    CHECK(dynamic_cast<const BlockRangeIndex&>(h.index()).range_count() == 3);
}

TEST_CASE("candidates_by_rect basics") {
    const Dataset ds = generated(GenKind::Skewed, 200, 5, 3);
    const Rect box = extent_of(ds);
    for (StorageFormat f : all_formats) {
        for (IndexKind k : all_indexes) {
            const Backend h = Backend::bulk_load(ds, cfg_of(f, k));
            const Candidates all = h.candidates_by_rect(box);
            CHECK(all.ids.size() == 200);
            CHECK(all.stats.candidates_returned == 200);
            const Candidates none = h.candidates_by_rect({box.max_x + 1, box.max_y + 1, box.max_x + 2, box.max_y + 2});
            CHECK(none.ids.empty());
            CHECK(none.stats.candidates_returned == 0);
        }
    }
}

TEST_CASE("every index returns the seqscan answer after mixed mutations") {
    const Dataset ds = generated(GenKind::SkewedOverlap, 400, 6, 4);
    const Rect box = extent_of(ds);
    for (StorageFormat f : all_formats) {
        std::vector<Backend> hs;
        for (IndexKind k : all_indexes) hs.push_back(Backend::bulk_load(ds, cfg_of(f, k)));
        Dataset current = ds;
        Rng rng(77);
        TrajId next = next_free_id(ds);
        for (int step = 0; step < 300; ++step) {
            const auto roll = uniform_index(rng, 3);
            if (roll == 0) {
                const Point start{uniform(rng, box.min_x, box.max_x), uniform(rng, box.min_y, box.max_y)};
                const Trajectory t = random_walk(next++, start, 1 + uniform_index(rng, 8), 0.01, box, rng);
                for (auto& h : hs) CHECK(h.insert(t) == (f == StorageFormat::Whole ? 1 : t.segment_count()));
                current.trajectories.push_back(t);
            } else {
                const std::size_t at = uniform_index(rng, current.size());
                const TrajId id = current.trajectories[at].id;
                if (roll == 1) {
                    for (auto& h : hs) h.erase(id);
                    current.trajectories.erase(current.trajectories.begin() + static_cast<long>(at));
                } else {
                    Trajectory moved = current.trajectories[at];
                    for (auto& p : moved.points) p.x += uniform(rng, -0.02, 0.02);
                    for (auto& h : hs) h.update(id, moved);
                    current.trajectories[at] = moved;
                }
            }
            if (step % 10 == 0) {
                const Rect q{uniform(rng, 0, 0.9), uniform(rng, 0, 0.9), 0, 0};
                const Rect rect{q.min_x, q.min_y, q.min_x + uniform(rng, 0, 0.2), q.min_y + uniform(rng, 0, 0.2)};
                const auto expected = oracle::ids_with_box_touching(current, rect, f == StorageFormat::Whole);
                const Candidates scan = hs.back().candidates_by_rect(rect);
                CHECK(scan.ids == expected);
                for (auto& h : hs) {
                    const Candidates c = h.candidates_by_rect(rect);
                    CHECK(c.ids == expected);
                    CHECK(c.stats.rows_touched <= scan.stats.rows_touched);
                }
            }
        }
        for (auto& h : hs) {
            CHECK(h.trajectory_count() == current.size());
            CHECK_NOTHROW(h.check_invariants());
            for (const auto& t : current.trajectories) CHECK(h.trajectory(t.id) == t);
        }
    }
}

TEST_CASE("delete and update row counts") {
    Dataset ds;
    Trajectory eleven{5, {}};
    for (int i = 0; i < 11; ++i) eleven.points.push_back({0.1 * i, 0.05 * i});
    ds.trajectories.push_back(eleven);
    ds.trajectories.push_back({6, {{0, 1}, {1, 1}}});
    for (IndexKind k : all_indexes) {
        Backend seg = Backend::bulk_load(ds, cfg_of(StorageFormat::Segmented, k));
        Backend whole = Backend::bulk_load(ds, cfg_of(StorageFormat::Whole, k));

        Trajectory moved = eleven;
        for (auto& p : moved.points) p.y += 0.5;
        CHECK(seg.update(5, moved) == 10);
        CHECK(whole.update(5, moved) == 1);
        CHECK(seg.trajectory(5) == moved);
        // The old geometry is gone.
        CHECK(seg.candidates_by_rect({0, 0, 0.01, 0.01}).ids.empty());
        CHECK(whole.candidates_by_rect({0, 0, 0.01, 0.01}).ids.empty());

        CHECK(seg.erase(5) == 10);
        CHECK(whole.erase(5) == 1);
        CHECK(seg.row_count() == 1);
        CHECK(seg.candidates_by_rect({-10, -10, 10, 10}).ids == std::vector<TrajId>{6});
        CHECK(whole.candidates_by_rect({-10, -10, 10, 10}).ids == std::vector<TrajId>{6});

        CHECK(code_of([&] { seg.erase(5); }) == ErrorCode::NotFound);
        CHECK(code_of([&] { seg.update(5, moved); }) == ErrorCode::NotFound);
        CHECK(code_of([&] { whole.insert(ds.trajectories[1]); }) == ErrorCode::DuplicateTrajectory);
        CHECK(code_of([&] { whole.insert({9, {{0, 0}}}); }) == ErrorCode::InvalidParams);
    }
}

TEST_CASE("block-range insert cost does not depend on table size") {
    for (std::size_t m : {300u, 30000u}) {
        Backend h = Backend::bulk_load(generated(GenKind::Random, m, 1, 8),
                                       cfg_of(StorageFormat::Whole, IndexKind::BlockRange));
        for (TrajId id = 0; id < 300; ++id) {
            QueryStats s;
            h.insert({m + id, {{0.5, 0.5}, {0.51, 0.5}}}, &s);
            // One heap row plus at most two summaries.
            CHECK(s.rows_touched >= 2);
            CHECK(s.rows_touched <= 3);
        }
    }
}

TEST_CASE("stale block-range summaries cost work but never change answers") {
    const Dataset ds = generated(GenKind::Random, 1000, 4, 5);
    Backend brin = Backend::bulk_load(ds, cfg_of(StorageFormat::Segmented, IndexKind::BlockRange));
    const Backend scan = Backend::bulk_load(ds, cfg_of(StorageFormat::Segmented, IndexKind::SeqScan));
    Backend fresh = Backend::bulk_load(ds, cfg_of(StorageFormat::Segmented, IndexKind::SeqScan));
    // Drop every other trajectory.
    for (TrajId id = 0; id < 1000; id += 2) {
        brin.erase(id);
        fresh.erase(id);
    }
    const Rect q{0.2, 0.2, 0.4, 0.4};
    const Candidates stale = brin.candidates_by_rect(q);
    brin.summarize();
    const Candidates tight = brin.candidates_by_rect(q);
    CHECK(stale.ids == fresh.candidates_by_rect(q).ids);
    CHECK(tight.ids == stale.ids);
    CHECK(tight.stats.ranges_scanned <= stale.stats.ranges_scanned);
    CHECK(scan.candidates_by_rect(q).ids.size() >= stale.ids.size());
    CHECK_NOTHROW(brin.check_invariants());
}
