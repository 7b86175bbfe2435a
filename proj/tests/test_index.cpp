#include "oracles.hpp"
#include "trajbench/error.hpp"
#include "trajbench/index/block_range.hpp"
#include "trajbench/index/quadtree.hpp"
#include "trajbench/index/rtree.hpp"
#include "trajbench/random.hpp"

#include <doctest.h>

#include <algorithm>
#include <map>
#include <memory>
#include <set>

using namespace trajbench;

namespace {

Rect random_box(Rng& rng, double extent, double max_side) {
    const double x = uniform(rng, 0, extent);
    const double y = uniform(rng, 0, extent);
    // Some zero-width and zero-height boxes on purpose.
    const double w = uniform_index(rng, 8) == 0 ? 0.0 : uniform(rng, 0, max_side);
    const double h = uniform_index(rng, 8) == 0 ? 0.0 : uniform(rng, 0, max_side);
    return {x, y, x + w, y + h};
}

std::set<RowId> hits(const SpatialIndex& idx, const std::map<RowId, Rect>& boxes, const Rect& q) {
    std::vector<RowId> raw;
    QueryStats stats;
    idx.search(q, raw, stats);
    std::set<RowId> out;
    for (RowId r : raw) {
        REQUIRE(boxes.count(r) == 1);
        if (oracle::boxes_touch(boxes.at(r), q)) out.insert(r);
    }
    return out;
}

std::set<RowId> brute(const std::map<RowId, Rect>& boxes, const Rect& q) {
    std::set<RowId> out;
    for (const auto& [r, b] : boxes) {
        if (oracle::boxes_touch(b, q)) out.insert(r);
    }
    return out;
}

void stress(SpatialIndex& idx, std::uint64_t seed, double extent) {
    Rng rng(seed);
    std::map<RowId, Rect> live;
    RowId next = 0;
    QueryStats stats;
    for (int step = 0; step < 3000; ++step) {
        const auto roll = uniform_index(rng, 10);
        if (roll < 6 || live.empty()) {
            const Rect b = random_box(rng, extent, extent / 20);
            idx.insert(next, b, stats);
            live[next++] = b;
        } else if (roll < 9) {
            auto it = live.begin();
            std::advance(it, static_cast<long>(uniform_index(rng, live.size())));
            idx.remove(it->first, it->second, stats);
            live.erase(it);
        } else {
            const Rect q = random_box(rng, extent, extent / 4);
            REQUIRE(hits(idx, live, q) == brute(live, q));
        }
        if (step % 250 == 0) REQUIRE_NOTHROW(idx.check_invariants());
    }
    CHECK(idx.size() == live.size());
    REQUIRE_NOTHROW(idx.check_invariants());
    // Every row, point query on its own box.
    for (const auto& [r, b] : live) REQUIRE(hits(idx, live, b).count(r) == 1);
    const Rect everything{-1e9, -1e9, 1e9, 1e9};
    CHECK(hits(idx, live, everything).size() == live.size());
}

ErrorCode remove_error(SpatialIndex& idx, RowId row, const Rect& box) {
    QueryStats stats;
    try {
        idx.remove(row, box, stats);
    } catch (const Error& e) {
        return e.code();
    }
    return ErrorCode::IoError;
}

} // namespace

TEST_CASE("indexes agree with a brute-force scan under random churn") {
    SUBCASE("rtree") {
        RTree idx;
        stress(idx, 1, 1.0);
    }
    SUBCASE("rtree small nodes") {
        RTree idx(4, 2);
        stress(idx, 2, 1.0);
    }
    SUBCASE("quadtree") {
        QuadTree idx({0, 0, 1, 1});
        stress(idx, 3, 1.0);
    }
    SUBCASE("quadtree that has to grow") {
        // Domain covers a corner of the data only.
        QuadTree idx({0, 0, 0.1, 0.1}, 4, 8);
        stress(idx, 4, 10.0);
        CHECK(idx.domain().contains(Rect{0, 0, 10, 10}));
    }
    SUBCASE("blockrange") {
        BlockRangeIndex idx(16);
        stress(idx, 5, 1.0);
    }
    SUBCASE("seqscan") {
        SeqScanIndex idx;
        stress(idx, 6, 1.0);
    }
}

TEST_CASE("removing an unknown row is NotFound") {
    RTree rt;
    QuadTree qt({0, 0, 1, 1});
    BlockRangeIndex br;
    SeqScanIndex ss;
    QueryStats stats;
    const Rect b{0.1, 0.1, 0.2, 0.2};
    for (SpatialIndex* idx : std::initializer_list<SpatialIndex*>{&rt, &qt, &br, &ss}) {
        idx->insert(1, b, stats);
        CHECK(remove_error(*idx, 2, b) == ErrorCode::NotFound);
        idx->remove(1, b, stats);
        CHECK(remove_error(*idx, 1, b) == ErrorCode::NotFound);
        CHECK(idx->size() == 0);
    }
    CHECK(remove_error(qt, 1, {5, 5, 6, 6}) == ErrorCode::NotFound);
}

TEST_CASE("rtree first split follows the quadratic algorithm") {
    Rng rng(42);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<Rect> rects;
        RTree idx(16, 6);
        QueryStats stats;
        for (RowId r = 0; r < 17; ++r) {
            rects.push_back(random_box(rng, 1.0, 0.1));
            idx.insert(r, rects.back(), stats);
        }
        CHECK(idx.height() == 2);
        std::set<std::set<std::size_t>> got;
        for (const auto& leaf : idx.leaves()) {
            CHECK(leaf.size() >= 6);
            got.insert(std::set<std::size_t>(leaf.begin(), leaf.end()));
        }
        CHECK(got == oracle::quadratic_split(rects, 6));
    }
}

TEST_CASE("rtree stays balanced and shrinks on delete") {
    RTree idx(4, 2);
    QueryStats stats;
    std::vector<Rect> boxes;
    Rng rng(9);
    for (RowId r = 0; r < 500; ++r) {
        boxes.push_back(random_box(rng, 1.0, 0.01));
        idx.insert(r, boxes.back(), stats);
    }
    CHECK(idx.height() >= 5);
    for (RowId r = 0; r < 499; ++r) idx.remove(r, boxes[r], stats);
    CHECK(idx.height() == 1);
    CHECK(idx.leaves() == std::vector<std::vector<RowId>>{{499}});
}

TEST_CASE("quadtree keeps straddling boxes at the parent") {
    QuadTree idx({0, 0, 1, 1}, 2, 8);
    QueryStats stats;
    // Zero-width boxes lying on the first split lines.
    idx.insert(0, {0.5, 0.1, 0.5, 0.2}, stats);
    idx.insert(1, {0.1, 0.5, 0.2, 0.5}, stats);
    idx.insert(2, {0.4, 0.4, 0.6, 0.6}, stats);
    for (RowId r = 3; r < 20; ++r) {
        const double v = 0.01 * static_cast<double>(r);
        idx.insert(r, {v, v, v + 0.001, v + 0.001}, stats);
    }
    CHECK(idx.node_count() > 1);
    CHECK_NOTHROW(idx.check_invariants());
    std::vector<RowId> out;
    idx.search({0.5, 0.15, 0.5, 0.15}, out, stats);
    CHECK(std::count(out.begin(), out.end(), RowId{0}) == 1);
    idx.remove(0, {0.5, 0.1, 0.5, 0.2}, stats);
    idx.remove(1, {0.1, 0.5, 0.2, 0.5}, stats);
    CHECK_NOTHROW(idx.check_invariants());

    // A box outside the domain makes the root grow; nothing is lost.
    idx.insert(99, {-3, -3, -2.5, -2.5}, stats);
    CHECK(idx.domain().contains(Rect{-3, -3, 1, 1}));
    CHECK_NOTHROW(idx.check_invariants());
    out.clear();
    idx.search({-10, -10, 10, 10}, out, stats);
    CHECK(out.size() == 19);
}

TEST_CASE("block ranges") {
    BlockRangeIndex idx(128);
    QueryStats stats;
    for (RowId r = 0; r < 300; ++r) {
        const double x = static_cast<double>(r);
        idx.insert(r, {x, 0, x + 0.5, 1}, stats);
    }
    CHECK(idx.range_count() == 3);
    CHECK(idx.summary(0) == Rect{0, 0, 127.5, 1});
    CHECK(idx.summary(2) == Rect{256, 0, 299.5, 1});

    // One index entry per inserted row.
    QueryStats one;
    idx.insert(300, {1000, 0, 1001, 1}, one);
    CHECK(one.rows_touched == 1);
    CHECK(idx.summary(2).max_x == 1001);

    // Deletes keep the old summary until summarize().
    QueryStats del;
    idx.remove(300, {1000, 0, 1001, 1}, del);
    CHECK(del.rows_touched == 0);
    CHECK(idx.summary(2).max_x == 1001);
    std::vector<RowId> out;
    QueryStats probe;
    idx.search({1000, 0, 1001, 1}, out, probe);
    // Lossy: the range's live rows come back, the deleted one does not.
    CHECK(std::count(out.begin(), out.end(), RowId{300}) == 0);
    CHECK(probe.ranges_scanned == 1);
    idx.summarize();
    CHECK(idx.summary(2).max_x == 299.5);
    probe = {};
    out.clear();
    idx.search({1000, 0, 1001, 1}, out, probe);
    CHECK(out.empty());
    CHECK(probe.ranges_scanned == 0);
    CHECK(probe.nodes_visited == 3);

    // A range query reads whole ranges: everything in range 0 is examined.
    out.clear();
    probe = {};
    idx.search({10, 0, 10.2, 1}, out, probe);
    CHECK(probe.ranges_scanned == 1);
    CHECK(std::count(out.begin(), out.end(), RowId{10}) == 1);
    CHECK_NOTHROW(idx.check_invariants());
}
