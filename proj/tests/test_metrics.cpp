#include "oracles.hpp"
#include "trajbench/ann.hpp"
#include "trajbench/datagen.hpp"
#include "trajbench/error.hpp"
#include "trajbench/goc.hpp"
#include "trajbench/random.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>

using namespace trajbench;

namespace {

Dataset make(std::vector<std::vector<Point>> trajs) {
    Dataset ds;
    ds.name = "t";
    TrajId id = 0;
    for (auto& pts : trajs) ds.trajectories.push_back({id++, std::move(pts)});
    return ds;
}

// T1's MBR overlaps T2 and T3; T2 and T3 are apart.
Dataset three_trajectories() {
    return make({{{0, 0}, {10, 2}}, {{1, 1}, {2, -3}}, {{8, 1}, {9, 5}}});
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

Dataset generated(GenKind kind, std::size_t m, std::uint64_t seed) {
    GenSpec s;
    s.kind = kind;
    s.m = m;
    s.seed = seed;
    return generate(s);
}

PointCloud unit_grid() {
    std::vector<Point> pts;
    std::vector<std::uint32_t> owners;
    for (int y = 0; y < 10; ++y) {
        for (int x = 0; x < 10; ++x) {
            pts.push_back({double(x), double(y)});
            owners.push_back(static_cast<std::uint32_t>(owners.size()));
        }
    }
    return make_cloud(pts, owners);
}

} // namespace

TEST_CASE("exact_goc") {
    CHECK(exact_goc(three_trajectories()) == doctest::Approx(2.0 / 3.0));

    Dataset apart;
    for (TrajId i = 0; i < 20; ++i) apart.trajectories.push_back({i, {{10.0 * i, 0}, {10.0 * i + 1, 1}}});
    CHECK(exact_goc(apart) == 0.0);

    Dataset same;
    for (TrajId i = 0; i < 20; ++i) same.trajectories.push_back({i, {{0, 0}, {1, 1}}});
    CHECK(exact_goc(same) == 1.0);

    CHECK(code_of([] { exact_goc(make({{{0, 0}, {1, 1}}})); }) == ErrorCode::DegenerateDataset);
}

TEST_CASE("exact_goc matches the pair-count oracle") {
    for (GenKind k : {GenKind::Random, GenKind::Skewed, GenKind::SkewedOverlap}) {
        const Dataset ds = generated(k, 300, 4);
        CHECK(exact_goc(ds) == doctest::Approx(oracle::goc(ds)).epsilon(1e-12));
    }
}

TEST_CASE("approx_goc degenerate sampling and errors") {
    const Dataset ds = generated(GenKind::SkewedOverlap, 200, 9);
    ApproxParams all;
    all.n = ds.size();
    all.p = 1;
    CHECK(approx_goc(ds, all).value == exact_goc(ds));
    all.p = 4;
    for (double v : approx_goc(ds, all).round_values) CHECK(v == exact_goc(ds));

    ApproxParams fig;
    fig.n = 3;
    fig.p = 7;
    const GocEstimate e = approx_goc(three_trajectories(), fig);
    CHECK(e.round_values.size() == 7);
    for (double v : e.round_values) CHECK(v == doctest::Approx(2.0 / 3.0));

    ApproxParams big;
    big.n = 201;
    CHECK(code_of([&] { approx_goc(ds, big); }) == ErrorCode::SampleTooLarge);
    ApproxParams tiny;
    tiny.n = 1;
    CHECK(code_of([&] { approx_goc(ds, tiny); }) == ErrorCode::InvalidParams);
    ApproxParams none;
    none.p = 0;
    CHECK(code_of([&] { approx_goc(ds, none); }) == ErrorCode::InvalidParams);
}

TEST_CASE("approx_goc accuracy, median and determinism") {
    const Dataset ds = generated(GenKind::Skewed, 1000, 21);
    ApproxParams p;
    p.seed = 5;
    const GocEstimate e = approx_goc(ds, p);
    const double exact = oracle::goc(ds);
    CHECK(std::abs(e.value - exact) <= std::max(0.005, 0.03 * exact));

    std::vector<double> sorted = e.round_values;
    std::sort(sorted.begin(), sorted.end());
    CHECK(e.value == sorted[(sorted.size() - 1) / 2]);
    CHECK(e.value >= sorted.front());
    CHECK(e.value <= sorted.back());

    ApproxParams threaded = p;
    threaded.threads = 3;
    CHECK(approx_goc(ds, threaded).round_values == e.round_values);
    p.seed = 6;
    CHECK(approx_goc(ds, p).round_values != e.round_values);
}

TEST_CASE("sample_without_replacement draws distinct indices") {
    Rng rng(1);
    for (std::uint64_t pop : {5u, 100u, 1000u}) {
        for (std::uint64_t count : {std::uint64_t{1}, pop / 2, pop}) {
            const auto s = sample_without_replacement(rng, pop, count);
            CHECK(s.size() == count);
            const std::set<std::uint64_t> unique(s.begin(), s.end());
            CHECK(unique.size() == count);
            CHECK(*unique.rbegin() < pop);
        }
    }
}

TEST_CASE("nn_distance_excl skips the point's own trajectory") {
    const PointCloud c = flatten(make({{{0, 0}, {0, 0.5}}, {{1, 0}, {1, 0.5}}}));
    CHECK(c.size() == 4);
    CHECK(nn_distance_excl(0, c) == doctest::Approx(1.0));
    const PointCloud twin = make_cloud({{0, 0}, {0, 0}, {3, 4}}, {0, 1, 1});
    CHECK(nn_distance_excl(0, twin) == 0.0);
    const PointCloud single = make_cloud({{0, 0}, {1, 1}}, {0, 0});
    CHECK(code_of([&] { nn_distance_excl(0, single); }) == ErrorCode::NoValidNeighbor);
}

TEST_CASE("flatten") {
    const PointCloud c = flatten(make({{{0, 0}, {1, 1}, {2, 2}}, {{3, 3}, {4, 4}, {5, 5}}}));
    CHECK(c.size() == 6);
    const PointCloud one = flatten(make({{{0, 0}, {1, 1}, {2, 0}}}));
    CHECK(std::all_of(one.owners.begin(), one.owners.end(), [&](auto o) { return o == one.owners[0]; }));
}

TEST_CASE("exact_ann on hand-checked instances") {
    const AnnResult r = exact_ann(make({{{0, 0}, {0, 0.5}}, {{1, 0}, {1, 0.5}}}));
    CHECK(r.d_o == doctest::Approx(1.0));
    CHECK(r.d_e == doctest::Approx(0.5 / std::sqrt(4 / 0.5)));
    CHECK(r.d_e == doctest::Approx(0.17678).epsilon(1e-4));
    CHECK(r.ann == doctest::Approx(5.657).epsilon(1e-3));

    const AnnResult g = exact_ann(unit_grid());
    CHECK(g.d_o == doctest::Approx(1.0));
    CHECK(g.d_e == doctest::Approx(0.45));
    CHECK(g.ann == doctest::Approx(2.2222).epsilon(1e-4));

    CHECK(code_of([] { exact_ann(make({{{0, 1}, {1, 1}}, {{2, 1}, {3, 1}}})); }) == ErrorCode::DegenerateExtent);
    CHECK(code_of([] { exact_ann(make({{{0, 0}, {1, 1}, {1, 0}}})); }) == ErrorCode::NoValidNeighbor);
    CHECK(code_of([] { exact_ann(PointCloud{}); }) == ErrorCode::DegenerateDataset);
}

TEST_CASE("exact_ann matches the brute-force oracle") {
    for (GenKind k : {GenKind::Random, GenKind::Even, GenKind::Skewed, GenKind::SkewedOverlap}) {
        const Dataset ds = generated(k, 250, 13);
        const auto expected = oracle::ann(ds);
        const AnnResult got = exact_ann(ds);
        CHECK(got.d_o == doctest::Approx(expected.d_o).epsilon(1e-12));
        CHECK(got.d_e == doctest::Approx(expected.d_e).epsilon(1e-12));
        CHECK(got.ann == doctest::Approx(expected.ann).epsilon(1e-12));
        CHECK(exact_ann(ds, 3).ann == got.ann);
    }
}

TEST_CASE("grid neighbour search agrees with the exhaustive scan") {
    Rng rng(17);
    // Clustered clouds with coincident points and far outliers.
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<Point> pts;
        std::vector<std::uint32_t> owners;
        const std::size_t n = 50 + uniform_index(rng, 400);
        for (std::size_t i = 0; i < n; ++i) {
            Point p{uniform(rng, 0, 0.01), uniform(rng, 0, 0.01)};
            if (i % 37 == 0) p = {uniform(rng, 0, 100), uniform(rng, 0, 3)};
            if (i % 11 == 0 && i > 0) p = pts[i - 1];
            pts.push_back(p);
            owners.push_back(static_cast<std::uint32_t>(uniform_index(rng, 1 + trial)));
        }
        owners[0] = 0;
        owners[1] = 1;
        const PointCloud c = make_cloud(pts, owners);
        const NeighborGrid grid(c);
        for (std::size_t i = 0; i < c.size(); ++i) REQUIRE(grid.nearest_foreign(i) == nn_distance_excl(i, c));
    }
}

TEST_CASE("approx_ann") {
    const Dataset ds = generated(GenKind::Skewed, 300, 2);
    const PointCloud c = flatten(ds);
    ApproxParams all;
    all.n = c.size();
    all.p = 1;
    CHECK(approx_ann(c, all).result.ann == exact_ann(c).ann);

    ApproxParams some;
    some.n = 7;
    some.p = 9;
    for (double v : approx_ann(unit_grid(), some).round_values) CHECK(v == doctest::Approx(2.2222).epsilon(1e-4));

    const Dataset big = generated(GenKind::SkewedOverlap, 1000, 3);
    ApproxParams p;
    p.n = 1000;
    p.p = 50;
    const double exact = oracle::ann(big).ann;
    const AnnEstimate e = approx_ann(big, p);
    CHECK(std::abs(e.result.ann - exact) <= std::max(0.01, 0.03 * exact));
    CHECK(e.result.ann == doctest::Approx(e.result.d_o / e.result.d_e));

    // The literal variant only rescales the observed mean.
    const AnnEstimate lit = approx_ann(big, p, true);
    const double factor = static_cast<double>(flatten(big).size()) / 1000.0;
    CHECK(lit.result.ann == doctest::Approx(e.result.ann * factor));

    ApproxParams threaded = p;
    threaded.threads = 4;
    CHECK(approx_ann(big, threaded).round_values == e.round_values);

    ApproxParams over;
    over.n = c.size() + 1;
    CHECK(code_of([&] { approx_ann(c, over); }) == ErrorCode::SampleTooLarge);
    ApproxParams zero;
    zero.n = 0;
    CHECK(code_of([&] { approx_ann(c, zero); }) == ErrorCode::InvalidParams);
}

TEST_CASE("ANN separates clustered from dispersed layouts") {
    // Two tight twin clusters against a spread grid of pairs.
    std::vector<Point> pts;
    std::vector<std::uint32_t> owners;
    Rng rng(8);
    for (std::uint32_t t = 0; t < 40; ++t) {
        const double cx = t % 2 ? 0.0 : 100.0;
        pts.push_back({cx + uniform(rng, 0, 0.5), uniform(rng, 0, 0.5)});
        owners.push_back(t);
    }
    pts.push_back({0, 100});
    owners.push_back(41);
    pts.push_back({0.2, 100});
    owners.push_back(42);
    CHECK(exact_ann(make_cloud(pts, owners)).ann < 1.0);
    CHECK(exact_ann(unit_grid()).ann > 1.0);
}
