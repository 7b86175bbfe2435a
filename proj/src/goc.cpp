#include "trajbench/goc.hpp"

#include "trajbench/error.hpp"
#include "trajbench/parallel.hpp"
#include "trajbench/random.hpp"
#include "trajbench/stats.hpp"

namespace trajbench {

namespace {

std::uint64_t count_overlapping_pairs(std::span<const Rect> rects) {
    std::uint64_t edges = 0;
    for (std::size_t i = 0; i < rects.size(); ++i) {
        const Rect& a = rects[i];
        for (std::size_t j = i + 1; j < rects.size(); ++j) {
            edges += rects_overlap(a, rects[j]) ? 1 : 0;
        }
    }
    return edges;
}

double density(std::uint64_t edges, std::size_t nodes) {
    const double v = static_cast<double>(nodes);
    return 2.0 * static_cast<double>(edges) / (v * (v - 1.0));
}

} // namespace

std::vector<Rect> trajectory_mbrs(const Dataset& ds) {
    std::vector<Rect> out;
    out.reserve(ds.size());
    for (const auto& t : ds.trajectories) out.push_back(mbr_of(t));
    return out;
}

double exact_goc(std::span<const Rect> mbrs) {
    if (mbrs.size() < 2) {
        throw Error(ErrorCode::DegenerateDataset, "GOC needs at least 2 trajectories");
    }
    return density(count_overlapping_pairs(mbrs), mbrs.size());
}

double exact_goc(const Dataset& ds) { return exact_goc(trajectory_mbrs(ds)); }

GocEstimate approx_goc(std::span<const Rect> mbrs, const ApproxParams& params) {
    if (params.n < 2 || params.p < 1) {
        throw Error(ErrorCode::InvalidParams, "approx_goc needs n >= 2 and p >= 1");
    }
    if (params.n > mbrs.size()) {
        throw Error(ErrorCode::SampleTooLarge, "sample size " + std::to_string(params.n) +
                                                   " exceeds " + std::to_string(mbrs.size()) +
                                                   " trajectories");
    }
    GocEstimate est;
    est.params = params;
    est.round_values.assign(params.p, 0.0);
    parallel_for(params.p, params.threads, [&](std::size_t round) {
        Rng rng = stream_rng(params.seed, round);
        const auto picks = sample_without_replacement(rng, mbrs.size(), params.n);
        std::vector<Rect> sample;
        sample.reserve(picks.size());
        for (auto i : picks) sample.push_back(mbrs[i]);
        est.round_values[round] = density(count_overlapping_pairs(sample), sample.size());
    });
    est.value = lower_median(est.round_values);
    return est;
}

GocEstimate approx_goc(const Dataset& ds, const ApproxParams& params) {
    return approx_goc(trajectory_mbrs(ds), params);
}

} // namespace trajbench
