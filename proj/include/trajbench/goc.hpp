#pragma once

#include "trajbench/dataset.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace trajbench {

/// Sampling parameters shared by the GOC and ANN estimators.
struct ApproxParams {
    std::size_t n = 100;     ///< sample size per round
    std::size_t p = 100;     ///< number of rounds
    std::uint64_t seed = 0;
    unsigned threads = 1;    ///< does not affect results
};

struct GocEstimate {
    double value = 0.0;               ///< lower median of round_values
    std::vector<double> round_values; ///< one induced-subgraph density per round
    ApproxParams params;
};

/// Global overlap coefficient: density 2|E| / (|V|(|V|-1)) of the graph with
/// one node per trajectory and an edge for every pair of overlapping MBRs.
/// Throws DegenerateDataset for fewer than two trajectories.
double exact_goc(const Dataset& ds);
double exact_goc(std::span<const Rect> mbrs);

/// Median over `p` rounds of the exact density of the subgraph induced by `n`
/// trajectories drawn without replacement. Round r draws from its own RNG
/// stream derived from (seed, r), so results do not depend on `threads`.
GocEstimate approx_goc(const Dataset& ds, const ApproxParams& params);
GocEstimate approx_goc(std::span<const Rect> mbrs, const ApproxParams& params);

std::vector<Rect> trajectory_mbrs(const Dataset& ds);

} // namespace trajbench
