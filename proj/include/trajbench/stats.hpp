#pragma once

#include <algorithm>
#include <vector>

namespace trajbench {

/// Median that always returns an observed value: for an even count the
/// lower of the two middle elements.
inline double lower_median(std::vector<double> values) {
    const auto mid = values.begin() + static_cast<std::ptrdiff_t>((values.size() - 1) / 2);
    std::nth_element(values.begin(), mid, values.end());
    return *mid;
}

} // namespace trajbench
