#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "pathwise/kernels.hpp"
#include "pathwise/localtime.hpp"
#include "pathwise/pvariation.hpp"
#include "pathwise/section.hpp"

namespace pathwise::reference {

void field_values(std::span<const double> x, std::span<const double> u_grid,
                  std::vector<double>& values, std::vector<double>& right_limits) {
    const std::size_t rows = x.size();
    const std::size_t cols = u_grid.size();
    values.assign(rows * cols, 0.0);
    right_limits.assign(rows * cols, 0.0);
    for (std::size_t k = 0; k < rows; ++k) {
        for (std::size_t c = 0; c < cols; ++c) {
            const double u = u_grid[c];
            double point = 0.0, right = 0.0;
            for (std::size_t j = 0; j < k; ++j) {
                const double lo = std::min(x[j], x[j + 1]);
                const double hi = std::max(x[j], x[j + 1]);
                const double w = std::abs(x[j + 1] - u);
                if (lo < u && u <= hi) point += w;
                if (lo <= u && u < hi) right += w;
            }
            values[k * cols + c] = point;
            right_limits[k * cols + c] = right;
        }
    }
}

double uniform_distance(const Path& path, const Partition& coarse, const Partition& fine) {
    const double s = fine.spacing;
    double lo = fine.values.front(), hi = lo;
    for (double v : fine.values) lo = std::min(lo, v), hi = std::max(hi, v);
    for (double v : coarse.values) lo = std::min(lo, v), hi = std::max(hi, v);
    const auto i_min = static_cast<std::int64_t>(std::floor(lo / s)) - 1;
    const auto i_max = static_cast<std::int64_t>(std::ceil(hi / s)) + 1;
    double sup = 0.0;
    for (double t : fine.times) {
        for (std::int64_t i = i_min; i <= i_max; ++i) {
            const double u = static_cast<double>(i) * s;
            const double d = discrete_local_time(path, coarse, t, u) -
                             discrete_local_time(path, fine, t, u);
            sup = std::max(sup, std::abs(d));
        }
    }
    return sup;
}

double p_variation_profile(const Partition& partition, double p) {
    double sup = 0.0;
    std::span<const double> x(partition.values);
    for (std::size_t k = 0; k < x.size(); ++k) {
        const auto section = LocalTimeSection::from_stopped(x.first(k + 1));
        sup = std::max(sup, p_variation(section.extremal_sequence(), p));
    }
    return sup;
}

}  // namespace pathwise::reference
