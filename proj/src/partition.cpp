#include "pathwise/partition.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>

namespace pathwise {

Grid Grid::dyadic(int level) {
    return Grid{std::ldexp(1.0, -level), level};
}

Grid Grid::uniform(double spacing) {
    if (!(spacing > 0.0) || !std::isfinite(spacing)) {
        throw PathError(PathError::Code::kOutOfDomain, "grid: spacing must be > 0");
    }
    return Grid{spacing, std::nullopt};
}

Partition lebesgue_partition(const Path& path, const Grid& grid, double T) {
    if (!(grid.spacing > 0.0)) {
        throw PathError(PathError::Code::kOutOfDomain, "partition: spacing must be > 0");
    }
    if (!(T > 0.0) || T > path.horizon()) {
        throw PathError(PathError::Code::kOutOfDomain,
                        "partition: T = " + std::to_string(T) + " outside (0, " +
                            std::to_string(path.horizon()) + "]");
    }
    Partition out;
    out.truncation_time = T;
    out.spacing = grid.spacing;
    const double s0 = path.start_value();
    out.start_on_grid = static_cast<double>(std::llround(s0 / grid.spacing)) * grid.spacing == s0;
    out.times.push_back(0.0);
    out.values.push_back(s0);

    std::size_t segment = 0;
    double t = 0.0;
    double current = s0;
    while (true) {
        auto hit = detail::next_grid_hit_from(path, segment, t, current, current, grid.spacing);
        if (!hit || hit->hit.time > T) break;
        segment = hit->segment;
        t = hit->hit.time;
        current = hit->hit.value;
        out.times.push_back(t);
        out.values.push_back(current);
        if (t == T) {
            out.end_is_hit = true;
            break;
        }
    }
    if (!out.end_is_hit) {
        out.times.push_back(T);
        out.values.push_back(path.evaluate(T));
    }
    return out;
}

double mesh_along(const Path&, const Partition& partition) {
    double mesh = 0.0;
    for (std::size_t j = 1; j < partition.size(); ++j) {
        mesh = std::max(mesh, std::abs(partition.values[j] - partition.values[j - 1]));
    }
    return mesh;
}

bool verify_nested(const Partition& coarse, const Partition& fine, double tol) {
    std::size_t j = 0;
    for (double t : coarse.times) {
        while (j < fine.size() && fine.times[j] < t - tol) ++j;
        if (j == fine.size() || std::abs(fine.times[j] - t) > tol) return false;
    }
    return true;
}

StoppedPath stopped_values(const Path& path, const Partition& partition, double t) {
    if (!(t >= 0.0) || t > partition.truncation_time) {
        throw PathError(PathError::Code::kOutOfDomain,
                        "stopped_values: t = " + std::to_string(t) + " outside [0, " +
                            std::to_string(partition.truncation_time) + "]");
    }
    StoppedPath out;
    auto it = std::upper_bound(partition.times.begin(), partition.times.end(), t);
    const auto keep = static_cast<std::size_t>(it - partition.times.begin());
    out.times.assign(partition.times.begin(), partition.times.begin() + keep);
    out.values.assign(partition.values.begin(), partition.values.begin() + keep);
    if (out.times.back() < t) {
        out.times.push_back(t);
        out.values.push_back(path.evaluate(t));
    }
    return out;
}

void save_partition_csv(const Partition& partition, std::ostream& out) {
    out << "k,tau,value\n";
    char buf[96];
    for (std::size_t k = 0; k < partition.size(); ++k) {
        const int n = std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g\n", k,
                                    partition.times[k], partition.values[k]);
        out.write(buf, n);
    }
}

}  // namespace pathwise
