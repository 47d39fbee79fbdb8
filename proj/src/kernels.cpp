#include "pathwise/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "pathwise/pvariation.hpp"

namespace pathwise::kernels {

namespace {

thread_local std::size_t rows_evaluated = 0;

bool on_grid(double v, double spacing) {
    return static_cast<double>(std::llround(v / spacing)) * spacing == v;
}

// Smallest i with i*s > v.
std::int64_t first_index_above(double v, double s) {
    auto i = static_cast<std::int64_t>(std::floor(v / s));
    while (static_cast<double>(i) * s > v) --i;
    while (static_cast<double>(i) * s <= v) ++i;
    return i;
}

// Largest i with i*s <= v.
std::int64_t last_index_at_or_below(double v, double s) {
    return first_index_above(v, s) - 1;
}

}  // namespace

void field_values(std::span<const double> x, std::span<const double> u_grid,
                  std::vector<double>& values, std::vector<double>& right_limits) {
    const std::size_t rows = x.size();
    const std::size_t cols = u_grid.size();
    values.assign(rows * cols, 0.0);
    right_limits.assign(rows * cols, 0.0);
    if (rows == 0) return;
    const double x0 = x[0];
    const auto ncols = static_cast<std::ptrdiff_t>(cols);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t c = 0; c < ncols; ++c) {
        const double u = u_grid[static_cast<std::size_t>(c)];
        double below = 0.0;     // sum of increments of legs starting strictly below u
        double at_or_below = 0.0;
        for (std::size_t k = 0; k < rows; ++k) {
            const double pay = std::max(0.0, u - x[k]) - std::max(0.0, u - x0);
            values[k * cols + static_cast<std::size_t>(c)] = pay + below;
            right_limits[k * cols + static_cast<std::size_t>(c)] = pay + at_or_below;
            if (k + 1 < rows) {
                const double d = x[k + 1] - x[k];
                if (x[k] < u) below += d;
                if (x[k] <= u) at_or_below += d;
            }
        }
    }
}

double uniform_distance(const Partition& coarse, const Partition& fine) {
    if (std::abs(coarse.truncation_time - fine.truncation_time) > 1e-12) {
        throw std::invalid_argument("uniform_distance: partitions have different horizons");
    }
    if (fine.spacing > coarse.spacing) {
        throw std::invalid_argument("uniform_distance: second partition must be the finer one");
    }
    const double s = fine.spacing;
    double lo = fine.values.front(), hi = lo;
    for (double v : fine.values) lo = std::min(lo, v), hi = std::max(hi, v);
    for (double v : coarse.values) lo = std::min(lo, v), hi = std::max(hi, v);
    const std::int64_t i_min = last_index_at_or_below(lo, s) - 1;
    const std::int64_t i_max = first_index_above(hi, s) + 1;
    std::vector<double> diff(static_cast<std::size_t>(i_max - i_min + 1), 0.0);
    std::vector<std::size_t> touched;

    std::size_t ic = 0, jf = 0;
    double y = coarse.values[0];  // start of the active coarse leg
    double x = fine.values[0];    // start of the active fine leg
    double current = x;
    double sup = 0.0;
    const std::size_t nc = coarse.size(), nf = fine.size();
    while (ic + 1 < nc || jf + 1 < nf) {
        const double tc = (ic + 1 < nc) ? coarse.times[ic + 1] : INFINITY;
        const double tf = (jf + 1 < nf) ? fine.times[jf + 1] : INFINITY;
        const bool advance_fine = tf <= tc;
        const bool advance_coarse = tc <= tf;
        const double next = advance_fine ? fine.values[jf + 1] : coarse.values[ic + 1];
        const double delta = next - current;

        // 1{y < u} - 1{x < u} is +1 on (y, x] and -1 on (x, y].
        if (delta != 0.0 && x != y) {
            const double a = std::min(x, y), b = std::max(x, y);
            const double sign = (y < x) ? 1.0 : -1.0;
            const std::int64_t from = std::max(first_index_above(a, s), i_min);
            const std::int64_t to = std::min(last_index_at_or_below(b, s), i_max);
            for (std::int64_t i = from; i <= to; ++i) {
                const auto slot = static_cast<std::size_t>(i - i_min);
                diff[slot] += sign * delta;
                touched.push_back(slot);
            }
        }
        current = next;
        if (advance_coarse) y = coarse.values[++ic];
        if (advance_fine) {
            x = fine.values[++jf];
            for (std::size_t slot : touched) sup = std::max(sup, std::abs(diff[slot]));
            touched.clear();
        }
    }
    return sup;
}

double p_variation_profile(const Partition& partition, double p) {
    const std::vector<double>& x = partition.values;
    const std::size_t m = x.size() - 1;
    const double s = partition.spacing;
    rows_evaluated = 0;
    if (m == 0) return 0.0;

    for (std::size_t j = 1; j < m; ++j) {
        if (!on_grid(x[j], s)) return reference::p_variation_profile(partition, p);
    }
    const bool start_on_grid = on_grid(x[0], s);
    const bool end_on_grid = on_grid(x[m], s);

    std::int64_t i_lo = INT64_MAX, i_hi = INT64_MIN;
    auto extend = [&](double v) {
        const std::int64_t i = std::llround(v / s);
        i_lo = std::min(i_lo, i);
        i_hi = std::max(i_hi, i);
    };
    for (std::size_t j = start_on_grid ? 0 : 1; j < m; ++j) extend(x[j]);
    if (end_on_grid) extend(x[m]);
    if (i_lo > i_hi) {  // single off-grid leg
        extend(x[0]);
    }
    std::vector<double> jumps(static_cast<std::size_t>(i_hi - i_lo + 1), 0.0);
    double off_grid_start_jump = 0.0;
    auto leg_slot = [&](std::size_t j) -> double& {
        if (j == 0 && !start_on_grid) return off_grid_start_jump;
        return jumps[static_cast<std::size_t>(std::llround(x[j] / s) - i_lo)];
    };
    std::vector<double> total_movement(m + 1, 0.0);
    for (std::size_t j = 0; j < m; ++j) {
        leg_slot(j) += x[j + 1] - x[j];
        total_movement[j + 1] = total_movement[j] + std::abs(x[j + 1] - x[j]);
    }

    std::vector<double> sequence;
    sequence.reserve(2 * jumps.size() + 8);
    auto evaluate_row = [&](std::size_t k) {
        ++rows_evaluated;
        const double end = x[k];
        const double start = x[0];
        // Off-grid breakpoints with their jumps, in increasing order.
        double extra[2];
        double extra_jump[2];
        int n_extra = 0;
        if (!start_on_grid) {
            extra[n_extra] = start;
            extra_jump[n_extra++] = (k > 0) ? off_grid_start_jump : 0.0;
        }
        if (!on_grid(end, s) && !(n_extra == 1 && extra[0] == end)) {
            extra[n_extra] = end;
            extra_jump[n_extra++] = 0.0;
        }
        if (n_extra == 2 && extra[1] < extra[0]) {
            std::swap(extra[0], extra[1]);
            std::swap(extra_jump[0], extra_jump[1]);
        }
        sequence.clear();
        double below = 0.0;
        auto push = [&](double b, double jump) {
            const double pay = std::max(0.0, b - end) - std::max(0.0, b - start);
            sequence.push_back(pay + below);
            below += jump;
            sequence.push_back(pay + below);
        };
        int e = 0;
        for (std::int64_t i = i_lo; i <= i_hi; ++i) {
            const double b = static_cast<double>(i) * s;
            while (e < n_extra && extra[e] < b) {
                push(extra[e], extra_jump[e]);
                ++e;
            }
            push(b, jumps[static_cast<std::size_t>(i - i_lo)]);
        }
        while (e < n_extra) {
            push(extra[e], extra_jump[e]);
            ++e;
        }
        return p_variation(sequence, p);
    };

    const double c = std::pow(2.0, 1.0 / p);
    std::size_t e = m;
    double v_e = evaluate_row(m);
    double best = v_e;
    while (e > 0) {
        const double threshold = total_movement[e] - (best - v_e) / c;
        auto it = std::lower_bound(total_movement.begin(),
                                   total_movement.begin() + static_cast<std::ptrdiff_t>(e),
                                   threshold);
        if (it == total_movement.begin()) break;
        const auto i = static_cast<std::size_t>(it - total_movement.begin()) - 1;
        for (std::size_t j = e; j-- > i;) leg_slot(j) -= x[j + 1] - x[j];
        v_e = evaluate_row(i);
        best = std::max(best, v_e);
        e = i;
    }
    return best;
}

std::size_t last_profile_rows_evaluated() { return rows_evaluated; }

}  // namespace pathwise::kernels
