#include "pathwise/path.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>

namespace pathwise {

namespace {

void validate(const std::vector<double>& times, const std::vector<double>& values) {
    if (times.size() != values.size()) {
        throw PathError(PathError::Code::kLengthMismatch,
                        "path: times and values differ in length (" +
                            std::to_string(times.size()) + " vs " +
                            std::to_string(values.size()) + ")");
    }
    if (times.empty()) {
        throw PathError(PathError::Code::kEmpty, "path: no samples");
    }
    if (times.size() < 2) {
        throw PathError(PathError::Code::kTooShort, "path: need at least two samples");
    }
    if (times.front() != 0.0) {
        throw PathError(PathError::Code::kNonZeroStart, "path: first time must be 0");
    }
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (!std::isfinite(times[i])) {
            throw PathError(PathError::Code::kNonFiniteValue,
                            "path: non-finite time at index " + std::to_string(i));
        }
        if (!std::isfinite(values[i])) {
            throw PathError(PathError::Code::kNonFiniteValue,
                            "path: non-finite value at index " + std::to_string(i));
        }
        if (i > 0 && !(times[i] > times[i - 1])) {
            throw PathError(PathError::Code::kNonMonotoneTimes,
                            "path: times not strictly increasing at index " +
                                std::to_string(i));
        }
    }
}

// Crossing time of `level` on the segment (ta,va)-(tb,vb); vb == level maps to tb.
double crossing_time(double ta, double va, double tb, double vb, double level) {
    if (vb == level) return tb;
    if (va == level) return ta;
    return ta + (level - va) / (vb - va) * (tb - ta);
}

// Strictly between two reals in the direction of travel from `from` to `to`,
// inclusive of `to`.
bool reached(double from, double to, double level) {
    if (to > from) return from < level && level <= to;
    if (to < from) return to <= level && level < from;
    return false;
}

}  // namespace

Path::Path(std::vector<double> times, std::vector<double> values) {
    validate(times, values);
    times_ = std::move(times);
    values_ = std::move(values);
}

std::size_t Path::segment_index(double t) const {
    if (!(t >= 0.0 && t <= horizon())) {
        throw PathError(PathError::Code::kOutOfDomain,
                        "path: time " + std::to_string(t) + " outside [0, " +
                            std::to_string(horizon()) + "]");
    }
    auto it = std::upper_bound(times_.begin(), times_.end(), t);
    std::size_t i = static_cast<std::size_t>(it - times_.begin());
    i = (i == 0) ? 0 : i - 1;
    return std::min(i, times_.size() - 2);
}

double Path::evaluate(double t) const {
    const std::size_t i = segment_index(t);
    const double ta = times_[i], tb = times_[i + 1];
    if (t == ta) return values_[i];
    if (t == tb) return values_[i + 1];
    const double w = (t - ta) / (tb - ta);
    return values_[i] + w * (values_[i + 1] - values_[i]);
}

std::pair<double, double> Path::range(double t) const {
    const std::size_t i = segment_index(t);
    auto first = values_.begin();
    auto [lo, hi] = std::minmax_element(first, first + static_cast<std::ptrdiff_t>(i) + 1);
    const double end = evaluate(t);
    return {std::min(*lo, end), std::max(*hi, end)};
}

Path make_path(std::vector<double> times, std::vector<double> values) {
    return Path(std::move(times), std::move(values));
}

Path brownian_path(double horizon, double dt, std::uint64_t seed) {
    if (!(horizon > 0.0) || !std::isfinite(horizon)) {
        throw PathError(PathError::Code::kOutOfDomain, "brownian_path: horizon must be > 0");
    }
    if (!(dt > 0.0) || dt > horizon) {
        throw PathError(PathError::Code::kOutOfDomain,
                        "brownian_path: step must satisfy 0 < dt <= horizon");
    }
    const auto steps = static_cast<std::size_t>(std::ceil(horizon / dt - 1e-9));
    std::vector<double> times(steps + 1);
    std::vector<double> values(steps + 1);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    times[0] = 0.0;
    values[0] = 0.0;
    for (std::size_t i = 1; i <= steps; ++i) {
        times[i] = (i == steps) ? horizon : static_cast<double>(i) * dt;
        const double h = times[i] - times[i - 1];
        values[i] = values[i - 1] + std::sqrt(h) * normal(rng);
    }
    return Path(std::move(times), std::move(values));
}

namespace detail {

std::optional<CursorHit> next_grid_hit_from(const Path& path, std::size_t segment, double t0,
                                            double v0, double current, double spacing) {
    const std::int64_t k = std::llround(v0 / spacing);
    const bool on_grid = static_cast<double>(k) * spacing == v0;
    if (on_grid && v0 != current) {
        return CursorHit{GridHit{t0, v0, k}, segment};
    }
    std::int64_t k_lo, k_hi;
    if (on_grid) {
        k_lo = k - 1;
        k_hi = k + 1;
    } else {
        k_lo = static_cast<std::int64_t>(std::floor(v0 / spacing));
        while (static_cast<double>(k_lo) * spacing > v0) --k_lo;
        while (static_cast<double>(k_lo + 1) * spacing < v0) ++k_lo;
        k_hi = k_lo + 1;
        // The level being left is never a target, even when rounding puts v0
        // just beside it.
        if (static_cast<double>(k_hi) * spacing == current) ++k_hi;
        if (static_cast<double>(k_lo) * spacing == current) --k_lo;
    }
    const double lo = static_cast<double>(k_lo) * spacing;
    const double hi = static_cast<double>(k_hi) * spacing;

    auto times = path.times();
    auto values = path.values();
    for (std::size_t j = segment; j + 1 < path.size(); ++j) {
        const double ta = times[j], tb = times[j + 1];
        const double va = values[j], vb = values[j + 1];
        if (vb >= hi) {
            return CursorHit{GridHit{std::max(t0, crossing_time(ta, va, tb, vb, hi)), hi, k_hi}, j};
        }
        if (vb <= lo) {
            return CursorHit{GridHit{std::max(t0, crossing_time(ta, va, tb, vb, lo)), lo, k_lo}, j};
        }
    }
    return std::nullopt;
}

}  // namespace detail

std::optional<GridHit> next_grid_hit(const Path& path, double t0, double current,
                                     double spacing) {
    if (!(spacing > 0.0) || !std::isfinite(spacing)) {
        throw PathError(PathError::Code::kOutOfDomain, "next_grid_hit: spacing must be > 0");
    }
    const std::size_t seg = path.segment_index(t0);
    double v0 = path.evaluate(t0);
    // Snap the interpolated value onto `current` when they differ only by
    // rounding, so the level just left is never reported again.
    if (std::abs(v0 - current) <= 8.0 * std::numeric_limits<double>::epsilon() *
                                       std::max(1.0, std::abs(current))) {
        v0 = current;
    }
    auto hit = detail::next_grid_hit_from(path, seg, t0, v0, current, spacing);
    if (!hit) return std::nullopt;
    return hit->hit;
}

std::optional<LevelHit> first_hit(const Path& path, double t0, std::span<const double> levels) {
    const std::size_t seg = path.segment_index(t0);
    const double v0 = path.evaluate(t0);
    for (double level : levels) {
        if (level == v0) return LevelHit{t0, level};
    }
    auto times = path.times();
    auto values = path.values();
    for (std::size_t j = seg; j + 1 < path.size(); ++j) {
        const double ta = times[j], tb = times[j + 1];
        const double va = values[j], vb = values[j + 1];
        const double from = (j == seg) ? v0 : va;
        std::optional<LevelHit> best;
        for (double level : levels) {
            if (!reached(from, vb, level)) continue;
            const double t = std::max(t0, crossing_time(ta, va, tb, vb, level));
            if (!best || t < best->time) best = LevelHit{t, level};
        }
        if (best) return best;
    }
    return std::nullopt;
}

Path load_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) {
        throw PathError(PathError::Code::kEmpty, "csv: empty input");
    }
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "t,value") {
        throw PathError(PathError::Code::kMalformedInput,
                        "csv: expected header 't,value', got '" + line + "'");
    }
    std::vector<double> times, values;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto comma = line.find(',');
        double t = 0.0, v = 0.0;
        const char* begin = line.data();
        const char* end = line.data() + line.size();
        bool ok = comma != std::string::npos;
        if (ok) {
            auto r1 = std::from_chars(begin, begin + comma, t);
            auto r2 = std::from_chars(begin + comma + 1, end, v);
            ok = r1.ec == std::errc() && r1.ptr == begin + comma && r2.ec == std::errc() &&
                 r2.ptr == end;
        }
        if (!ok) {
            throw PathError(PathError::Code::kMalformedInput,
                            "csv: malformed row " + std::to_string(lineno) + ": '" + line + "'");
        }
        times.push_back(t);
        values.push_back(v);
    }
    if (times.empty()) {
        throw PathError(PathError::Code::kEmpty, "csv: header present but no samples");
    }
    return Path(std::move(times), std::move(values));
}

void save_csv(const Path& path, std::ostream& out) {
    out << "t,value\n";
    char buf[64];
    for (std::size_t i = 0; i < path.size(); ++i) {
        const int n = std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", path.times()[i],
                                    path.values()[i]);
        out.write(buf, n);
    }
}

Path load_csv_file(const std::string& filename) {
    std::ifstream in(filename);
    if (!in) throw std::runtime_error("cannot open " + filename);
    return load_csv(in);
}

void save_csv_file(const Path& path, const std::string& filename) {
    std::ofstream out(filename);
    if (!out) throw std::runtime_error("cannot write " + filename);
    save_csv(path, out);
}

}  // namespace pathwise
