#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace pathwise {

/// Validation failure raised by the path and partition constructors.
class PathError : public std::invalid_argument {
public:
    enum class Code {
        kTooShort,
        kLengthMismatch,
        kNonZeroStart,
        kNonMonotoneTimes,
        kNonFiniteValue,
        kOutOfDomain,
        kMalformedInput,
        kEmpty,
    };

    PathError(Code code, const std::string& what)
        : std::invalid_argument(what), code_(code) {}

    Code code() const noexcept { return code_; }

private:
    Code code_;
};

/// Membership test for the half-open bracket between two unordered endpoints:
/// u lies in (min(a,b), max(a,b)], and the bracket is empty when a == b.
struct HalfOpenInterval {
    double a = 0.0;
    double b = 0.0;

    bool contains(double u) const noexcept {
        if (a <= b) return a < u && u <= b;
        return b < u && u <= a;
    }
    bool empty() const noexcept { return a == b; }
};

/**
 * A continuous real path given by samples on a strictly increasing time grid
 * starting at 0 and read as the piecewise-linear interpolant of the samples.
 *
 * Immutable after construction. All crossing queries below are exact for the
 * interpolant: crossing times on a segment are solved from the segment's own
 * endpoints, so two queries that land on the same crossing return bitwise
 * identical times.
 */
class Path {
public:
    Path(std::vector<double> times, std::vector<double> values);

    std::span<const double> times() const noexcept { return times_; }
    std::span<const double> values() const noexcept { return values_; }
    std::size_t size() const noexcept { return times_.size(); }
    double horizon() const noexcept { return times_.back(); }
    double start_value() const noexcept { return values_.front(); }

    /// Linear interpolation on the containing segment; exact at sample times.
    double evaluate(double t) const;

    /// Index i of the segment [times[i], times[i+1]] used for time t.
    /// Sample times map to the segment that starts there (except the final one).
    std::size_t segment_index(double t) const;

    /// Min and max of the path over [0, t].
    std::pair<double, double> range(double t) const;

    bool operator==(const Path&) const = default;

private:
    std::vector<double> times_;
    std::vector<double> values_;
};

Path make_path(std::vector<double> times, std::vector<double> values);

/// Gaussian-increment path on [0, horizon] with step dt; the final step is
/// shortened when dt does not divide the horizon. Deterministic in `seed`.
Path brownian_path(double horizon, double dt, std::uint64_t seed);

/// Default sampling step of the Brownian generator.
inline constexpr double kDefaultBrownianStep = 1.0 / (1 << 20);

struct GridHit {
    double time;
    double value;
    std::int64_t index;  ///< grid index k with value == k * spacing
};

/// Earliest t >= t0 at which the path equals a grid value k*spacing different
/// from `current`. A segment endpoint that touches a grid value counts as a hit.
std::optional<GridHit> next_grid_hit(const Path& path, double t0, double current,
                                     double spacing);

namespace detail {

struct CursorHit {
    GridHit hit;
    std::size_t segment;  ///< segment on which the hit was found
};

/// Grid-hit search from a known position (segment, time, value) on the path.
/// Used by partition construction to avoid re-interpolating the last hit.
std::optional<CursorHit> next_grid_hit_from(const Path& path, std::size_t segment, double t0,
                                            double v0, double current, double spacing);

}  // namespace detail

struct LevelHit {
    double time;
    double level;
};

/// Earliest t >= t0 at which the path equals one of `levels`.
std::optional<LevelHit> first_hit(const Path& path, double t0,
                                  std::span<const double> levels);

Path load_csv(std::istream& in);
void save_csv(const Path& path, std::ostream& out);
Path load_csv_file(const std::string& filename);
void save_csv_file(const Path& path, const std::string& filename);

}  // namespace pathwise
