#pragma once

#include <functional>
#include <span>
#include <vector>

namespace pathwise {

/**
 * Exact u-section u -> L_t(u) of a discrete local time.
 *
 * Built from the stopped values x_0, ..., x_m = S(t_j ∧ t) through the
 * identity L(u) = (x_m - u)^- - (x_0 - u)^- + sum_{j<m} 1{x_j < u} (x_{j+1} - x_j).
 * The section is piecewise linear, vanishes off [min x, max x], is
 * left-continuous, and jumps only at leg start values. Kinks occur at x_0
 * and x_m, which are always breakpoints.
 */
class LocalTimeSection {
public:
    LocalTimeSection() = default;

    static LocalTimeSection from_stopped(std::span<const double> stopped);

    std::span<const double> breakpoints() const noexcept { return breakpoints_; }
    /// L(b_k), equal to the left limit at b_k.
    std::span<const double> point_values() const noexcept { return point_; }
    /// L(b_k+).
    std::span<const double> right_limits() const noexcept { return right_; }

    double operator()(double u) const;

    /// Integral over the whole real line.
    double integral() const;
    /// Integral over [a, b]; infinite bounds are allowed.
    double integral(double a, double b) const;
    /// Integral of L(u) phi(u) over [a, b], Gauss-Legendre on every linear
    /// piece; exact for polynomial phi of degree <= 18.
    double integrate_against(const std::function<double(double)>& phi, double a,
                             double b) const;

    /// Point values and right limits interleaved in breakpoint order. Every
    /// local extremum of the section appears in this sequence.
    std::vector<double> extremal_sequence() const;

    bool empty() const noexcept { return breakpoints_.empty(); }

private:
    double value_on_piece(double u, std::size_t piece) const;

    double start_ = 0.0;
    double end_ = 0.0;
    std::vector<double> breakpoints_;
    std::vector<double> point_;
    std::vector<double> right_;
    std::vector<double> level_;  ///< sum of jumps at or below b_k, i.e. the step part on (b_k, b_{k+1}]
};

}  // namespace pathwise
