#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "pathwise/partition.hpp"
#include "pathwise/path.hpp"

namespace pathwise {

using RealFunction = std::function<double(double)>;

/// Quadratic variation of the path along the level-n partition, on [0, t].
/// qv[k] = sum_{j<k} (x_{j+1} - x_j)^2 at the partition times; between them the
/// running increment S(s) - x_k is included, so qv(0) = 0.
struct QVResult {
    int level = 0;
    std::vector<double> t_grid;
    std::vector<double> values;  ///< path values at t_grid
    std::vector<double> qv;
    double max_atom = 0.0;  ///< largest single squared increment

    /// <S>^(n)(s) for s in [0, t].
    double at(const Path& path, double s) const;
};

struct QuadraticVariationReport {
    std::vector<QVResult> levels;
    /// sup over the union of both time grids of |qv_n - qv_{n-1}|, one per consecutive pair.
    std::vector<double> sup_differences;
};

QuadraticVariationReport quadratic_variation(const Path& path, const std::vector<int>& levels,
                                             double t);

struct IntegralResult {
    double value = 0.0;
    std::vector<double> per_level_trace;
    bool converged = false;
    double error_estimate = 0.0;  ///< magnitude of the last increment
};

/// Left-point Riemann sums sum g(x_j) (x_{j+1} - x_j) over each level in turn.
/// Converged when the last two levels differ by at most `tol`.
IntegralResult follmer_integral(const RealFunction& g, const Path& path,
                                const std::vector<int>& levels, double t, double tol = 1e-6);

/// Atom of a signed measure.
struct Atom {
    double location = 0.0;
    double mass = 0.0;
};

/// Constant density on [a, b).
struct DensityPiece {
    double a = 0.0;
    double b = 0.0;
    double density = 0.0;
};

/**
 * A function f together with its right-continuous derivative and, depending
 * on the kind, the data that define the correction term of the change of
 * variable formula:
 *   kC2     f'' evaluable; `breakpoints` lists points where f'' may jump.
 *   kBV     df' as atoms plus a piecewise-constant density.
 *   kQVar   f' of finite q-variation; `breakpoints` lists the jumps of f'.
 */
struct FunctionDescriptor {
    enum class Kind { kC2, kBV, kQVar };
    std::string name;
    Kind kind = Kind::kC2;
    RealFunction f;
    RealFunction f_prime;
    RealFunction f_second;
    std::vector<Atom> atoms;
    std::vector<DensityPiece> density;
    std::vector<double> breakpoints;
    double q = 1.0;

    static FunctionDescriptor c2(std::string name, RealFunction f, RealFunction f_prime,
                                 RealFunction f_second);
    static FunctionDescriptor bv(std::string name, RealFunction f, RealFunction f_prime,
                                 std::vector<Atom> atoms, std::vector<DensityPiece> density);
    static FunctionDescriptor qvar(std::string name, RealFunction f, RealFunction f_prime,
                                   std::vector<double> jumps, double q);

    static FunctionDescriptor square();
    static FunctionDescriptor cube();
    static FunctionDescriptor sine();
    /// (x - a)^+, with f' = 1[a, inf) and df' = delta_a.
    static FunctionDescriptor positive_part(double a);
    /// |x - a|, with df' = 2 delta_a.
    static FunctionDescriptor abs_shift(double a);
};

/// Raised when a descriptor fails the absolute-continuity probe.
class FunctionRejected : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct AbsoluteContinuityProbe {
    bool passed = true;
    double worst_relative_error = 0.0;
    double worst_a = 0.0;
    double worst_b = 0.0;
};

/// Compares f(b) - f(a) with the integral of f' on random intervals of [lo, hi].
AbsoluteContinuityProbe probe_absolute_continuity(const FunctionDescriptor& f, double lo,
                                                  double hi, int intervals = 64,
                                                  double rel_tol = 1e-8,
                                                  std::uint64_t seed = 0x5eed);

/// f(S_t) - f(S_0) - sum f'(x_j) dx_j - 1/2 sum f''(x_j) dx_j^2 at one level.
double ito_identity_check(const FunctionDescriptor& f, const Path& path, int level, double t);

struct ItoBound {
    double lhs = 0.0;
    double rhs = 0.0;
    bool holds() const noexcept { return lhs <= rhs; }
};

/// |sum g(x_j) dx_j| against |S_t - S_0| sup|g| + 1/2 <S>^(n)(t) sup|g'|, the
/// suprema taken over the range of the path on [0, t].
ItoBound ito_bound_check(const RealFunction& g, const RealFunction& g_prime, const Path& path,
                         int level, double t);

/// Left-point Riemann-Stieltjes sums of f dg on the uniform grid with 2^d cells
/// of [a, b] merged with `breakpoints`, for d = min_depth, ..., max_depth.
IntegralResult young_integral(const RealFunction& f, const RealFunction& g, double a, double b,
                              const std::vector<double>& breakpoints, double tol = 1e-6,
                              int max_depth = 24, int min_depth = 4);

struct Decomposition {
    int level = 0;
    double boundary = 0.0;    ///< f(S_t) - f(S_0)
    double riemann = 0.0;     ///< boundary - correction
    double correction = 0.0;  ///< the local-time term
    double residual = 0.0;    ///< riemann minus the directly summed Riemann term
    std::string route;
};

/// Throws FunctionRejected when f fails the absolute-continuity probe on the
/// path range widened by one unit.
Decomposition change_of_variable(const FunctionDescriptor& f, const Path& path, int level,
                                 double t);

struct TanakaMeyer {
    double local_time = 0.0;
    double rhs = 0.0;
    double gap = 0.0;
};

TanakaMeyer tanaka_meyer(const Path& path, int level, double u, double t);

struct OccupationDensity {
    double lhs = 0.0;
    double rhs = 0.0;
    double rel_err = 0.0;
};

/// A is a union of closed intervals; infinite endpoints are allowed.
OccupationDensity occupation_density_check(const Path& path, int level,
                                           const std::vector<std::pair<double, double>>& A,
                                           double t);

}  // namespace pathwise
