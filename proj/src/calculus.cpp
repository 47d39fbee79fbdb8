#include "pathwise/calculus.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>
#include <random>

#include "pathwise/localtime.hpp"
#include "pathwise/section.hpp"
#include "pathwise/summation.hpp"

namespace pathwise {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

/// Stopped partition values x_j = S(t_j ∧ t) at a dyadic level.
std::vector<double> stopped_at_level(const Path& path, int level, double t) {
    if (t == 0.0) return {path.start_value()};
    return lebesgue_partition(path, Grid::dyadic(level), t).values;
}

double riemann_sum(const RealFunction& g, const std::vector<double>& x) {
    CompensatedSum sum;
    for (std::size_t j = 0; j + 1 < x.size(); ++j) sum += g(x[j]) * (x[j + 1] - x[j]);
    return sum.value();
}

double squared_increments(const std::vector<double>& x) {
    CompensatedSum sum;
    for (std::size_t j = 0; j + 1 < x.size(); ++j) sum += (x[j + 1] - x[j]) * (x[j + 1] - x[j]);
    return sum.value();
}

double negative_part(double x) { return std::max(0.0, -x); }

std::vector<double> sorted_unique(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

double integrate_piecewise(const RealFunction& h, double a, double b,
                           const std::vector<double>& cuts) {
    using Quadrature = boost::math::quadrature::gauss_kronrod<double, 31>;
    CompensatedSum sum;
    double lo = a;
    auto integrate = [&](double from, double to) {
        if (to > from) sum += Quadrature::integrate(h, from, to, 15, 1e-13);
    };
    for (double c : cuts) {
        if (c <= lo || c >= b) continue;
        integrate(lo, c);
        lo = c;
    }
    integrate(lo, b);
    return sum.value();
}

}  // namespace

double QVResult::at(const Path& path, double s) const {
    auto it = std::upper_bound(t_grid.begin(), t_grid.end(), s);
    const auto k = static_cast<std::size_t>(std::max<std::ptrdiff_t>(it - t_grid.begin() - 1, 0));
    const double running = path.evaluate(s) - values[k];
    return qv[k] + running * running;
}

QuadraticVariationReport quadratic_variation(const Path& path, const std::vector<int>& levels,
                                             double t) {
    QuadraticVariationReport report;
    report.levels.resize(levels.size());
    const auto count = static_cast<std::ptrdiff_t>(levels.size());
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t i = 0; i < count; ++i) {
        QVResult& r = report.levels[static_cast<std::size_t>(i)];
        r.level = levels[static_cast<std::size_t>(i)];
        if (t == 0.0) {
            r.t_grid = {0.0};
            r.values = {path.start_value()};
            r.qv = {0.0};
            continue;
        }
        const Partition part = lebesgue_partition(path, Grid::dyadic(r.level), t);
        r.t_grid = part.times;
        r.values = part.values;
        r.qv.assign(part.size(), 0.0);
        CompensatedSum sum;
        for (std::size_t j = 0; j + 1 < part.size(); ++j) {
            const double d = part.values[j + 1] - part.values[j];
            sum += d * d;
            r.qv[j + 1] = sum.value();
            r.max_atom = std::max(r.max_atom, d * d);
        }
    }
    for (std::size_t i = 1; i < report.levels.size(); ++i) {
        const QVResult& a = report.levels[i - 1];
        const QVResult& b = report.levels[i];
        std::vector<double> grid(a.t_grid);
        grid.insert(grid.end(), b.t_grid.begin(), b.t_grid.end());
        double sup = 0.0;
        for (double s : sorted_unique(std::move(grid))) {
            sup = std::max(sup, std::abs(a.at(path, s) - b.at(path, s)));
        }
        report.sup_differences.push_back(sup);
    }
    return report;
}

IntegralResult follmer_integral(const RealFunction& g, const Path& path,
                                const std::vector<int>& levels, double t, double tol) {
    IntegralResult result;
    result.per_level_trace.assign(levels.size(), 0.0);
    const auto count = static_cast<std::ptrdiff_t>(levels.size());
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t i = 0; i < count; ++i) {
        const auto k = static_cast<std::size_t>(i);
        result.per_level_trace[k] = riemann_sum(g, stopped_at_level(path, levels[k], t));
    }
    if (!result.per_level_trace.empty()) result.value = result.per_level_trace.back();
    if (result.per_level_trace.size() >= 2) {
        const std::size_t n = result.per_level_trace.size();
        result.error_estimate =
            std::abs(result.per_level_trace[n - 1] - result.per_level_trace[n - 2]);
        result.converged = result.error_estimate <= tol;
    }
    return result;
}

FunctionDescriptor FunctionDescriptor::c2(std::string name, RealFunction f,
                                          RealFunction f_prime, RealFunction f_second) {
    FunctionDescriptor d;
    d.name = std::move(name);
    d.kind = Kind::kC2;
    d.f = std::move(f);
    d.f_prime = std::move(f_prime);
    d.f_second = std::move(f_second);
    return d;
}

FunctionDescriptor FunctionDescriptor::bv(std::string name, RealFunction f,
                                          RealFunction f_prime, std::vector<Atom> atoms,
                                          std::vector<DensityPiece> density) {
    FunctionDescriptor d;
    d.name = std::move(name);
    d.kind = Kind::kBV;
    d.f = std::move(f);
    d.f_prime = std::move(f_prime);
    d.atoms = std::move(atoms);
    d.density = std::move(density);
    return d;
}

FunctionDescriptor FunctionDescriptor::qvar(std::string name, RealFunction f,
                                            RealFunction f_prime, std::vector<double> jumps,
                                            double q) {
    FunctionDescriptor d;
    d.name = std::move(name);
    d.kind = Kind::kQVar;
    d.f = std::move(f);
    d.f_prime = std::move(f_prime);
    d.breakpoints = std::move(jumps);
    d.q = q;
    return d;
}

FunctionDescriptor FunctionDescriptor::square() {
    return c2(
        "x^2", [](double x) { return x * x; }, [](double x) { return 2.0 * x; },
        [](double) { return 2.0; });
}

FunctionDescriptor FunctionDescriptor::cube() {
    return c2(
        "x^3", [](double x) { return x * x * x; }, [](double x) { return 3.0 * x * x; },
        [](double x) { return 6.0 * x; });
}

FunctionDescriptor FunctionDescriptor::sine() {
    return c2(
        "sin", [](double x) { return std::sin(x); }, [](double x) { return std::cos(x); },
        [](double x) { return -std::sin(x); });
}

FunctionDescriptor FunctionDescriptor::positive_part(double a) {
    return bv(
        "(x-a)^+", [a](double x) { return std::max(0.0, x - a); },
        [a](double x) { return x >= a ? 1.0 : 0.0; }, {Atom{a, 1.0}}, {});
}

FunctionDescriptor FunctionDescriptor::abs_shift(double a) {
    return bv(
        "|x-a|", [a](double x) { return std::abs(x - a); },
        [a](double x) { return x >= a ? 1.0 : -1.0; }, {Atom{a, 2.0}}, {});
}

AbsoluteContinuityProbe probe_absolute_continuity(const FunctionDescriptor& f, double lo,
                                                  double hi, int intervals, double rel_tol,
                                                  std::uint64_t seed) {
    std::vector<double> cuts = f.breakpoints;
    for (const Atom& atom : f.atoms) cuts.push_back(atom.location);
    for (const DensityPiece& piece : f.density) {
        cuts.push_back(piece.a);
        cuts.push_back(piece.b);
    }
    cuts = sorted_unique(std::move(cuts));

    AbsoluteContinuityProbe probe;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> draw(lo, hi);
    for (int i = 0; i < intervals; ++i) {
        double a = draw(rng), b = draw(rng);
        if (a > b) std::swap(a, b);
        if (a == b) continue;
        const double increment = f.f(b) - f.f(a);
        const double integral = integrate_piecewise(f.f_prime, a, b, cuts);
        const double scale = std::max(std::abs(increment), std::abs(integral));
        const double gap = std::abs(increment - integral);
        const double rel = scale > 0.0 ? gap / scale : 0.0;
        if (rel > probe.worst_relative_error) {
            probe.worst_relative_error = rel;
            probe.worst_a = a;
            probe.worst_b = b;
        }
        if (gap > rel_tol * scale + 1e-14) probe.passed = false;
    }
    return probe;
}

double ito_identity_check(const FunctionDescriptor& f, const Path& path, int level, double t) {
    if (!f.f_second) {
        throw std::invalid_argument("ito_identity_check: descriptor has no second derivative");
    }
    const std::vector<double> x = stopped_at_level(path, level, t);
    CompensatedSum sum;
    sum += f.f(x.back());
    sum += -f.f(x.front());
    for (std::size_t j = 0; j + 1 < x.size(); ++j) {
        const double d = x[j + 1] - x[j];
        sum += -f.f_prime(x[j]) * d;
        sum += -0.5 * f.f_second(x[j]) * d * d;
    }
    return sum.value();
}

ItoBound ito_bound_check(const RealFunction& g, const RealFunction& g_prime, const Path& path,
                         int level, double t) {
    const std::vector<double> x = stopped_at_level(path, level, t);
    const auto [lo, hi] = path.range(t);
    constexpr int kSamples = 2049;
    double sup_g = 0.0, sup_gp = 0.0;
    for (int i = 0; i < kSamples; ++i) {
        const double u = (i == kSamples - 1) ? hi : lo + (hi - lo) * i / (kSamples - 1);
        sup_g = std::max(sup_g, std::abs(g(u)));
        sup_gp = std::max(sup_gp, std::abs(g_prime(u)));
    }
    ItoBound bound;
    bound.lhs = std::abs(riemann_sum(g, x));
    bound.rhs = std::abs(x.back() - x.front()) * sup_g + 0.5 * squared_increments(x) * sup_gp;
    return bound;
}

IntegralResult young_integral(const RealFunction& f, const RealFunction& g, double a, double b,
                              const std::vector<double>& breakpoints, double tol, int max_depth,
                              int min_depth) {
    if (!(b > a)) throw std::invalid_argument("young_integral: need a < b");
    std::vector<double> cuts;
    for (double c : breakpoints) {
        if (c > a && c < b) cuts.push_back(c);
    }
    cuts = sorted_unique(std::move(cuts));

    IntegralResult result;
    for (int d = min_depth; d <= max_depth; ++d) {
        const std::uint64_t cells = std::uint64_t{1} << d;
        const double h = (b - a) / static_cast<double>(cells);
        CompensatedSum sum;
        double u_prev = a, g_prev = g(a);
        auto step = [&](double u) {
            const double gu = g(u);
            sum += f(u_prev) * (gu - g_prev);
            u_prev = u;
            g_prev = gu;
        };
        std::size_t c = 0;
        for (std::uint64_t i = 1; i <= cells; ++i) {
            const double u = (i == cells) ? b : a + h * static_cast<double>(i);
            while (c < cuts.size() && cuts[c] < u) {
                if (cuts[c] > u_prev) step(cuts[c]);
                ++c;
            }
            if (u > u_prev) step(u);
        }
        result.per_level_trace.push_back(sum.value());
        const std::size_t n = result.per_level_trace.size();
        if (n >= 2) {
            result.error_estimate =
                std::abs(result.per_level_trace[n - 1] - result.per_level_trace[n - 2]);
            if (result.error_estimate <= tol) {
                result.converged = true;
                break;
            }
        }
    }
    result.value = result.per_level_trace.back();
    return result;
}

Decomposition change_of_variable(const FunctionDescriptor& f, const Path& path, int level,
                                 double t) {
    const auto [lo, hi] = path.range(t);
    const AbsoluteContinuityProbe probe = probe_absolute_continuity(f, lo - 1.0, hi + 1.0);
    if (!probe.passed) {
        throw FunctionRejected("change_of_variable: '" + f.name +
                               "' is not the integral of its derivative on [" +
                               std::to_string(probe.worst_a) + ", " +
                               std::to_string(probe.worst_b) + "]");
    }
    const std::vector<double> x = stopped_at_level(path, level, t);
    const LocalTimeSection section = LocalTimeSection::from_stopped(x);

    Decomposition out;
    out.level = level;
    out.boundary = f.f(x.back()) - f.f(x.front());
    CompensatedSum correction;
    switch (f.kind) {
        case FunctionDescriptor::Kind::kC2: {
            out.route = "c2";
            std::vector<double> cuts = sorted_unique(f.breakpoints);
            double from = -kInf;
            for (double c : cuts) {
                correction += section.integrate_against(f.f_second, from, c);
                from = c;
            }
            correction += section.integrate_against(f.f_second, from, kInf);
            break;
        }
        case FunctionDescriptor::Kind::kBV: {
            out.route = "bv";
            for (const Atom& atom : f.atoms) correction += atom.mass * section(atom.location);
            for (const DensityPiece& piece : f.density) {
                correction += piece.density * section.integral(piece.a, piece.b);
            }
            break;
        }
        case FunctionDescriptor::Kind::kQVar: {
            out.route = "young";
            if (!section.empty()) {
                std::vector<double> cuts(section.breakpoints().begin(),
                                         section.breakpoints().end());
                cuts.insert(cuts.end(), f.breakpoints.begin(), f.breakpoints.end());
                const double a = section.breakpoints().front() - 1.0;
                const double b = section.breakpoints().back() + 1.0;
                const IntegralResult young = young_integral(
                    [&section](double u) { return section(u); }, f.f_prime, a, b, cuts, 1e-10);
                correction += young.value;
            }
            break;
        }
    }
    out.correction = correction.value();
    out.riemann = out.boundary - out.correction;
    out.residual = out.riemann - riemann_sum(f.f_prime, x);
    return out;
}

TanakaMeyer tanaka_meyer(const Path& path, int level, double u, double t) {
    TanakaMeyer out;
    if (t == 0.0) return out;
    const Partition part = lebesgue_partition(path, Grid::dyadic(level), t);
    out.local_time = discrete_local_time(path, part, t, u);
    out.rhs = negative_part(path.evaluate(t) - u) - negative_part(path.start_value() - u) +
              tanaka_term(path, part, t, u);
    out.gap = out.local_time - out.rhs;
    return out;
}

OccupationDensity occupation_density_check(const Path& path, int level,
                                           const std::vector<std::pair<double, double>>& A,
                                           double t) {
    std::vector<std::pair<double, double>> merged;
    for (auto [a, b] : A) {
        if (a > b) std::swap(a, b);
        merged.emplace_back(a, b);
    }
    std::sort(merged.begin(), merged.end());
    std::vector<std::pair<double, double>> unions;
    for (const auto& iv : merged) {
        if (!unions.empty() && iv.first <= unions.back().second) {
            unions.back().second = std::max(unions.back().second, iv.second);
        } else {
            unions.push_back(iv);
        }
    }
    auto member = [&unions](double v) {
        for (const auto& [a, b] : unions) {
            if (a <= v && v <= b) return true;
        }
        return false;
    };

    const std::vector<double> x = stopped_at_level(path, level, t);
    const LocalTimeSection section = LocalTimeSection::from_stopped(x);
    OccupationDensity out;
    CompensatedSum lhs, rhs;
    for (const auto& [a, b] : unions) lhs += section.integral(a, b);
    for (std::size_t j = 0; j + 1 < x.size(); ++j) {
        if (member(x[j])) rhs += 0.5 * (x[j + 1] - x[j]) * (x[j + 1] - x[j]);
    }
    out.lhs = lhs.value();
    out.rhs = rhs.value();
    // Relative to the quadratic-variation side; to the larger side when it vanishes.
    const double scale = out.rhs != 0.0 ? std::abs(out.rhs) : std::abs(out.lhs);
    out.rel_err = scale > 0.0 ? std::abs(out.lhs - out.rhs) / scale : 0.0;
    return out;
}

}  // namespace pathwise
