#include "pathwise/report.hpp"

#include <cmath>
#include <cstdio>

namespace pathwise {

namespace {

Json optional_number(const std::optional<double>& v) {
    return v ? Json(*v) : Json(nullptr);
}

void write(const Json& value, int depth, std::string& out) {
    const std::string pad(static_cast<std::size_t>(2 * (depth + 1)), ' ');
    const std::string close_pad(static_cast<std::size_t>(2 * depth), ' ');
    switch (value.type()) {
        case Json::value_t::object: {
            if (value.empty()) {
                out += "{}";
                return;
            }
            out += "{\n";
            bool first = true;
            for (auto it = value.begin(); it != value.end(); ++it) {
                if (!first) out += ",\n";
                first = false;
                out += pad;
                out += Json(it.key()).dump();
                out += ": ";
                write(it.value(), depth + 1, out);
            }
            out += "\n" + close_pad + "}";
            return;
        }
        case Json::value_t::array: {
            if (value.empty()) {
                out += "[]";
                return;
            }
            out += "[\n";
            bool first = true;
            for (const auto& item : value) {
                if (!first) out += ",\n";
                first = false;
                out += pad;
                write(item, depth + 1, out);
            }
            out += "\n" + close_pad + "]";
            return;
        }
        case Json::value_t::number_float: {
            const double d = value.get<double>();
            if (!std::isfinite(d)) {
                out += "null";
                return;
            }
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.17g", d);
            out += buf;
            // Keep the value recognisable as floating point.
            if (std::string_view(buf).find_first_of(".en") == std::string_view::npos) out += ".0";
            return;
        }
        default:
            out += value.dump();
    }
}

}  // namespace

Json to_json(const ConvergenceReport& report) {
    Json j;
    j["levels"] = report.levels;
    j["distance_levels"] = report.distance_levels;
    j["distances"] = report.distances;
    j["alpha"] = report.alpha;
    j["alpha_hat"] = optional_number(report.alpha_hat);
    j["C_alpha"] = report.c_alpha;
    j["p"] = optional_number(report.p);
    j["p_var_profile"] = report.p_var_profile;
    j["warnings"] = report.warnings;
    return j;
}

Json to_json(const WeakL2Report& report) {
    Json j;
    j["levels"] = report.levels;
    Json entries = Json::array();
    for (const auto& e : report.entries) {
        entries.push_back(Json{{"function", e.function},
                               {"t", e.t},
                               {"integrals", e.integrals},
                               {"increments", e.increments}});
    }
    j["entries"] = std::move(entries);
    return j;
}

Json to_json(const QuadraticVariationReport& report) {
    Json j;
    Json levels = Json::array();
    for (const auto& r : report.levels) {
        levels.push_back(Json{{"level", r.level},
                              {"qv", r.qv.empty() ? 0.0 : r.qv.back()},
                              {"max_atom", r.max_atom},
                              {"points", r.t_grid.size()}});
    }
    j["levels"] = std::move(levels);
    j["sup_differences"] = report.sup_differences;
    return j;
}

Json to_json(const IntegralResult& result) {
    return Json{{"value", result.value},
                {"per_level_trace", result.per_level_trace},
                {"converged", result.converged},
                {"error_estimate", result.error_estimate}};
}

Json to_json(const Decomposition& d) {
    return Json{{"level", d.level},           {"boundary", d.boundary},
                {"riemann", d.riemann},       {"correction", d.correction},
                {"residual", d.residual},     {"route", d.route}};
}

Json to_json(const TanakaMeyer& r) {
    return Json{{"local_time", r.local_time}, {"rhs", r.rhs}, {"gap", r.gap}};
}

Json to_json(const OccupationDensity& r) {
    return Json{{"lhs", r.lhs}, {"rhs", r.rhs}, {"rel_err", r.rel_err}};
}

Json to_json(const AuditReport& report) {
    Json j;
    j["levels"] = report.levels;
    j["max_crossings"] = report.max_crossings;
    j["crossing_constants"] = report.crossing_constants;
    j["C_T"] = report.c_T;
    j["atypical"] = report.atypical;
    j["alpha"] = report.alpha;
    j["deviation_events"] = report.deviation_events;
    j["strategy_times"] = report.strategy_times;
    j["strategy_wealth"] = report.strategy_wealth;
    return j;
}

Json to_json(const DeviationReport& report) {
    Json j;
    const DeviationConfig& c = report.config;
    j["config"] = Json{{"seeds", c.seeds}, {"first_seed", c.first_seed}, {"level", c.level},
                       {"alpha", c.alpha}, {"K", c.K},                   {"T", c.T},
                       {"dt", c.dt}};
    j["in_A_K"] = report.in_A_K;
    j["events"] = report.events;
    j["empirical_freq"] = report.empirical_freq;
    j["standard_error"] = report.standard_error;
    j["threshold"] = report.threshold;
    j["log_bound_per_u"] = report.log_bound_per_u;
    j["log_paper_bound"] = report.log_paper_bound;
    j["paper_bound"] = report.paper_bound;
    j["vacuous"] = report.vacuous;
    j["within_bound"] = report.within_bound;
    Json samples = Json::array();
    for (const auto& s : report.samples) {
        samples.push_back(Json{{"seed", s.seed},
                               {"in_A_K", s.in_A_K},
                               {"distance", s.distance},
                               {"event", s.event}});
    }
    j["samples"] = std::move(samples);
    return j;
}

std::string dump_json(const Json& value) {
    std::string out;
    write(value, 0, out);
    out += "\n";
    return out;
}

}  // namespace pathwise
