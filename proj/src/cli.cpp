#include "pathwise/cli.hpp"

#include <CLI11.hpp>
#include <omp.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "pathwise/audit.hpp"
#include "pathwise/calculus.hpp"
#include "pathwise/localtime.hpp"
#include "pathwise/partition.hpp"
#include "pathwise/path.hpp"

namespace pathwise::cli {

namespace {

constexpr std::pair<Command, const char*> kCommandNames[] = {
    {Command::kGenerate, "generate"},     {Command::kPartition, "partition"},
    {Command::kLocaltime, "localtime"},   {Command::kConverge, "converge"},
    {Command::kIdentity, "identity"},     {Command::kOccupation, "occupation"},
    {Command::kIntegrate, "integrate"},   {Command::kAudit, "audit"},
    {Command::kMontecarlo, "montecarlo"},
};

double parse_bound(const std::string& text) {
    if (text == "inf" || text == "+inf") return std::numeric_limits<double>::infinity();
    if (text == "-inf") return -std::numeric_limits<double>::infinity();
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument("bad number '" + text + "'");
    return v;
}

std::pair<int, int> parse_levels(const std::string& text) {
    const auto dots = text.find("..");
    if (dots == std::string::npos) {
        const int n = std::stoi(text);
        return {n, n};
    }
    return {std::stoi(text.substr(0, dots)), std::stoi(text.substr(dots + 2))};
}

std::pair<double, double> parse_set(const std::string& text) {
    const auto colon = text.find(':');
    if (colon == std::string::npos) throw std::invalid_argument("set '" + text + "' is not a:b");
    return {parse_bound(text.substr(0, colon)), parse_bound(text.substr(colon + 1))};
}

Json bound_json(double v) {
    if (std::isinf(v)) return v > 0 ? Json("inf") : Json("-inf");
    return Json(v);
}

double bound_from_json(const Json& j) {
    return j.is_string() ? parse_bound(j.get<std::string>()) : j.get<double>();
}

Path make_source_path(const RunConfig& config, std::uint64_t seed) {
    if (config.path_file) return load_csv_file(*config.path_file);
    const std::string& g = config.generator;
    if (g == "brownian") return brownian_path(config.horizon, config.dt, seed);
    if (g == "tent") return make_path({0.0, 1.0, 2.0}, {0.0, 1.0, 0.0});
    if (g == "linear") return make_path({0.0, config.horizon}, {0.0, config.horizon});
    if (g == "constant") return make_path({0.0, config.horizon}, {0.0, 0.0});
    throw std::invalid_argument("unknown generator '" + g + "'");
}

FunctionDescriptor make_function(const RunConfig& config) {
    const std::string& f = config.function;
    if (f == "square") return FunctionDescriptor::square();
    if (f == "cube") return FunctionDescriptor::cube();
    if (f == "sine") return FunctionDescriptor::sine();
    if (f == "abs") return FunctionDescriptor::abs_shift(config.shift);
    if (f == "positive") return FunctionDescriptor::positive_part(config.shift);
    throw std::invalid_argument("unknown function '" + f + "'");
}

std::vector<int> level_range(const RunConfig& config) {
    if (config.level_min > config.level_max) {
        throw std::invalid_argument("empty level range");
    }
    std::vector<int> levels;
    for (int n = config.level_min; n <= config.level_max; ++n) levels.push_back(n);
    return levels;
}

const char* extension(Command command) {
    switch (command) {
        case Command::kGenerate:
        case Command::kPartition:
        case Command::kLocaltime:
            return ".csv";
        default:
            return ".json";
    }
}

/// Writes `text` to the configured destination.
void emit(const RunConfig& config, const std::string& text, std::ostream& out) {
    const char* env = std::getenv("PATHWISE_OUT_DIR");
    std::filesystem::path target;
    if (config.output) {
        target = *config.output;
        if (target.is_relative() && env && *env) target = std::filesystem::path(env) / target;
    } else if (env && *env) {
        target = std::filesystem::path(env) / (to_string(config.command) + extension(config.command));
    } else {
        out << text;
        return;
    }
    if (target.has_parent_path()) std::filesystem::create_directories(target.parent_path());
    std::ofstream file(target, std::ios::binary);
    if (!file) throw std::runtime_error("cannot open '" + target.string() + "' for writing");
    file << text;
    if (!file) throw std::runtime_error("write to '" + target.string() + "' failed");
}

int execute_command(const RunConfig& config, std::ostream& out) {
    if (config.jobs > 0) omp_set_num_threads(config.jobs);
    std::ostringstream text;
    int code = 0;
    switch (config.command) {
        case Command::kGenerate: {
            save_csv(make_source_path(config, config.seed), text);
            break;
        }
        case Command::kPartition: {
            const Path path = make_source_path(config, config.seed);
            const double T = config.T.value_or(path.horizon());
            save_partition_csv(lebesgue_partition(path, Grid::dyadic(config.level_max), T), text);
            break;
        }
        case Command::kLocaltime: {
            const Path path = make_source_path(config, config.seed);
            const double T = config.T.value_or(path.horizon());
            const LocalTimeField field = local_time_field(path, config.level_max, T);
            for (const auto& w : field.warnings) std::cerr << "warning: " << w << "\n";
            save_field_csv(field, text);
            break;
        }
        case Command::kConverge: {
            Json runs = Json::array();
            for (int i = 0; i < config.seeds; ++i) {
                const std::uint64_t seed = config.seed + static_cast<std::uint64_t>(i);
                const Path path = make_source_path(config, seed);
                const double T = config.T.value_or(path.horizon());
                Json report = to_json(convergence_study(path, config.level_min, config.level_max,
                                                        T, config.alpha, config.p));
                if (config.seeds == 1) {
                    runs = std::move(report);
                    break;
                }
                runs.push_back(Json{{"seed", seed}, {"report", std::move(report)}});
            }
            text << dump_json(config.seeds == 1 ? runs : Json{{"runs", runs}});
            break;
        }
        case Command::kIdentity: {
            const Path path = make_source_path(config, config.seed);
            const double T = config.T.value_or(path.horizon());
            const double t = config.t.value_or(T);
            const Partition part = lebesgue_partition(path, Grid::dyadic(config.level_max), T);
            Json j;
            j["level"] = config.level_max;
            j["t"] = t;
            j["u"] = config.u;
            j["local_time"] = discrete_local_time(path, part, t, config.u);
            j["tanaka_term"] = tanaka_term(path, part, t, config.u);
            j["residual"] = tanaka_residual(path, part, t, config.u);
            j["tanaka_meyer"] = to_json(tanaka_meyer(path, config.level_max, config.u, t));
            j["ito_residual_square"] =
                ito_identity_check(FunctionDescriptor::square(), path, config.level_max, t);
            text << dump_json(j);
            break;
        }
        case Command::kOccupation: {
            const Path path = make_source_path(config, config.seed);
            const double t = config.t.value_or(config.T.value_or(path.horizon()));
            std::vector<std::pair<double, double>> sets = config.sets;
            if (sets.empty()) sets.emplace_back(-std::numeric_limits<double>::infinity(),
                                                std::numeric_limits<double>::infinity());
            Json j;
            j["level"] = config.level_max;
            j["t"] = t;
            Json a = Json::array();
            for (const auto& [lo, hi] : sets) a.push_back(Json::array({bound_json(lo), bound_json(hi)}));
            j["A"] = std::move(a);
            const Json result = to_json(occupation_density_check(path, config.level_max, sets, t));
            for (auto it = result.begin(); it != result.end(); ++it) j[it.key()] = it.value();
            text << dump_json(j);
            break;
        }
        case Command::kIntegrate: {
            const Path path = make_source_path(config, config.seed);
            const double t = config.t.value_or(config.T.value_or(path.horizon()));
            const FunctionDescriptor f = make_function(config);
            Json j;
            j["function"] = f.name;
            j["t"] = t;
            j["follmer"] =
                to_json(follmer_integral(f.f_prime, path, level_range(config), t, config.tolerance));
            j["decomposition"] = to_json(change_of_variable(f, path, config.level_max, t));
            text << dump_json(j);
            break;
        }
        case Command::kAudit: {
            Json runs = Json::array();
            int atypical = 0;
            for (int i = 0; i < config.seeds; ++i) {
                const std::uint64_t seed = config.seed + static_cast<std::uint64_t>(i);
                const Path path = make_source_path(config, seed);
                const double T = config.T.value_or(path.horizon());
                const AuditReport report =
                    crossing_bound_report(path, T, level_range(config), config.alpha);
                if (report.atypical) ++atypical;
                runs.push_back(Json{{"seed", seed}, {"report", to_json(report)}});
            }
            text << dump_json(Json{{"K", config.K}, {"atypical_paths", atypical}, {"runs", runs}});
            code = atypical > 0 ? 1 : 0;
            break;
        }
        case Command::kMontecarlo: {
            DeviationConfig dc;
            dc.seeds = config.seeds;
            dc.first_seed = config.seed;
            dc.level = config.level_max;
            dc.alpha = config.alpha;
            dc.K = config.K;
            dc.T = config.T.value_or(config.horizon);
            dc.dt = config.dt;
            const DeviationReport report = deviation_frequency(dc);
            text << dump_json(to_json(report));
            code = report.vacuous ? 2 : (report.within_bound ? 0 : 1);
            break;
        }
    }
    emit(config, text.str(), out);
    return code;
}

}  // namespace

std::string to_string(Command command) {
    for (const auto& [c, name] : kCommandNames) {
        if (c == command) return name;
    }
    return "unknown";
}

Command command_from_string(const std::string& name) {
    for (const auto& [c, n] : kCommandNames) {
        if (name == n) return c;
    }
    throw std::invalid_argument("unknown command '" + name + "'");
}

Json to_json(const RunConfig& c) {
    Json j;
    j["command"] = to_string(c.command);
    j["path_file"] = c.path_file ? Json(*c.path_file) : Json(nullptr);
    j["generator"] = c.generator;
    j["seed"] = c.seed;
    j["seeds"] = c.seeds;
    j["horizon"] = c.horizon;
    j["dt"] = c.dt;
    j["level_min"] = c.level_min;
    j["level_max"] = c.level_max;
    j["T"] = c.T ? Json(*c.T) : Json(nullptr);
    j["t"] = c.t ? Json(*c.t) : Json(nullptr);
    j["u"] = c.u;
    j["alpha"] = c.alpha;
    j["p"] = c.p ? Json(*c.p) : Json(nullptr);
    j["q"] = c.q ? Json(*c.q) : Json(nullptr);
    j["K"] = c.K;
    j["tolerance"] = c.tolerance;
    j["function"] = c.function;
    j["shift"] = c.shift;
    Json sets = Json::array();
    for (const auto& [a, b] : c.sets) sets.push_back(Json::array({bound_json(a), bound_json(b)}));
    j["sets"] = std::move(sets);
    j["output"] = c.output ? Json(*c.output) : Json(nullptr);
    j["jobs"] = c.jobs;
    return j;
}

RunConfig config_from_json(const Json& j) {
    RunConfig c;
    auto optional_double = [&j](const char* key) -> std::optional<double> {
        if (!j.contains(key) || j[key].is_null()) return std::nullopt;
        return j[key].get<double>();
    };
    auto optional_string = [&j](const char* key) -> std::optional<std::string> {
        if (!j.contains(key) || j[key].is_null()) return std::nullopt;
        return j[key].get<std::string>();
    };
    if (j.contains("command")) c.command = command_from_string(j["command"].get<std::string>());
    c.path_file = optional_string("path_file");
    c.generator = j.value("generator", c.generator);
    c.seed = j.value("seed", c.seed);
    c.seeds = j.value("seeds", c.seeds);
    c.horizon = j.value("horizon", c.horizon);
    c.dt = j.value("dt", c.dt);
    c.level_min = j.value("level_min", c.level_min);
    c.level_max = j.value("level_max", c.level_max);
    c.T = optional_double("T");
    c.t = optional_double("t");
    c.u = j.value("u", c.u);
    c.alpha = j.value("alpha", c.alpha);
    c.p = optional_double("p");
    c.q = optional_double("q");
    c.K = j.value("K", c.K);
    c.tolerance = j.value("tolerance", c.tolerance);
    c.function = j.value("function", c.function);
    c.shift = j.value("shift", c.shift);
    if (j.contains("sets")) {
        for (const auto& s : j["sets"]) c.sets.emplace_back(bound_from_json(s[0]), bound_from_json(s[1]));
    }
    c.output = optional_string("output");
    c.jobs = j.value("jobs", c.jobs);
    return c;
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
    try {
        return execute_command(config, out);
    } catch (const std::exception& e) {
        err << "pathwise " << to_string(config.command) << ": " << e.what() << "\n";
        return 3;
    }
}

int main(int argc, char** argv) {
    CLI::App app{"Pathwise local times, change-of-variable formulas and crossing audits"};
    app.require_subcommand(0, 1);

    RunConfig config;
    std::string config_file;
    bool print_config = false;
    app.add_option("--config", config_file, "Read the full run configuration from a JSON file");
    app.add_flag("--print-config", print_config, "Print the resolved configuration and exit");

    std::string levels_text;
    std::vector<std::string> set_texts;
    std::string path_file;
    std::string output;
    double T = 0.0, t = 0.0, p = 0.0, q = 0.0;
    int level = -1;

    auto common = [&](CLI::App* sub) {
        sub->add_option("--path", path_file, "Path CSV with header t,value");
        sub->add_option("--gen", config.generator, "Generator: brownian, tent, linear, constant")
            ->capture_default_str();
        sub->add_option("--seed", config.seed, "Generator seed (first seed for sweeps)")
            ->capture_default_str();
        sub->add_option("--horizon", config.horizon, "Generated path horizon")->capture_default_str();
        sub->add_option("--dt", config.dt, "Brownian sampling step")->capture_default_str();
        sub->add_option("--out", output, "Output file (relative to $PATHWISE_OUT_DIR when set)");
        sub->add_option("--jobs", config.jobs, "Worker threads (0 = OpenMP default)")
            ->capture_default_str();
    };
    auto levels = [&](CLI::App* sub) {
        sub->add_option("--level", level, "Single partition level n");
        sub->add_option("--levels", levels_text, "Level range a..b");
        sub->add_option("--T", T, "Partition horizon (default: path horizon)");
    };

    struct Entry {
        Command command;
        CLI::App* app;
    };
    std::vector<Entry> subs;
    auto add = [&](Command command, const std::string& help) {
        CLI::App* sub = app.add_subcommand(to_string(command), help);
        common(sub);
        subs.push_back({command, sub});
        return sub;
    };

    add(Command::kGenerate, "Write a generated path as CSV");
    levels(add(Command::kPartition, "Write the Lebesgue partition at one level as CSV"));
    levels(add(Command::kLocaltime, "Write the local-time field at one level as CSV"));
    {
        CLI::App* sub = add(Command::kConverge, "Uniform-distance convergence study");
        levels(sub);
        sub->add_option("--alpha", config.alpha, "Rate exponent")->capture_default_str();
        sub->add_option("--p", p, "Also report the p-variation profile");
        sub->add_option("--seeds", config.seeds, "Number of consecutive seeds")->capture_default_str();
    }
    {
        CLI::App* sub = add(Command::kIdentity, "Discrete Tanaka and Ito identities at one level");
        levels(sub);
        sub->add_option("--u", config.u, "Space level u")->capture_default_str();
        sub->add_option("--t", t, "Time t (default: T)");
    }
    {
        CLI::App* sub = add(Command::kOccupation, "Occupation density check");
        levels(sub);
        sub->add_option("--t", t, "Time t (default: T)");
        sub->add_option("--A", set_texts, "Interval a:b of the set A (repeatable; inf allowed)");
    }
    {
        CLI::App* sub = add(Command::kIntegrate, "Follmer integral and change-of-variable decomposition");
        levels(sub);
        sub->add_option("--t", t, "Time t (default: T)");
        sub->add_option("--function", config.function, "square, cube, sine, abs, positive")
            ->capture_default_str();
        sub->add_option("--shift", config.shift, "The a of |x - a| and (x - a)^+")
            ->capture_default_str();
        sub->add_option("--tol", config.tolerance, "Convergence tolerance")->capture_default_str();
        sub->add_option("--q", q, "Declared q-variation of f'");
    }
    {
        CLI::App* sub = add(Command::kAudit, "Crossing-bound audit");
        levels(sub);
        sub->add_option("--seeds", config.seeds, "Number of consecutive seeds")->capture_default_str();
        sub->add_option("--K", config.K, "Bound K")->capture_default_str();
        sub->add_option("--alpha", config.alpha, "Deviation exponent")->capture_default_str();
    }
    {
        CLI::App* sub = add(Command::kMontecarlo, "Deviation-frequency Monte Carlo");
        levels(sub);
        sub->add_option("--seeds", config.seeds, "Number of consecutive seeds")->capture_default_str();
        sub->add_option("--K", config.K, "Bound K")->capture_default_str();
        sub->add_option("--alpha", config.alpha, "Deviation exponent")->capture_default_str();
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (!config_file.empty()) {
            std::ifstream in(config_file);
            if (!in) throw std::runtime_error("cannot read config '" + config_file + "'");
            config = config_from_json(Json::parse(in));
        } else {
            bool found = false;
            for (const auto& entry : subs) {
                if (!entry.app->parsed()) continue;
                found = true;
                config.command = entry.command;
                if (entry.app->count("--path")) config.path_file = path_file;
                if (entry.app->count("--out")) config.output = output;
                if (entry.app->get_option_no_throw("--levels") && entry.app->count("--levels")) {
                    std::tie(config.level_min, config.level_max) = parse_levels(levels_text);
                }
                if (entry.app->get_option_no_throw("--level") && entry.app->count("--level")) {
                    config.level_min = config.level_max = level;
                }
                if (entry.app->get_option_no_throw("--T") && entry.app->count("--T")) config.T = T;
                if (entry.app->get_option_no_throw("--t") && entry.app->count("--t")) config.t = t;
                if (entry.app->get_option_no_throw("--p") && entry.app->count("--p")) config.p = p;
                if (entry.app->get_option_no_throw("--q") && entry.app->count("--q")) config.q = q;
                for (const auto& s : set_texts) config.sets.push_back(parse_set(s));
            }
            if (!found) {
                std::cerr << app.help();
                return 3;
            }
        }
    } catch (const std::exception& e) {
        std::cerr << "pathwise: " << e.what() << "\n";
        return 3;
    }
    if (print_config) {
        std::cout << dump_json(to_json(config));
        return 0;
    }
    return run(config, std::cout, std::cerr);
}

}  // namespace pathwise::cli
