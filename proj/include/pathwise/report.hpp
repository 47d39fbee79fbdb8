#pragma once

#include <nlohmann/json.hpp>
#include <string>

#include "pathwise/audit.hpp"
#include "pathwise/calculus.hpp"
#include "pathwise/localtime.hpp"

namespace pathwise {

using Json = nlohmann::ordered_json;

Json to_json(const ConvergenceReport& report);
Json to_json(const WeakL2Report& report);
Json to_json(const QuadraticVariationReport& report);
Json to_json(const IntegralResult& result);
Json to_json(const Decomposition& decomposition);
Json to_json(const TanakaMeyer& result);
Json to_json(const OccupationDensity& result);
Json to_json(const AuditReport& report);
Json to_json(const DeviationReport& report);

/// Serialises with two-space indentation and every double printed with 17
/// significant digits, so equal values always give byte-identical text.
/// Non-finite doubles are written as null.
std::string dump_json(const Json& value);

}  // namespace pathwise
