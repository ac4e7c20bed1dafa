#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>
#include "ewls/model.hpp"
#include "ewls/pipeline.hpp"
#include "ewls/relax.hpp"

namespace ewls {

using Json = nlohmann::ordered_json;

// [num, den]; components that do not fit in int64 are written as decimal strings.
Json rational_to_json(const Rational& q);
// Accepts [num, den] (integers or strings) or a plain number (converted exactly).
Rational rational_from_json(const Json& j);

Json instance_to_json(const Instance& instance);
Instance instance_from_json(const Json& j);

Json policy_to_json(const CyclicPolicy& policy);
CyclicPolicy policy_from_json(const Json& j);

Json certificate_to_json(const PolicyCertificate& cert);
Json capacity_to_json(const CapacityReport& cap);
Json relax_to_json(const RelaxSolution& sol);
Json report_to_json(const PipelineReport& report);

Json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const Json& j);

// Rows t,commodity_id,inventory,total_space at `samples` evenly spaced times over [0, horizon).
void write_trace_csv(std::ostream& out, const Instance& instance, const CyclicPolicy& policy, double horizon,
                     std::size_t samples);

}  // namespace ewls
