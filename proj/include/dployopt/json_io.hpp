#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "dployopt/manager.hpp"
#include "dployopt/measurements.hpp"
#include "dployopt/model.hpp"
#include "dployopt/moo.hpp"
#include "dployopt/optimizer.hpp"
#include "dployopt/simulator.hpp"

namespace dployopt {

using json = nlohmann::json;

DeviceProfile device_from_json(const json& j);
DeviceProfile load_device_profile(std::istream& in);
DeviceProfile load_device_profile_file(const std::string& path);

std::vector<ModelVariant> catalog_from_json(const json& j);
std::vector<ModelVariant> load_catalog(std::istream& in);
std::vector<ModelVariant> load_catalog_file(const std::string& path);
json catalog_to_json(const std::vector<ModelVariant>& catalog);

MooProblem problem_from_json(const json& j);
MooProblem load_problem_file(const std::string& path);
json problem_to_json(const MooProblem& p);

Scenario scenario_from_json(const json& j);
Scenario load_scenario_file(const std::string& path);

GenSpec genspec_from_json(const json& j);
GenSpec load_genspec_file(const std::string& path);

json result_to_json(const OptimizationResult& result, const LookupTable& table);
json report_to_json(const ExplainReport& report);
ExplainReport report_from_json(const json& j);

json load_json_file(const std::string& path);

}  // namespace dployopt
