// report.hpp: JSON views of parameters and fixed-point reports.
#pragma once

#include "dimer/core.hpp"
#include "dimer/fixedpoints.hpp"

#include "json.hpp"

namespace dimer::experiments {

nlohmann::json to_json(const SystemParams& p);
/// Missing keys keep the defaults; unknown keys are rejected.
SystemParams params_from_json(const nlohmann::json& j, SystemParams base = {});

/// {params, fixed_points: [{s, kind, index, eigenvalues, energy}], region, index_sum}
nlohmann::json to_json(const fixedpoints::Report& r);

}  // namespace dimer::experiments
