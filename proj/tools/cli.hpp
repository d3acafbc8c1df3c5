// cli.hpp: the dimersim front end, callable in-process for tests.
#pragma once

#include "dimer/core.hpp"

#include "json.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace dimersim {

struct RunConfig {
  std::string command;
  dimer::SystemParams params;
  std::optional<double> theta0;  // default: 0, or pi for selftrap
  double phi0 = 0.0;
  std::optional<double> t_max;   // default depends on the command
  double dt = 0.05;
  std::optional<std::string> sweep;
  bool mean_field = false;
  int n_p = 20;
  int n_q = 20;
  double mp_step = 0.25;
  std::string out_dir;           // empty: primary output to stdout
  int threads = 0;
  double atol = 1e-10;
  double rtol = 1e-9;
};

nlohmann::json to_json(const RunConfig& c);
/// Unknown keys are rejected; missing keys keep the values in base.
RunConfig config_from_json(const nlohmann::json& j, RunConfig base = {});

/// Exit codes: 0 success, 2 invalid input or usage, 1 numerical failure.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dimersim
