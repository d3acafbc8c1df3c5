#include "dimer/experiments/report.hpp"

#include <stdexcept>

namespace dimer::experiments {
namespace {

nlohmann::json complex_json(cplx z) { return {{"re", z.real()}, {"im", z.imag()}}; }

}  // namespace

nlohmann::json to_json(const SystemParams& p) {
  nlohmann::json j{{"epsilon", p.epsilon}, {"v", p.v},         {"gamma", p.gamma},
                   {"g", p.g},             {"variant", to_string(p.variant)}};
  j["n_particles"] = p.n_particles ? nlohmann::json(*p.n_particles) : nlohmann::json(nullptr);
  return j;
}

SystemParams params_from_json(const nlohmann::json& j, SystemParams base) {
  if (!j.is_object()) throw std::invalid_argument("params: expected a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (key == "epsilon") base.epsilon = value.get<double>();
    else if (key == "v") base.v = value.get<double>();
    else if (key == "gamma") base.gamma = value.get<double>();
    else if (key == "g") base.g = value.get<double>();
    else if (key == "variant") base.variant = variant_from_string(value.get<std::string>());
    else if (key == "n_particles") {
      if (value.is_null()) base.n_particles.reset();
      else base.n_particles = value.get<int>();
    } else {
      throw std::invalid_argument("params: unknown key '" + key + "'");
    }
  }
  return base;
}

nlohmann::json to_json(const fixedpoints::Report& r) {
  nlohmann::json pts = nlohmann::json::array();
  for (const auto& fp : r.points) {
    pts.push_back({{"s", {fp.location.sx, fp.location.sy, fp.location.sz}},
                   {"kind", fixedpoints::to_string(fp.kind)},
                   {"index", fp.index},
                   {"eigenvalues", {complex_json(fp.jacobian_eigenvalues[0]), complex_json(fp.jacobian_eigenvalues[1])}},
                   {"energy", complex_json(fp.energy.value())}});
  }
  nlohmann::json region = nullptr;
  if (r.region) {
    region = {{"label", fixedpoints::to_string(r.region->region)},
              {"on_circle", r.region->on_circle},
              {"on_gamma_line", r.region->on_gamma_line},
              {"hermitian", r.region->hermitian}};
  }
  return {{"params", to_json(r.params)}, {"fixed_points", pts}, {"region", region}, {"index_sum", r.index_sum}};
}

}  // namespace dimer::experiments
