#include "dimer/experiments.hpp"

#include "dimer/experiments/parallel.hpp"
#include "dimer/fixedpoints.hpp"
#include "dimer/numerics/ode.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace dimer::experiments {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

numerics::OdeOptions ode_options(const meanfield::MeanFieldOptions& tol) {
  numerics::OdeOptions o;
  o.atol = tol.atol;
  o.rtol = tol.rtol;
  o.post_step = meanfield::sphere_projector();
  return o;
}

BlochVector to_bloch(const std::vector<double>& y) { return BlochVector{y[0], y[1], y[2]}.projected(); }

}  // namespace

std::vector<double> linspace(double t0, double t1, int count) {
  if (count < 1) throw std::invalid_argument("linspace: count must be >= 1");
  if (count == 1) return {t0};
  std::vector<double> out(count);
  for (int i = 0; i < count; ++i) out[i] = t0 + (t1 - t0) * i / (count - 1);
  out.back() = t1;
  return out;
}

// ---- self-trapping

std::optional<double> first_equator_crossing(const BlochVector& s0, const SystemParams& p, double t_max,
                                             const meanfield::MeanFieldOptions& tol) {
  p.validate();
  if (s0.sphere_defect() > kSphereTolIntegration) throw std::invalid_argument("first_equator_crossing: s0 not on the sphere");
  const numerics::OdeEvent up{[](double, std::span<const double> y) { return y[2]; }, true, +1};
  const auto sol = numerics::integrate_ode(meanfield::bloch_system(p), {s0.sx, s0.sy, s0.sz, 0.0}, 0.0, t_max, {},
                                           ode_options(tol), {up});
  if (sol.terminated_by_event) return sol.events.back().t;
  return std::nullopt;
}

SelfTrapMap selftrapping_map(const SystemParams& base, const std::vector<double>& g_values,
                             const std::vector<double>& t_grid, const BlochVector& s0, int threads) {
  base.validate();
  if (t_grid.size() < 2) throw std::invalid_argument("selftrapping_map: need at least two times");
  SelfTrapMap m;
  m.g_values = g_values;
  m.times = t_grid;
  m.sz.resize(g_values.size());
  m.max_sz.resize(g_values.size());
  m.first_crossing.resize(g_values.size());
  parallel_for(g_values.size(), threads, [&](std::size_t i) {
    const SystemParams p = base.with_g(g_values[i]);
    const auto tr = meanfield::integrate_meanfield(s0, p, t_grid);
    auto& row = m.sz[i];
    row.reserve(tr.size());
    double mx = -1.0;
    for (const auto& s : tr.states) {
      row.push_back(s.sz);
      mx = std::max(mx, s.sz);
    }
    m.max_sz[i] = mx;
    const auto c = first_equator_crossing(s0, p, t_grid.back() - t_grid.front());
    m.first_crossing[i] = c ? t_grid.front() + *c : kNaN;
  });
  return m;
}

Table SelfTrapMap::table() const {
  Table t;
  t.header = {"g", "t", "sz"};
  for (std::size_t i = 0; i < g_values.size(); ++i)
    for (std::size_t k = 0; k < times.size(); ++k) t.add_row({g_values[i], times[k], sz[i][k]});
  return t;
}

Table SelfTrapMap::summary() const {
  Table t;
  t.header = {"g", "max_sz", "first_crossing"};
  for (std::size_t i = 0; i < g_values.size(); ++i) t.add_row({g_values[i], max_sz[i], first_crossing[i]});
  return t;
}

std::optional<double> separatrix_interaction(const SystemParams& base, const BlochVector& s0, double g_max,
                                             double t_max, double tol) {
  if (!(g_max > 0.0) || !(tol > 0.0)) throw std::invalid_argument("separatrix_interaction: g_max and tol must be positive");
  auto oscillates = [&](double g) { return first_equator_crossing(s0, base.with_g(g), t_max).has_value(); };
  double lo = 0.0, hi = g_max;
  if (!oscillates(lo) || oscillates(hi)) return std::nullopt;
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    (oscillates(mid) ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

// ---- comparison

Comparison compare_mp_mf(const SystemParams& p, int n_particles, double theta, double phi,
                         const std::vector<double>& t_grid, const meanfield::MeanFieldOptions& tol) {
  const BlochVector s0 = bloch_from_angles(theta, phi);
  const auto mf = meanfield::integrate_meanfield(s0, p, t_grid, meanfield::Formulation::Bloch, tol);
  const auto mp = manybody::propagate(manybody::coherent_state(theta, phi, n_particles), p, t_grid);
  Comparison c;
  c.times = t_grid;
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    c.mf.push_back(mf.states[i]);
    c.mf_norm.push_back(mf.norms[i]);
    c.mp.push_back(manybody::expectations(mp[i]).bloch());
    c.mp_rescaled_norm.push_back(manybody::rescaled_norm(mp[i]));
  }
  return c;
}

Table Comparison::table() const {
  Table t;
  t.header = {"t", "mf_sz", "mp_sz", "mf_norm", "mp_rescaled_norm"};
  for (std::size_t i = 0; i < times.size(); ++i) t.add_row({times[i], mf[i].sz, mp[i].sz, mf_norm[i], mp_rescaled_norm[i]});
  return t;
}

// ---- manifolds

Manifolds trace_manifolds(const SystemParams& p, double t_max, double sample_dt, double offset) {
  p.validate();
  if (!(t_max > 0.0) || !(sample_dt > 0.0) || !(offset > 0.0))
    throw std::invalid_argument("trace_manifolds: t_max, sample_dt and offset must be positive");
  Manifolds out;
  out.fixed_points = fixedpoints::solve_fixed_points(p);
  std::optional<fixedpoints::FixedPoint> saddle;
  for (const auto& s : out.fixed_points) {
    try {
      const auto fp = fixedpoints::classify(s, p);
      if (fp.kind == fixedpoints::Kind::Saddle) saddle = fp;
    } catch (const NumericalError&) {
      // degenerate points are not saddles
    }
  }
  if (!saddle) throw std::invalid_argument("trace_manifolds: no saddle point for these parameters");
  out.saddle = saddle->location;

  const auto m = fixedpoints::tangent_jacobian(out.saddle, p);
  BlochVector e1, e2;
  fixedpoints::tangent_basis(out.saddle, e1, e2);
  auto direction = [&](double lambda) {
    // eigenvector of the 2x2 block, from whichever row is better conditioned
    double a, b;
    if (std::abs(m[1]) >= std::abs(m[2])) {
      a = m[1];
      b = lambda - m[0];
    } else {
      a = lambda - m[3];
      b = m[2];
    }
    const double r = std::hypot(a, b);
    return (a / r) * e1 + (b / r) * e2;
  };
  const double lu = std::max(saddle->jacobian_eigenvalues[0].real(), saddle->jacobian_eigenvalues[1].real());
  const double ls = std::min(saddle->jacobian_eigenvalues[0].real(), saddle->jacobian_eigenvalues[1].real());

  // approaching a fixed point: the distance falls in the direction of integration,
  // so it rises in t on the backward runs
  auto arrival_events = [&](double t_end) {
    std::vector<numerics::OdeEvent> ev;
    for (const auto& fp : out.fixed_points)
      ev.push_back({[fp](double, std::span<const double> y) {
                      return distance(BlochVector{y[0], y[1], y[2]}, fp) - kManifoldStop;
                    },
                    true, t_end > 0.0 ? -1 : +1});
    return ev;
  };
  const auto rhs = meanfield::bloch_system(p);
  struct Task {
    std::string label;
    double lambda, sign, t_end;
  };
  const Task tasks[] = {{"unstable+", lu, 1.0, t_max},
                        {"unstable-", lu, -1.0, t_max},
                        {"stable+", ls, 1.0, -t_max},
                        {"stable-", ls, -1.0, -t_max}};
  for (const auto& task : tasks) {
    const BlochVector start = (out.saddle + (task.sign * offset) * direction(task.lambda)).projected();
    const int count = static_cast<int>(std::ceil(t_max / sample_dt)) + 1;
    const auto grid = linspace(0.0, task.t_end, count);
    numerics::OdeOptions o = ode_options({});
    const auto sol = numerics::integrate_ode(rhs, {start.sx, start.sy, start.sz, 0.0}, 0.0, task.t_end, grid, o,
                                             arrival_events(task.t_end));
    ManifoldCurve c;
    c.label = task.label;
    c.times = sol.t_out;
    for (const auto& y : sol.y_out) c.points.push_back(to_bloch(y));
    if (sol.terminated_by_event) {
      const auto& hit = sol.events.back();
      c.times.push_back(hit.t);
      c.points.push_back(to_bloch(hit.y));
      c.end_fixed_point = hit.event_index;
    }
    out.curves.push_back(std::move(c));
  }
  return out;
}

Table Manifolds::table() const {
  Table t;
  t.header = {"curve", "t", "sx", "sy", "sz"};
  for (const auto& c : curves)
    for (std::size_t i = 0; i < c.times.size(); ++i)
      t.add_row({c.label, c.times[i], c.points[i].sx, c.points[i].sy, c.points[i].sz});
  return t;
}

// ---- trajectories

Table trajectory_table(const Trajectory& tr) {
  Table t;
  t.header = {"t", "sx", "sy", "sz", "norm", "log_norm"};
  for (std::size_t i = 0; i < tr.size(); ++i) {
    const auto& s = tr.states[i];
    t.add_row({tr.times[i], s.sx, s.sy, s.sz, tr.norms[i], tr.log_norms[i]});
  }
  return t;
}

Table manybody_table(const std::vector<double>& times, const std::vector<manybody::FockVector>& states) {
  if (times.size() != states.size()) throw std::invalid_argument("manybody_table: size mismatch");
  Table t;
  t.header = {"t", "lx", "ly", "lz", "norm", "rescaled_norm"};
  for (std::size_t i = 0; i < times.size(); ++i) {
    const auto e = manybody::expectations(states[i]);
    t.add_row({times[i], e.lx, e.ly, e.lz, std::exp(states[i].log_norm()), manybody::rescaled_norm(states[i])});
  }
  return t;
}

}  // namespace dimer::experiments
