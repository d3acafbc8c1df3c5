#include "dimer/experiments.hpp"

#include "dimer/experiments/parallel.hpp"
#include "dimer/numerics/expm.hpp"
#include "dimer/numerics/ode.hpp"

#include <boost/math/tools/roots.hpp>

#include <cmath>
#include <limits>
#include <stdexcept>

namespace dimer::experiments {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
const double kLogHalf = std::log(0.5);

void check_t_max(double t_max) {
  if (!(t_max > 0.0) || !std::isfinite(t_max)) throw std::invalid_argument("half-life: t_max must be positive and finite");
}

HalfLifeMap empty_map(const SystemParams& p, const HalfLifeOptions& opts) {
  if (opts.n_p < 1 || opts.n_q < 1) throw std::invalid_argument("half-life: grid dimensions must be >= 1");
  HalfLifeMap m;
  m.params = p;
  m.t_max = opts.t_max.value_or(default_t_max(p.gamma));
  check_t_max(m.t_max);
  for (int i = 0; i < opts.n_p; ++i) m.p_values.push_back(-1.0 + (i + 0.5) * 2.0 / opts.n_p);
  for (int j = 0; j < opts.n_q; ++j) m.q_values.push_back((j + 0.5) * kPi / opts.n_q);
  m.times.assign(m.p_values.size() * m.q_values.size(), kInf);
  return m;
}

}  // namespace

double default_t_max(double gamma) { return gamma > 0.0 ? std::min(50.0 / gamma, 1e4) : 1e4; }

double halflife_meanfield_point(const BlochVector& s0, const SystemParams& p, double t_max,
                                const meanfield::MeanFieldOptions& tol) {
  p.validate();
  check_t_max(t_max);
  if (p.gamma == 0.0) return kInf;
  numerics::OdeOptions o;
  o.atol = tol.atol;
  o.rtol = tol.rtol;
  o.post_step = meanfield::sphere_projector();
  const numerics::OdeEvent half{[](double, std::span<const double> y) { return y[3] - kLogHalf; }, true, -1};
  const auto sol = numerics::integrate_ode(meanfield::bloch_system(p), {s0.sx, s0.sy, s0.sz, 0.0}, 0.0, t_max, {}, o,
                                           {half});
  return sol.terminated_by_event ? sol.events.back().t : kInf;
}

double halflife_manybody_point(const BlochVector& s0, const SystemParams& p, int n_particles, double t_max,
                               double step) {
  p.validate();
  check_t_max(t_max);
  if (!(step > 0.0)) throw std::invalid_argument("half-life: step must be positive");
  if (p.gamma == 0.0) return kInf;
  double th, ph;
  angles_from_bloch(s0, th, ph);
  manybody::FockVector psi = manybody::coherent_state(th, ph, n_particles);
  manybody::Propagator prop(p, n_particles);
  const double n = n_particles;
  auto excess = [&](const manybody::FockVector& f) { return f.log_norm() / n - kLogHalf; };

  const double h = step / p.v;
  double t = 0.0;
  while (t < t_max) {
    const double dt = std::min(h, t_max - t);
    manybody::FockVector next = prop.step(psi, dt);
    if (excess(next) <= 0.0) {
      // the norm is monotone, so [t, t + dt] brackets the only crossing
      const auto& hm = prop.hamiltonian();
      auto f = [&](double tau) {
        if (tau <= 0.0) return excess(psi);
        if (tau >= dt) return excess(next);
        manybody::FockVector x = psi;
        x.amplitudes = numerics::matvec(numerics::expm(cplx(0, -tau) * hm), std::span<const cplx>(psi.amplitudes));
        return excess(x);
      };
      std::uintmax_t iters = 100;
      const auto r = boost::math::tools::toms748_solve(f, 0.0, dt, f(0.0), excess(next),
                                                       boost::math::tools::eps_tolerance<double>(48), iters);
      return t + 0.5 * (r.first + r.second);
    }
    psi = std::move(next);
    t += dt;
  }
  return kInf;
}

HalfLifeMap halflife_meanfield(const SystemParams& p, const HalfLifeOptions& opts) {
  p.validate();
  HalfLifeMap m = empty_map(p, opts);
  const std::size_t nq = m.q_values.size();
  parallel_for(m.times.size(), opts.threads, [&](std::size_t k) {
    const BlochVector s = bloch_from_canonical(m.p_values[k / nq], m.q_values[k % nq]);
    m.times[k] = halflife_meanfield_point(s, p, m.t_max, opts.tol);
  });
  return m;
}

HalfLifeMap halflife_manybody(const SystemParams& p, int n_particles, const HalfLifeOptions& opts) {
  p.validate();
  if (n_particles < 1) throw std::invalid_argument("half-life: n_particles must be >= 1");
  HalfLifeMap m = empty_map(p, opts);
  m.n_particles = n_particles;
  const std::size_t nq = m.q_values.size();
  parallel_for(m.times.size(), opts.threads, [&](std::size_t k) {
    const BlochVector s = bloch_from_canonical(m.p_values[k / nq], m.q_values[k % nq]);
    m.times[k] = halflife_manybody_point(s, p, n_particles, m.t_max, opts.mp_step);
  });
  return m;
}

double map_distance(const HalfLifeMap& a, const HalfLifeMap& b) {
  if (a.p_values != b.p_values || a.q_values != b.q_values)
    throw std::invalid_argument("map_distance: grids differ");
  double d = 0.0;
  for (std::size_t k = 0; k < a.times.size(); ++k)
    if (std::isfinite(a.times[k]) && std::isfinite(b.times[k])) d = std::max(d, std::abs(a.times[k] - b.times[k]));
  return d;
}

Table HalfLifeMap::table() const {
  Table t;
  t.header = {"p", "q", "half_life", "capped"};
  for (std::size_t i = 0; i < p_values.size(); ++i)
    for (std::size_t j = 0; j < q_values.size(); ++j) {
      const double h = at(i, j);
      const bool capped = !std::isfinite(h);
      t.add_row({p_values[i], q_values[j], capped ? -1.0 : h, static_cast<long long>(capped)});
    }
  return t;
}

}  // namespace dimer::experiments
