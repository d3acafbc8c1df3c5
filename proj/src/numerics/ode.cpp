#include "dimer/numerics/ode.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace dimer::numerics {
namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5.0, c3 = 3.0 / 10.0, c4 = 4.0 / 5.0, c5 = 8.0 / 9.0;
constexpr double a21 = 1.0 / 5.0;
constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0,
                 a54 = -212.0 / 729.0;
constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                 a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
constexpr double a71 = 35.0 / 384.0, a73 = 500.0 / 1113.0, a74 = 125.0 / 192.0,
                 a75 = -2187.0 / 6784.0, a76 = 11.0 / 84.0;
constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                 e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;
constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                 d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                 d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

std::string fmt_time(double t) {
  std::ostringstream os;
  os.precision(17);
  os << t;
  return os.str();
}

}  // namespace

void DenseSegment::eval(double t, std::span<double> out) const {
  const double th = h == 0.0 ? 0.0 : (t - t0) / h;
  const double th1 = 1.0 - th;
  for (std::size_t i = 0; i < r1.size(); ++i) {
    out[i] = r1[i] + th * (r2[i] + th1 * (r3[i] + th * (r4[i] + th1 * r5[i])));
  }
}

std::vector<double> OdeSolution::operator()(double t) const {
  if (dense.empty()) throw std::logic_error("OdeSolution: no dense output stored");
  // segments are ordered along the direction of integration
  const bool forward = dense.front().h >= 0.0;
  auto it = std::lower_bound(dense.begin(), dense.end(), t, [forward](const DenseSegment& s, double x) {
    return forward ? s.t0 + s.h < x : s.t0 + s.h > x;
  });
  if (it == dense.end()) it = std::prev(dense.end());
  std::vector<double> y(it->r1.size());
  it->eval(t, y);
  return y;
}

OdeSolution integrate_ode(const OdeRhs& rhs_in, std::vector<double> y, double t0_in, double t1_in,
                          const std::vector<double>& output_times, const OdeOptions& opts,
                          const std::vector<OdeEvent>& events) {
  if (!std::isfinite(t0_in) || !std::isfinite(t1_in)) throw std::invalid_argument("integrate_ode: non-finite time span");
  if (!(opts.atol > 0.0) || !(opts.rtol >= 0.0)) throw std::invalid_argument("integrate_ode: bad tolerances");
  const std::size_t n = y.size();

  // Everything below runs in the forward variable tau = dir * t.
  const double dir = t1_in >= t0_in ? 1.0 : -1.0;
  const double t0 = dir * t0_in;
  const double t1 = dir * t1_in;
  auto f = [&](double tau, std::span<const double> yy, std::span<double> dy) {
    rhs_in(dir * tau, yy, dy);
    if (dir < 0.0)
      for (auto& d : dy) d = -d;
  };

  std::vector<double> outs;
  outs.reserve(output_times.size());
  for (double t : output_times) {
    const double tau = dir * t;
    if (tau < t0 - 1e-12 * std::max(1.0, std::abs(t0)) || tau > t1 + 1e-12 * std::max(1.0, std::abs(t1)))
      throw std::invalid_argument("integrate_ode: output time outside the span");
    outs.push_back(std::clamp(tau, t0, t1));
  }
  if (!std::is_sorted(outs.begin(), outs.end())) throw std::invalid_argument("integrate_ode: output times not sorted");

  std::vector<double> stops;
  for (double t : opts.stop_times) {
    const double tau = dir * t;
    if (tau > t0 && tau < t1) stops.push_back(tau);
  }
  std::sort(stops.begin(), stops.end());
  stops.push_back(t1);

  OdeSolution sol;
  sol.t_out.reserve(outs.size());
  sol.y_out.reserve(outs.size());

  std::size_t next_out = 0;
  auto emit = [&](double tau, const std::vector<double>& yy) {
    sol.t_out.push_back(dir * tau);
    sol.y_out.push_back(yy);
  };
  while (next_out < outs.size() && outs[next_out] <= t0) {
    emit(outs[next_out], y);
    ++next_out;
  }

  std::vector<double> k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), ytmp(n), ynew(n), yerr(n);
  double t = t0;
  f(t, y, k1);

  auto err_norm = [&](const std::vector<double>& ya, const std::vector<double>& yb, const std::vector<double>& e) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double sc = opts.atol + opts.rtol * std::max(std::abs(ya[i]), std::abs(yb[i]));
      s += (e[i] / sc) * (e[i] / sc);
    }
    return n == 0 ? 0.0 : std::sqrt(s / static_cast<double>(n));
  };

  double h = opts.h_initial;
  if (h <= 0.0) {
    // Hairer's starting-step heuristic.
    double d0 = 0.0, d1n = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double sc = opts.atol + opts.rtol * std::abs(y[i]);
      d0 += (y[i] / sc) * (y[i] / sc);
      d1n += (k1[i] / sc) * (k1[i] / sc);
    }
    d0 = std::sqrt(d0 / std::max<std::size_t>(n, 1));
    d1n = std::sqrt(d1n / std::max<std::size_t>(n, 1));
    double h0 = (d0 < 1e-5 || d1n < 1e-5) ? 1e-6 : 0.01 * d0 / d1n;
    h0 = std::min(h0, t1 - t0);
    for (std::size_t i = 0; i < n; ++i) ytmp[i] = y[i] + h0 * k1[i];
    f(t + h0, ytmp, k2);
    double d2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double sc = opts.atol + opts.rtol * std::abs(y[i]);
      d2 += ((k2[i] - k1[i]) / sc) * ((k2[i] - k1[i]) / sc);
    }
    d2 = std::sqrt(d2 / std::max<std::size_t>(n, 1)) / h0;
    const double dm = std::max(d1n, d2);
    const double h1 = dm <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / dm, 0.2);
    h = std::min(100.0 * h0, h1);
  }
  h = std::min(h, opts.h_max);

  std::vector<double> ev_prev(events.size());
  for (std::size_t e = 0; e < events.size(); ++e) ev_prev[e] = events[e].fn(dir * t, y);

  std::size_t stop_idx = 0;
  double fac_old = 1e-4;
  bool last_rejected = false;
  DenseSegment seg;
  seg.r1.resize(n);
  seg.r2.resize(n);
  seg.r3.resize(n);
  seg.r4.resize(n);
  seg.r5.resize(n);

  while (t < t1) {
    while (stop_idx < stops.size() && stops[stop_idx] <= t) ++stop_idx;
    const double target = stops[std::min(stop_idx, stops.size() - 1)];
    bool hit_stop = false;
    const double h_proposed = h;
    if (t + h >= target || (target - t - h) < 1e-13 * std::max(1.0, std::abs(target))) {
      h = target - t;
      hit_stop = true;
    }
    if (sol.accepted_steps + sol.rejected_steps >= opts.max_steps)
      throw OdeError("integrate_ode: step budget exhausted at t = " + fmt_time(dir * t), dir * t);
    if (!(h > 16.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t))))
      throw OdeError("integrate_ode: step size underflow at t = " + fmt_time(dir * t), dir * t);

    for (std::size_t i = 0; i < n; ++i) ytmp[i] = y[i] + h * a21 * k1[i];
    f(t + c2 * h, ytmp, k2);
    for (std::size_t i = 0; i < n; ++i) ytmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
    f(t + c3 * h, ytmp, k3);
    for (std::size_t i = 0; i < n; ++i) ytmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    f(t + c4 * h, ytmp, k4);
    for (std::size_t i = 0; i < n; ++i)
      ytmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    f(t + c5 * h, ytmp, k5);
    for (std::size_t i = 0; i < n; ++i)
      ytmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
    f(t + h, ytmp, k6);
    for (std::size_t i = 0; i < n; ++i)
      ynew[i] = y[i] + h * (a71 * k1[i] + a73 * k3[i] + a74 * k4[i] + a75 * k5[i] + a76 * k6[i]);
    f(t + h, ynew, k7);
    for (std::size_t i = 0; i < n; ++i)
      yerr[i] = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);

    const double err = err_norm(y, ynew, yerr);
    bool finite = std::isfinite(err);
    for (double v : ynew) finite = finite && std::isfinite(v);

    if (!finite || err > 1.0) {
      ++sol.rejected_steps;
      const double fac = finite ? std::max(0.2, 0.9 * std::pow(err, -0.2)) : 0.1;
      h *= last_rejected ? std::min(fac, 0.5) : fac;
      last_rejected = true;
      continue;
    }

    // accepted: build interpolant from pre-hook values
    for (std::size_t i = 0; i < n; ++i) {
      const double ydiff = ynew[i] - y[i];
      const double bspl = h * k1[i] - ydiff;
      seg.r1[i] = y[i];
      seg.r2[i] = ydiff;
      seg.r3[i] = bspl;
      seg.r4[i] = ydiff - h * k7[i] - bspl;
      seg.r5[i] = h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i] + d7 * k7[i]);
    }
    seg.t0 = t;
    seg.h = h;
    const double t_new = hit_stop ? target : t + h;
    ++sol.accepted_steps;

    // events on the interpolant
    double t_cut = t_new;
    std::optional<std::size_t> terminal_event;
    if (!events.empty()) {
      std::vector<double> yy(n);
      struct Pending {
        std::size_t idx;
        double t;
      };
      std::vector<Pending> found;
      for (std::size_t e = 0; e < events.size(); ++e) {
        const double g_new = events[e].fn(dir * t_new, ynew);
        const double g_old = ev_prev[e];
        const bool rising = g_old < 0.0 && g_new >= 0.0;
        const bool falling = g_old > 0.0 && g_new <= 0.0;
        const int want = events[e].direction * static_cast<int>(dir);
        if ((rising && want >= 0) || (falling && want <= 0)) {
          double lo = t, hi = t_new;
          double glo = g_old;
          while (hi - lo > opts.event_tol) {
            const double mid = 0.5 * (lo + hi);
            seg.eval(mid, yy);
            const double gm = events[e].fn(dir * mid, yy);
            if ((glo < 0.0 && gm >= 0.0) || (glo > 0.0 && gm <= 0.0)) {
              hi = mid;
            } else {
              lo = mid;
              glo = gm;
            }
          }
          found.push_back({e, hi});
        }
        ev_prev[e] = g_new;
      }
      std::sort(found.begin(), found.end(), [](const Pending& a, const Pending& b) { return a.t < b.t; });
      for (const auto& p : found) {
        EventHit hit;
        hit.event_index = p.idx;
        hit.t = dir * p.t;
        hit.y.resize(n);
        seg.eval(p.t, hit.y);
        sol.events.push_back(std::move(hit));
        if (events[p.idx].terminal) {
          terminal_event = p.idx;
          t_cut = p.t;
          break;
        }
      }
    }

    while (next_out < outs.size() && outs[next_out] <= t_cut) {
      std::vector<double> yy(n);
      if (outs[next_out] >= t_new) {
        yy = ynew;
      } else {
        seg.eval(outs[next_out], yy);
      }
      emit(outs[next_out], yy);
      ++next_out;
    }
    if (opts.store_dense) sol.dense.push_back(seg);

    if (terminal_event) {
      sol.terminated_by_event = true;
      sol.t_final = dir * t_cut;
      sol.y_final = sol.events.back().y;
      return sol;
    }

    t = t_new;
    y = ynew;
    bool modified = false;
    if (opts.post_step) {
      std::vector<double> before = y;
      opts.post_step(dir * t, y);
      modified = before != y;
    }
    if (modified) {
      f(t, y, k1);  // the FSAL stage no longer matches the state
      for (std::size_t e = 0; e < events.size(); ++e) ev_prev[e] = events[e].fn(dir * t, y);
    } else {
      k1 = k7;
    }

    const double fac = err == 0.0 ? 10.0 : std::clamp(0.9 * std::pow(err, -0.17) * std::pow(fac_old, 0.04), 0.2, 10.0);
    fac_old = std::max(err, 1e-4);
    double h_next = h * fac;
    if (last_rejected) h_next = std::min(h_next, h);
    last_rejected = false;
    // a step clipped to a stop time says nothing about the natural size
    h = hit_stop ? std::max(h_next, h_proposed) : h_next;
    h = std::min(h, opts.h_max);
  }

  while (next_out < outs.size()) {
    emit(outs[next_out], y);
    ++next_out;
  }
  sol.t_final = dir * t;
  sol.y_final = y;
  return sol;
}

}  // namespace dimer::numerics
