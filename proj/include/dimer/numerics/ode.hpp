// ode.hpp: adaptive Dormand-Prince 5(4) integrator with dense output and
// event location.
#pragma once

#include "dimer/core.hpp"

#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace dimer::numerics {

using OdeRhs = std::function<void(double t, std::span<const double> y, std::span<double> dydt)>;

/// Scalar event function; a root is a sign change between two accepted steps.
struct OdeEvent {
  std::function<double(double t, std::span<const double> y)> fn;
  bool terminal = false;
  int direction = 0;  // 0 any crossing, +1 rising only, -1 falling only
};

struct OdeOptions {
  double atol = 1e-10;
  double rtol = 1e-9;
  double h_initial = 0.0;  // 0 selects a starting step automatically
  double h_max = std::numeric_limits<double>::infinity();
  double event_tol = 1e-12;
  std::size_t max_steps = 5'000'000;
  bool store_dense = false;
  /// Times the integrator must land on exactly (e.g. output grid points when
  /// interpolation is undesirable).
  std::vector<double> stop_times;
  /// Called on every accepted step end; may modify y in place (projection).
  std::function<void(double t, std::span<double> y)> post_step;
};

struct EventHit {
  std::size_t event_index = 0;
  double t = 0.0;
  std::vector<double> y;
};

/// One accepted step's interpolant, valid on [t0, t0 + h].
struct DenseSegment {
  double t0 = 0.0;
  double h = 0.0;
  std::vector<double> r1, r2, r3, r4, r5;
  void eval(double t, std::span<double> out) const;
};

struct OdeSolution {
  std::vector<double> t_out;
  std::vector<std::vector<double>> y_out;
  std::vector<EventHit> events;
  double t_final = 0.0;
  std::vector<double> y_final;
  bool terminated_by_event = false;
  std::size_t accepted_steps = 0;
  std::size_t rejected_steps = 0;
  std::vector<DenseSegment> dense;  // filled when OdeOptions::store_dense

  /// Evaluate the stored interpolant; requires store_dense.
  std::vector<double> operator()(double t) const;
};

class OdeError : public NumericalError {
 public:
  OdeError(const std::string& what, double last_t) : NumericalError(what), last_t_(last_t) {}
  double last_valid_time() const { return last_t_; }

 private:
  double last_t_;
};

/// Integrates y' = f(t, y) from t0 to t1, recording y at the (sorted) output
/// times. t1 < t0 integrates backwards.
OdeSolution integrate_ode(const OdeRhs& rhs, std::vector<double> y0, double t0, double t1,
                          const std::vector<double>& output_times, const OdeOptions& opts = {},
                          const std::vector<OdeEvent>& events = {});

}  // namespace dimer::numerics
