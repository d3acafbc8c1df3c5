// experiments.hpp: drivers behind the figures and the quantitative studies.
//
// Every driver returns plain data plus a Table for CSV output. Grid and sweep
// work is spread over threads with parallel_for; results keep input order.
#pragma once

#include "dimer/core.hpp"
#include "dimer/experiments/table.hpp"
#include "dimer/manybody.hpp"
#include "dimer/meanfield.hpp"

#include <optional>
#include <string>
#include <vector>

namespace dimer::experiments {

/// One swept parameter: "name:start:stop:count" with name one of epsilon, v,
/// gamma, g.
struct SweepSpec {
  std::string parameter = "gamma";
  double start = 0.0;
  double stop = 1.0;
  int count = 2;
  SystemParams base;
  std::string output;

  static SweepSpec parse(const std::string& text, const SystemParams& base);
  /// count >= 2, finite range, known parameter; std::invalid_argument otherwise.
  void validate() const;
  std::vector<double> values() const;
  SystemParams at(double value) const;
};

// ---- spectra

inline constexpr double kCollisionTol = 1e-8;

struct SpectrumSweep {
  std::string parameter;
  int n_particles = 0;
  std::vector<double> values;
  /// branches[i][b]: eigenvalue of branch b at values[i]; NaN in failed rows
  std::vector<std::vector<cplx>> branches;
  std::vector<bool> failed;
  /// the nearest-neighbour assignment at this row was ambiguous (near an EP)
  std::vector<bool> collision;
  /// mean-field energies H - i Gamma per particle, when requested
  std::vector<std::vector<cplx>> meanfield;

  Table table() const;
};

/// Assigns current eigenvalues to the previous branches by global greedy
/// nearest-neighbour matching. Returns the reordered eigenvalues; sets
/// *ambiguous when branches moved further than the spacing between them.
std::vector<cplx> match_branches(const std::vector<cplx>& previous, const std::vector<cplx>& current,
                                 bool* ambiguous = nullptr);

SpectrumSweep spectrum_sweep(const SweepSpec& spec, int n_particles, bool with_meanfield = false,
                             int threads = 0);

// ---- half-life maps

/// min(50 / gamma, 1e4).
double default_t_max(double gamma);

struct HalfLifeOptions {
  int n_p = 20;
  int n_q = 20;
  std::optional<double> t_max;
  meanfield::MeanFieldOptions tol;
  double mp_step = 0.25;  // coarse many-body step before root refinement, times 1/v
  int threads = 0;
};

struct HalfLifeMap {
  SystemParams params;
  std::optional<int> n_particles;  // empty for the mean-field map
  std::vector<double> p_values;    // cell centres in (-1, 1)
  std::vector<double> q_values;    // cell centres in (0, pi)
  std::vector<double> times;       // p-major; +inf where capped
  double t_max = 0.0;

  double at(std::size_t ip, std::size_t iq) const { return times[ip * q_values.size() + iq]; }
  /// Columns p, q, half_life (-1 when capped), capped.
  Table table() const;
};

/// First time n(t) = 1/2 starting from s with n = 1, or +inf if later than t_max.
double halflife_meanfield_point(const BlochVector& s0, const SystemParams& p, double t_max,
                                const meanfield::MeanFieldOptions& tol = {});
/// Same for the rescaled many-body norm of the coherent state at s0.
double halflife_manybody_point(const BlochVector& s0, const SystemParams& p, int n_particles, double t_max,
                               double step = 0.25);

HalfLifeMap halflife_meanfield(const SystemParams& p, const HalfLifeOptions& opts = {});
HalfLifeMap halflife_manybody(const SystemParams& p, int n_particles, const HalfLifeOptions& opts = {});

/// sup |a - b| over cells finite in both maps; std::invalid_argument if the
/// grids differ.
double map_distance(const HalfLifeMap& a, const HalfLifeMap& b);

// ---- self-trapping

struct SelfTrapMap {
  std::vector<double> g_values;
  std::vector<double> times;
  std::vector<std::vector<double>> sz;  // sz[ig][it]
  std::vector<double> max_sz;
  std::vector<double> first_crossing;   // first rising sz = 0 crossing, NaN if none

  /// Long format: g, t, sz.
  Table table() const;
  /// One row per g: g, max_sz, first_crossing.
  Table summary() const;
};

/// First time sz rises through 0 within t_max, if any.
std::optional<double> first_equator_crossing(const BlochVector& s0, const SystemParams& p, double t_max,
                                             const meanfield::MeanFieldOptions& tol = {});

SelfTrapMap selftrapping_map(const SystemParams& base, const std::vector<double>& g_values,
                             const std::vector<double>& t_grid, const BlochVector& s0, int threads = 0);

inline constexpr double kSouthPoleZ = -0.5;

/// Bisection in g on [0, g_max] for the interaction where the start s0
/// (south pole by default) stops reaching sz >= 0 within t_max. Empty if the
/// start never reaches the equator (no oscillatory regime) or still does at
/// g_max.
std::optional<double> separatrix_interaction(const SystemParams& base, const BlochVector& s0 = {0, 0, kSouthPoleZ},
                                             double g_max = 10.0, double t_max = 200.0, double tol = 1e-4);

// ---- many-body vs mean field

struct Comparison {
  std::vector<double> times;
  std::vector<BlochVector> mf;
  std::vector<BlochVector> mp;  // <L>/N
  std::vector<double> mf_norm;
  std::vector<double> mp_rescaled_norm;

  /// Columns t, mf_sz, mp_sz, mf_norm, mp_rescaled_norm.
  Table table() const;
};

Comparison compare_mp_mf(const SystemParams& p, int n_particles, double theta, double phi,
                         const std::vector<double>& t_grid, const meanfield::MeanFieldOptions& tol = {});

// ---- separatrices

struct ManifoldCurve {
  std::string label;  // unstable+, unstable-, stable+, stable-
  std::vector<double> times;
  std::vector<BlochVector> points;
  std::optional<std::size_t> end_fixed_point;  // index into Manifolds::fixed_points
};

struct Manifolds {
  BlochVector saddle;
  std::vector<BlochVector> fixed_points;
  std::vector<ManifoldCurve> curves;

  /// Columns curve, t, sx, sy, sz.
  Table table() const;
};

inline constexpr double kManifoldOffset = 1e-6;
inline constexpr double kManifoldStop = 1e-4;

/// Integrates from saddle +- offset along the unstable (forward) and stable
/// (backward) eigenvectors until a fixed point is approached within 1e-4 or
/// |t| = t_max. std::invalid_argument if there is no saddle.
Manifolds trace_manifolds(const SystemParams& p, double t_max = 100.0, double sample_dt = 0.05,
                          double offset = kManifoldOffset);

// ---- trajectories

/// Columns t, sx, sy, sz, norm, log_norm.
Table trajectory_table(const Trajectory& tr);
/// Columns t, lx, ly, lz, norm, rescaled_norm.
Table manybody_table(const std::vector<double>& times, const std::vector<manybody::FockVector>& states);

/// Evenly spaced grid with count points on [t0, t1].
std::vector<double> linspace(double t0, double t1, int count);

}  // namespace dimer::experiments
