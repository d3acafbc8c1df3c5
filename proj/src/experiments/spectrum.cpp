#include "dimer/experiments.hpp"

#include "dimer/experiments/parallel.hpp"
#include "dimer/fixedpoints.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace dimer::experiments {
namespace {

const cplx kNaN{std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN()};

double parse_double(const std::string& s, const std::string& what) {
  std::size_t used = 0;
  double x = 0;
  try {
    x = std::stod(s, &used);
  } catch (const std::exception&) {
    used = std::string::npos;
  }
  if (used != s.size()) throw std::invalid_argument("sweep: bad " + what + " '" + s + "'");
  return x;
}

}  // namespace

SweepSpec SweepSpec::parse(const std::string& text, const SystemParams& base) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ':');) parts.push_back(item);
  if (parts.size() != 4) throw std::invalid_argument("sweep: expected name:start:stop:count, got '" + text + "'");
  SweepSpec s;
  s.parameter = parts[0];
  s.start = parse_double(parts[1], "start");
  s.stop = parse_double(parts[2], "stop");
  const double count = parse_double(parts[3], "count");
  if (count != std::floor(count) || count > 1e7) throw std::invalid_argument("sweep: count must be an integer");
  s.count = static_cast<int>(count);
  s.base = base;
  s.validate();
  return s;
}

void SweepSpec::validate() const {
  if (parameter != "epsilon" && parameter != "v" && parameter != "gamma" && parameter != "g")
    throw std::invalid_argument("sweep: unknown parameter '" + parameter + "' (expected epsilon, v, gamma or g)");
  if (count < 2) throw std::invalid_argument("sweep: count must be >= 2");
  if (!std::isfinite(start) || !std::isfinite(stop)) throw std::invalid_argument("sweep: range must be finite");
  at(start).validate();
  at(stop).validate();
}

std::vector<double> SweepSpec::values() const {
  std::vector<double> out(count);
  for (int i = 0; i < count; ++i) out[i] = start + (stop - start) * i / (count - 1);
  out.back() = stop;
  return out;
}

SystemParams SweepSpec::at(double value) const {
  SystemParams p = base;
  if (parameter == "epsilon") p.epsilon = value;
  else if (parameter == "v") p.v = value;
  else if (parameter == "gamma") p.gamma = value;
  else if (parameter == "g") p.g = value;
  return p;
}

std::vector<cplx> match_branches(const std::vector<cplx>& previous, const std::vector<cplx>& current,
                                 bool* ambiguous) {
  const std::size_t n = previous.size();
  if (current.size() != n) throw std::invalid_argument("match_branches: size mismatch");
  struct Pair {
    double d;
    std::size_t i, j;
  };
  std::vector<Pair> pairs;
  pairs.reserve(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) pairs.push_back({std::abs(previous[i] - current[j]), i, j});
  std::stable_sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) { return a.d < b.d; });
  std::vector<cplx> out(n);
  std::vector<bool> used_i(n, false), used_j(n, false);
  double moved = 0.0;
  std::size_t done = 0;
  for (const auto& pr : pairs) {
    if (used_i[pr.i] || used_j[pr.j]) continue;
    used_i[pr.i] = used_j[pr.j] = true;
    out[pr.i] = current[pr.j];
    moved = std::max(moved, pr.d);
    if (++done == n) break;
  }
  if (ambiguous) {
    double scale = 1.0, spacing = std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < n; ++a) {
      scale = std::max(scale, std::abs(current[a]));
      for (std::size_t b = a + 1; b < n; ++b) spacing = std::min(spacing, std::abs(current[a] - current[b]));
    }
    *ambiguous = spacing <= moved || spacing <= kCollisionTol * scale;
  }
  return out;
}

SpectrumSweep spectrum_sweep(const SweepSpec& spec, int n_particles, bool with_meanfield, int threads) {
  spec.validate();
  if (n_particles < 1) throw std::invalid_argument("spectrum_sweep: n_particles must be >= 1");
  SpectrumSweep out;
  out.parameter = spec.parameter;
  out.n_particles = n_particles;
  out.values = spec.values();
  const std::size_t rows = out.values.size();
  std::vector<std::vector<cplx>> raw(rows);
  out.failed.assign(rows, false);
  out.collision.assign(rows, false);
  if (with_meanfield) out.meanfield.resize(rows);

  std::vector<char> failed(rows, 0);
  parallel_for(rows, threads, [&](std::size_t i) {
    const SystemParams p = spec.at(out.values[i]);
    try {
      raw[i] = manybody::spectrum(p, n_particles);
    } catch (const NumericalError&) {
      failed[i] = 1;
    }
    if (with_meanfield) {
      try {
        out.meanfield[i] = fixedpoints::meanfield_energies(p);
      } catch (const NumericalError&) {
        out.meanfield[i].clear();
      }
    }
  });

  out.branches.resize(rows);
  const std::vector<cplx>* last = nullptr;
  for (std::size_t i = 0; i < rows; ++i) {
    out.failed[i] = failed[i] != 0;
    if (out.failed[i]) {
      out.branches[i].assign(n_particles + 1, kNaN);
      continue;
    }
    if (!last) {
      out.branches[i] = raw[i];
      bool amb = false;
      match_branches(raw[i], raw[i], &amb);
      out.collision[i] = amb;
    } else {
      bool amb = false;
      out.branches[i] = match_branches(*last, raw[i], &amb);
      out.collision[i] = amb;
    }
    last = &out.branches[i];
  }
  return out;
}

Table SpectrumSweep::table() const {
  Table t;
  t.header.push_back(parameter);
  const int nb = n_particles + 1;
  for (int b = 0; b < nb; ++b) t.header.push_back("re_" + std::to_string(b));
  for (int b = 0; b < nb; ++b) t.header.push_back("im_" + std::to_string(b));
  std::size_t nmf = 0;
  for (const auto& m : meanfield) nmf = std::max(nmf, m.size());
  if (!meanfield.empty()) nmf = std::max<std::size_t>(nmf, 4);
  for (std::size_t k = 0; k < nmf; ++k) t.header.push_back("mf_re_" + std::to_string(k));
  for (std::size_t k = 0; k < nmf; ++k) t.header.push_back("mf_im_" + std::to_string(k));
  t.header.push_back("failed");
  t.header.push_back("collision");
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t i = 0; i < values.size(); ++i) {
    std::vector<Cell> row{values[i]};
    for (int b = 0; b < nb; ++b) row.emplace_back(branches[i][b].real());
    for (int b = 0; b < nb; ++b) row.emplace_back(branches[i][b].imag());
    for (std::size_t k = 0; k < nmf; ++k) row.emplace_back(k < meanfield[i].size() ? meanfield[i][k].real() : nan);
    for (std::size_t k = 0; k < nmf; ++k) row.emplace_back(k < meanfield[i].size() ? meanfield[i][k].imag() : nan);
    row.emplace_back(static_cast<long long>(failed[i]));
    row.emplace_back(static_cast<long long>(collision[i]));
    t.add_row(std::move(row));
  }
  return t;
}

}  // namespace dimer::experiments
