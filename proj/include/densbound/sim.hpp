#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "densbound/drbm.hpp"

// Seeded Monte Carlo simulators: Euler-Maruyama for d-dimensional Ito
// processes with pluggable (possibly path-dependent) drift, a doubly
// reflected Brownian motion on [0,l], and the coupled construction that
// checks the pathwise comparison on simulated paths.
//
// The OpenMP drivers in sim.cpp partition paths into fixed chunks; the
// counter-based RNG makes the output a pure function of (seed, config), so
// any thread count reproduces the serial reference bitwise. The plain-loop
// reference implementations live in sim_serial.cpp and are kept for tests
// and benchmarks.

namespace densbound::sim {

struct DriftBoundViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Axis-aligned box; empty bounds mean "everywhere".
struct Box {
  std::vector<double> lo;
  std::vector<double> hi;

  bool contains(std::span<const double> x) const {
    if (lo.empty()) return true;
    for (std::size_t j = 0; j < x.size(); ++j)
      if (!(lo[j] < x[j] && x[j] < hi[j])) return false;
    return true;
  }
};

// Per-path state exposed to path-dependent drift rules.
struct PathContext {
  double running_max0;  // max of the first coordinate over the grid so far
};

using DriftRule = std::function<void(double t, std::span<const double> x,
                                     const PathContext& ctx, std::span<double> out)>;

struct DriftModel {
  DriftRule rule;
  double declared_bound;  // C: ||rule output||_inf <= C while x is in region
  Box region;
  std::string name;
};

// Shipped presets.
DriftModel zero_drift();
DriftModel constant_drift(double c, int d);
DriftModel bang_bang_drift(double C, std::vector<double> center);
DriftModel running_max_tanh_drift(double C);
// Preset lookup for the CLI: zero | constant | bang-bang | running-max.
DriftModel preset_drift(const std::string& name, double C, const std::vector<double>& center,
                        int d);

struct SimConfig {
  double dt;
  double horizon;        // integer multiple of dt
  std::int64_t n_paths;
  std::uint64_t seed;
  int d;
  bool record_full_paths = false;

  std::int64_t n_steps() const;
  void validate() const;
};

struct PathBatch {
  std::int64_t n_paths;
  int d;
  std::int64_t n_steps;
  double dt;
  std::vector<double> terminal;  // n_paths x d, row-major
  std::vector<double> paths;     // optional: path i at [i*(n_steps+1)*d + k*d + j]
};

struct ViolationReport {
  std::int64_t n_checks;
  std::int64_t violations;
  double max_excess;  // largest Z_j - (|X_j - x_j| + slack) observed
  double slack;
};

// X_{k+1} = X_k + beta(t_k, X_k) dt + sqrt(dt) xi_k. Throws
// DriftBoundViolation if the rule exceeds its declared bound inside the
// region. n_threads <= 0 uses the OpenMP default.
PathBatch euler_maruyama(const std::vector<double>& x0, const DriftModel& drift,
                         const SimConfig& cfg, int n_threads = 0);

// Maps y into [0,l] by reduction modulo 2l and mirroring; idempotent.
double fold_reflect(double y, double l);

// Z_{k+1} = fold_reflect(Z_k - C dt + sqrt(dt) xi_k, l), Z_0 = p.x (d = 1).
PathBatch simulate_drbm(const drbm::DrbmParams& p, const SimConfig& cfg, int n_threads = 0);

// Couples X (Euler-Maruyama with `drift`) to per-coordinate reflected
// processes Z_j driven by sign(X_j - x_j) xi and drift -C, started at
// min{l, |x0_j - x_j|}. Counts grid points where Z_j exceeds |X_j - x_j|
// beyond a 5 sqrt(dt) discretization slack.
ViolationReport coupled_comparison(const std::vector<double>& x0,
                                   const std::vector<double>& x_center,
                                   const DriftModel& drift, double C, double l,
                                   const SimConfig& cfg, int n_threads = 0);

// Serial reference implementations (plain loops, no OpenMP). Must agree
// bitwise with the drivers above.
PathBatch euler_maruyama_serial(const std::vector<double>& x0, const DriftModel& drift,
                                const SimConfig& cfg);
PathBatch simulate_drbm_serial(const drbm::DrbmParams& p, const SimConfig& cfg);
ViolationReport coupled_comparison_serial(const std::vector<double>& x0,
                                          const std::vector<double>& x_center,
                                          const DriftModel& drift, double C, double l,
                                          const SimConfig& cfg);

}  // namespace densbound::sim
