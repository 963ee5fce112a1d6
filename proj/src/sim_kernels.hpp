#pragma once

// Per-path step kernels shared by the OpenMP drivers (sim.cpp) and the
// serial reference (sim_serial.cpp). A kernel is a pure function of
// (seed, path index, config), which is what makes the two drivers agree
// bitwise.

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "densbound/rng.hpp"
#include "densbound/sim.hpp"

namespace densbound::sim::detail {

inline double sign(double v) { return (v > 0.0) - (v < 0.0); }

inline bool within_declared_bound(std::span<const double> b, double C) {
  double worst = 0.0;
  for (double v : b) worst = std::max(worst, std::abs(v));
  return worst <= C * (1.0 + 1e-12);
}

// Returns false if the drift rule violates its declared bound inside the
// declared region.
inline bool em_path(std::int64_t i, const std::vector<double>& x0, const DriftModel& drift,
                    const SimConfig& cfg, PathBatch& out) {
  const int d = cfg.d;
  const std::int64_t n_steps = cfg.n_steps();
  const double sqdt = std::sqrt(cfg.dt);
  std::vector<double> x(x0);
  std::vector<double> b(d);
  PathContext ctx{x[0]};

  double* rec = cfg.record_full_paths ? &out.paths[i * (n_steps + 1) * d] : nullptr;
  if (rec)
    for (int j = 0; j < d; ++j) rec[j] = x[j];

  for (std::int64_t k = 0; k < n_steps; ++k) {
    drift.rule(k * cfg.dt, x, ctx, b);
    if (drift.region.contains(x) && !within_declared_bound(b, drift.declared_bound))
      return false;
    for (int j = 0; j < d; ++j)
      x[j] += b[j] * cfg.dt + sqdt * rng::normal(cfg.seed, i, k, static_cast<std::uint32_t>(j));
    ctx.running_max0 = std::max(ctx.running_max0, x[0]);
    if (rec)
      for (int j = 0; j < d; ++j) rec[(k + 1) * d + j] = x[j];
  }
  for (int j = 0; j < d; ++j) out.terminal[i * d + j] = x[j];
  return true;
}

inline void drbm_path(std::int64_t i, const drbm::DrbmParams& p, const SimConfig& cfg,
                      PathBatch& out) {
  const std::int64_t n_steps = cfg.n_steps();
  const double sqdt = std::sqrt(cfg.dt);
  double z = p.x;
  double* rec = cfg.record_full_paths ? &out.paths[i * (n_steps + 1)] : nullptr;
  if (rec) rec[0] = z;
  for (std::int64_t k = 0; k < n_steps; ++k) {
    z = fold_reflect(z - p.C * cfg.dt + sqdt * rng::normal(cfg.seed, i, k, 0), p.l);
    if (rec) rec[k + 1] = z;
  }
  out.terminal[i] = z;
}

struct CoupledAccum {
  std::int64_t violations = 0;
  double max_excess = -std::numeric_limits<double>::infinity();
};

// Evolves X and the per-coordinate reflected comparison processes Z_j in
// lockstep on shared increments. Returns false on a drift bound violation.
inline bool coupled_path(std::int64_t i, const std::vector<double>& x0,
                         const std::vector<double>& center, const DriftModel& drift,
                         double C, double l, const SimConfig& cfg, double slack,
                         CoupledAccum& acc) {
  const int d = cfg.d;
  const std::int64_t n_steps = cfg.n_steps();
  const double sqdt = std::sqrt(cfg.dt);
  std::vector<double> x(x0);
  std::vector<double> b(d);
  std::vector<double> z(d);
  for (int j = 0; j < d; ++j) z[j] = std::min(l, std::abs(x0[j] - center[j]));
  PathContext ctx{x[0]};

  for (std::int64_t k = 0; k < n_steps; ++k) {
    drift.rule(k * cfg.dt, x, ctx, b);
    if (drift.region.contains(x) && !within_declared_bound(b, drift.declared_bound))
      return false;
    for (int j = 0; j < d; ++j) {
      const double xi = rng::normal(cfg.seed, i, k, static_cast<std::uint32_t>(j));
      // Driver increment uses the pre-step position of X.
      const double db = sign(x[j] - center[j]) * xi;
      z[j] = fold_reflect(z[j] - C * cfg.dt + sqdt * db, l);
      x[j] += b[j] * cfg.dt + sqdt * xi;
    }
    ctx.running_max0 = std::max(ctx.running_max0, x[0]);
    for (int j = 0; j < d; ++j) {
      const double excess = z[j] - (std::abs(x[j] - center[j]) + slack);
      if (excess > 0.0) ++acc.violations;
      acc.max_excess = std::max(acc.max_excess, excess);
    }
  }
  return true;
}

}  // namespace densbound::sim::detail
