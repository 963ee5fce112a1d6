#include <limits>

#include "sim_kernels.hpp"

// Plain-loop reference drivers. Tests assert these agree bitwise with the
// OpenMP drivers in sim.cpp; the benchmark tool compares their throughput.

namespace densbound::sim {

PathBatch euler_maruyama_serial(const std::vector<double>& x0, const DriftModel& drift,
                                const SimConfig& cfg) {
  cfg.validate();
  if (x0.size() != static_cast<std::size_t>(cfg.d))
    throw std::invalid_argument("invalid config: x0 must have length d");
  PathBatch out;
  out.n_paths = cfg.n_paths;
  out.d = cfg.d;
  out.n_steps = cfg.n_steps();
  out.dt = cfg.dt;
  out.terminal.resize(cfg.n_paths * cfg.d);
  if (cfg.record_full_paths) out.paths.resize(cfg.n_paths * (out.n_steps + 1) * cfg.d);
  for (std::int64_t i = 0; i < cfg.n_paths; ++i)
    if (!detail::em_path(i, x0, drift, cfg, out))
      throw DriftBoundViolation("drift bound violated inside declared region");
  return out;
}

PathBatch simulate_drbm_serial(const drbm::DrbmParams& p, const SimConfig& cfg) {
  cfg.validate();
  p.validate();
  if (cfg.d != 1) throw std::invalid_argument("invalid config: simulate_drbm requires d = 1");
  PathBatch out;
  out.n_paths = cfg.n_paths;
  out.d = 1;
  out.n_steps = cfg.n_steps();
  out.dt = cfg.dt;
  out.terminal.resize(cfg.n_paths);
  if (cfg.record_full_paths) out.paths.resize(cfg.n_paths * (out.n_steps + 1));
  for (std::int64_t i = 0; i < cfg.n_paths; ++i) detail::drbm_path(i, p, cfg, out);
  return out;
}

ViolationReport coupled_comparison_serial(const std::vector<double>& x0,
                                          const std::vector<double>& x_center,
                                          const DriftModel& drift, double C, double l,
                                          const SimConfig& cfg) {
  cfg.validate();
  if (x0.size() != static_cast<std::size_t>(cfg.d) ||
      x_center.size() != static_cast<std::size_t>(cfg.d))
    throw std::invalid_argument("invalid config: x0 and x_center must have length d");
  if (!(C >= 0.0) || !(l > 0.0))
    throw std::invalid_argument("invalid config: C >= 0 and l > 0 required");

  const double slack = 5.0 * std::sqrt(cfg.dt);
  detail::CoupledAccum acc;
  for (std::int64_t i = 0; i < cfg.n_paths; ++i)
    if (!detail::coupled_path(i, x0, x_center, drift, C, l, cfg, slack, acc))
      throw DriftBoundViolation("drift bound violated inside declared region");
  return ViolationReport{cfg.n_paths * cfg.n_steps() * cfg.d, acc.violations, acc.max_excess,
                         slack};
}

}  // namespace densbound::sim
