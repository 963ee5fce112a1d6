#include "densbound/sim.hpp"

#include <atomic>
#include <cmath>
#include <limits>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "sim_kernels.hpp"

namespace densbound::sim {

std::int64_t SimConfig::n_steps() const { return std::llround(horizon / dt); }

void SimConfig::validate() const {
  if (!(dt > 0.0)) throw std::invalid_argument("invalid config: dt must be > 0");
  if (!(horizon > 0.0)) throw std::invalid_argument("invalid config: horizon must be > 0");
  const std::int64_t k = n_steps();
  if (k < 1 || std::abs(k * dt - horizon) > 1e-9 * horizon)
    throw std::invalid_argument("invalid config: horizon must be an integer multiple of dt");
  if (n_paths < 1) throw std::invalid_argument("invalid config: n_paths must be >= 1");
  if (d < 1) throw std::invalid_argument("invalid config: d must be >= 1");
}

double fold_reflect(double y, double l) {
  double r = std::fmod(y, 2.0 * l);
  if (r < 0.0) r += 2.0 * l;
  return (r <= l) ? r : 2.0 * l - r;
}

DriftModel zero_drift() {
  return DriftModel{[](double, std::span<const double>, const PathContext&, std::span<double> out) {
                      for (double& v : out) v = 0.0;
                    },
                    0.0, {}, "zero"};
}

DriftModel constant_drift(double c, int d) {
  (void)d;
  return DriftModel{[c](double, std::span<const double>, const PathContext&, std::span<double> out) {
                      for (double& v : out) v = c;
                    },
                    std::abs(c), {}, "constant"};
}

DriftModel bang_bang_drift(double C, std::vector<double> center) {
  return DriftModel{[C, center = std::move(center)](double, std::span<const double> x,
                                                    const PathContext&, std::span<double> out) {
                      for (std::size_t j = 0; j < out.size(); ++j)
                        out[j] = -C * detail::sign(x[j] - center[j]);
                    },
                    C, {}, "bang-bang"};
}

DriftModel running_max_tanh_drift(double C) {
  // Non-Markovian: depends on the running maximum of the first coordinate.
  return DriftModel{[C](double, std::span<const double>, const PathContext& ctx,
                        std::span<double> out) {
                      const double v = C * std::tanh(ctx.running_max0);
                      for (double& o : out) o = v;
                    },
                    C, {}, "running-max"};
}

DriftModel preset_drift(const std::string& name, double C, const std::vector<double>& center,
                        int d) {
  if (name == "zero") return zero_drift();
  if (name == "constant") return constant_drift(C, d);
  if (name == "bang-bang") return bang_bang_drift(C, center);
  if (name == "running-max") return running_max_tanh_drift(C);
  throw std::invalid_argument("unknown drift preset: " + name);
}

namespace {

constexpr std::int64_t kChunk = 4096;

// Chunked OpenMP dispatch. Kernels write disjoint slots indexed by path, so
// scheduling order cannot affect the result.
template <typename Fn>
void for_each_path(std::int64_t n_paths, int n_threads, Fn&& fn) {
  const std::int64_t n_chunks = (n_paths + kChunk - 1) / kChunk;
#ifdef _OPENMP
  if (n_threads > 0) {
#pragma omp parallel for schedule(dynamic) num_threads(n_threads)
    for (std::int64_t c = 0; c < n_chunks; ++c) {
      const std::int64_t end = std::min(n_paths, (c + 1) * kChunk);
      for (std::int64_t i = c * kChunk; i < end; ++i) fn(i);
    }
    return;
  }
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t c = 0; c < n_chunks; ++c) {
    const std::int64_t end = std::min(n_paths, (c + 1) * kChunk);
    for (std::int64_t i = c * kChunk; i < end; ++i) fn(i);
  }
#else
  (void)n_threads;
  for (std::int64_t i = 0; i < n_paths; ++i) fn(i);
#endif
}

PathBatch make_batch(const SimConfig& cfg) {
  PathBatch out;
  out.n_paths = cfg.n_paths;
  out.d = cfg.d;
  out.n_steps = cfg.n_steps();
  out.dt = cfg.dt;
  out.terminal.resize(cfg.n_paths * cfg.d);
  if (cfg.record_full_paths) out.paths.resize(cfg.n_paths * (out.n_steps + 1) * cfg.d);
  return out;
}

}  // namespace

PathBatch euler_maruyama(const std::vector<double>& x0, const DriftModel& drift,
                         const SimConfig& cfg, int n_threads) {
  cfg.validate();
  if (x0.size() != static_cast<std::size_t>(cfg.d))
    throw std::invalid_argument("invalid config: x0 must have length d");
  PathBatch out = make_batch(cfg);
  std::atomic<bool> violated{false};
  for_each_path(cfg.n_paths, n_threads, [&](std::int64_t i) {
    if (!detail::em_path(i, x0, drift, cfg, out)) violated.store(true, std::memory_order_relaxed);
  });
  if (violated.load()) throw DriftBoundViolation("drift bound violated inside declared region");
  return out;
}

PathBatch simulate_drbm(const drbm::DrbmParams& p, const SimConfig& cfg, int n_threads) {
  cfg.validate();
  p.validate();
  if (cfg.d != 1) throw std::invalid_argument("invalid config: simulate_drbm requires d = 1");
  PathBatch out = make_batch(cfg);
  for_each_path(cfg.n_paths, n_threads, [&](std::int64_t i) { detail::drbm_path(i, p, cfg, out); });
  return out;
}

ViolationReport coupled_comparison(const std::vector<double>& x0,
                                   const std::vector<double>& x_center, const DriftModel& drift,
                                   double C, double l, const SimConfig& cfg, int n_threads) {
  cfg.validate();
  if (x0.size() != static_cast<std::size_t>(cfg.d) ||
      x_center.size() != static_cast<std::size_t>(cfg.d))
    throw std::invalid_argument("invalid config: x0 and x_center must have length d");
  if (!(C >= 0.0) || !(l > 0.0))
    throw std::invalid_argument("invalid config: C >= 0 and l > 0 required");

  const double slack = 5.0 * std::sqrt(cfg.dt);
  const std::int64_t n_chunks = (cfg.n_paths + kChunk - 1) / kChunk;
  std::vector<detail::CoupledAccum> per_chunk(n_chunks);
  std::atomic<bool> violated{false};
  for_each_path(cfg.n_paths, n_threads, [&](std::int64_t i) {
    if (!detail::coupled_path(i, x0, x_center, drift, C, l, cfg, slack, per_chunk[i / kChunk]))
      violated.store(true, std::memory_order_relaxed);
  });
  if (violated.load()) throw DriftBoundViolation("drift bound violated inside declared region");

  // Fixed merge order over chunks keeps the report deterministic.
  ViolationReport r{cfg.n_paths * cfg.n_steps() * cfg.d, 0,
                    -std::numeric_limits<double>::infinity(), slack};
  for (const auto& acc : per_chunk) {
    r.violations += acc.violations;
    r.max_excess = std::max(r.max_excess, acc.max_excess);
  }
  return r;
}

}  // namespace densbound::sim
