// Benchmark: OpenMP path-loop drivers vs the serial reference
// implementations. Also asserts that the two agree bitwise, since any
// divergence would make the comparison meaningless.

#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#include <omp.h>

#include "densbound/sim.hpp"

using namespace densbound;

namespace {

double seconds(const std::chrono::steady_clock::time_point a,
               const std::chrono::steady_clock::time_point b) {
  return std::chrono::duration<double>(b - a).count();
}

template <typename F>
double time_best_of(int reps, F&& f) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    const auto t1 = std::chrono::steady_clock::now();
    best = std::min(best, seconds(t0, t1));
  }
  return best;
}

void report(const std::string& name, std::int64_t paths, std::int64_t steps, double t_serial,
            double t_parallel, bool bitwise) {
  const double ops = static_cast<double>(paths) * steps;
  std::printf("%-14s %8lld paths x %6lld steps  serial %8.3fs  parallel %8.3fs  "
              "speedup %5.2fx  %9.2e steps/s  bitwise %s\n",
              name.c_str(), static_cast<long long>(paths), static_cast<long long>(steps),
              t_serial, t_parallel, t_serial / t_parallel, ops / t_parallel,
              bitwise ? "ok" : "MISMATCH");
}

}  // namespace

int main(int argc, char** argv) {
  std::int64_t n_paths = 200000;
  int reps = 3;
  if (argc > 1) n_paths = std::atoll(argv[1]);
  if (argc > 2) reps = std::atoi(argv[2]);

  std::printf("omp max threads: %d\n", omp_get_max_threads());

  const sim::SimConfig cfg{1e-3, 0.5, n_paths, 42, 2};
  const std::vector<double> x0{0.1, -0.2};
  const auto model = sim::bang_bang_drift(1.0, {0.0, 0.0});

  {
    sim::PathBatch ser, par;
    const double ts = time_best_of(reps, [&] { ser = sim::euler_maruyama_serial(x0, model, cfg); });
    const double tp = time_best_of(reps, [&] { par = sim::euler_maruyama(x0, model, cfg); });
    report("euler-maruyama", cfg.n_paths, cfg.n_steps(), ts, tp, ser.terminal == par.terminal);
  }
  {
    const drbm::DrbmParams p{1.0, 1.0, 0.5, 0.3};
    const sim::SimConfig c1{1e-3, 0.5, n_paths, 42, 1};
    sim::PathBatch ser, par;
    const double ts = time_best_of(reps, [&] { ser = sim::simulate_drbm_serial(p, c1); });
    const double tp = time_best_of(reps, [&] { par = sim::simulate_drbm(p, c1); });
    report("reflected", c1.n_paths, c1.n_steps(), ts, tp, ser.terminal == par.terminal);
  }
  {
    const std::vector<double> center{0.0, 0.0};
    sim::ViolationReport ser{}, par{};
    const double ts = time_best_of(
        reps, [&] { ser = sim::coupled_comparison_serial(x0, center, model, 1.0, 1.0, cfg); });
    const double tp = time_best_of(
        reps, [&] { par = sim::coupled_comparison(x0, center, model, 1.0, 1.0, cfg); });
    report("coupled", cfg.n_paths, cfg.n_steps(), ts, tp,
           ser.violations == par.violations && ser.max_excess == par.max_excess);
  }
  return 0;
}
