#include "densbound/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "densbound/bounds.hpp"
#include "densbound/drbm.hpp"
#include "densbound/normal.hpp"
#include "densbound/probe.hpp"
#include "densbound/rng.hpp"
#include "densbound/sim.hpp"

namespace densbound::verify {

namespace {

constexpr double kPi = std::numbers::pi;

std::int64_t scaled(double scale, std::int64_t n, std::int64_t floor_n) {
  return std::max(floor_n, static_cast<std::int64_t>(static_cast<double>(n) * scale));
}

// Collects the bitwise serial-vs-threaded comparisons fed into the
// determinism criterion by the simulation-based checks.
struct ThreadChecks {
  std::int64_t runs = 0;
  std::int64_t mismatches = 0;
};

// Runs a simulation under the requested thread count and under a single
// thread, records whether the outputs agree bitwise, and returns the batch.
sim::PathBatch run_pair(const std::function<sim::PathBatch(int)>& run, int threads,
                        ThreadChecks& tc) {
  sim::PathBatch a = run(threads > 0 ? threads : 8);
  sim::PathBatch b = run(1);
  ++tc.runs;
  if (a.terminal != b.terminal) ++tc.mismatches;
  return a;
}

double closed_form_integral_rhs(const drbm::DrbmParams& p) {
  return std::sqrt(2.0 * kPi / p.t) * std::exp(-p.x * p.x / (2.0 * p.t)) +
         2.0 * kPi * p.C *
             normal::stable_exp_times_cdf_deficit(
                 -p.C * p.x + 0.5 * p.t * p.C * p.C,
                 std::sqrt(p.t) * p.C - p.x / std::sqrt(p.t));
}

// Converged (2/l) sum of [f-g](n pi / l) with certified raw tail <= tol.
double raw_series(const drbm::DrbmParams& p, double tol) {
  double s = 0.0, comp = 0.0;
  std::int64_t n = 0;
  while (drbm::series_tail_bound(n, p) > tol) {
    if (++n > 2000000) throw std::runtime_error("no convergence in raw series");
    const double z = n * kPi / p.l;
    const double term = drbm::summand_f(z, p.t, p.x, p.C) - drbm::summand_g(z, p.t, p.x, p.C);
    const double acc = s + term;
    comp += (std::abs(s) >= std::abs(term)) ? (s - acc) + term : (term - acc) + s;
    s = acc;
  }
  return 2.0 / p.l * (s + comp);
}

Check criterion1_appendix_identities() {
  double worst = 0.0;
  for (double a : {0.5, 1.0, 2.0, 5.0}) {
    for (double b : {0.0, 0.5, 1.0, 3.0}) {
      const double cos_q = probe::quadrature(
          [a, b](double z) {
            return a * a * std::cos(b * z) / (a * a + z * z) * normal::std_normal_pdf(z);
          },
          -40.0, 40.0, 1e-12);
      const double sin_q = probe::quadrature(
          [a, b](double z) {
            return z * std::sin(b * z) / (a * a + z * z) * normal::std_normal_pdf(z);
          },
          -40.0, 40.0, 1e-12);
      worst = std::max(worst, std::abs(probe::normal_expectation_cos(a, b) - cos_q));
      worst = std::max(worst, std::abs(probe::normal_expectation_sin(a, b) - sin_q));
    }
  }
  return {1, "appendix identities vs quadrature", worst <= 1e-9, worst, 1e-9, ""};
}

Check criterion2_integral_identity() {
  double worst = 0.0;
  for (double C : {0.5, 1.0, 2.0}) {
    for (double t : {0.25, 1.0, 4.0}) {
      for (double x : {0.0, 0.5, 1.0}) {
        const drbm::DrbmParams p{C, 2.0, t, x};  // l plays no role in the identity
        const double rhs = closed_form_integral_rhs(p);
        const double rel = probe::verify_integral_identity(p, 1e-9) / (1.0 + std::abs(rhs));
        worst = std::max(worst, rel);
      }
    }
  }
  return {2, "integral identity residual (relative)", worst <= 1e-8, worst, 1e-8, ""};
}

Check criterion3_sandwich() {
  double worst = -1e300;  // worst violation of I-F <= mid <= I+F
  for (double C : {0.5, 1.0, 2.0}) {
    for (double t : {0.25, 1.0, 4.0}) {
      for (double x : {0.0, 0.5, 1.0}) {
        for (double l : {0.5, 1.0, 2.0}) {
          if (x > l) continue;
          const drbm::DrbmParams p{C, l, t, x};
          const double mid = raw_series(p, 1e-10 * l / 2.0);
          const double I = drbm::integral_I(p);
          const double F = drbm::euler_maclaurin_error_F(p);
          worst = std::max(worst, (I - F) - mid);
          worst = std::max(worst, mid - (I + F));
        }
      }
    }
  }
  return {3, "Euler-Maclaurin sandwich margin", worst <= 1e-9, worst, 1e-9, ""};
}

Check criterion4_derivative_envelope() {
  const double h = 1e-6;
  double worst = 0.0;  // max of (|f'|+|g'|) / envelope
  for (double C : {0.5, 1.0, 2.0}) {
    for (double t : {0.25, 1.0, 4.0}) {
      for (double x : {0.0, 0.5, 1.0}) {
        const drbm::DrbmParams p{C, 2.0, t, x};
        for (int i = 1; i <= 200; ++i) {
          const double z = 8.0 * i / 200.0;
          const double fp = (drbm::summand_f(z + h, t, x, C) - drbm::summand_f(z - h, t, x, C)) /
                            (2.0 * h);
          const double gp = (drbm::summand_g(z + h, t, x, C) - drbm::summand_g(z - h, t, x, C)) /
                            (2.0 * h);
          const double env = drbm::derivative_envelope(z, p);
          if (env > 1e-300) worst = std::max(worst, (std::abs(fp) + std::abs(gp)) / env);
        }
      }
    }
  }
  return {4, "derivative envelope ratio", worst <= 1.0 + 1e-4, worst, 1.0 + 1e-4, ""};
}

Check criterion5_dominance() {
  double worst = -1e300;  // positive = violation, in density units
  for (double C : {0.5, 1.0, 2.0}) {
    for (double t : {0.25, 1.0, 4.0}) {
      for (double l : {0.5, 1.0, 2.0}) {
        const auto at0 = drbm::transition_density_at_zero({C, l, t, 0.0}, {1e-10, 1000000});
        for (double frac : {0.0, 0.25, 0.5, 1.0}) {
          const drbm::DrbmParams p{C, l, t, frac * l};
          const auto s = drbm::transition_density_at_zero(p, {1e-10, 1000000});
          worst = std::max(worst, s.value - s.tail_bound - drbm::density_upper_bound(p));
          worst = std::max(worst, s.value - s.tail_bound - (at0.value + at0.tail_bound));
        }
      }
    }
  }
  return {5, "bound dominance margin", worst <= 0.0, worst, 0.0, ""};
}

Check criterion6_simulator_vs_kernel(double scale, int threads, ThreadChecks& tc) {
  // Short-time run against the series density at the zero boundary.
  const drbm::DrbmParams p{1.0, 1.0, 0.5, 0.3};
  const sim::SimConfig cfg{1e-4, 0.5, scaled(scale, 1000000, 20000), 20260826u, 1};
  const sim::PathBatch short_t =
      run_pair([&](int th) { return sim::simulate_drbm(p, cfg, th); }, threads, tc);
  const double dev_zero = std::abs(probe::zero_bin_deviation(short_t.terminal, p, 20));

  // Long-time run against the stationary truncated exponential.
  const drbm::DrbmParams ps{1.0, 1.0, 20.0, 0.3};
  const sim::SimConfig cfg_s{1e-3, 20.0, scaled(scale, 200000, 20000), 20260827u, 1};
  const sim::PathBatch long_t =
      run_pair([&](int th) { return sim::simulate_drbm(ps, cfg_s, th); }, threads, tc);
  const double dev_stat =
      probe::stationary_histogram_deviation(long_t.terminal, ps.C, ps.l, 20);

  const double worst = std::max(dev_zero, dev_stat);
  return {6, "simulator vs kernel (max standardized bin deviation)", worst <= 4.0, worst, 4.0,
          "zero bin " + std::to_string(dev_zero) + ", stationary " + std::to_string(dev_stat)};
}

Check criterion7_pathwise_comparison(double scale, int threads, ThreadChecks& tc) {
  std::int64_t total_violations = 0;
  std::int64_t total_checks = 0;
  const double C = 1.0, l = 1.0;
  for (int d : {1, 2}) {
    const std::vector<double> x0 = (d == 1) ? std::vector<double>{0.2}
                                            : std::vector<double>{0.2, -0.3};
    const std::vector<double> center(d, 0.0);
    for (const char* name : {"zero", "constant", "bang-bang"}) {
      const auto model = sim::preset_drift(name, C, center, d);
      const sim::SimConfig cfg{1e-4, 0.5, scaled(scale, 10000, 500), 4242u + d, d};
      // thread invariance of the report
      const auto rep = sim::coupled_comparison(x0, center, model, C, l, cfg,
                                               threads > 0 ? threads : 8);
      const auto rep1 = sim::coupled_comparison_serial(x0, center, model, C, l, cfg);
      ++tc.runs;
      if (rep.violations != rep1.violations || rep.max_excess != rep1.max_excess)
        ++tc.mismatches;
      total_violations += rep.violations;
      total_checks += rep.n_checks;
    }
  }
  return {7, "pathwise comparison violations", total_violations == 0,
          static_cast<double>(total_violations), 0.0,
          std::to_string(total_checks) + " grid checks"};
}

Check criterion8_bound_validity(double scale, int threads, ThreadChecks& tc) {
  const double C = 1.0, l = 1.0, t = 0.5;
  const std::vector<double> x0{0.0};
  double worst = -1e300;  // (estimate - bound) / std_error, max over cases
  std::string detail;
  int preset_idx = 0;
  for (const char* name : {"constant", "bang-bang", "running-max"}) {
    const auto model = sim::preset_drift(name, C, x0, 1);
    const sim::SimConfig cfg{1e-4, t, scaled(scale, 1000000, 50000),
                             777000u + static_cast<unsigned>(preset_idx++), 1};
    const sim::PathBatch batch =
        run_pair([&](int th) { return sim::euler_maruyama(x0, model, cfg, th); }, threads, tc);
    for (double x : {0.0, 0.25, -0.25}) {
      const auto est =
          probe::empirical_density_at(batch.terminal, 1, std::vector<double>{x}, 0.05);
      const auto local = bounds::local_density_bound({x0, {x}, t, C, l, 1});
      const auto global = bounds::global_density_bound(x0, {x}, t, C, 1);
      const double se = std::max(est.std_error, 1e-12);
      worst = std::max(worst, (est.value - local.product) / se);
      worst = std::max(worst, (est.value - global.value) / se);
      if (est.value > local.product + 3.0 * est.std_error ||
          est.value > global.value + 3.0 * est.std_error)
        detail += std::string(name) + " x=" + std::to_string(x) + " exceeds; ";
    }
  }
  return {8, "end-to-end bound validity (worst (est-bound)/se)", worst <= 3.0, worst, 3.0,
          detail};
}

Check criterion9_global_limit() {
  double worst = 0.0;
  for (double a : {0.0, 0.5, 1.0}) {
    for (double C : {0.5, 1.0}) {
      for (double t : {0.5, 1.0}) {
        const auto local = bounds::sharp_local_bound({{0.0}, {a}, t, C, 1e3, 1});
        const auto global = bounds::global_density_bound({0.0}, {a}, t, C, 1);
        worst = std::max(worst, std::abs(local.value - global.value));
      }
    }
  }
  return {9, "global-limit consistency", worst <= 1e-3, worst, 1e-3, ""};
}

// Euler-Maruyama for dY = b(Y)dt + sigma(Y)dW, chunked like the library
// drivers so a thread-count comparison is meaningful.
std::vector<double> simulate_scalar_sde(const std::function<double(double)>& b,
                                        const std::function<double(double)>& sigma, double y0,
                                        double dt, double horizon, std::int64_t n_paths,
                                        std::uint64_t seed, int n_threads) {
  const std::int64_t n_steps = std::llround(horizon / dt);
  const double sqdt = std::sqrt(dt);
  std::vector<double> terminal(n_paths);
  const std::int64_t chunk = 4096;
  const std::int64_t n_chunks = (n_paths + chunk - 1) / chunk;
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(n_threads > 0 ? n_threads : 1)
#endif
  for (std::int64_t c = 0; c < n_chunks; ++c) {
    const std::int64_t end = std::min(n_paths, (c + 1) * chunk);
    for (std::int64_t i = c * chunk; i < end; ++i) {
      double y = y0;
      for (std::int64_t k = 0; k < n_steps; ++k)
        y += b(y) * dt + sigma(y) * sqdt * rng::normal(seed, i, k, 0);
      terminal[i] = y;
    }
  }
  return terminal;
}

Check criterion10_lamperti(double scale, int threads, ThreadChecks& tc) {
  // Closed-form oracle for the transform itself.
  const bounds::ScalarFieldSpec quad{[](double u) { return 1.0 + u * u; }, 1.0, 26.0, 10.0, 0.0};
  double transform_err = 0.0;
  for (double y : {-3.0, -1.0, 0.5, 2.0}) {
    transform_err = std::max(
        transform_err, std::abs(bounds::lamperti_transform(quad, y, 1e-12) - std::atan(y)));
  }
  if (transform_err > 1e-10)
    return {10, "Lamperti extension", false, transform_err, 1e-10, "arctan oracle failed"};

  auto sigma = [](double u) { return 2.0 + std::sin(u); };
  const bounds::Interval region{-5.0, 5.0};
  const double t = 0.5, y0 = 0.0, dt = 1e-3;
  const std::int64_t n = scaled(scale, 400000, 50000);

  double worst = -1e300;
  int case_idx = 0;
  for (bool with_drift : {false, true}) {
    auto b = with_drift ? std::function<double(double)>([](double y) { return 0.5 * std::cos(y); })
                        : std::function<double(double)>([](double) { return 0.0; });
    const bounds::ScalarFieldSpec spec{sigma, 1.0, 3.0, 1.0, with_drift ? 0.5 : 0.0};

    auto run = [&](int th) {
      return simulate_scalar_sde(b, sigma, y0, dt, t, n, 99000u + case_idx, th);
    };
    const std::vector<double> terminal = run(threads > 0 ? threads : 8);
    const std::vector<double> terminal1 = run(1);
    ++tc.runs;
    if (terminal != terminal1) ++tc.mismatches;

    for (double y : {-1.0, 0.0, 1.0}) {
      const auto est = probe::empirical_density_at(terminal, 1, std::vector<double>{y}, 0.05);
      const double bound = bounds::state_dependent_bound_1d(spec, y0, y, t, region);
      const double se = std::max(est.std_error, 1e-12);
      worst = std::max(worst, (est.value - bound) / se);
    }
    ++case_idx;
  }
  return {10, "Lamperti extension (worst (est-bound)/se)", worst <= 3.0, worst, 3.0,
          "transform err " + std::to_string(transform_err)};
}

Check criterion11_determinism(const ThreadChecks& tc) {
  return {11, "thread-count determinism", tc.mismatches == 0 && tc.runs > 0,
          static_cast<double>(tc.mismatches), 0.0,
          std::to_string(tc.runs) + " paired reruns compared bitwise"};
}

}  // namespace

bool all_passed(const std::vector<Check>& checks) {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

std::vector<Check> run_suite(const std::string& suite, const Options& opts) {
  std::vector<Check> out;
  ThreadChecks tc;
  const bool all = suite == "all";
  if (all || suite == "identities") {
    out.push_back(criterion1_appendix_identities());
    out.push_back(criterion2_integral_identity());
    out.push_back(criterion3_sandwich());
    out.push_back(criterion4_derivative_envelope());
  }
  if (all || suite == "dominance") {
    out.push_back(criterion5_dominance());
    out.push_back(criterion9_global_limit());
  }
  if (all || suite == "comparison") {
    out.push_back(criterion7_pathwise_comparison(opts.scale, opts.threads, tc));
  }
  if (all || suite == "montecarlo") {
    out.push_back(criterion6_simulator_vs_kernel(opts.scale, opts.threads, tc));
    out.push_back(criterion8_bound_validity(opts.scale, opts.threads, tc));
    out.push_back(criterion10_lamperti(opts.scale, opts.threads, tc));
    out.push_back(criterion11_determinism(tc));
  }
  if (out.empty()) throw std::invalid_argument("unknown suite: " + suite);
  std::sort(out.begin(), out.end(),
            [](const Check& a, const Check& b) { return a.criterion < b.criterion; });
  return out;
}

}  // namespace densbound::verify
