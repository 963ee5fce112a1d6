#include "densbound/probe.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "densbound/normal.hpp"

namespace densbound::probe {

namespace {
constexpr double kPi = std::numbers::pi;

// Gauss-Kronrod 7-15 pair on [-1,1].
constexpr double kXgk[8] = {0.991455371120813, 0.949107912342759, 0.864864423359769,
                            0.741531185599394, 0.586087235467691, 0.405845151377397,
                            0.207784955007898, 0.000000000000000};
constexpr double kWgk[8] = {0.022935322010529, 0.063092092629979, 0.104790010322250,
                            0.140653259715525, 0.169004726639267, 0.190350578064785,
                            0.204432940075298, 0.209482141084728};
constexpr double kWg[4] = {0.129484966168870, 0.279705391489277, 0.381830050505119,
                           0.417959183673469};

struct Panel {
  double integral;
  double error;
};

Panel gk15(const std::function<double(double)>& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fc = f(c);
  double resk = kWgk[7] * fc;
  double resg = kWg[3] * fc;
  for (int i = 0; i < 7; ++i) {
    const double fv = f(c - h * kXgk[i]) + f(c + h * kXgk[i]);
    resk += kWgk[i] * fv;
    if (i % 2 == 1) resg += kWg[i / 2] * fv;
  }
  return Panel{resk * h, std::abs((resk - resg) * h)};
}

double adapt(const std::function<double(double)>& f, double a, double b, double tol,
             int depth) {
  const Panel p = gk15(f, a, b);
  // The first two levels subdivide unconditionally: a symmetric integrand
  // can look identically zero to a single panel straddling its peak. The
  // 1e-14 relative floor is the roundoff limit of the error estimate.
  if (depth >= 2 && (p.error <= tol || p.error <= 1e-14 * std::abs(p.integral)))
    return p.integral;
  if (depth >= 60) throw std::runtime_error("no convergence: quadrature subdivision limit");
  const double m = 0.5 * (a + b);
  return adapt(f, a, m, 0.5 * tol, depth + 1) + adapt(f, m, b, 0.5 * tol, depth + 1);
}
}  // namespace

double quadrature(const std::function<double(double)>& f, double a, double b, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("quadrature tol must be > 0");
  if (a == b) return 0.0;
  return adapt(f, a, b, tol, 0);
}

double quadrature_to_inf(const std::function<double(double)>& f, double a, double tol) {
  // z = a + u/(1-u), dz = du/(1-u)^2; GK nodes are interior so u=1 is
  // never evaluated, but the integrand must vanish fast enough there.
  auto g = [&f, a](double u) {
    const double w = 1.0 - u;
    return f(a + u / w) / (w * w);
  };
  return quadrature(g, 0.0, 1.0, tol);
}

double normal_expectation_cos(double a, double b) {
  if (!(a > 0.0)) throw std::domain_error("normal_expectation_cos requires a > 0");
  if (!(b >= 0.0)) throw std::domain_error("normal_expectation_cos requires b >= 0");
  // cosh(ab) - (e^{-ab} Phi(a-b) + e^{ab} Phi(a+b))/2
  //   = (e^{-ab}(1-Phi(a-b)) + e^{ab}(1-Phi(a+b)))/2, and
  // e^{a^2/2 -+ ab}(1-Phi(a -+ b)) = e^{-b^2/2} T(a -+ b).
  const double damp = std::exp(-0.5 * b * b);
  return a * std::sqrt(2.0 * kPi) * 0.5 * damp *
         (normal::scaled_gaussian_tail(a - b) + normal::scaled_gaussian_tail(a + b));
}

double normal_expectation_sin(double a, double b) {
  if (!(a > 0.0)) throw std::domain_error("normal_expectation_sin requires a > 0");
  if (!(b >= 0.0)) throw std::domain_error("normal_expectation_sin requires b >= 0");
  // sinh(ab) + (e^{-ab} Phi(a-b) - e^{ab} Phi(a+b))/2
  //   = (e^{ab}(1-Phi(a+b)) - e^{-ab}(1-Phi(a-b)))/2.
  const double damp = std::exp(-0.5 * b * b);
  return -std::sqrt(2.0 * kPi) * 0.5 * damp *
         (normal::scaled_gaussian_tail(a + b) - normal::scaled_gaussian_tail(a - b));
}

DensityEstimate empirical_density_at(std::span<const double> samples, std::int64_t d,
                                     std::span<const double> x, double epsilon) {
  if (d < 1 || samples.empty() || samples.size() % static_cast<std::size_t>(d) != 0)
    throw std::invalid_argument("empty samples");
  if (x.size() != static_cast<std::size_t>(d) || !(epsilon > 0.0))
    throw std::invalid_argument("empirical_density_at: bad point or epsilon");

  const std::int64_t n = static_cast<std::int64_t>(samples.size()) / d;
  std::int64_t hits = 0;
  for (std::int64_t i = 0; i < n; ++i) {
    bool inside = true;
    for (std::int64_t j = 0; j < d; ++j) {
      if (!(std::abs(samples[i * d + j] - x[j]) < epsilon)) {
        inside = false;
        break;
      }
    }
    hits += inside;
  }
  const double vol = std::pow(2.0 * epsilon, static_cast<double>(d));
  const double phat = static_cast<double>(hits) / static_cast<double>(n);
  return DensityEstimate{phat / vol,
                         std::sqrt(phat * (1.0 - phat) / static_cast<double>(n)) / vol,
                         epsilon, n, hits};
}

double verify_integral_identity(const drbm::DrbmParams& p, double tol) {
  p.validate();
  auto integrand = [&p](double z) {
    return drbm::summand_f(z, p.t, p.x, p.C) - drbm::summand_g(z, p.t, p.x, p.C);
  };
  const double rhs =
      std::sqrt(2.0 * kPi / p.t) * std::exp(-p.x * p.x / (2.0 * p.t)) +
      2.0 * kPi * p.C *
          normal::stable_exp_times_cdf_deficit(-p.C * p.x + 0.5 * p.t * p.C * p.C,
                                               std::sqrt(p.t) * p.C - p.x / std::sqrt(p.t));
  const double lhs = 2.0 * quadrature_to_inf(integrand, 0.0, 0.25 * tol * (1.0 + std::abs(rhs)));
  return std::abs(lhs - rhs);
}

namespace {
double standardized(std::int64_t observed, std::int64_t n, double prob) {
  const double mean = static_cast<double>(n) * prob;
  const double sigma = std::sqrt(static_cast<double>(n) * prob * (1.0 - prob));
  return (static_cast<double>(observed) - mean) / sigma;
}
}  // namespace

double zero_bin_deviation(std::span<const double> samples, const drbm::DrbmParams& p,
                          int n_bins) {
  if (samples.size() < 10000) throw std::invalid_argument("insufficient samples");
  if (n_bins < 1) throw std::invalid_argument("n_bins must be >= 1");
  const double width = p.l / n_bins;
  std::int64_t observed = 0;
  for (double s : samples) observed += (s < width);
  // Bin mass from the density at 0 via the reflecting-boundary profile
  // e^{-2Cy}: the flux condition pins p(y) = p(0) e^{-2Cy} (1 + O(y^2)), so
  // a flat p(0)*width model would be biased by a factor ~ C*width.
  const double prob = drbm::transition_density_at_zero(p).value *
                      (1.0 - std::exp(-2.0 * p.C * width)) / (2.0 * p.C);
  return standardized(observed, static_cast<std::int64_t>(samples.size()), prob);
}

double stationary_histogram_deviation(std::span<const double> samples, double C, double l,
                                      int n_bins) {
  if (samples.size() < 10000) throw std::invalid_argument("insufficient samples");
  if (n_bins < 1) throw std::invalid_argument("n_bins must be >= 1");
  std::vector<std::int64_t> counts(n_bins, 0);
  for (double s : samples) {
    int b = static_cast<int>(s / l * n_bins);
    if (b < 0) b = 0;
    if (b >= n_bins) b = n_bins - 1;
    ++counts[b];
  }
  const double norm = 1.0 - std::exp(-2.0 * C * l);
  double worst = 0.0;
  for (int b = 0; b < n_bins; ++b) {
    const double y0 = l * b / n_bins;
    const double y1 = l * (b + 1) / n_bins;
    const double prob = (std::exp(-2.0 * C * y0) - std::exp(-2.0 * C * y1)) / norm;
    worst = std::max(worst, std::abs(standardized(counts[b],
                                                  static_cast<std::int64_t>(samples.size()),
                                                  prob)));
  }
  return worst;
}

}  // namespace densbound::probe
