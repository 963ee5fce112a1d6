#include "densbound/normal.hpp"

#include <cmath>
#include <stdexcept>

namespace densbound::normal {

namespace {

// Rational approximations for erf/erfc/erfcx after W. J. Cody,
// "Rational Chebyshev approximation for the error function" (1969).
// Three regions: |x| <= 0.46875, 0.46875 < |x| <= 4, |x| > 4.
// Absolute error below 1e-16 in double precision.

constexpr double kThresh = 0.46875;
constexpr double kInvSqrtPi = 5.6418958354775628695e-1;

constexpr double A[5] = {3.16112374387056560e+00, 1.13864154151050156e+02,
                         3.77485237685302021e+02, 3.20937758913846947e+03,
                         1.85777706184603153e-01};
constexpr double B[4] = {2.36012909523441209e+01, 2.44024637934444173e+02,
                         1.28261652607737228e+03, 2.84423683343917062e+03};
constexpr double C[9] = {5.64188496988670089e-01, 8.88314979438837594e+00,
                         6.61191906371416295e+01, 2.98635138197400131e+02,
                         8.81952221241769090e+02, 1.71204761263407058e+03,
                         2.05107837782607147e+03, 1.23033935479799725e+03,
                         2.15311535474403846e-08};
constexpr double D[8] = {1.57449261107098347e+01, 1.17693950891312499e+02,
                         5.37181101862009858e+02, 1.62138957456669019e+03,
                         3.29079923573345963e+03, 4.36261909014324716e+03,
                         3.43936767414372164e+03, 1.23033935480374942e+03};
constexpr double P[6] = {3.05326634961232344e-01, 3.60344899949804439e-01,
                         1.25781726111229246e-01, 1.60837851487422766e-02,
                         6.58749161529837803e-04, 1.63153871373020978e-02};
constexpr double Q[5] = {2.56852019228982242e+00, 1.87295284992346047e+00,
                         5.27905102951428412e-01, 6.05183413124413191e-02,
                         2.33520497626869185e-03};

enum class Kind { Erf, Erfc, Erfcx };

// exp(-y*y) computed as exp(-ysq*ysq) * exp(-del) with ysq a multiple of
// 1/16 to limit cancellation in the argument (standard calerf trick).
double exp_neg_sq(double y) {
  const double ysq = std::trunc(y * 16.0) / 16.0;
  const double del = (y - ysq) * (y + ysq);
  return std::exp(-ysq * ysq) * std::exp(-del);
}

double calerf(double x, Kind kind) {
  const double y = std::abs(x);
  double result;

  if (y <= kThresh) {
    const double ysq = (y > 1.11e-16) ? y * y : 0.0;
    double xnum = A[4] * ysq;
    double xden = ysq;
    for (int i = 0; i < 3; ++i) {
      xnum = (xnum + A[i]) * ysq;
      xden = (xden + B[i]) * ysq;
    }
    const double erf_val = x * (xnum + A[3]) / (xden + B[3]);
    switch (kind) {
      case Kind::Erf:
        return erf_val;
      case Kind::Erfc:
        return 1.0 - erf_val;
      case Kind::Erfcx:
        return std::exp(ysq) * (1.0 - erf_val);
    }
  }

  if (y <= 4.0) {
    double xnum = C[8] * y;
    double xden = y;
    for (int i = 0; i < 7; ++i) {
      xnum = (xnum + C[i]) * y;
      xden = (xden + D[i]) * y;
    }
    result = (xnum + C[7]) / (xden + D[7]);
  } else {
    const double ysq = 1.0 / (y * y);
    double xnum = P[5] * ysq;
    double xden = ysq;
    for (int i = 0; i < 4; ++i) {
      xnum = (xnum + P[i]) * ysq;
      xden = (xden + Q[i]) * ysq;
    }
    result = ysq * (xnum + P[4]) / (xden + Q[4]);
    result = (kInvSqrtPi - result) / y;
  }
  // result now holds erfcx(y); attach the exponential unless erfcx asked.
  if (kind != Kind::Erfcx) result *= exp_neg_sq(y);

  switch (kind) {
    case Kind::Erf:
      result = (0.5 - result) + 0.5;
      return (x < 0.0) ? -result : result;
    case Kind::Erfc:
      return (x < 0.0) ? 2.0 - result : result;
    case Kind::Erfcx:
      if (x < 0.0) {
        if (x < -26.62) throw std::overflow_error("erfcx overflow for large negative argument");
        const double ysq16 = std::trunc(y * 16.0) / 16.0;
        const double del = (y - ysq16) * (y + ysq16);
        return 2.0 * std::exp(ysq16 * ysq16) * std::exp(del) - result;
      }
      return result;
  }
  return result;  // unreachable
}

constexpr double kInvSqrt2 = 0.70710678118654752440;
constexpr double kInvSqrt2Pi = 0.39894228040143267794;

}  // namespace

double erf(double x) { return calerf(x, Kind::Erf); }
double erfc(double x) { return calerf(x, Kind::Erfc); }
double erfcx(double x) { return calerf(x, Kind::Erfcx); }

double std_normal_pdf(double z) { return kInvSqrt2Pi * std::exp(-0.5 * z * z); }

double std_normal_cdf(double z) {
  if (z > 40.0) return 1.0;
  if (z < -40.0) return 0.0;
  return 0.5 * erfc(-z * kInvSqrt2);
}

double scaled_gaussian_tail(double a) {
  return 0.5 * erfcx(a * kInvSqrt2);
}

double stable_exp_times_cdf_deficit(double c, double z) {
  const double expo = c - 0.5 * z * z;
  if (expo > 700.0) throw std::overflow_error("stable_exp_times_cdf_deficit: exponent out of range");
  return -std::exp(expo) * scaled_gaussian_tail(z);
}

}  // namespace densbound::normal
