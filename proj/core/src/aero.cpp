#include "windfarm/aero.hpp"

#include <cmath>

#include "windfarm/error.hpp"

namespace windfarm {
namespace {

constexpr double kC1 = 0.5176;
constexpr double kC2 = 116.0;
constexpr double kC3 = 0.4;
constexpr double kC4 = 5.0;
constexpr double kC5 = 21.0;
constexpr double kC6 = 0.0068;

constexpr double kSearchLo = 1.0;
constexpr double kSearchHi = 15.0;

// Golden-section search for the maximum of a unimodal function on [lo, hi].
template <typename F>
double golden_max(F&& f, double lo, double hi) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo;
  double b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  while (b - a > 1e-12 * (1.0 + std::abs(a))) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

double PowerCoefficientCurve::raw(double lambda, double beta) {
  if (!(lambda > 0.0)) {
    throw DomainError("cp_curve: tip-speed ratio must be positive");
  }
  const double inv_li = 1.0 / (lambda + 0.08 * beta) - 0.035 / (beta * beta * beta + 1.0);
  const double exponent = -kC5 * inv_li;
  // exp underflows long before the polynomial factor overflows
  const double aero = exponent < -700.0
                          ? 0.0
                          : kC1 * (kC2 * inv_li - kC3 * beta - kC4) * std::exp(exponent);
  return aero + kC6 * lambda;
}

double PowerCoefficientCurve::operator()(double lambda, double beta) const {
  const double cp = scale_ * raw(lambda, beta);
  return cp > 0.0 ? cp : 0.0;
}

PowerCoefficientCurve PowerCoefficientCurve::calibrated(double cp_max) {
  const double lambda_star =
      golden_max([](double l) { return raw(l, 0.0); }, kSearchLo, kSearchHi);
  return PowerCoefficientCurve(cp_max / raw(lambda_star, 0.0));
}

double PowerCoefficientCurve::argmax(double beta) const {
  return golden_max([beta](double l) { return raw(l, beta); }, kSearchLo, kSearchHi);
}

}  // namespace windfarm
