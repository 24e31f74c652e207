#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

#include "windfarm/simulation.hpp"

namespace windfarm {

std::vector<double> jacobian(const State& x, const InputSample& u, const TurbineParams& p,
                             const DerivedParams& d, double rel_step) {
  std::vector<double> J(kStateSize * kStateSize);
  for (std::size_t j = 0; j < kStateSize; ++j) {
    const double h = rel_step * std::max(1.0, std::abs(x.values[j]));
    State xp = x, xm = x;
    xp.values[j] += h;
    xm.values[j] -= h;
    const State fp = rhs(xp, u, p, d);
    const State fm = rhs(xm, u, p, d);
    for (std::size_t i = 0; i < kStateSize; ++i) {
      J[i * kStateSize + j] = (fp.values[i] - fm.values[i]) / (2.0 * h);
    }
  }
  return J;
}

State wind_sensitivity(const State& x, const InputSample& u, const TurbineParams& p,
                       const DerivedParams& d, double step) {
  InputSample up = u, um = u;
  up.v_w += step;
  um.v_w -= step;
  const State fp = rhs(x, up, p, d);
  const State fm = rhs(x, um, p, d);
  State out;
  for (std::size_t i = 0; i < kStateSize; ++i) {
    out.values[i] = (fp.values[i] - fm.values[i]) / (2.0 * step);
  }
  return out;
}

std::vector<std::complex<double>> linear_stability(const TurbineParams& p, const DerivedParams& d,
                                                   const State& x_eq, const InputSample& u) {
  const std::vector<double> J = jacobian(x_eq, u, p, d);
  Eigen::Matrix<double, kStateSize, kStateSize> A;
  for (std::size_t i = 0; i < kStateSize; ++i) {
    for (std::size_t j = 0; j < kStateSize; ++j) {
      A(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = J[i * kStateSize + j];
    }
  }
  Eigen::EigenSolver<decltype(A)> es(A, false);
  std::vector<std::complex<double>> ev(es.eigenvalues().begin(), es.eigenvalues().end());
  std::sort(ev.begin(), ev.end(), [](const auto& a, const auto& b) {
    return a.real() != b.real() ? a.real() > b.real() : a.imag() > b.imag();
  });
  return ev;
}

}  // namespace windfarm
