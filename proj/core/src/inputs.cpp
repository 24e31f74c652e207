#include "windfarm/inputs.hpp"

#include <cmath>
#include <numbers>

#include "windfarm/error.hpp"

namespace windfarm {

InputSample InputSignals::at(double t) const {
  if (!grid_abc || !wind) {
    throw Error("InputSignals: grid and wind signals must both be set");
  }
  return InputSample{q_star, grid_abc(t), wind(t)};
}

InputSignals freeze(const InputSignals& u, double t, double omega) {
  const InputSample s = u.at(t);
  // Park components at zero angle give the magnitude and phase of phase a.
  constexpr double kShift = 2.0 * std::numbers::pi / 3.0;
  const double q = 2.0 / 3.0 * (s.v_abc[0] + std::cos(-kShift) * s.v_abc[1] +
                                std::cos(kShift) * s.v_abc[2]);
  const double d = -2.0 / 3.0 * (std::sin(-kShift) * s.v_abc[1] + std::sin(kShift) * s.v_abc[2]);
  const double magnitude = std::hypot(q, d);
  const double theta = std::atan2(d, q);

  InputSignals out;
  out.q_star = s.q_star;
  const double v_w = s.v_w;
  out.wind = [v_w](double) { return v_w; };
  out.grid_abc = [=](double tau) { return balanced_abc(magnitude, theta + omega * (tau - t)); };
  return out;
}

std::array<double, 3> balanced_abc(double magnitude, double theta) {
  // phases b and c by rotating phase a through -/+120 degrees
  constexpr double kHalfRoot3 = 0.5 * std::numbers::sqrt3;
  const double c = magnitude * std::cos(theta);
  const double s = magnitude * std::sin(theta);
  return {c, -0.5 * c + kHalfRoot3 * s, -0.5 * c - kHalfRoot3 * s};
}

}  // namespace windfarm
