#pragma once

#include <array>
#include <functional>

namespace windfarm {

/// Inputs evaluated at one instant.
struct InputSample {
  double q_star = 0.0;                 // u1, p.u.
  std::array<double, 3> v_abc{};       // u2, p.u.
  double v_w = 0.0;                    // u3, m/s
};

/// Time-parameterized inputs. Copies share the underlying callables.
struct InputSignals {
  double q_star = 0.0;
  std::function<std::array<double, 3>(double)> grid_abc;
  std::function<double(double)> wind;

  InputSample at(double t) const;
};

/// Balanced set v_a = V cos(theta), v_b = V cos(theta - 2pi/3), v_c = V cos(theta + 2pi/3).
std::array<double, 3> balanced_abc(double magnitude, double theta);

/// Inputs frozen at time t in the frame rotating at `omega` rad/s: constant
/// wind and setpoint, and a balanced grid with the magnitude and phase
/// reconstructed from the sample at t, rotating at `omega` from then on.
InputSignals freeze(const InputSignals& u, double t, double omega);

}  // namespace windfarm
