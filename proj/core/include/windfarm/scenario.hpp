#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "windfarm/inputs.hpp"
#include "windfarm/integrator.hpp"

namespace windfarm {

/// (time s, value) pairs; the value holds from that time on.
using StepEvents = std::vector<std::pair<double, double>>;

struct WindSpec {
  enum class Kind { constant, ramp, steps, filtered_random };
  Kind kind = Kind::filtered_random;

  double value = 8.0;  // constant; also the initial value for steps

  double v0 = 8.0;  // ramp from v0 at t_start to v1 at t_stop
  double v1 = 10.0;
  double t_start = 0.0;
  double t_stop = 10.0;

  StepEvents steps;

  // Sum of `components` sinusoids with seeded random phases and frequencies
  // in [f_min, f_max] Hz, normalized so |v - mean| <= amplitude.
  double mean = 8.0;
  double amplitude = 1.0;
  int components = 6;
  double f_min = 0.02;
  double f_max = 0.3;

  bool operator==(const WindSpec&) const = default;
};

struct GridSpec {
  double magnitude = 1.0;  // p.u.
  double phase = 0.0;      // rad, angle of phase a at t = 0
  StepEvents steps;        // magnitude changes

  bool operator==(const GridSpec&) const = default;
};

struct ScenarioConfig {
  int n_turbines = 8;
  double t_end = 20.0;
  double sample_dt = 0.01;
  std::uint64_t seed = 20190812;
  double q_star = 0.0;
  WindSpec wind;
  GridSpec grid;
  IntegratorConfig integrator;

  bool operator==(const ScenarioConfig&) const = default;
};

/// Seeded random wind around 8 m/s and a 1 -> 0.95 p.u. grid step at 10 s.
ScenarioConfig reference_scenario();

/// Throws ConfigError naming the first field that breaks an invariant.
void validate(const ScenarioConfig& sc);

/// Grid frequency is omega_nom; randomness is drawn from sc.seed.
InputSignals build_inputs(const ScenarioConfig& sc, double omega_nom);

/// Times in (0, t_end) where an input is not smooth.
std::vector<double> breakpoints(const ScenarioConfig& sc);

}  // namespace windfarm
