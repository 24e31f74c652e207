#pragma once

#include <numbers>
#include <random>

#include "windfarm/inputs.hpp"
#include "windfarm/state.hpp"

namespace windfarm::testing {

// Bounded random operating points; speeds stay positive so T_m is defined.
struct RandomPoint {
  State x;
  InputSample u;
};

inline RandomPoint random_point(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_real_distribution<double> speed(0.5, 1.2);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  std::uniform_real_distribution<double> volts(0.9, 1.1);
  std::uniform_real_distribution<double> wind(4.0, 12.0);

  RandomPoint r;
  for (auto& v : r.x.values) v = unit(rng);
  r.x[Var::omega_r] = speed(rng);
  r.x[Var::omega_t] = speed(rng);
  r.x[Var::delta] = angle(rng);
  r.u.q_star = 0.2 * unit(rng);
  r.u.v_abc = balanced_abc(volts(rng), angle(rng));
  r.u.v_w = wind(rng);
  return r;
}

}  // namespace windfarm::testing
